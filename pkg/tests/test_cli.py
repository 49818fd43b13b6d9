import csv
import io
import json
import math

import pytest

from lresonance.cli import RunConfig, UsageError, main, parse_config_text, run
from lresonance.lcentral import family_primes


def test_constants_report(tmp_path):
    out = tmp_path / "c.json"
    assert main(["constants", "--out", str(out)]) == 0
    doc = json.loads(out.read_text(encoding="utf-8"))
    assert set(doc) == {"config", "payload", "version", "elapsed_seconds"}
    rows = {r["check"]: r for r in doc["payload"]["rows"]}
    assert abs(rows["c0_closed_form"]["value"] - (-0.102544468575064)) < 1e-12
    assert rows["phi_mellin_zero"]["passed"] and rows["half_psi_quarter"]["passed"]


def test_lvalues_one_row_per_prime(tmp_path):
    out = tmp_path / "l.csv"
    assert main(["lvalues", "--X", "10000", "--format", "csv", "--out", str(out)]) == 0
    rows = list(csv.DictReader(io.StringIO(out.read_text(encoding="utf-8"))))
    assert [int(r["p"]) for r in rows] == family_primes(10_000).tolist()
    assert list(rows[0]) == ["X", "p", "value", "method", "terms"]


def test_scan_rows(capsys):
    assert main(["scan", "--X", "3000", "--theta", "2/5", "--window", "3:40"]) == 0
    doc = json.loads(capsys.readouterr().out)
    (row,) = doc["payload"]["rows"]
    assert row["ratio"] <= row["scan_max"]
    assert row["predicted"] == pytest.approx(
        math.exp(2 * math.sqrt(0.4) * math.sqrt(math.log(3000) / math.log(math.log(3000))))
    )
    assert doc["config"]["window"] == [3.0, 40.0]


def test_degenerate_resonate_is_strict_json(capsys):
    assert main(["resonate", "--X", "10000"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["payload"]["rows"] == [{"m": 1, "b": 1.0}]
    assert doc["payload"]["info"]["degenerate"]


def test_poisson_and_identities(capsys):
    assert main(["poisson", "--X", "10000", "--format", "csv"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert len(rows) == 4
    assert main(["identities", "--X", "20000", "--window", "3:40", "--theta", "0.3"]) == 0


def test_config_file_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# poisson check\nX = 5000\nn = 1, 3\nformat = csv\n", encoding="utf-8")
    assert main(["poisson", "--config", str(cfg), "--X", "6000"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert {int(r["X"]) for r in rows} == {6000}
    assert [int(r["n"]) for r in rows] == [1, 3]


def test_unknown_key_is_usage_error(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n", encoding="utf-8")
    assert main(["constants", "--config", str(cfg)]) == 2
    with pytest.raises(UsageError):
        parse_config_text("X 100")


def test_bad_subcommand_exits_nonzero():
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code != 0


def test_failed_check_exits_one(capsys):
    # at X = 40 the twisted prime sum has not started to cancel
    assert main(["identities", "--X", "40", "--window", "3:7", "--theta", "0.5"]) == 1
    doc = json.loads(capsys.readouterr().out)
    assert not doc["payload"]["passed"]


def test_run_error_exits_one(tmp_path):
    cfg = tmp_path / "strict.cfg"
    cfg.write_text("strict = true\ntheta = 1/5\n", encoding="utf-8")
    assert main(["resonate", "--config", str(cfg)]) == 1
    with pytest.raises(ValueError):
        run(RunConfig("resonate", theta=0.2, strict=True))


def test_json_round_trip():
    cfg = RunConfig("scan", X=(10_000, 100_000), theta=1 / 19, window=(3.0, 50.0),
                    log2_y_max=12, h=1 / 256, threads=3, format="csv")
    back = RunConfig.from_dict(json.loads(json.dumps(cfg.to_dict())))
    assert back == cfg
    with pytest.raises(UsageError):
        RunConfig.from_dict({"command": "scan", "colour": 1})
    with pytest.raises(UsageError):
        RunConfig("nope")
