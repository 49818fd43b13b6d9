import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lresonance import _fast
from lresonance.arith import legendre_table, sieve_primes, smallest_prime_factors
from lresonance.errors import CapacityError, DomainError
from lresonance.lcentral import (
    AfeParams,
    afe_params,
    batch_l_values,
    family_primes,
    l_central_afe,
    l_central_oracle,
)

# mpmath.dirichlet(1/2, chi_p) at 30 digits
L_FROZEN = {
    17: 0.72167437428171575663,
    41: 1.1073543234438983143,
    73: 1.7419074301742636798,
    89: 1.4479528622065444953,
    97: 1.9439961929199239828,
    1201: 5.3052432440975771283,
}
FAMILY_PRIMES = sieve_primes(17, 200_000, filter_1mod8=True).primes


@pytest.mark.parametrize("p", sorted(L_FROZEN))
def test_afe_frozen(p):
    assert abs(l_central_afe(p).value - L_FROZEN[p]) < 1e-13


@pytest.mark.parametrize("p", sorted(L_FROZEN))
def test_oracle_frozen(p):
    assert abs(l_central_oracle(p).value - L_FROZEN[p]) < 1e-13


def test_afe_and_oracle_agree_at_larger_p():
    p = 100049
    assert abs(l_central_afe(p).value - l_central_oracle(p).value) < 1e-10


def test_records_carry_method_and_terms():
    rec = l_central_afe(17)
    assert rec.method == "afe" and rec.p == 17
    assert rec.terms == (AfeParams().cutoff(17) + 1) // 2
    assert l_central_oracle(17).terms == 16


@pytest.mark.parametrize("p", [19, 25, 2, 9])
def test_rejects_non_family(p):
    with pytest.raises(DomainError):
        l_central_afe(p)
    with pytest.raises(DomainError):
        l_central_oracle(p)


def test_oracle_capacity():
    with pytest.raises(CapacityError):
        l_central_oracle(1_000_033)


@given(st.sampled_from(FAMILY_PRIMES.tolist()))
def test_truncation_levels_agree(p):
    lo = l_central_afe(p, afe_params(10)).value
    hi = l_central_afe(p, afe_params(14)).value
    assert abs(lo - hi) < 1e-5
    assert hi >= 0.0


@given(st.sampled_from(FAMILY_PRIMES.tolist()), st.integers(1, 4000))
def test_character_prefix_matches_legendre(p, n_max):
    n_max = min(n_max, p - 1)
    spf = smallest_prime_factors(max(n_max, 2))
    got = _fast.character_prefix(p, spf, n_max, np.empty(n_max + 1, dtype=np.int8))
    assert np.array_equal(got, legendre_table(p)[: n_max + 1])


def test_family_primes_range():
    fp = family_primes(1000)
    assert fp.tolist() == [p for p in FAMILY_PRIMES.tolist() if 1000 < p <= 2000]


def test_batch_ordering_and_thread_invariance():
    params = afe_params(12)
    one = batch_l_values(3000, params, threads=1)
    many = batch_l_values(3000, params, threads=4)
    assert [r.p for r in one] == family_primes(3000).tolist()
    assert [(r.p, r.value) for r in one] == [(r.p, r.value) for r in many]


def test_for_scale_is_monotone():
    levels = [AfeParams.for_scale(x).log2_y_max for x in (10**3, 10**4, 10**5, 10**6, 10**8)]
    assert levels == sorted(levels, reverse=True)
    assert levels[0] == 17
