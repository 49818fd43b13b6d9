import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lresonance.errors import DomainError
from lresonance.kernels import (
    AFE_FACTOR_AT_ZERO,
    RESIDUE,
    VKernel,
    build_vtable,
    i_pm0_direct,
    i_pm0_residue,
    phi,
    phi_mellin,
    phi_s,
    v_kernel,
)

# V(y) by mpmath quadrature on Re s = 1/2 at 30 digits
V_FROZEN = {
    1e-4: 0.28581014236091293504,
    0.1: 0.098091891328430350508,
    1.0: -0.025306163395222926178,
    5.0: -0.021133321567901588661,
    100.0: -0.00033511551119382434846,
}
# I_{p,m0} on Re s = 1/2 by mpmath quadrature
I_FROZEN = {
    (17, 1): -0.029132454924650,
    (100049, 1): 0.40019110297374,
    (100049, 15): 0.0803775963872,
    (999953, 1): 0.5571531518608,
}


def test_phi_support_and_plateau():
    x = np.array([0.5, 1.0, 7 / 6, 1.5, 11 / 6, 2.0, 2.5])
    assert phi(x).tolist() == [0.0, 0.0, 1.0, 1.0, 1.0, 0.0, 0.0]


@given(st.floats(0.9, 2.1))
def test_phi_symmetric_and_bounded(x):
    assert 0.0 <= phi(x) <= 1.0
    assert abs(phi(x) - phi(3.0 - x)) < 1e-15


def test_phi_s_at_zero_is_phi():
    x = np.linspace(1, 2, 9)
    assert np.allclose(phi_s(x, 0.0), phi(x), atol=0)


def test_phi_mellin_zero_is_five_sixths():
    assert abs(phi_mellin(0.0) - 5 / 6) < 1e-13


def test_phi_mellin_against_mpmath():
    s = 0.3 + 2j
    ref = mp.quad(lambda x: phi(float(x)) * mp.power(x, s), [1, 7 / 6, 11 / 6, 2])
    assert abs(phi_mellin(s) - complex(ref)) < 1e-12


@pytest.mark.parametrize("y", sorted(V_FROZEN))
def test_v_frozen(y):
    assert abs(v_kernel(y) - V_FROZEN[y]) < 1e-13


def test_v_small_y_limit():
    assert abs(v_kernel(1e-4) - AFE_FACTOR_AT_ZERO) < 1e-2


@pytest.mark.parametrize("y", [0.1, 1.0, 5.0])
def test_v_independent_of_abscissa(y):
    vals = [VKernel(u=u)(y) for u in (0.25, 0.5, 1.0, 2.0)]
    assert max(vals) - min(vals) < 1e-10


def test_v_decays_on_dyadic_points():
    ys = 2.0 ** np.arange(3, 17)
    v = np.abs(VKernel().evaluate(ys))
    assert np.all(np.diff(v) < 0)


def test_v_cache_returns_identical_value():
    k = VKernel()
    first = k(3.7)
    assert k(3.7) == first == float(k.evaluate(3.7)[0])
    twin = k.clone()
    assert twin(3.7) == first


def test_v_rejects_nonpositive():
    with pytest.raises(DomainError):
        v_kernel(0.0)
    with pytest.raises(DomainError):
        VKernel(u=-1.0)


def test_vtable_matches_exact_kernel_on_afe_range():
    table = build_vtable()
    ys = np.geomspace(1e-6, 2.0**17 * 0.999, 3000)
    assert np.max(np.abs(table(ys) - VKernel().evaluate(ys))) < 1e-13


@pytest.mark.parametrize("key", sorted(I_FROZEN))
def test_i_pm0_direct_frozen(key):
    assert abs(i_pm0_direct(*key) - I_FROZEN[key]) < 1e-11


def test_i_pm0_rejects_bad_arguments():
    with pytest.raises(DomainError):
        i_pm0_direct(19, 1)
    with pytest.raises(DomainError):
        i_pm0_residue(17, 9)
    with pytest.raises(DomainError):
        i_pm0_residue(17, 2)


def test_c0_printed_closed_form():
    # value quoted alongside the closed form
    assert abs(RESIDUE.c0_printed - (-0.102544468575064)) < 1e-12


def test_c0_laurent_constant_differs_by_three_halves():
    # beyond the 3/2, the printed form rounds psi(1/4)/4 to -1691/1600
    rounding = -1691 / 1600 - RESIDUE.gamma_ratio_linear / 2
    assert abs(RESIDUE.c0_printed - RESIDUE.c0 - 1.5 - rounding) < 1e-12
    assert abs(rounding) < 2e-5
    assert abs(RESIDUE.gamma_ratio_linear - RESIDUE.gamma_ratio_linear_printed) < 1e-4


def test_residue_tracks_direct_integral():
    # the shifted-line remainder is O(p^(-1/4) sqrt(m0)); measured constant ~0.5
    for (p, m0), direct in I_FROZEN.items():
        if p < 10**5:
            continue
        gap = abs(direct - i_pm0_residue(p, m0))
        assert gap <= 1.0 * p**-0.25 * math.sqrt(m0)


def test_residue_default_beats_printed_constant():
    p, m0 = 999953, 1
    exact = I_FROZEN[(p, m0)]
    assert abs(exact - i_pm0_residue(p, m0)) < abs(
        exact - i_pm0_residue(p, m0, c0=RESIDUE.c0_printed)
    )
