import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cpb_optomech import (
    cap_matrix,
    infinite_bias_limits,
    inverse_shorthands_closed_form,
    numeric_inverse,
)
from cpb_optomech.capnet import shorthands_from_values
from cpb_optomech.errors import SingularNetwork
from conftest import make_vp


@pytest.fixture(scope="module")
def vp():
    return make_vp(30.0, 7.5)


def test_matrix_entries(vp):
    m = cap_matrix(vp, c_b=2e-15).entries
    assert np.allclose(m, m.T)
    assert m[0, 1] == m[1, 0] == -vp.c_g10
    assert m[0, 0] == vp.c_j + vp.c_g10
    assert m[1, 1] == vp.c_g10 + vp.c_g2 + 2e-15
    assert m[2, 2] == vp.c_cavity + 0.25 * vp.c_j + 0.25 * vp.c_g2
    assert m[0, 2] == 0.5 * vp.c_j
    assert m[1, 2] == -0.5 * vp.c_g2


def test_positive_definite_paper_scale(vp):
    m = cap_matrix(vp, c_b=1e-13).entries
    assert np.all(np.linalg.eigvalsh(m) > 0.0)


def _check_closed_vs_numeric(cg1, cg2, cj, cc, cb):
    sh = shorthands_from_values(cg1, cg2, cj, cc, cb).as_matrix()
    m = np.array([
        [cj + cg1, -cg1, 0.5 * cj],
        [-cg1, cg1 + cg2 + cb, -0.5 * cg2],
        [0.5 * cj, -0.5 * cg2, cc + 0.25 * cj + 0.25 * cg2],
    ])
    inv = np.linalg.inv(m)
    scale = np.max(np.abs(inv))
    assert np.max(np.abs(sh - inv)) < 1e-10 * scale


caps = st.floats(1e-18, 1e-12)


@settings(max_examples=60, deadline=None)
@given(cg1=caps, cg2=caps, cj=caps, cc=caps, cb=st.floats(0.0, 1e-10))
def test_closed_form_equals_numeric_inverse(cg1, cg2, cj, cc, cb):
    _check_closed_vs_numeric(cg1, cg2, cj, cc, cb)


def test_closed_form_on_params(vp):
    sh = inverse_shorthands_closed_form(vp, c_b=3e-15).as_matrix()
    inv = numeric_inverse(vp, c_b=3e-15)
    assert np.max(np.abs(sh - inv)) < 1e-10 * np.max(np.abs(inv))


def test_junction_split_invariance():
    # only C_J = c_j1 + c_j2 enters the network
    a = make_vp(30.0, 7.5)
    raw = a.raw
    from cpb_optomech import CircuitParams, validate
    b = validate(CircuitParams(**{**raw.__dict__,
                                  "c_j1": 0.7 * a.c_j, "c_j2": 0.3 * a.c_j}))
    sa = inverse_shorthands_closed_form(a, c_b=1e-14)
    sb = inverse_shorthands_closed_form(b, c_b=1e-14)
    assert sa == sb


def test_large_cb_suppresses_bias_rows(vp):
    cb = 1e6 * max(vp.c_g10, vp.c_g2, vp.c_j, vp.c_cavity)
    sh = inverse_shorthands_closed_form(vp, c_b=cb)
    scale = abs(sh.inv_c_sigma1)
    assert abs(sh.inv_c_sigma2) < 1e-5 * scale
    assert abs(sh.inv_c_sigma12) < 1e-5 * scale
    assert abs(sh.inv_c_sigma2c) < 1e-5 * scale


def test_infinite_bias_limits_match_large_cb(vp):
    cb = 1e8 * max(vp.c_g10, vp.c_g2, vp.c_j, vp.c_cavity)
    sh = inverse_shorthands_closed_form(vp, c_b=cb)
    lim = infinite_bias_limits(vp).shorthands
    for name in ("inv_c_sigma1", "inv_c_sigmac", "inv_c_sigma1c"):
        assert getattr(sh, name) == pytest.approx(getattr(lim, name), rel=1e-6)


def test_ng_relation_matches_large_cb(vp):
    cb = 1e8 * max(vp.c_g10, vp.c_g2, vp.c_j, vp.c_cavity)
    sh = inverse_shorthands_closed_form(vp, c_b=cb)
    from cpb_optomech.constants import E_CHARGE
    n_g_fin = -(sh.inv_c_sigma12 / (sh.inv_c_sigma1 * sh.inv_c_sigma2)) \
        * vp.v_gate / (2 * E_CHARGE)
    lim = infinite_bias_limits(vp)
    assert n_g_fin == pytest.approx(lim.n_g, rel=1e-6)


def test_cc_dominant_approximations():
    # C_c dominant: approximate forms converge on the exact limits
    vp = make_vp(30.0, 7.5, c_g2=1e-16, c_cavity=1e-12, l_cavity=1e-8)
    lim = infinite_bias_limits(vp)
    assert lim.approx_inv_c_sigma1 == pytest.approx(lim.shorthands.inv_c_sigma1,
                                                    rel=2e-4)
    assert lim.approx_inv_c_sigmac == pytest.approx(lim.shorthands.inv_c_sigmac,
                                                    rel=2e-4)
    assert lim.approx_inv_c_sigma1c == pytest.approx(lim.shorthands.inv_c_sigma1c,
                                                     rel=2e-4)
    assert lim.approx_n_g == pytest.approx(lim.n_g, rel=2e-4)


def test_monotone_cb_ladder(vp):
    lim = infinite_bias_limits(vp).shorthands
    base = max(vp.c_g10, vp.c_g2, vp.c_j, vp.c_cavity)
    names = ("inv_c_sigma1", "inv_c_sigmac", "inv_c_sigma1c")
    deltas = []
    for k in range(2, 8):
        sh = inverse_shorthands_closed_form(vp, c_b=base * 10.0**k)
        deltas.append([abs(getattr(sh, n) - getattr(lim, n)) for n in names])
    deltas = np.array(deltas)
    assert np.all(deltas[1:] <= deltas[:-1] + 1e-30)
    # final two iterates bracket the limit within a factor of 10 of each other
    assert np.all(deltas[-1] <= deltas[-2] + 1e-30)
    assert np.all(deltas[-2] <= 10.0 * np.maximum(deltas[-1], 1e-30) + 1e-25)


def test_singular_network_flagged():
    with pytest.raises(SingularNetwork):
        shorthands_from_values(0.0, 0.0, 0.0, 1e-12, 1e-12)
