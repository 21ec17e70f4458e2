"""Proof-replay ledger: every contradiction as an exact or certified check."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from drgeom.curvature import CurvatureContext
from drgeom.dralgebra import DamekRicci
from drgeom.numkernel import MPoly
from drgeom.obstruction import (EXACT, FAIL, _SWord, cyclic_sum_vanishing,
                                enumerate_dimension_cases,
                                final_positivity_analysis, general_case_ledger,
                                leading_coefficient_positivity, m_coefficients,
                                product_identity_reduction,
                                psi_coprimality_samples, quarter_compat_element,
                                replay_no_a, replay_no_v, replay_no_z,
                                replay_octonion_case,
                                replay_p_space_annihilation,
                                replay_quarter_eigenspace_jcompat)


@pytest.fixture(scope="module")
def g24():
    return DamekRicci.from_dims(2, 4)


@pytest.fixture(scope="module")
def ctx24(g24):
    return CurvatureContext(g24)


# ---------------------------------------------------------------------------
# special cases
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("dims", [(1, 2), (7, 8)])
def test_replay_no_v(dims):
    rep = replay_no_v(DamekRicci.from_dims(*dims))
    assert rep.passed
    assert rep.step("nilpotent-ricci-split").verdict != FAIL
    assert rep.step("abelian-control-flat").verdict != FAIL


def test_replay_no_a(g24, ctx24):
    rep = replay_no_a(g24, ctx24, samples=16, seed=0)
    assert rep.passed
    assert rep.step("einstein-difference-formula").residual < 1e-10
    assert rep.step("center-direction-gap").witness["gap"] == -0.25
    assert rep.step("center-direction-gap").residual < 1e-12


def test_replay_no_a_rotation_invariance(g24, ctx24):
    # the clash is isotropic in V: different seeds rotate V, same verdicts
    r1 = replay_no_a(g24, ctx24, samples=10, seed=1)
    r2 = replay_no_a(g24, ctx24, samples=10, seed=2)
    assert r1.passed and r2.passed


@pytest.mark.parametrize("dims", [(2, 4), (3, 4), (7, 8), (8, 16)])
def test_replay_no_z(dims):
    rep = replay_no_z(*dims)
    assert rep.passed
    scan = rep.step("trace-identity-scan")
    assert scan.verdict == EXACT
    assert scan.witness["violations"] == []
    assert rep.step("equal-roots-at-one-third").verdict == EXACT
    assert rep.step("forced-shape-eigenvectors").residual < 1e-10


def test_replay_no_z_rederived_bound():
    # the grid scan asserts d2 > (1 + d_z + d_v)/3 internally for every point
    rep = replay_no_z(5, 8, s_grid=[Fraction(i, 20) for i in range(1, 20)])
    assert rep.passed


# ---------------------------------------------------------------------------
# dimension enumeration
# ---------------------------------------------------------------------------

def test_enumerate_dimension_cases_exact():
    cases = enumerate_dimension_cases()
    assert cases == [(5, 8), (6, 8), (7, 8), (7, 16), (8, 16)]


def test_enumerate_dimension_cases_bound_independent():
    assert enumerate_dimension_cases(16) == enumerate_dimension_cases(64)
    assert enumerate_dimension_cases(64) == enumerate_dimension_cases(128)


def test_enumerate_symmetric_member_flagged():
    from drgeom.clifford import build_module, is_symmetric_space
    assert is_symmetric_space(build_module(7, 8))
    # the remaining candidates are not symmetric with default flags
    for d_z, d_v in [(5, 8), (6, 8), (7, 16), (8, 16)]:
        assert not is_symmetric_space(build_module(d_z, d_v))


def test_dimension_identity_p_space():
    # d_p = d_v/2 - 4 for the surviving cases
    for d_z, d_v in [(5, 8), (6, 8), (7, 16), (8, 16)]:
        d_m1 = 2 * d_z - d_v // 2 - 4
        d_p = d_v - 2 * d_z + d_m1
        assert d_p == d_v // 2 - 4


# ---------------------------------------------------------------------------
# octonion case
# ---------------------------------------------------------------------------

def test_replay_octonion_case():
    rep = replay_octonion_case(n_samples=20, seed=0)
    assert rep.passed
    samples = rep.step("kernel-dimension-samples")
    assert samples.witness["observed"] == [6] * 20
    assert samples.witness["required"] == 4
    assert rep.step("substituted-kernel-vector").residual < 1e-11
    assert rep.step("degenerate-v-rejected").verdict == EXACT


def test_octonion_structured_v_kernel():
    g = DamekRicci.from_dims(8, 16)
    v = np.zeros(16)
    v[0] = v[9] = np.sqrt(0.3)  # V1 along 1, V2 along e1
    y = np.zeros(8)
    y[0] = np.sqrt(0.3)
    _, info = g.k_square_minus1_space(v, y)
    assert info["dim"] == 6


# ---------------------------------------------------------------------------
# quarter-space compatibility
# ---------------------------------------------------------------------------

def test_sword_reduction_rules():
    h, c, lam = _SWord.syms()
    e = quarter_compat_element()
    # transpose is an involution; the element flips sign under it (J skew)
    assert (e.transpose().transpose() - e).is_zero
    assert (e + e.transpose()).is_zero


def test_replay_quarter_eigenspace_jcompat_fast():
    rep = replay_quarter_eigenspace_jcompat(seed=0, run_minimization=False)
    assert rep.passed
    for sid in ("scalar-shape-branch", "commuting-shape-branch",
                "multiplier-chain", "isotropy-factorization", "squaring-chains",
                "principal-curvature-bound-chain"):
        assert rep.step(sid).verdict == EXACT
    assert rep.step("quaternionic-triple").residual < 1e-11
    assert abs(abs(rep.step("quaternionic-triple").witness["triple_trace"]) - 4) < 1e-9


@pytest.mark.slow
def test_replay_quarter_minimization_floor():
    rep = replay_quarter_eigenspace_jcompat(seed=0, run_minimization=True)
    assert rep.passed
    floor = rep.step("residual-floor-minimization").residual
    assert floor > 1e-2


# ---------------------------------------------------------------------------
# exact general-case ledger
# ---------------------------------------------------------------------------

def test_m_coefficients_pair_symmetry():
    ms = m_coefficients()
    prod = ms["m2"] * ms["m3"] - ms["m1"] * ms["m4"]
    swapped = prod.substitute("ei", MPoly.symbols("tmp")[0]) \
                  .substitute("ej", MPoly.symbols("ei ej ek q s v w lam")[0]) \
                  .substitute("tmp", MPoly.symbols("ei ej ek q s v w lam")[1])
    assert (prod - swapped).is_zero


def test_product_identity_reduction_exact():
    out = product_identity_reduction()
    assert out["ok"]
    assert out["lam_free"]
    a2 = out["A2"]
    assert a2.evaluate({"q": Fraction(27, 16), "v": Fraction(1, 2)}) == Fraction(477, 32)


def test_leading_coefficient_positivity():
    out = leading_coefficient_positivity()
    assert out["ok"]
    assert out["identity_ok"]
    assert out["grid_min"] > 0
    assert out["spot"] == Fraction(477, 32)


def test_cyclic_sum_vanishing_exact():
    out = cyclic_sum_vanishing()
    assert out["ok"]
    assert out["divisible_by_locus"]


def test_psi_coprimality():
    out = psi_coprimality_samples()
    assert out["ok"]
    assert all(s["res_psi"] != 0 for s in out["samples"])


def test_final_positivity_analysis():
    out = final_positivity_analysis()
    assert out["positive_on_open_region"]
    assert out["closure_min"] == 0
    assert out["min_at"] == {"v": Fraction(2, 3), "y": Fraction(1, 3), "s": 0}
    assert out["spot_half_quarter"] == Fraction(7, 4)
    assert out["grid_min"] > 0
    # the exact interior-grid minimum over the default 50x50 simplex grid
    assert out["grid_min"] == Fraction(79, 500)


def test_general_case_ledger_exact_passes():
    rep = general_case_ledger(exact=True)
    assert rep.passed
    for s in rep.steps:
        if s.id in ("product-identity-reduction", "cyclic-sum-vanishing",
                    "poly-coprimality", "final-positivity"):
            assert s.verdict == EXACT


def test_ledger_json_roundtrip():
    import json
    rep = general_case_ledger(exact=False)
    payload = rep.to_json()
    text = json.dumps(payload)
    back = json.loads(text)
    assert back["name"] == "general-case-ledger"
    assert all("verdict" in s for s in back["steps"])


# ---------------------------------------------------------------------------
# annihilation / involution
# ---------------------------------------------------------------------------

def test_replay_p_space_annihilation():
    rep = replay_p_space_annihilation(seed=0)
    assert rep.passed
    ids = [s.id for s in rep.steps]
    assert "involution-structure(5,8)" in ids
    assert "involution-identity(3,4)" in ids
    assert "annihilation-identity(7,16)" in ids
    for s in rep.steps:
        if s.id.startswith("involution-structure"):
            assert s.witness["plus_dim"] == s.witness["expected_plus_dim"]
        if s.id.startswith("symmetry-clash"):
            assert s.witness["clash_coefficient"] > 0


def test_replay_reproducible_bit_for_bit():
    import json
    a = replay_octonion_case(n_samples=6, seed=4).to_json()
    b = replay_octonion_case(n_samples=6, seed=4).to_json()
    for sa, sb in zip(a["steps"], b["steps"]):
        sa.pop("runtime_s"), sb.pop("runtime_s")
    assert json.dumps(a) == json.dumps(b)
    c = replay_no_z(3, 4).to_json()
    d = replay_no_z(3, 4).to_json()
    for sc, sd in zip(c["steps"], d["steps"]):
        sc.pop("runtime_s"), sd.pop("runtime_s")
    assert json.dumps(c) == json.dumps(d)
