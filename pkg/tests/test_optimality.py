from __future__ import annotations

import math
from fractions import Fraction as F

import numpy as np
import pytest

from orlicz_domain.asymptotics import PLLTerm
from orlicz_domain.norms import FundamentalFunction, power_phi
from orlicz_domain.operators import HardyParams
from orlicz_domain.optimality import (
    BOUNDED_G, CRITERION_VI, EXISTS, L1_OPTIMAL, NO_OPTIMAL, PreconditionError, candidate_term,
    candidate_young_numeric, condition_v, condition_vi, decide, g_bounded, g_function,
    optimal_domain_fundamental, optimal_domain_fundamental_numeric, orlicz_equals_marcinkiewicz,
    substituted_profile, g_statistics_probe, witness_construct,
)
from orlicz_domain.young import ExplicitYoung, SymbolicYoung, power_young

JOHN31 = HardyParams(F(1, 3), 1)


def test_substituted_profile_and_domain_fundamental():
    # phi = t^{1/6}: x = t^{-1/2}, u = t sup_{t<s<1} s^{-1/2} = t^{1/2}
    x = substituted_profile(JOHN31, power_phi(6))
    assert x.exponents == (F(-1, 2), 0, 0)
    u = optimal_domain_fundamental(JOHN31, power_phi(6))
    assert u.term.exponents == (F(1, 2), 0, 0)


def test_domain_fundamental_numeric_matches_symbolic():
    t = np.array([1e-6, 1e-4, 1e-2])
    num = optimal_domain_fundamental_numeric(JOHN31, lambda s: s ** (1 / 6), t)
    assert np.allclose(num, np.sqrt(t), rtol=1e-9)


def test_inadmissible_target_raises():
    # phi = t^{2/3} = t^{1-alpha}: x is constant, nothing diverges
    with pytest.raises(PreconditionError):
        optimal_domain_fundamental(JOHN31, power_phi(F(3, 2)))


def test_candidate_term_power():
    B = candidate_term(PLLTerm.at_zero(F(1, 2)))
    assert B.exponents == (2, 0, 0)
    assert B.coeff == pytest.approx(0.5)
    with pytest.raises(PreconditionError):
        candidate_term(PLLTerm.at_zero(1))


def test_candidate_young_numeric_tracks_symbolic():
    B = candidate_young_numeric(lambda t: np.sqrt(t))
    t = np.array([1e2, 1e4, 1e6])
    r = B(t) / (0.5 * t ** 2)
    assert np.all((r > 0.5) & (r < 2))


def test_condition_vi_threshold():
    assert condition_vi(PLLTerm.at_inf(2), F(1, 3))
    assert not condition_vi(PLLTerm.at_inf(F(3, 2)), F(1, 3))
    assert condition_vi(PLLTerm.at_inf(F(3, 2), 1), F(1, 3)) is False
    with pytest.raises(PreconditionError):
        condition_vi(ExplicitYoung("exp_power", gamma=1.0), F(1, 3))


def test_g_function_and_boundedness():
    G = g_function(PLLTerm.at_inf(F(3, 2), 1), F(1, 3))
    assert G.exponents == (0, 1, 0)
    assert not g_bounded(G)
    assert g_bounded(g_function(PLLTerm.at_inf(F(3, 2)), F(1, 3)))
    Gn = g_function(ExplicitYoung("power", p=2), F(1, 3))
    assert Gn.exponents == (F(1, 2), 0, 0)


def test_decide_outcomes():
    v = decide(JOHN31, power_phi(6))
    assert v.outcome == EXISTS and v.exists
    assert v.report["condition_vi"] is True
    # exp L^{3/2}: G ~ log t, condition (vi) fails
    v = decide(JOHN31, FundamentalFunction(PLLTerm.at_zero(0, F(-2, 3))))
    assert (v.outcome, v.reason) == (NO_OPTIMAL, CRITERION_VI)
    v = decide(JOHN31, FundamentalFunction(PLLTerm.at_zero(0)))
    assert (v.outcome, v.reason) == (NO_OPTIMAL, BOUNDED_G)
    v = decide(JOHN31, power_phi(F(3, 2)))
    assert v.outcome == L1_OPTIMAL
    assert set(v.as_dict()) >= {"outcome", "reason", "report", "candidate"}


def test_decide_cross_check_includes_condition_v():
    v = decide(JOHN31, power_phi(6), cross_check=True)
    assert v.report["condition_v"]["holds"] is True


def test_condition_v_power_and_log():
    assert condition_v(power_young(2), power_young(2), F(1, 3)).holds
    # Atilde = t^2 log^2 t is far larger than Btilde = t^2: the ratio keeps growing
    A = SymbolicYoung(PLLTerm.at_inf(2, 2))
    assert not condition_v(A, power_young(2), F(1, 3)).holds


def test_g_statistics_probe_log_and_power():
    rep = g_statistics_probe(PLLTerm.at_inf(0, 1))
    assert rep.ii_diverges and rep.iii_all_one and rep.consistent
    rep = g_statistics_probe(PLLTerm.at_inf(F(1, 2)))
    assert not rep.ii_diverges and not rep.iii_all_one and rep.consistent
    assert rep.ii_limit == pytest.approx(2.0, rel=1e-3)
    assert rep.iii_limit[4.0] == pytest.approx(2.0, rel=1e-9)


def test_orlicz_equals_marcinkiewicz_families():
    assert orlicz_equals_marcinkiewicz(ExplicitYoung("exp_power", gamma=1.0)) is True
    assert orlicz_equals_marcinkiewicz(power_young(2)) is False
    assert orlicz_equals_marcinkiewicz(SymbolicYoung(PLLTerm.at_inf(2, 1))) is False


def test_witness_refuses_bounded_g():
    with pytest.raises(PreconditionError):
        witness_construct(power_young(F(3, 2)), power_young(F(3, 2)), F(1, 3))


def test_witness_short_construction_keeps_invariants():
    At = SymbolicYoung(PLLTerm.at_inf(2, -3))
    Bt = SymbolicYoung(PLLTerm.at_inf(2, 1))
    w = witness_construct(At, Bt, F(1, 2), C=1.0, j_max=3)
    assert w.complete
    assert len(w.t_seq) == 2
    inv = w.invariants()
    assert all(inv.values())
    assert all(t_next > tau for tau, t_next in zip(w.tau_seq, w.t_seq[1:]))
    assert not math.isnan(w.condition_v_slack())
