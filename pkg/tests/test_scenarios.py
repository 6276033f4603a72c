from __future__ import annotations

import json
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from orlicz_domain.asymptotics import PLLTerm
from orlicz_domain.norms import FundamentalFunction
from orlicz_domain.operators import HardyParams
from orlicz_domain.optimality import PreconditionError
from orlicz_domain.scenarios import (
    NM_SAMPLES, CustomPhi, ExpExpPower, ExpLogPower, ExpPower, John, LInfinity, Mazya, Trace, ZygmundLog,
    ZygmundLogLog, build_table, optimal_range_fundamental, reduce, render_g, render_space, render_table,
    render_target, sobolev_target, table_row, table_scenarios, target_phi,
)
from orlicz_domain.young import power_young


@st.composite
def scenarios(draw):
    n = draw(st.integers(2, 8))
    m = draw(st.integers(1, n - 1))
    kind = draw(st.sampled_from(["john", "mazya", "trace"]))
    if kind == "john":
        return John(n, m)
    if kind == "trace":
        return Trace(n, m, draw(st.integers(n - m, n)))
    lo = 1 - F(1, n)
    # keep m(1 - aM) < 1
    aM = draw(st.fractions(min_value=max(lo, 1 - F(1, m) + F(1, 100)), max_value=F(99, 100)))
    return Mazya(n, m, aM)


@given(scenarios())
def test_reduce_yields_legal_hardy_params(s):
    p = reduce(s)
    assert isinstance(p, HardyParams)
    assert 0 < p.alpha < 1 and p.beta > 0 and p.alpha + 1 / p.beta >= 1


def test_reduce_examples():
    assert reduce(John(3, 1)) == HardyParams(F(1, 3), 1)
    assert reduce(Mazya(3, 1, F(5, 6))) == HardyParams(F(1, 6), 1)
    assert reduce(Trace(5, 2, 4)) == HardyParams(F(2, 5), F(5, 4))


@pytest.mark.parametrize("bad", [
    lambda: John(1, 1), lambda: John(3, 3), lambda: Mazya(3, 1, F(1, 2)),
    lambda: Mazya(2, 2, F(1, 2)), lambda: Trace(3, 1, 1), lambda: Trace(3, 1, 4),
])
def test_scenario_validation(bad):
    with pytest.raises(ValueError):
        bad()


def test_target_validation():
    with pytest.raises(ValueError):
        ZygmundLog(1, -1)
    with pytest.raises(ValueError):
        ExpPower(0)
    with pytest.raises(ValueError):
        sobolev_target(John(3, 1), "nope", 2, 0)


def test_target_phi_examples():
    t = 1e-4
    assert target_phi(ZygmundLog(6)).eval(t) == pytest.approx(t ** (1 / 6))
    assert target_phi(ExpPower(F(3, 2))).term.exponents == (0, F(-2, 3), 0)
    assert target_phi(ExpExpPower(2)).term.exponents == (0, 0, F(-1, 2))
    assert target_phi(ExpLogPower(2, 1)).term.exponents == (0, F(-1, 2), F(1, 2))
    assert target_phi(ZygmundLogLog(2, 4)).term.exponents == (F(1, 2), 0, 2)
    assert target_phi(LInfinity()).eval(t) == 1.0
    phi = FundamentalFunction(PLLTerm.at_zero(F(1, 3)))
    assert target_phi(CustomPhi(phi)) is phi


def test_sobolev_targets_john():
    s = John(3, 1)
    assert sobolev_target(s, "log", 2, 0) == ZygmundLog(6, 0)
    assert sobolev_target(s, "log", 2, 1) == ZygmundLog(6, 3)
    assert sobolev_target(s, "log", 3, 0) == ExpPower(F(3, 2))
    assert sobolev_target(s, "log", 3, 1) == ExpPower(3)
    assert sobolev_target(s, "log", 3, 2) == ExpExpPower(F(3, 2))
    assert sobolev_target(s, "log", 3, 3) == LInfinity()
    assert sobolev_target(s, "log", 4, 0) == LInfinity()
    assert sobolev_target(s, "loglog", 3, 1) == ExpLogPower(F(3, 2), F(1, 2))
    assert sobolev_target(s, "loglog", 2, 1) == ZygmundLogLog(6, 3)


def test_sobolev_target_trace_scaling():
    # W^{1,2}(R^3) traces on 2-planes: 2 * 2/(3 - 2) = 4
    assert sobolev_target(Trace(3, 1, 2), "log", 2, 0) == ZygmundLog(4, 0)


def test_renderers():
    assert render_space(PLLTerm.at_inf(3, -2)) == "L^{3} log^{-2} L"
    assert render_space(PLLTerm.at_inf(F(5, 3), 0, 1)) == "L^{5/3} log^{1} log L"
    assert render_g(PLLTerm.at_inf(0, 1)) == "log(t)"
    assert render_g(PLLTerm.at_inf(0)) == "1"
    assert render_g(PLLTerm.at_inf(0, 0, 1)) == "log log(t)"
    assert render_target(ExpPower(F(3, 2))) == "exp L^{3/2}"
    assert render_target(ExpLogPower(F(3, 2), F(1, 2))) == "exp(L^{3/2} log^{1/2} L)"
    assert render_target(LInfinity()) == "L^{oo}"


def test_table_row_verdicts():
    r = table_row(John(3, 1), "log", F(5, 3), 0)
    assert r.verdict_label == "ExistsOptimal"
    assert r.G.exponents == (1, 0, 0)
    r = table_row(John(3, 1), "log", 3, 0)
    assert r.verdict_label == "NoOptimal/CriterionVi"
    assert r.cells()["G(t)"] == "log(t)"
    r = table_row(John(3, 1), "log", 4, 0)
    assert r.verdict_label == "NoOptimal/BoundedG_LInfinityCase"


def test_table_sizes_and_scenarios():
    assert [len(table_scenarios(k)) for k in (1, 2, 3)] == [4, 8, 10]
    assert all(isinstance(s, John) for s in table_scenarios(1))
    with pytest.raises(ValueError):
        table_scenarios(4)


def test_table2_linfinity_row_is_power_space():
    t = build_table(2, nm=((3, 1),))
    last = [rec for rec in t.as_records() if rec["row"] == 6]
    for rec, s in zip(last, table_scenarios(2, ((3, 1),))):
        assert rec["L^B"] == f"L^{{{1 / reduce(s).alpha}}}"
        assert rec["G(t)"] == "1"


def test_render_formats():
    t = build_table(1, nm=NM_SAMPLES[:1])
    md = render_table(t, "markdown")
    assert md.startswith("### Table 1") and md.count("\n| ") == 11
    tex = render_table(t, "latex")
    assert "\\begin{tabular}" in tex
    recs = json.loads(render_table(t, "json"))
    assert recs["table"] == 1 and len(recs["rows"]) == 10
    with pytest.raises(ValueError):
        render_table(t, "html")


def test_optimal_range_john():
    # A = t^2 on John(3,1): phi ~ t^{2/3} * t^{-1/2} = t^{1/6}
    phi = optimal_range_fundamental(reduce(John(3, 1)), power_young(2))
    assert phi.term.exponents == (F(1, 6), 0, 0)


def test_optimal_range_requires_bounded_sup_operator():
    # A = t^3: Atilde ~ t^{3/2} = t^P, S_alpha unbounded on L^{Atilde}
    with pytest.raises(PreconditionError):
        optimal_range_fundamental(reduce(John(3, 1)), power_young(3))


def test_domain_range_round_trip():
    # the optimal domain of the range of L^2 gives back L^2 (up to equivalence)
    p = reduce(John(3, 1))
    phi = optimal_range_fundamental(p, power_young(2))
    r = table_row(John(3, 1), "log", 2, 0)
    assert phi.term.exponents == target_phi(r.target).term.exponents
    assert r.B.exponents == (2, 0, 0)
    t = np.array([1e-3, 1e-6])
    assert np.all(np.isfinite(phi(t)))
