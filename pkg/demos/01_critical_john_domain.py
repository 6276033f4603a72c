"""Walk through the critical Sobolev case on a planar John domain.

W^{1,2} on a John domain in R^2 embeds into exp L^2, the optimal Orlicz
target.  This script asks whether there is also an optimal Orlicz *domain*
for that target, and shows the evidence the package collects.

Run:  python3 demos/01_critical_john_domain.py
"""

from __future__ import annotations

from orlicz_domain.asymptotics import parse_term
from orlicz_domain.optimality import condition_v, g_statistics_probe, sup_operator_probe
from orlicz_domain.scenarios import John, reduce, render_target, table_row


def main() -> None:
    s = John(2, 1)
    params = reduce(s)
    print(f"scenario {s.label()} reduces to H with alpha={params.alpha}, beta={params.beta}")

    row = table_row(s, "log", 2, 0)
    v = row.verdict
    print(f"optimal target of W L^2: {render_target(row.target)}")

    print("\nsymbolic pipeline")
    for key in ("phi", "x", "phi_X", "B", "Btilde", "G"):
        print(f"  {key:7s} {v.report[key]}")
    print(f"  condition (vi): {v.report['condition_vi']}  ->  {row.verdict_label}")

    print("\nthe G-statistics: (ii) grows without bound, (iii) tends to 1")
    rep = g_statistics_probe(row.G)
    for i, t in enumerate(rep.t):
        print(f"  t={t:8.0e}  (ii)={rep.stat_ii[i]:7.3f}  (iii, K=2)={rep.stat_iii[2.0][i]:.4f}")

    Bt = parse_term(v.report["Btilde"])
    print("\nnumeric condition (v) with Atilde = Btilde")
    cv = condition_v(Bt, Bt, params.alpha)
    print(f"  C={cv.C:.3g}  calibrated constant={cv.C_prime:.3f}  test max={cv.test_max:.3f}  holds={cv.holds}")

    print("\nS_alpha on L^Btilde (bounded iff an optimal domain exists)")
    probe = sup_operator_probe(Bt, params.alpha, scales=tuple(10.0 ** -k for k in range(1, 7)))
    for a, r in zip(probe.scales, probe.scale_ratios):
        print(f"  support {a:7.0e}: ratio {r:.3f}")
    print(f"  probe verdict: {probe.verdict}")
    print("  the ratios creep up by a few percent per decade: the divergence is only")
    print("  logarithmic, far below what a finite-depth probe can call divergent")


if __name__ == "__main__":
    main()
