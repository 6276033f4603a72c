"""Orlicz norms, the endpoint sandwich, and a piecewise-linear witness.

1. Luxemburg and Orlicz norms of a random step function for A = t^2 log t.
2. The Lorentz/Orlicz/Marcinkiewicz sandwich for a space with the same
   fundamental function.
3. The chord construction that enlarges Atilde while keeping condition (v),
   showing how quickly its knots run off to infinity.

Run:  python3 demos/03_norms_and_witness.py
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from orlicz_domain.asymptotics import PLLTerm
from orlicz_domain.norms import (
    LorentzEndpointSpace, MarcinkiewiczSpace, OrliczSpace, amemiya_norm, fundamental, luxemburg_norm, norm,
    orlicz_dual_lower,
)
from orlicz_domain.optimality import witness_construct
from orlicz_domain.rearrangement import StepFunction, random_step
from orlicz_domain.young import SymbolicYoung


def main() -> None:
    rng = np.random.default_rng(7)
    f = random_step(rng, 12)
    A = SymbolicYoung(PLLTerm.at_inf(2, 1))
    lux = luxemburg_norm(A, f)
    print(f"A = {A.label}")
    print(f"  Luxemburg norm           {lux:.6f}")
    print(f"  Orlicz norm lies in     [{orlicz_dual_lower(A, f, rng=rng):.6f}, {amemiya_norm(A, f):.6f}]")
    print("  (always between the Luxemburg norm and twice it)")

    # phi is asymptotic at 0, so the sandwich is shown for functions supported near 0
    phi = fundamental(OrliczSpace(A))
    edges = np.concatenate([[0.0], np.geomspace(1e-12, 1e-2, 2048), [1.0]])
    g = StepFunction.from_callable(lambda s: np.where(s < 1e-2, s ** -0.25, 0.0), edges)
    mar = norm(MarcinkiewiczSpace(phi), g)
    orl = luxemburg_norm(A, g)
    lam = norm(LorentzEndpointSpace(phi), g)
    print("\nsandwich for s^{-1/4} on (0, 0.01), phi the fundamental function of L^A")
    print(f"  Marcinkiewicz {mar:.4f} <~ Orlicz {orl:.4f} <~ Lorentz {lam:.4f}")

    print("\nwitness for alpha = 1/2, Atilde = t^2 log^-3 t, Btilde = t^2 log t")
    At = SymbolicYoung(PLLTerm.at_inf(2, -3))
    Bt = SymbolicYoung(PLLTerm.at_inf(2, 1))
    w = witness_construct(At, Bt, Fraction(1, 2), C=1.0, j_max=5)
    for j, (t, tau) in enumerate(zip(w.t_seq, w.tau_seq), start=w.j_start):
        print(f"  j={j}: chord from t={t:.4g} to tau={tau:.4g}")
    print(f"  complete: {w.complete}")
    for note in w.notes:
        print(f"  note: {note}")
    print(f"  invariants: {all(w.invariants().values())}")


if __name__ == "__main__":
    main()
