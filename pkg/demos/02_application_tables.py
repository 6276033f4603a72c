"""Regenerate the three application tables and summarize their verdicts.

For John domains, Maz'ya classes and trace embeddings, every row pairs a
Sobolev domain W L^p log^q L with its optimal Orlicz target Y, then
decides whether an optimal Orlicz domain L^B exists for Y.

Run:  python3 demos/02_application_tables.py
"""

from __future__ import annotations

from collections import Counter

from orlicz_domain.scenarios import build_table, render_table


def main() -> None:
    for number in (1, 2, 3):
        t = build_table(number)
        counts = Counter(r.verdict_label for r, _ in t.rows)
        print(f"table {number}: {len(t.rows)} rows")
        for label, k in sorted(counts.items()):
            print(f"  {k:3d}  {label}")
    print("\nfirst scenario of table 1:\n")
    print(render_table(build_table(1, nm=((2, 1),)), "markdown"))
    print("Only subcritical rows (p < n/m) admit an optimal domain; in the critical")
    print("rows G grows like a power of log t, and in the L^oo row G is bounded.")


if __name__ == "__main__":
    main()
