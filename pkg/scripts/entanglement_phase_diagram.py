#!/usr/bin/env python3
"""Map both entanglement witnesses over the (coherence, crystal-length)
plane and print an ASCII rendering of the two regions.

x = w/ell_c grows to the right (less coherent), y = sqrt(L/(k_p w^2))
grows upward.  '#' marks the coherence-immune witness (position-diagonal
times momentum-anti-diagonal below 1/2), 'o' the fragile one, '.'
neither.  A CSV of all cells can be kept for proper plotting.
"""

import argparse
import sys

from spdc_coherence import sweep_phase_diagram
from spdc_coherence.entanglement import sweep_to_csv


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--x-max", type=float, default=3.0)
    ap.add_argument("--y-max", type=float, default=4.0)
    ap.add_argument("--nx", type=int, default=72)
    ap.add_argument("--ny", type=int, default=36)
    ap.add_argument("--alpha", type=float, default=0.455)
    ap.add_argument("--csv", help="optional output CSV path")
    args = ap.parse_args()

    cells = sweep_phase_diagram((0.0, args.x_max), (0.0, args.y_max), args.nx, args.ny, args.alpha)
    glyph = {"type1_antipos_corrmom": "#", "type2_pos_antimom": "o", "none": "."}
    by_pos = {(cell.x, cell.y): glyph[cell.classification] for cell in cells}
    xs = sorted({cell.x for cell in cells})
    ys = sorted({cell.y for cell in cells}, reverse=True)
    for y in ys:
        print("".join(by_pos[(x, y)] for x in xs))
    print(f"alpha={args.alpha}: '#' immune witness, 'o' coherence-fragile witness, '.' neither")

    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(sweep_to_csv(cells))
        print(f"wrote {args.csv}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
