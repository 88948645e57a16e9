"""The all-ones G-S certificate for a plumbing, and the stretch that makes
a steep strand's area form positive.

    python demos/plumbing_and_stretch.py
"""

from __future__ import annotations

from arrange import find_epsilon, gs_all_ones, plumbing_matrix
from arrange.arrangement import b_alpha_beta
from arrange.symplectic import Grid, area_form_value, steep_strand


def main() -> None:
    arr = b_alpha_beta(2, 2, 2)
    pm = plumbing_matrix(arr)
    ones = gs_all_ones(pm)
    print(f"B^2_(2,2): {pm.k} line vertices, {pm.N} multipoint vertices")
    print(f"  Q z at z = 1: lines {ones['line_coords']}, points {ones['point_coords']}")

    s = steep_strand(8)
    R, T = Grid().points(s)
    for eps in (1.0, 0.5, 0.25, 0.125):
        print(f"strand {s.name}: min area form at eps={eps:<6} is "
              f"{area_form_value(s, R, T, eps).min():+.4f}")
    print(f"chosen stretch: eps = {find_epsilon([s]).epsilon}")


if __name__ == "__main__":
    main()
