"""Why the Fano plane has no topological realization.

Walks through the branched-cover count for P(2,2) step by step, then runs
the packaged pipeline and prints its certificate.

    python demos/fano_obstruction.py
"""

from __future__ import annotations

from arrange import (
    BlowupModel,
    b_alpha_beta,
    bpab_invariants,
    find_subarrangement,
    intersection_number,
    min_weight,
    obstruct_projective_plane,
    projective_plane,
    proper_transforms,
    relation_code,
)


def main() -> None:
    plane = projective_plane(2)
    print(f"P(2,2): {plane.num_lines} lines, {plane.num_points} points, every point triple")

    model = BlowupModel(plane)
    F = proper_transforms(model)
    print(f"after blowing up all points, each line class squares to {intersection_number(F[0], F[0])}")

    code = relation_code(model, 2)
    summary = min_weight(code)
    print(f"mod 2 relations: dimension {summary.dimension}, lightest weight {summary.min_weight}")
    print(f"  lightest relation uses lines {summary.min_weight_witness.support()}")

    support = summary.min_weight_witness.support()
    emb = find_subarrangement(plane, b_alpha_beta(2, 1, 1), strict=True, limit=1,
                              within_lines=support)[0]
    print(f"those four lines form two pencils of two: {emb.line_map[:2]} and {emb.line_map[2:]}")

    inv = bpab_invariants(2, 1, 1, plane.num_points)
    print(f"double cover: chi={inv.chi_total}, b2={inv.b2_total}, "
          f"b2- per eigenspace {inv.b2_minus}, total {inv.b2_minus_total}")

    rep = obstruct_projective_plane(2)
    print()
    print(rep.summary())


if __name__ == "__main__":
    main()
