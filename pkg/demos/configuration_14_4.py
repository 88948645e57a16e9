"""Search for (14_4) configurations and obstruct the one that exists.

The search takes about a minute on one core.

    python demos/configuration_14_4.py
"""

from __future__ import annotations

import time

import numpy as np

from arrange import obstruct_arrangement, search_nk_detailed, standard_branch


def main() -> None:
    t0 = time.perf_counter()
    res = search_nk_detailed(14, 4)
    print(f"(14_4): {len(res.arrangements)} class(es) from {res.raw_solutions} normalized "
          f"solutions, {res.nodes} nodes, {time.perf_counter() - t0:.1f}s")
    arr = res.arrangements[0]
    print(f"the configuration has {arr.num_lines} lines and {arr.num_points} points")

    emb = standard_branch(2, 2, 2, host=arr)
    print(f"strict B^2_(2,2) on lines {sorted(emb.line_map)}")
    rep = obstruct_arrangement(arr, 2, 2, 2, emb, sorted(set(emb.point_map)))
    np.set_printoptions(linewidth=120)
    print("form on the six remaining lines:")
    print(rep.outside_form)
    print("form on their lifts to the (-1)-eigenspace:")
    print(rep.eigen_form)
    print()
    print(rep.summary())


if __name__ == "__main__":
    main()
