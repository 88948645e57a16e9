"""Move a wiring diagram to the straight-line pencil, one elementary event at a time.

    python demos/wiring_homotopy.py
"""

from __future__ import annotations

from arrange import apply_move, format_word, homotopy_to_pencil, parse_word, search_wiring
from arrange.arrangement import fano, generic
from arrange.wiring import from_arrangement


def main() -> None:
    w = parse_word("n=4; m(1,3) t3 t2 t1")
    print(f"start: {format_word(w)}")
    for e in homotopy_to_pencil(w):
        w = apply_move(w, e)
        print(f"  {str(e):<16} -> {format_word(w)}")

    arr = generic(4)
    lines, points = search_wiring(arr)
    print(f"\ngeneric 4-line arrangement wires as {format_word(from_arrangement(arr, lines, points))}")
    print(f"Fano plane wiring search: {search_wiring(fano())}")


if __name__ == "__main__":
    main()
