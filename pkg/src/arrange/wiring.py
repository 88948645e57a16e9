"""Wiring diagrams of pseudoline arrangements as words in crossing letters.

Wires are numbered by their starting height ``1..n`` (bottom to top).
``Cross(i)`` swaps the wires currently at heights ``i`` and ``i+1``;
``Multi(i, k)`` reverses the ``k >= 3`` wires at heights ``i..i+k-1``,
which all meet in one point.  A valid diagram crosses every pair of wires
exactly once, so the wire order at the right end is reversed.

>>> w = canonical_word(3)
>>> format_word(w)
'n=3; t1 t2 t1'
>>> w.crossing_pairs()
[(1, 2), (1, 3), (2, 3)]
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .arrangement import Arrangement
from .errors import InvalidDiagram, MoveNotApplicable, NotWirable


@dataclass(frozen=True, order=True)
class Cross:
    i: int

    @property
    def height(self) -> int:
        return self.i

    @property
    def size(self) -> int:
        return 2

    def __str__(self) -> str:
        return f"t{self.i}"


@dataclass(frozen=True, order=True)
class Multi:
    i: int
    k: int

    @property
    def height(self) -> int:
        return self.i

    @property
    def size(self) -> int:
        return self.k

    def __str__(self) -> str:
        return f"m({self.i},{self.k})"


Letter = Union[Cross, Multi]


def _apply_letter(order: list[int], letter: Letter) -> list[tuple[int, ...]]:
    """Mutate ``order`` (wire at each height) and return the wire groups met."""
    lo = letter.height - 1
    block = order[lo:lo + letter.size]
    order[lo:lo + letter.size] = block[::-1]
    return [tuple(block)]


class WiringDiagram:
    """An immutable, validated wiring diagram."""

    __slots__ = ("n", "word")

    def __init__(self, n: int, word: Iterable[Letter], check: bool = True):
        self.n = int(n)
        self.word: tuple[Letter, ...] = tuple(word)
        if check:
            self.validate()

    def validate(self) -> None:
        if self.n < 1:
            raise InvalidDiagram("need at least one wire")
        seen: set[tuple[int, int]] = set()
        order = list(range(1, self.n + 1))
        for pos, letter in enumerate(self.word):
            if isinstance(letter, Multi) and letter.k < 3:
                raise InvalidDiagram(f"multipoint at position {pos} has fewer than 3 wires")
            if not isinstance(letter, (Cross, Multi)):
                raise InvalidDiagram(f"unknown letter {letter!r}")
            if letter.height < 1 or letter.height + letter.size - 1 > self.n:
                raise InvalidDiagram(f"letter {letter} at position {pos} leaves heights 1..{self.n}")
            for group in _apply_letter(order, letter):
                for a, b in itertools.combinations(sorted(group), 2):
                    if (a, b) in seen:
                        raise InvalidDiagram(f"wires {a} and {b} cross twice (position {pos})")
                    seen.add((a, b))
        if len(seen) != self.n * (self.n - 1) // 2:
            missing = [pr for pr in itertools.combinations(range(1, self.n + 1), 2)
                       if pr not in seen]
            raise InvalidDiagram(f"wire pairs {missing[:5]} never cross")
        if order != list(range(self.n, 0, -1)):
            raise InvalidDiagram("wire order is not reversed at the right end")

    def events(self) -> list[tuple[int, ...]]:
        """Sorted wire tuples meeting at each letter, left to right."""
        order = list(range(1, self.n + 1))
        out = []
        for letter in self.word:
            out.extend(tuple(sorted(g)) for g in _apply_letter(order, letter))
        return out

    def crossing_pairs(self) -> list[tuple[int, int]]:
        """Crossed wire pairs in left-to-right order (multipoints expand in
        dictionary order)."""
        out = []
        for g in self.events():
            out.extend(itertools.combinations(g, 2))
        return out

    def final_order(self) -> list[int]:
        order = list(range(1, self.n + 1))
        for letter in self.word:
            _apply_letter(order, letter)
        return order

    def is_simple(self) -> bool:
        return all(isinstance(x, Cross) for x in self.word)

    def letters(self) -> list[int]:
        """Heights of a word made only of ``Cross`` letters."""
        if not self.is_simple():
            raise InvalidDiagram("diagram has multipoints")
        return [x.i for x in self.word]

    def __eq__(self, other) -> bool:
        if not isinstance(other, WiringDiagram):
            return NotImplemented
        return self.n == other.n and self.word == other.word

    def __hash__(self) -> int:
        return hash((self.n, self.word))

    def __len__(self) -> int:
        return len(self.word)

    def __repr__(self) -> str:
        return f"WiringDiagram({format_word(self)!r})"

    def to_dict(self) -> dict:
        return {"n": self.n,
                "word": [["t", x.i] if isinstance(x, Cross) else ["m", x.i, x.k]
                         for x in self.word]}

    @classmethod
    def from_dict(cls, data: dict) -> "WiringDiagram":
        word = []
        for item in data["word"]:
            if item[0] == "t":
                word.append(Cross(int(item[1])))
            elif item[0] == "m":
                word.append(Multi(int(item[1]), int(item[2])))
            else:
                raise InvalidDiagram(f"unknown letter {item!r}")
        return cls(int(data["n"]), word)


def from_letters(n: int, heights: Sequence[int]) -> WiringDiagram:
    return WiringDiagram(n, [Cross(int(i)) for i in heights])


_TOKEN = re.compile(r"^(?:t(\d+)|m\((\d+),(\d+)\))$")


def parse_word(text: str) -> WiringDiagram:
    """Parse ``"n=4; t1 t3 m(2,3)"``.

    >>> parse_word("n=3; m(1,3)").word
    (Multi(i=1, k=3),)
    """
    head, _, body = text.partition(";")
    m = re.fullmatch(r"\s*n\s*=\s*(\d+)\s*", head)
    if not m:
        raise InvalidDiagram(f"expected 'n=<wires>; ...', got {text!r}")
    word: list[Letter] = []
    for tok in body.split():
        t = _TOKEN.match(tok)
        if not t:
            raise InvalidDiagram(f"bad token {tok!r}")
        if t.group(1):
            word.append(Cross(int(t.group(1))))
        else:
            word.append(Multi(int(t.group(2)), int(t.group(3))))
    return WiringDiagram(int(m.group(1)), word)


def format_word(w: WiringDiagram) -> str:
    body = " ".join(str(x) for x in w.word)
    return f"n={w.n};" + (f" {body}" if body else "")


# ---------------------------------------------------------------------------
# canonical diagram


def canonical_heights(n: int, base: int = 1) -> list[int]:
    """``t1..t_{n-1} t1..t_{n-2} ... t1`` shifted to start at height ``base``."""
    return [base - 1 + i for top in range(n - 1, 0, -1) for i in range(1, top + 1)]


def canonical_word(n: int) -> WiringDiagram:
    """The all-double-point diagram whose crossings come in dictionary order."""
    if n < 2:
        raise ValueError("need at least two wires")
    return from_letters(n, canonical_heights(n))


def dictionary_word(n: int) -> WiringDiagram:
    """Build the dictionary-order diagram by simulating wire heights.

    Independent of :func:`canonical_word`; used to cross-check it.
    """
    order = list(range(1, n + 1))
    word = []
    for a, b in itertools.combinations(range(1, n + 1), 2):
        ha, hb = order.index(a), order.index(b)
        if abs(ha - hb) != 1:
            raise AssertionError(f"wires {a}, {b} not adjacent when due to cross")
        h = min(ha, hb)
        order[h], order[h + 1] = order[h + 1], order[h]
        word.append(Cross(h + 1))
    return WiringDiagram(n, word)


# ---------------------------------------------------------------------------
# homotopy events


@dataclass(frozen=True)
class HomotopyEvent:
    """One elementary move.  ``position`` indexes the word from 0."""

    kind: str
    position: int | None = None
    k: int | None = None
    description: str | None = None

    KINDS = ("BraidMove1", "BraidMove2", "SplitMulti", "MergeMulti", "PlanarIsotopy")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown event kind {self.kind!r}")

    def __str__(self) -> str:
        if self.kind == "PlanarIsotopy":
            return f"PlanarIsotopy({self.description or ''})"
        if self.kind == "MergeMulti":
            return f"MergeMulti({self.position},{self.k})"
        return f"{self.kind}({self.position})"

    def to_dict(self) -> dict:
        d: dict = {"kind": self.kind}
        for name in ("position", "k", "description"):
            v = getattr(self, name)
            if v is not None:
                d[name] = v
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "HomotopyEvent":
        return cls(d["kind"], d.get("position"), d.get("k"), d.get("description"))


def BraidMove1(position: int) -> HomotopyEvent:
    return HomotopyEvent("BraidMove1", position)


def BraidMove2(position: int) -> HomotopyEvent:
    return HomotopyEvent("BraidMove2", position)


def SplitMulti(position: int) -> HomotopyEvent:
    return HomotopyEvent("SplitMulti", position)


def MergeMulti(position: int, k: int) -> HomotopyEvent:
    return HomotopyEvent("MergeMulti", position, k)


def PlanarIsotopy(description: str = "") -> HomotopyEvent:
    return HomotopyEvent("PlanarIsotopy", description=description)


def _rewrite(word: list[Letter], e: HomotopyEvent) -> list[Letter]:
    """Apply ``e`` to a word (no diagram validation)."""
    if e.kind == "PlanarIsotopy":
        return list(word)
    pos = e.position
    if pos is None or not 0 <= pos < len(word):
        raise MoveNotApplicable(-1 if pos is None else pos, "position outside the word")
    if e.kind == "BraidMove1":
        seg = word[pos:pos + 3]
        if len(seg) < 3 or not all(isinstance(x, Cross) for x in seg):
            raise MoveNotApplicable(pos, "needs three crossing letters")
        a, b, c = (x.i for x in seg)
        if a != c or abs(a - b) != 1:
            raise MoveNotApplicable(pos, f"t{a} t{b} t{c} is not t_i t_j t_i with |i-j| = 1")
        return word[:pos] + [Cross(b), Cross(a), Cross(b)] + word[pos + 3:]
    if e.kind == "BraidMove2":
        seg = word[pos:pos + 2]
        if len(seg) < 2 or not all(isinstance(x, Cross) for x in seg):
            raise MoveNotApplicable(pos, "needs two crossing letters")
        a, b = (x.i for x in seg)
        if abs(a - b) <= 1:
            raise MoveNotApplicable(pos, f"t{a} t{b} do not commute")
        return word[:pos] + [Cross(b), Cross(a)] + word[pos + 2:]
    if e.kind == "SplitMulti":
        x = word[pos]
        if not isinstance(x, Multi):
            raise MoveNotApplicable(pos, "no multipoint here")
        block = [Cross(h) for h in canonical_heights(x.k, x.i)]
        return word[:pos] + block + word[pos + 1:]
    if e.kind == "MergeMulti":
        k = e.k
        if k is None or k < 3:
            raise MoveNotApplicable(pos, "merge needs k >= 3")
        first = word[pos]
        if not isinstance(first, Cross):
            raise MoveNotApplicable(pos, "block must start with a crossing")
        base = first.i
        want = [Cross(h) for h in canonical_heights(k, base)]
        if word[pos:pos + len(want)] != want:
            raise MoveNotApplicable(pos, f"no canonical {k}-block at height {base}")
        return word[:pos] + [Multi(base, k)] + word[pos + len(want):]
    raise MoveNotApplicable(pos, f"unsupported event {e.kind}")


def apply_move(w: WiringDiagram, e: HomotopyEvent) -> WiringDiagram:
    """Rewrite ``w`` by one event; the result is validated."""
    return WiringDiagram(w.n, _rewrite(list(w.word), e))


def replay(w: WiringDiagram, events: Iterable[HomotopyEvent],
           check_each: bool = True) -> WiringDiagram:
    word = list(w.word)
    for e in events:
        word = _rewrite(word, e)
        if check_each:
            WiringDiagram(w.n, word)
    return WiringDiagram(w.n, word)


# ---------------------------------------------------------------------------
# Matsumoto rewriting


def _make_prefix(word: list[int], s: int, offset: int, moves: list[HomotopyEvent]) -> None:
    """Rewrite ``word`` in place so it starts with ``s``.

    Precondition: ``s`` is a left descent of the element ``word`` spells,
    i.e. some reduced word for it starts with ``s``.  Positions in
    ``moves`` are shifted by ``offset``.
    """
    t = word[0]
    if t == s:
        return
    m = 2 if abs(s - t) > 1 else 3
    sub = word[1:]
    _make_alternating(sub, s, t, m - 1, offset + 1, moves)
    word[1:] = sub
    if m == 2:
        moves.append(BraidMove2(offset))
        word[0], word[1] = word[1], word[0]
    else:
        moves.append(BraidMove1(offset))
        word[0:3] = [s, t, s]


def _make_alternating(word: list[int], first: int, second: int, length: int,
                      offset: int, moves: list[HomotopyEvent]) -> None:
    """Rewrite ``word`` to start with ``first second first ...`` of ``length``."""
    pos = 0
    cur, nxt = first, second
    for _ in range(length):
        tail = word[pos:]
        _make_prefix(tail, cur, offset + pos, moves)
        word[pos:] = tail
        pos += 1
        cur, nxt = nxt, cur


def canonicalize(w: WiringDiagram) -> tuple[WiringDiagram, list[HomotopyEvent]]:
    """Braid moves taking a double-point diagram to :func:`canonical_word`.

    Level by level, the word is rewritten to begin with ``t1 t2 ... t_{n-1}``
    using the exchange property; each prefix letter is produced by moving
    an alternating pattern to the front and applying one braid relation.
    """
    if not w.is_simple():
        raise InvalidDiagram("split multipoints before canonicalizing")
    word = w.letters()
    moves: list[HomotopyEvent] = []
    pos = 0
    for top in range(w.n - 1, 0, -1):
        for s in range(1, top + 1):
            tail = word[pos:]
            _make_prefix(tail, s, pos, moves)
            word[pos:] = tail
            pos += 1
    result = from_letters(w.n, word)
    if w.n >= 2 and result != canonical_word(w.n):
        raise AssertionError("canonicalization did not reach the dictionary word")
    return result, moves


def split_all(w: WiringDiagram) -> tuple[WiringDiagram, list[HomotopyEvent]]:
    """Resolve every multipoint into its canonical block, left to right."""
    word = list(w.word)
    events = []
    pos = 0
    while pos < len(word):
        x = word[pos]
        if isinstance(x, Multi):
            e = SplitMulti(pos)
            events.append(e)
            word = _rewrite(word, e)
            pos += len(canonical_heights(x.k))
        else:
            pos += 1
    return WiringDiagram(w.n, word), events


def homotopy_to_pencil(w: WiringDiagram) -> list[HomotopyEvent]:
    """Events taking ``w`` to the single multipoint ``[Multi(1, n)]``.

    For ``n = 2`` the pencil is the single crossing, so no merge is added.
    """
    split, events = split_all(w)
    if w.n < 2:
        return events
    _, moves = canonicalize(split)
    events += moves
    if w.n >= 3:
        events.append(MergeMulti(0, w.n))
    return events


def pencil_diagram(n: int) -> WiringDiagram:
    return WiringDiagram(n, [Multi(1, n)] if n >= 3 else ([Cross(1)] if n == 2 else []))


# ---------------------------------------------------------------------------
# arrangements


def from_arrangement(arr: Arrangement, line_order: Sequence[int],
                     point_order: Sequence[int]) -> WiringDiagram:
    """Diagram from a left-end line order (bottom to top) and the order in
    which the points are met from left to right.

    Each point's lines must occupy consecutive heights when it is reached.
    """
    n = arr.num_lines
    if sorted(line_order) != list(range(n)):
        raise NotWirable("line_order must be a permutation of the lines")
    if sorted(point_order) != list(range(arr.num_points)):
        raise NotWirable("point_order must list every point exactly once")
    heights = list(line_order)
    word: list[Letter] = []
    for q in point_order:
        lines = set(arr.lines_through(q))
        idx = [h for h, x in enumerate(heights) if x in lines]
        lo, hi = idx[0], idx[-1]
        if hi - lo + 1 != len(idx):
            raise NotWirable(f"lines through point {q} are not adjacent when it is reached")
        word.append(Cross(lo + 1) if len(idx) == 2 else Multi(lo + 1, len(idx)))
        heights[lo:hi + 1] = heights[lo:hi + 1][::-1]
    return WiringDiagram(n, word)


def _available(arr: Arrangement, heights: list[int], remaining: set[int],
               through: list[frozenset[int]]) -> list[tuple[int, int, int]]:
    pos = {x: h for h, x in enumerate(heights)}
    out = []
    for q in sorted(remaining):
        hs = sorted(pos[x] for x in through[q])
        if hs[-1] - hs[0] + 1 == len(hs):
            out.append((hs[0], q, len(hs)))
    return out


def search_wiring(arr: Arrangement, max_lines: int = 8,
                  line_orders: Iterable[Sequence[int]] | None = None
                  ) -> tuple[list[int], list[int]] | None:
    """Exhaustively look for a consistent (line_order, point_order).

    Returns the first pair found, trying line orders in lexicographic
    order, or ``None`` when no wiring diagram exists.  Dead states
    (current heights plus unmet points) are memoized per line order.
    """
    n = arr.num_lines
    if n > max_lines:
        raise ValueError(f"exhaustive wiring search limited to {max_lines} lines")
    through = [frozenset(arr.lines_through(q)) for q in range(arr.num_points)]
    orders = itertools.permutations(range(n)) if line_orders is None else line_orders
    for lo in orders:
        dead: set[tuple[tuple[int, ...], frozenset[int]]] = set()
        path: list[int] = []

        def dfs(heights: list[int], remaining: set[int]) -> bool:
            if not remaining:
                return True
            key = (tuple(heights), frozenset(remaining))
            if key in dead:
                return False
            for h0, q, k in _available(arr, heights, remaining, through):
                nh = heights[:h0] + heights[h0:h0 + k][::-1] + heights[h0 + k:]
                remaining.discard(q)
                path.append(q)
                if dfs(nh, remaining):
                    return True
                path.pop()
                remaining.add(q)
            dead.add(key)
            return False

        if dfs(list(lo), set(range(arr.num_points))):
            return list(lo), list(path)
    return None


# ---------------------------------------------------------------------------
# SVG


def to_svg(w: WiringDiagram, column: float = 40.0, row: float = 30.0,
           labels: Sequence[str] | None = None) -> str:
    """Straight-segment picture: one column per letter, wires as polylines."""
    cols = len(w.word) + 2
    width = column * cols
    height = row * (w.n + 1)
    order = list(range(1, w.n + 1))
    pts: dict[int, list[tuple[float, float]]] = {x: [] for x in order}

    def y(h: int) -> float:
        return height - row * (h + 1)

    for h, x in enumerate(order):
        pts[x].append((0.0, y(h)))
        pts[x].append((column * 0.5, y(h)))
    events = []
    for c, letter in enumerate(w.word):
        lo = letter.height - 1
        block = order[lo:lo + letter.size]
        xm = column * (c + 1)
        ym = sum(y(lo + t) for t in range(letter.size)) / letter.size
        events.append((xm, ym))
        _apply_letter(order, letter)
        for h, x in enumerate(order):
            if x in block:
                pts[x].append((xm, ym))
            pts[x].append((xm + column * 0.5, y(h)))
    for h, x in enumerate(order):
        pts[x].append((width, y(h)))
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:g}" height="{height:g}" '
           f'viewBox="0 0 {width:g} {height:g}">']
    for x in sorted(pts):
        path = " ".join(f"{a:g},{b:g}" for a, b in pts[x])
        out.append(f'  <polyline fill="none" stroke="black" stroke-width="1.5" points="{path}"/>')
        name = labels[x - 1] if labels else str(x)
        out.append(f'  <text x="2" y="{y(x - 1) - 4:g}" font-size="10">{name}</text>')
    for xm, ym in events:
        out.append(f'  <circle cx="{xm:g}" cy="{ym:g}" r="2.5" fill="red"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def diagram_json(w: WiringDiagram, events: Sequence[HomotopyEvent] | None = None) -> str:
    d = w.to_dict()
    d["text"] = format_word(w)
    if events is not None:
        d["events"] = [e.to_dict() for e in events]
    return json.dumps(d, indent=2)
