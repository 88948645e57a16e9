"""Combinatorial line arrangements: incidence data, generators and searches.

An arrangement is a 0/1 incidence matrix with lines as rows and points as
columns such that every pair of lines has exactly one common point.  Points
of multiplicity below two are not part of the model.

>>> fano = projective_plane(2)
>>> fano.num_lines, fano.num_points
(7, 7)
>>> sorted(set(fano.multiplicities().tolist()))
[3]
"""

from __future__ import annotations

import hashlib
import itertools
import json
import logging
import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    IndexOutOfRange,
    IsolatedOrDuplicatePoint,
    NotAnNkConfiguration,
    NotPrime,
    PairWithMultiplePoints,
    PairWithoutPoint,
)

log = logging.getLogger(__name__)

SEARCH_CAP_ENV = "ARRANGE_SEARCH_CAP"
DEFAULT_SEARCH_CAP = 50_000_000


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def search_cap() -> int:
    """Backtracking node budget, overridable through ``ARRANGE_SEARCH_CAP``."""
    raw = os.environ.get(SEARCH_CAP_ENV)
    if raw is None or raw == "":
        return DEFAULT_SEARCH_CAP
    return int(raw)


@dataclass(frozen=True)
class NkCertificate:
    n: int
    k: int
    distinguished: tuple[int, ...]

    def to_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "distinguished": list(self.distinguished)}


class Arrangement:
    """An immutable, validated combinatorial line arrangement.

    Construction validates the incidence matrix; see :func:`validate`.
    """

    __slots__ = ("_inc", "_meet", "name", "certificate")

    def __init__(self, incidence, name: str | None = None,
                 certificate: NkCertificate | None = None):
        inc = np.array(incidence, dtype=np.uint8, copy=True)
        if inc.ndim != 2 or inc.size == 0:
            raise IsolatedOrDuplicatePoint(0, "incidence matrix must be a nonempty 2-d array")
        if not np.isin(inc, (0, 1)).all():
            raise IsolatedOrDuplicatePoint(0, "incidence entries must be 0 or 1")
        self._meet = _check_axioms(inc)
        inc.setflags(write=False)
        self._meet.setflags(write=False)
        self._inc = inc
        self.name = name
        self.certificate = certificate

    @property
    def incidence(self) -> np.ndarray:
        return self._inc

    @property
    def num_lines(self) -> int:
        return self._inc.shape[0]

    @property
    def num_points(self) -> int:
        return self._inc.shape[1]

    def multiplicities(self) -> np.ndarray:
        return self._inc.sum(axis=0).astype(int)

    def multiplicity(self, point: int) -> int:
        return multiplicity(self, point)

    def points_on(self, line: int) -> tuple[int, ...]:
        return tuple(np.flatnonzero(self._inc[line]).tolist())

    def lines_through(self, point: int) -> tuple[int, ...]:
        return tuple(np.flatnonzero(self._inc[:, point]).tolist())

    def meet(self, i: int, j: int) -> int:
        """Index of the unique point on lines ``i`` and ``j`` (``i != j``)."""
        if i == j:
            raise ValueError("a line does not meet itself at a unique point")
        return int(self._meet[i, j])

    def multipoints(self) -> tuple[int, ...]:
        return tuple(np.flatnonzero(self.multiplicities() >= 3).tolist())

    def restrict_lines(self, lines: Sequence[int]) -> "Arrangement":
        """Sub-arrangement on ``lines`` keeping the points where at least two of them meet."""
        sub = self._inc[list(lines)]
        keep = sub.sum(axis=0) >= 2
        return Arrangement(sub[:, keep])

    def key(self) -> str:
        """Stable content hash of the incidence matrix (labels matter)."""
        h = hashlib.sha256()
        h.update(f"{self.num_lines}x{self.num_points}:".encode())
        h.update(self._inc.tobytes())
        return h.hexdigest()[:16]

    def to_dict(self) -> dict:
        d = {
            "lines": self.num_lines,
            "points": self.num_points,
            "incidence": self._inc.astype(int).tolist(),
        }
        if self.name:
            d["name"] = self.name
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "Arrangement":
        inc = np.asarray(data["incidence"], dtype=int)
        if inc.shape != (int(data["lines"]), int(data["points"])):
            raise IsolatedOrDuplicatePoint(0, "declared shape does not match the incidence matrix")
        return cls(inc, name=data.get("name"))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Arrangement":
        return cls.from_dict(json.loads(text))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Arrangement):
            return NotImplemented
        return self._inc.shape == other._inc.shape and bool((self._inc == other._inc).all())

    def __hash__(self) -> int:
        return hash((self._inc.shape, self._inc.tobytes()))

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<Arrangement{label} lines={self.num_lines} points={self.num_points}>"


def _check_axioms(inc: np.ndarray) -> np.ndarray:
    """Check the arrangement invariants and return the line-meet table."""
    nl, npts = inc.shape
    mult = inc.sum(axis=0)
    for j in range(npts):
        if mult[j] < 2:
            raise IsolatedOrDuplicatePoint(j, f"multiplicity {int(mult[j])} < 2")
    cols = {}
    for j in range(npts):
        col = inc[:, j].tobytes()
        if col in cols:
            raise IsolatedOrDuplicatePoint(j, f"same lines as point {cols[col]}")
        cols[col] = j
    meet = np.full((nl, nl), -1, dtype=np.int64)
    common = inc.astype(np.int64) @ inc.T.astype(np.int64)
    for i in range(nl):
        for i2 in range(i + 1, nl):
            c = common[i, i2]
            if c == 0:
                raise PairWithoutPoint(i, i2)
            shared = np.flatnonzero(inc[i] & inc[i2])
            if c > 1:
                raise PairWithMultiplePoints(i, i2, int(shared[0]), int(shared[1]))
            meet[i, i2] = meet[i2, i] = shared[0]
    return meet


def validate(incidence) -> Arrangement:
    """Validate a 0/1 matrix (rows = lines) and return the arrangement.

    >>> validate([[1], [1]]).num_points
    1
    >>> validate([[1], [1], [0]])
    Traceback (most recent call last):
    ...
    arrange.errors.PairWithoutPoint: lines 0 and 2 share no point
    """
    return Arrangement(incidence)


def multiplicity(arr: Arrangement, point: int) -> int:
    if not 0 <= point < arr.num_points:
        raise IndexOutOfRange(f"point {point} out of range [0, {arr.num_points})")
    return int(arr.incidence[:, point].sum())


# ---------------------------------------------------------------------------
# generators


def _normalized_vectors(p: int) -> list[tuple[int, int, int]]:
    """Representatives of the projective plane over F_p with first nonzero entry 1."""
    out = []
    for v in itertools.product(range(p), repeat=3):
        if any(v):
            lead = next(x for x in v if x)
            if lead == 1:
                out.append(v)
    return out


def projective_plane(p: int) -> Arrangement:
    """Lines and points of the projective plane over the prime field F_p.

    Points and lines share one list of normalized vectors, so the incidence
    matrix is symmetric.
    """
    if not is_prime(p):
        raise NotPrime(p)
    vecs = np.array(_normalized_vectors(p), dtype=np.int64)
    inc = ((vecs @ vecs.T) % p == 0).astype(np.uint8)
    n = len(vecs)
    cert = NkCertificate(n=n, k=p + 1, distinguished=tuple(range(n)))
    return Arrangement(inc, name=f"P(2,{p})", certificate=cert)


def b_alpha_beta(p: int, alpha: int, beta: int) -> Arrangement:
    """Two pencils of ``p*alpha`` and ``p*beta`` lines, all other meets double.

    Point 0 is the centre of the first pencil, point 1 of the second; the
    double point of first-pencil line ``a`` and second-pencil line ``b`` has
    index ``2 + a * (p * beta) + b``.
    """
    if p < 2 or alpha < 1 or beta < 1:
        raise ValueError("need p >= 2 and alpha, beta >= 1")
    na, nb = p * alpha, p * beta
    inc = np.zeros((na + nb, 2 + na * nb), dtype=np.uint8)
    inc[:na, 0] = 1
    inc[na:, 1] = 1
    for a in range(na):
        for b in range(nb):
            j = 2 + a * nb + b
            inc[a, j] = 1
            inc[na + b, j] = 1
    return Arrangement(inc, name=f"B^{p}_{{{alpha},{beta}}}")


def pencil(n: int) -> Arrangement:
    """``n`` lines through a single point."""
    return Arrangement(np.ones((n, 1), dtype=np.uint8), name=f"pencil({n})")


def generic(n: int) -> Arrangement:
    """``n`` lines in general position: one double point per pair."""
    pairs = list(itertools.combinations(range(n), 2))
    inc = np.zeros((n, len(pairs)), dtype=np.uint8)
    for j, (a, b) in enumerate(pairs):
        inc[a, j] = inc[b, j] = 1
    return Arrangement(inc, name=f"generic({n})")


def fano() -> Arrangement:
    """The Fano plane with the labelling of its usual triangle picture.

    Points 1..7 (0-based here) are the three vertices, three edge midpoints
    and the centre; lines {2,3,5,6} carry the classic mod-2 relation.
    """
    lines = [(1, 5, 6), (1, 4, 7), (1, 2, 3), (3, 6, 7), (3, 4, 5), (2, 5, 7), (2, 4, 6)]
    inc = np.zeros((7, 7), dtype=np.uint8)
    for i, pts in enumerate(lines):
        for q in pts:
            inc[i, q - 1] = 1
    cert = NkCertificate(n=7, k=3, distinguished=tuple(range(7)))
    return Arrangement(inc, name="Fano", certificate=cert)


def random_arrangement(num_lines: int, rng: np.random.Generator,
                       merge_prob: float = 0.5) -> Arrangement:
    """Random valid arrangement built by adding lines one at a time.

    Each new line meets every old line once; with probability ``merge_prob``
    it passes through an existing point whose lines are all still unmet.
    """
    point_lines: list[set[int]] = []
    for new in range(num_lines):
        unmet = set(range(new))
        order = list(range(len(point_lines)))
        rng.shuffle(order)
        for j in order:
            if point_lines[j] <= unmet and rng.random() < merge_prob:
                point_lines[j].add(new)
                unmet -= point_lines[j] - {new}
        for old in sorted(unmet):
            point_lines.append({old, new})
    if num_lines == 1:
        raise ValueError("an arrangement needs at least two lines")
    inc = np.zeros((num_lines, len(point_lines)), dtype=np.uint8)
    for j, ls in enumerate(point_lines):
        for i in ls:
            inc[i, j] = 1
    return Arrangement(inc)


# ---------------------------------------------------------------------------
# sub-arrangements


@dataclass(frozen=True)
class SubArrangementEmbedding:
    line_map: tuple[int, ...]
    point_map: tuple[int, ...]
    strict: bool

    def to_dict(self) -> dict:
        return {"line_map": list(self.line_map), "point_map": list(self.point_map),
                "strict": self.strict}

    @classmethod
    def from_dict(cls, data: dict) -> "SubArrangementEmbedding":
        return cls(tuple(data["line_map"]), tuple(data["point_map"]), bool(data["strict"]))


def _is_strict(host: Arrangement, lines: Iterable[int], image: set[int]) -> bool:
    return all(q in image for x in lines for q in host.points_on(x))


def check_embedding(host: Arrangement, pattern: Arrangement,
                    emb: SubArrangementEmbedding) -> bool:
    """Whether ``emb`` is an incidence preserving injection (strict if it says so)."""
    lm, pm = emb.line_map, emb.point_map
    if len(lm) != pattern.num_lines or len(pm) != pattern.num_points:
        return False
    if len(set(lm)) != len(lm) or len(set(pm)) != len(pm):
        return False
    sub = host.incidence[np.ix_(lm, pm)]
    if not (sub == pattern.incidence).all():
        return False
    if emb.strict and not _is_strict(host, lm, set(pm)):
        return False
    return True


def iter_subarrangements(host: Arrangement, pattern: Arrangement, strict: bool,
                         within_lines: Iterable[int] | None = None
                         ) -> Iterator[SubArrangementEmbedding]:
    """Yield embeddings of ``pattern`` into ``host`` in lexicographic line-map order.

    The point map is forced by the line map (a point is the meet of two of
    its lines), so embeddings are in bijection with valid line maps.
    ``within_lines`` restricts the host lines that may be used.
    """
    npl = pattern.num_lines
    if npl > host.num_lines or pattern.num_points > host.num_points:
        return
    allowed = sorted(set(range(host.num_lines)) if within_lines is None else set(within_lines))
    pdeg = [len(pattern.points_on(u)) for u in range(npl)]
    hdeg = {x: len(host.points_on(x)) for x in allowed}
    pmult = pattern.multiplicities()
    hmult = host.multiplicities()

    line_map = [-1] * npl
    point_map = [-1] * pattern.num_points
    used_points: dict[int, int] = {}
    used_lines: set[int] = set()

    def extend(u: int) -> Iterator[SubArrangementEmbedding]:
        if u == npl:
            pm = tuple(point_map)
            if strict and not _is_strict(host, line_map, set(pm)):
                return
            yield SubArrangementEmbedding(tuple(line_map), pm, strict)
            return
        for x in allowed:
            if x in used_lines:
                continue
            if strict and hdeg[x] != pdeg[u]:
                continue
            if hdeg[x] < pdeg[u]:
                continue
            assigned = []
            ok = True
            for v in range(u):
                ppt = pattern.meet(u, v)
                hpt = host.meet(x, line_map[v])
                cur = point_map[ppt]
                if cur == -1:
                    if hpt in used_points or hmult[hpt] < pmult[ppt]:
                        ok = False
                        break
                    point_map[ppt] = hpt
                    used_points[hpt] = ppt
                    assigned.append(ppt)
                elif cur != hpt:
                    ok = False
                    break
            if ok:
                line_map[u] = x
                used_lines.add(x)
                yield from extend(u + 1)
                used_lines.discard(x)
                line_map[u] = -1
            for ppt in assigned:
                del used_points[point_map[ppt]]
                point_map[ppt] = -1

    yield from extend(0)


def find_subarrangement(host: Arrangement, pattern: Arrangement, strict: bool,
                        limit: int | None = None,
                        within_lines: Iterable[int] | None = None
                        ) -> list[SubArrangementEmbedding]:
    """All (or the first ``limit``) embeddings of ``pattern`` into ``host``."""
    it = iter_subarrangements(host, pattern, strict, within_lines)
    if limit is not None:
        it = itertools.islice(it, limit)
    return list(it)


# ---------------------------------------------------------------------------
# (n_k)-configurations


def nk_certificate(arr: Arrangement, n: int, k: int) -> NkCertificate:
    """Find a distinguished point set making ``arr`` an (n_k)-configuration.

    Raises :class:`NotAnNkConfiguration` when no such set exists.
    """
    if n < k * (k - 1) + 1:
        raise NotAnNkConfiguration(f"n={n} violates n >= k(k-1)+1 = {k * (k - 1) + 1}")
    if arr.num_lines != n:
        raise NotAnNkConfiguration(f"arrangement has {arr.num_lines} lines, need {n}")
    mult = arr.multiplicities()
    cands = [j for j in range(arr.num_points) if mult[j] == k]
    if len(cands) < n:
        raise NotAnNkConfiguration(f"only {len(cands)} points of multiplicity {k}, need {n}")
    inc = arr.incidence
    load = np.zeros(n, dtype=int)
    cand_lines = [np.flatnonzero(inc[:, j]) for j in cands]
    # how many later candidates still touch each line
    remaining = np.zeros((len(cands) + 1, n), dtype=int)
    for idx in range(len(cands) - 1, -1, -1):
        remaining[idx] = remaining[idx + 1]
        remaining[idx, cand_lines[idx]] += 1
    chosen: list[int] = []

    def rec(idx: int) -> bool:
        if len(chosen) == n:
            return bool((load == k).all())
        if idx == len(cands) or len(cands) - idx < n - len(chosen):
            return False
        if ((load + remaining[idx]) < k).any():
            return False
        ls = cand_lines[idx]
        if (load[ls] < k).all():
            load[ls] += 1
            chosen.append(cands[idx])
            if rec(idx + 1):
                return True
            chosen.pop()
            load[ls] -= 1
        return rec(idx + 1)

    if not rec(0):
        raise NotAnNkConfiguration(f"no distinguished set of {n} points of multiplicity {k}")
    return NkCertificate(n=n, k=k, distinguished=tuple(chosen))


def complete_configuration(rows: Sequence[int], n: int) -> Arrangement:
    """Turn an n x n line/point configuration (rows as bitmasks, column 0 =
    most significant bit) into an arrangement by adding a double point for
    every pair of lines without a common distinguished point."""
    inc = np.zeros((len(rows), n), dtype=np.uint8)
    for i, r in enumerate(rows):
        for j in range(n):
            if (r >> (n - 1 - j)) & 1:
                inc[i, j] = 1
    extra = []
    for a, b in itertools.combinations(range(len(rows)), 2):
        if rows[a] & rows[b] == 0:
            col = np.zeros(len(rows), dtype=np.uint8)
            col[a] = col[b] = 1
            extra.append(col)
    if extra:
        inc = np.hstack([inc, np.array(extra, dtype=np.uint8).T])
    return Arrangement(inc)


class _Budget:
    def __init__(self, cap: int):
        self.cap = cap
        self.nodes = 0
        self.exhausted = False

    def tick(self) -> bool:
        self.nodes += 1
        if self.nodes > self.cap:
            self.exhausted = True
        return not self.exhausted


def _pruned_configs(n: int, k: int, budget: _Budget) -> Iterator[tuple[int, ...]]:
    """Double-lex ordered n x n configurations (rows strictly decreasing,
    columns non-increasing), any two rows sharing at most one column.

    Every isomorphism class has at least one double-lex representative, so
    this enumerates all classes (with repetitions).  Rows are bitmasks with
    column 0 as the most significant bit.
    """
    colbit = [1 << (n - 1 - j) for j in range(n)]
    colcount = [0] * n
    # paired[j]: columns already sharing a row with column j
    paired = [0] * n
    rows: list[int] = []

    def gen_rows(blocks: list[tuple[int, int]], i: int) -> Iterator[int]:
        rows_left_after = n - i - 1
        prev = rows[-1] if rows else 1 << n
        tails = [0] * (len(blocks) + 1)
        for b in range(len(blocks) - 1, -1, -1):
            tails[b] = tails[b + 1] + blocks[b][1]

        def rec(b: int, left: int, mask: int) -> Iterator[int]:
            if b == len(blocks):
                if left == 0 and mask < prev:
                    yield mask
                return
            start, size = blocks[b]
            c = colcount[start]
            hi = min(size, left) if c < k else 0
            if c and hi > 1:
                hi = 1  # tied columns with a shared row cannot meet again
            lo = max(0, left - tails[b + 1])
            if k - c > rows_left_after:
                lo = max(lo, size)
            shift = n - start - size
            for a in range(hi, lo - 1, -1):
                m = mask
                ok = True
                for j in range(start, start + a):
                    if paired[j] & m:
                        ok = False
                        break
                    m |= colbit[j]
                if not ok:
                    continue
                if (m >> shift) > (prev >> shift):
                    continue
                yield from rec(b + 1, left - a, m)

        yield from rec(0, k, 0)

    def split(blocks: list[tuple[int, int]], row: int) -> list[tuple[int, int]]:
        out = []
        for start, size in blocks:
            ones = sum(1 for j in range(start, start + size) if row & colbit[j])
            if 0 < ones < size:
                out.append((start, ones))
                out.append((start + ones, size - ones))
            else:
                out.append((start, size))
        return out

    def rec_rows(i: int, blocks: list[tuple[int, int]]) -> Iterator[tuple[int, ...]]:
        if not budget.tick():
            return
        if i == n:
            yield tuple(rows)
            return
        for row in gen_rows(blocks, i):
            cols = [j for j in range(n) if row & colbit[j]]
            saved = [paired[j] for j in cols]
            for j in cols:
                colcount[j] += 1
                paired[j] |= row & ~colbit[j]
            rows.append(row)
            yield from rec_rows(i + 1, split(blocks, row))
            rows.pop()
            for j, old in zip(cols, saved):
                colcount[j] -= 1
                paired[j] = old
            if budget.exhausted:
                return

    yield from rec_rows(0, [(0, n)])


def _exhaustive_configs(n: int, k: int, budget: _Budget) -> Iterator[tuple[int, ...]]:
    """Configurations with only the trivial normalizations: first row is
    columns 0..k-1 and rows strictly decreasing.  Independent of the
    double-lex pruning; used as a cross-check oracle at small n."""
    combos = sorted((sum(1 << (n - 1 - j) for j in c)
                     for c in itertools.combinations(range(n), k)), reverse=True)
    combo_cols = {m: [j for j in range(n) if m >> (n - 1 - j) & 1] for m in combos}
    colcount = [0] * n
    rows: list[int] = []

    def rec(i: int, start: int) -> Iterator[tuple[int, ...]]:
        if not budget.tick():
            return
        if i == n:
            if all(c == k for c in colcount):
                yield tuple(rows)
            return
        rows_left_after = n - i - 1
        stop = 1 if i == 0 else len(combos)
        for idx in range(start, stop):
            row = combos[idx]
            if any((row & r).bit_count() > 1 for r in rows):
                continue
            cols = combo_cols[row]
            if any(colcount[j] >= k for j in cols):
                continue
            for j in cols:
                colcount[j] += 1
            if all(k - colcount[j] <= rows_left_after for j in range(n)):
                rows.append(row)
                yield from rec(i + 1, idx + 1)
                rows.pop()
            for j in cols:
                colcount[j] -= 1
            if budget.exhausted:
                return

    yield from rec(0, 0)


@dataclass
class NkSearchResult:
    arrangements: list[Arrangement]
    complete: bool
    nodes: int
    raw_solutions: int = 0
    classes: dict = field(default_factory=dict, repr=False)


def search_nk_detailed(n: int, k: int, limit: int | None = None,
                       exhaustive: bool = False, cap: int | None = None) -> NkSearchResult:
    """Backtracking search for (n_k)-configurations up to isomorphism.

    ``complete`` is True when the whole search tree was explored, so the
    returned classes are all of them.
    """
    if n < k * (k - 1) + 1:
        raise ValueError(f"need n >= k(k-1)+1 = {k * (k - 1) + 1}")
    budget = _Budget(search_cap() if cap is None else cap)
    gen = _exhaustive_configs if exhaustive else _pruned_configs
    classes: dict[tuple, Arrangement] = {}
    raw = 0
    stopped = False
    for rows in gen(n, k, budget):
        raw += 1
        arr = complete_configuration(rows, n)
        key = canonical_form(arr)
        if key not in classes:
            dist = tuple(range(n))
            classes[key] = Arrangement(arr.incidence, name=f"({n}_{k})",
                                       certificate=NkCertificate(n, k, dist))
            if limit is not None and len(classes) >= limit:
                stopped = True
                break
    if budget.exhausted:
        log.warning("(%d_%d) search stopped after %d nodes (cap %d)", n, k, budget.nodes, budget.cap)
    ordered = [classes[key] for key in sorted(classes)]
    return NkSearchResult(ordered, complete=not budget.exhausted and not stopped,
                          nodes=budget.nodes, raw_solutions=raw, classes=classes)


def search_nk(n: int, k: int, limit: int | None = None) -> list[Arrangement]:
    """Up to ``limit`` pairwise non-isomorphic (n_k)-configurations, each
    completed with the forced double points, in canonical-key order."""
    return search_nk_detailed(n, k, limit).arrangements


# ---------------------------------------------------------------------------
# isomorphism


def _refine(cells: list[list[int]], adj: list[set[int]]) -> list[list[int]]:
    """Equitable refinement of an ordered partition (1-dim Weisfeiler-Leman).

    Every step depends only on the ordered cell structure, so the result
    is invariant under relabeling.
    """
    cells = [list(c) for c in cells]
    changed = True
    while changed:
        changed = False
        for w in range(len(cells)):
            splitter = set(cells[w])
            out = []
            for c in cells:
                if len(c) == 1:
                    out.append(c)
                    continue
                groups: dict[int, list[int]] = {}
                for v in c:
                    groups.setdefault(len(adj[v] & splitter), []).append(v)
                if len(groups) == 1:
                    out.append(c)
                else:
                    out.extend(groups[key] for key in sorted(groups))
                    changed = True
            cells = out
            if changed:
                break
    return cells


def canonical_labeling(arr_or_matrix) -> tuple[tuple[int, ...], list[int], list[int]]:
    """Canonical certificate plus the line and point orders that produce it.

    Individualization-refinement on the line/point incidence graph (lines
    stay lines).  Each leaf of the search tree orders all vertices; its
    certificate is the permuted incidence matrix, and the canonical one is
    the minimum over leaves.  Leaves with equal certificates reveal
    automorphisms, which prune sibling branches in the same orbit.
    """
    inc = arr_or_matrix.incidence if isinstance(arr_or_matrix, Arrangement) \
        else np.asarray(arr_or_matrix, dtype=np.uint8)
    nr, nc = inc.shape
    nv = nr + nc
    adj: list[set[int]] = [set() for _ in range(nv)]
    for i, j in zip(*np.nonzero(inc)):
        adj[int(i)].add(nr + int(j))
        adj[nr + int(j)].add(int(i))

    def cert_of(order: list[int]) -> tuple[int, ...]:
        lines = [v for v in order if v < nr]
        pts = [v for v in order if v >= nr]
        ppos = {v: t for t, v in enumerate(pts)}
        rows = []
        for v in lines:
            m = 0
            for w in adj[v]:
                m |= 1 << (nc - 1 - ppos[w])
            rows.append(m)
        return (nr, nc, *rows)

    best: list = [None, None]
    gens: list[list[int]] = []

    def search(cells: list[list[int]], path: list[int]) -> None:
        cells = _refine(cells, adj)
        target = next((c for c in cells if len(c) > 1), None)
        if target is None:
            order = [c[0] for c in cells]
            cert = cert_of(order)
            if best[0] is None or cert < best[0]:
                best[0], best[1] = cert, order
            elif cert == best[0]:
                perm = list(range(nv))
                for a, b in zip(best[1], order):
                    perm[a] = b
                gens.append(perm)
            return
        idx = cells.index(target)
        done: list[int] = []
        for v in sorted(target):
            if any(_same_orbit(v, u, gens, path) for u in done):
                continue
            rest = [u for u in target if u != v]
            child = cells[:idx] + [[v], rest] + cells[idx + 1:]
            search(child, path + [v])
            done.append(v)

    search([list(range(nr)), list(range(nr, nv))], [])
    order = best[1]
    return best[0], [v for v in order if v < nr], [v - nr for v in order if v >= nr]


def _same_orbit(v: int, u: int, gens: list[list[int]], fixed: list[int]) -> bool:
    usable = [g for g in gens if all(g[x] == x for x in fixed)]
    if not usable:
        return False
    seen = {u}
    stack = [u]
    while stack:
        x = stack.pop()
        if x == v:
            return True
        for g in usable:
            y = g[x]
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return False


def canonical_form(arr_or_matrix) -> tuple[int, ...]:
    """Isomorphism-invariant certificate: (rows, cols, *row bitmasks).

    Two arrangements are isomorphic (lines to lines, points to points)
    exactly when their canonical forms are equal.
    """
    return canonical_labeling(arr_or_matrix)[0]


def lexmin_form(arr_or_matrix) -> tuple[int, ...]:
    """Lexicographically minimal row-major incidence string under row and
    column permutations, returned as a tuple: (rows, cols, *row bitmasks).

    For a fixed row order the best column order is the lexicographic sort of
    the columns, so the search runs over row orders only.  It proceeds level
    by level, keeping every prefix whose next row is minimal; prefixes with
    the same chosen-row set and column partition are merged.
    """
    inc = arr_or_matrix.incidence if isinstance(arr_or_matrix, Arrangement) \
        else np.asarray(arr_or_matrix, dtype=np.uint8)
    nr, nc = inc.shape
    rowmask = [sum(1 << j for j in np.flatnonzero(inc[i]).tolist()) for i in range(nr)]
    # state: (used rows bitmask, column cells as tuple of masks)
    states = {(0, ((1 << nc) - 1,))}
    out_rows: list[int] = []
    for _ in range(nr):
        sizes = [c.bit_count() for c in next(iter(states))[1]]
        best = None
        nxt: set = set()
        for used, cells in states:
            for i in range(nr):
                if used >> i & 1:
                    continue
                rm = rowmask[i]
                counts = tuple((rm & c).bit_count() for c in cells)
                if best is not None and counts > best:
                    continue
                if best is None or counts < best:
                    best = counts
                    nxt = set()
                new_cells = []
                for c in cells:
                    zeros = c & ~rm
                    ones = c & rm
                    if zeros:
                        new_cells.append(zeros)
                    if ones:
                        new_cells.append(ones)
                nxt.add((used | (1 << i), tuple(new_cells)))
        states = nxt
        # row string over the sorted columns: each cell is 0...01...1
        row = 0
        for size, c in zip(sizes, best):
            row = (row << size) | ((1 << c) - 1)
        out_rows.append(row)
    return (nr, nc, *out_rows)


def is_isomorphic(a: Arrangement, b: Arrangement) -> bool:
    if a.incidence.shape != b.incidence.shape:
        return False
    if sorted(a.multiplicities().tolist()) != sorted(b.multiplicities().tolist()):
        return False
    return canonical_form(a) == canonical_form(b)
