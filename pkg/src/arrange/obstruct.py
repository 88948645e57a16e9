"""Branched-cover obstructions to realizing arrangements in the complex plane.

The method: pick a sub-arrangement ``B^p_{alpha,beta}`` whose lines carry a
mod p relation, blow up the plane so that its proper transforms become
disjoint, and take the p-fold cyclic cover branched over them.  Spheres
disjoint from the branch set lift to the cover; if their lifts span more
(negative) homology than the cover has, the arrangement cannot exist.

The verdict is one-directional: ``NotObstructed`` means only that this
particular comparison found no contradiction.

Three comparisons are evaluated for every report:

``coarse``
    independent lifted classes versus the full ``b2`` of the cover;
``eigen``
    negative classes in a nonzero eigenspace versus ``b2_minus(r)``;
``total``
    all negative lifted classes versus the total ``b2_minus``.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .arrangement import (
    Arrangement,
    SubArrangementEmbedding,
    b_alpha_beta,
    check_embedding,
    is_prime,
    iter_subarrangements,
    projective_plane,
)
from .blowup import BlowupModel, intersection_number, proper_transforms, verify_relation
from .cover import CoverInvariants, bpab_invariants
from .errors import (
    BranchNotStrictlyEmbedded,
    HypothesisViolation,
    InvalidDeletion,
    NegativeBetti,
    NotPrime,
)

log = logging.getLogger(__name__)

SCHEMA = "obstruction-report/1"
OBSTRUCTED = "Obstructed"
NOT_OBSTRUCTED = "NotObstructed"
DEFAULT_PRECEDENCE = ("coarse", "eigen", "total")


# ---------------------------------------------------------------------------
# exact symmetric-matrix helpers


def inertia(m) -> tuple[int, int, int]:
    """Exact ``(n_plus, n_minus, n_zero)`` of a symmetric integer matrix.

    Symmetric Gaussian elimination over the rationals; a zero diagonal with
    a nonzero off-diagonal entry is fixed by the congruence ``x_i += x_j``.

    >>> inertia([[-3, 1], [1, -3]])
    (0, 2, 0)
    >>> inertia([[0, 1], [1, 0]])
    (1, 1, 0)
    """
    a = [[Fraction(int(x)) for x in row] for row in np.asarray(m, dtype=np.int64).tolist()]
    n = len(a)
    pos = neg = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if a[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in active for j in active if j != i and a[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            piv = i
        d = a[piv][piv]
        if d > 0:
            pos += 1
        else:
            neg += 1
        active.remove(piv)
        for i in active:
            f = a[i][piv] / d
            if f:
                for k in active:
                    a[i][k] -= f * a[piv][k]
        for i in active:
            a[i][piv] = a[piv][i] = Fraction(0)
    return pos, neg, n - pos - neg


def integer_rank(m) -> int:
    arr = np.asarray(m, dtype=np.int64)
    if arr.size == 0:
        return 0
    rows = [[Fraction(int(x)) for x in row] for row in arr.tolist()]
    r = 0
    ncols = len(rows[0])
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c] / rows[r][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


# ---------------------------------------------------------------------------
# report


@dataclass(frozen=True)
class Inequality:
    """``lower_bound > available`` means the cover cannot exist."""

    route: str
    lower_bound: int
    available: int
    r: int | None = None

    @property
    def holds(self) -> bool:
        return self.lower_bound > self.available

    def describe(self) -> str:
        tag = self.route if self.r is None else f"{self.route}(r={self.r})"
        rel = ">" if self.holds else "<="
        return f"{tag}: needed {self.lower_bound} {rel} available {self.available}"

    def to_dict(self) -> dict:
        d = {"route": self.route, "lower_bound": self.lower_bound,
             "available": self.available, "holds": self.holds}
        if self.r is not None:
            d["r"] = self.r
        return d


@dataclass(frozen=True)
class ObstructionReport:
    arrangement_key: str
    arrangement_name: str | None
    num_lines: int
    p: int
    alpha: int
    beta: int
    branch_embedding: SubArrangementEmbedding
    branch_lines: tuple[int, ...]
    blown_points: tuple[int, ...]
    relation: tuple[int, ...]
    cover: CoverInvariants
    outside_lines: tuple[int, ...]
    outside_form: np.ndarray
    outside_rank: int
    outside_negative_index: int
    eigen_form: np.ndarray
    eigen_lower_bound: dict
    branch_lift_squares: tuple[Fraction, ...]
    inequalities: tuple[Inequality, ...]
    verdict: str
    witness: Inequality | None
    precedence: tuple[str, ...] = DEFAULT_PRECEDENCE
    extra: dict = field(default_factory=dict)

    @property
    def obstructed(self) -> bool:
        return self.verdict == OBSTRUCTED

    @property
    def corollary_nonfillable(self) -> bool:
        return self.obstructed

    def inequality(self, route: str, r: int | None = None) -> Inequality:
        for q in self.inequalities:
            if q.route == route and q.r == r:
                return q
        raise KeyError((route, r))

    def recheck(self) -> bool:
        """Re-derive the verdict from the stored numbers alone."""
        holds = [q for q in self.inequalities if q.holds and q.route in self.precedence]
        verdict = OBSTRUCTED if holds else NOT_OBSTRUCTED
        if verdict != self.verdict:
            return False
        if self.witness is not None and not self.witness.holds:
            return False
        return True

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "arrangement": {"key": self.arrangement_key, "name": self.arrangement_name,
                            "lines": self.num_lines},
            "p": self.p,
            "alpha": self.alpha,
            "beta": self.beta,
            "branch_embedding": self.branch_embedding.to_dict(),
            "branch_lines": list(self.branch_lines),
            "blown_points": list(self.blown_points),
            "relation": {"modulus": self.p, "entries": list(self.relation)},
            "cover": self.cover.to_dict(),
            "b2_total": self.cover.b2_total,
            "b2_minus_total": self.cover.b2_minus_total,
            "outside_lines": list(self.outside_lines),
            "outside_form": self.outside_form.tolist(),
            "outside_rank": self.outside_rank,
            "outside_negative_index": self.outside_negative_index,
            "eigen_form": self.eigen_form.tolist(),
            "eigen_lower_bound": {str(r): v for r, v in sorted(self.eigen_lower_bound.items())},
            "branch_lift_squares": [{"num": q.numerator, "den": q.denominator}
                                    for q in self.branch_lift_squares],
            "inequalities": [q.to_dict() for q in self.inequalities],
            "precedence": list(self.precedence),
            "verdict": self.verdict,
            "witness": None if self.witness is None else self.witness.to_dict(),
            "corollary_nonfillable": self.corollary_nonfillable,
            **({"extra": self.extra} if self.extra else {}),
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=False)

    def summary(self) -> str:
        lines = [
            f"arrangement {self.arrangement_name or self.arrangement_key} "
            f"({self.num_lines} lines), p={self.p}, B^{self.p}_{{{self.alpha},{self.beta}}}",
            f"blown points N={len(self.blown_points)}; chi(cover)={self.cover.chi_total}, "
            f"b2(cover)={self.cover.b2_total}, b2-(total)={self.cover.b2_minus_total}",
            "b2-(r): " + ", ".join(f"r={r}:{v}" for r, v in enumerate(self.cover.b2_minus)),
            f"outside lines {len(self.outside_lines)}, rank {self.outside_rank}, "
            f"negative index {self.outside_negative_index}",
        ]
        lines += ["  " + q.describe() for q in self.inequalities]
        lines.append(f"verdict: {self.verdict}"
                     + (f" via {self.witness.describe()}" if self.witness else ""))
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# core certificate


def bpab_relation(alpha: int, beta: int, p: int) -> tuple[int, ...]:
    """Residues ``(1, ..., 1, -1, ..., -1)`` on the lines of ``B^p_{alpha,beta}``."""
    return (1,) * (p * alpha) + ((p - 1) % p,) * (p * beta)


def _certificate(arr: Arrangement, p: int, alpha: int, beta: int,
                 emb: SubArrangementEmbedding, blown: Sequence[int],
                 outside: Sequence[int], precedence: Sequence[str],
                 extra: dict | None = None) -> ObstructionReport:
    model = BlowupModel(arr, blown)
    branch = tuple(emb.line_map)
    rel = np.zeros(arr.num_lines, dtype=np.int64)
    rel[list(branch)] = bpab_relation(alpha, beta, p)
    if not verify_relation(model, rel, p):
        raise HypothesisViolation("branch lines do not carry a mod p relation in this blow-up")

    cover = bpab_invariants(p, alpha, beta, model.N)
    F = proper_transforms(model)
    outside = _block_order(F, list(outside))
    M = np.array([[intersection_number(F[i], F[j]) for j in outside] for i in outside],
                 dtype=np.int64).reshape(len(outside), len(outside))
    rank_m = integer_rank(M)
    _, neg_m, _ = inertia(M) if len(outside) else (0, 0, 0)
    eigen = p * M
    eig_bound = {r: neg_m for r in range(1, p)}

    lift_sq = tuple(Fraction(intersection_number(F[i], F[i]), p) for i in branch)
    nonzero_lifts = sum(1 for q in lift_sq if q != 0)
    negative_lifts = sum(1 for q in lift_sq if q < 0)

    ineqs = [Inequality("coarse", p * rank_m + nonzero_lifts, cover.b2_total)]
    ineqs += [Inequality("eigen", eig_bound[r], cover.b2_minus[r], r) for r in range(1, p)]
    ineqs.append(Inequality("total", p * neg_m + negative_lifts, cover.b2_minus_total))

    witness = None
    for route in precedence:
        hit = [q for q in ineqs if q.route == route and q.holds]
        if hit:
            witness = max(hit, key=lambda q: (q.lower_bound - q.available, -(q.r or 0)))
            break
    verdict = OBSTRUCTED if witness is not None else NOT_OBSTRUCTED
    return ObstructionReport(
        arrangement_key=arr.key(),
        arrangement_name=arr.name,
        num_lines=arr.num_lines,
        p=p, alpha=alpha, beta=beta,
        branch_embedding=emb,
        branch_lines=branch,
        blown_points=tuple(model.blown_points),
        relation=tuple(int(x) for x in rel),
        cover=cover,
        outside_lines=tuple(outside),
        outside_form=M,
        outside_rank=rank_m,
        outside_negative_index=neg_m,
        eigen_form=eigen,
        eigen_lower_bound=eig_bound,
        branch_lift_squares=lift_sq,
        inequalities=tuple(ineqs),
        verdict=verdict,
        witness=witness,
        precedence=tuple(precedence),
        extra=dict(extra or {}),
    )


def _block_order(F, lines: list[int]) -> list[int]:
    """Order lines component by component of the "intersect nontrivially"
    graph, so the outside form comes out block diagonal."""
    remaining = sorted(lines)
    out: list[int] = []
    while remaining:
        stack = [remaining.pop(0)]
        comp = []
        while stack:
            x = stack.pop()
            comp.append(x)
            nbrs = [y for y in remaining if intersection_number(F[x], F[y]) != 0]
            for y in nbrs:
                remaining.remove(y)
            stack.extend(sorted(nbrs, reverse=True))
        out.extend(comp)
    return out


def _check_hypothesis(arr: Arrangement, emb: SubArrangementEmbedding,
                      blown: Iterable[int]) -> list[int]:
    """Validate the blow-up hypothesis; return the outside lines."""
    branch = set(emb.line_map)
    branch_pts = set(emb.point_map)
    blown = set(blown)
    on_branch = {q for x in branch for q in arr.points_on(x)}
    missing = branch_pts - blown
    if missing:
        raise HypothesisViolation(
            f"intersections of branch lines {sorted(missing)} are not blown up")
    stray = (blown & on_branch) - branch_pts
    if stray:
        raise HypothesisViolation(
            f"blown points {sorted(stray)} lie on branch lines but are not branch intersections")
    outside = [x for x in range(arr.num_lines) if x not in branch]
    for x in outside:
        for y in branch:
            if arr.meet(x, y) not in blown:
                raise BranchNotStrictlyEmbedded(
                    f"outside line {x} meets branch line {y} at unblown point {arr.meet(x, y)}")
    return outside


def obstruct_arrangement(arr: Arrangement, p: int, alpha: int, beta: int,
                         branch: SubArrangementEmbedding, blown: Iterable[int],
                         precedence: Sequence[str] = DEFAULT_PRECEDENCE) -> ObstructionReport:
    """Run the branched-cover comparison for one branch choice and blow-up set.

    ``branch`` embeds ``b_alpha_beta(p, alpha, beta)`` into ``arr``.  The
    blown points lying on branch lines must be exactly the branch
    intersections, and every other line must meet the branch lines only
    at blown points.
    """
    if not is_prime(p):
        raise NotPrime(p)
    pattern = b_alpha_beta(p, alpha, beta)
    as_nonstrict = SubArrangementEmbedding(branch.line_map, branch.point_map, False)
    if not check_embedding(arr, pattern, as_nonstrict):
        raise HypothesisViolation("branch is not an embedding of B^p_{alpha,beta}")
    blown = sorted(set(int(j) for j in blown))
    outside = _check_hypothesis(arr, branch, blown)
    return _certificate(arr, p, alpha, beta, branch, blown, outside, precedence)


# the route that the classical argument cites first for the projective planes
PLANE_PRECEDENCE = ("coarse", "total", "eigen")


def standard_branch(p: int, alpha: int = 1, beta: int = 1,
                    host: Arrangement | None = None) -> SubArrangementEmbedding:
    """First strict embedding of ``B^p_{alpha,beta}`` into ``host`` (default P(2,p))."""
    host = projective_plane(p) if host is None else host
    for emb in iter_subarrangements(host, b_alpha_beta(p, alpha, beta), strict=True):
        return emb
    raise HypothesisViolation(f"no strict B^{p}_{{{alpha},{beta}}} in {host!r}")


def obstruct_projective_plane(p: int) -> ObstructionReport:
    """Obstruct ``P(2,p)`` with a strict ``B^p_{1,1}`` and every point blown up.

    For ``p > 2`` the plain count of independent spheres already exceeds
    ``b2``; for ``p = 2`` the negative spheres exceed the total ``b2_minus``.

    >>> rep = obstruct_projective_plane(3)
    >>> rep.inequality("coarse").lower_bound, rep.inequality("coarse").available
    (27, 22)
    """
    if not is_prime(p):
        raise NotPrime(p)
    arr = projective_plane(p)
    emb = standard_branch(p)
    rep = obstruct_arrangement(arr, p, 1, 1, emb, range(arr.num_points),
                               precedence=PLANE_PRECEDENCE)
    return rep


def deletion_threshold(p: int) -> Fraction:
    return Fraction(p * p - 3, 2)


def obstruct_deletion(p: int, t: int, deleted: Sequence[int] | None = None) -> ObstructionReport:
    """P(2,p) minus ``t`` lines that avoid a fixed strict ``B^p_{1,1}``.

    All ``p^2+p+1`` points of the plane stay blown up, so each surviving
    line still has ``p+1`` blown points.  The verdict uses the eigenspace
    comparison at ``r = (p-1)/2``, which is where ``b2_minus(r)`` is
    smallest.  ``deleted`` chooses the lines explicitly; by default the
    first ``t`` lines outside the branch set are removed.
    """
    if not is_prime(p):
        raise NotPrime(p)
    if p == 2:
        raise ValueError("the deletion comparison needs an odd prime")
    host = projective_plane(p)
    emb = standard_branch(p)
    branch = set(emb.line_map)
    candidates = [x for x in range(host.num_lines) if x not in branch]
    if deleted is None:
        if not 0 <= t <= len(candidates):
            raise InvalidDeletion(
                f"cannot delete {t} lines: only {len(candidates)} lines avoid the branch set")
        deleted = candidates[:t]
    deleted = sorted(set(int(x) for x in deleted))
    if len(deleted) != t:
        raise InvalidDeletion(f"expected {t} distinct deleted lines, got {len(deleted)}")
    bad = [x for x in deleted if x in branch or not 0 <= x < host.num_lines]
    if bad:
        raise InvalidDeletion(f"deleted lines {bad} belong to the branch set or do not exist")
    outside = [x for x in candidates if x not in set(deleted)]
    r0 = (p - 1) // 2
    thr = deletion_threshold(p)
    return _certificate(host, p, 1, 1, emb, range(host.num_points), outside,
                        precedence=("eigen",),
                        extra={"deleted_lines": deleted, "t": t,
                               "threshold": {"num": thr.numerator, "den": thr.denominator},
                               "critical_r": r0})


def deletion_verdict(rep: ObstructionReport) -> bool:
    """Obstructed flag restricted to the critical eigenspace comparison."""
    return rep.inequality("eigen", rep.extra["critical_r"]).holds


# ---------------------------------------------------------------------------
# driver


def branch_candidates(arr: Arrangement, p: int, alpha: int, beta: int,
                      limit: int | None = None) -> list[SubArrangementEmbedding]:
    """Representative branch embeddings, one per unordered pair of pencils.

    Embeddings that differ only by relabelling lines inside a pencil give
    the same branch set and the same relation (up to sign when the pencils
    swap), so one is kept per pair of line sets; the order is by sorted
    line sets.
    """
    na = p * alpha
    seen: dict[tuple, SubArrangementEmbedding] = {}
    for emb in iter_subarrangements(arr, b_alpha_beta(p, alpha, beta), strict=False):
        a = tuple(sorted(emb.line_map[:na]))
        b = tuple(sorted(emb.line_map[na:]))
        key = (a, b) if alpha != beta else tuple(sorted((a, b)))
        if key not in seen:
            seen[key] = emb
            if limit is not None and len(seen) >= limit:
                break
    return [seen[k] for k in sorted(seen)]


def blow_policies(arr: Arrangement, emb: SubArrangementEmbedding) -> dict[str, list[int]]:
    """The two blow-up sets used in practice: every point off the branch
    lines plus the branch intersections, or the branch intersections only."""
    branch = set(emb.line_map)
    on_branch = {q for x in branch for q in arr.points_on(x)}
    off = [q for q in range(arr.num_points) if q not in on_branch]
    pts = sorted(set(emb.point_map))
    return {"all": sorted(set(pts) | set(off)), "branch": pts}


def find_obstructions(arr: Arrangement, primes: Sequence[int] = (2, 3),
                      max_ab: int = 2, limit_per_pattern: int | None = 50,
                      stop_at_first: bool = False) -> list[ObstructionReport]:
    """Try every small ``B^p_{alpha,beta}`` branch and both blow-up policies.

    Branch choices that violate the blow-up hypothesis are skipped.  The
    result is sorted by (verdict, p, alpha, beta, branch lines, policy)
    with obstructed reports first.
    """
    out = []
    for p in primes:
        for alpha in range(1, max_ab + 1):
            for beta in range(alpha, max_ab + 1):
                if p * (alpha + beta) > arr.num_lines:
                    continue
                for emb in branch_candidates(arr, p, alpha, beta, limit_per_pattern):
                    for policy, blown in blow_policies(arr, emb).items():
                        try:
                            rep = obstruct_arrangement(arr, p, alpha, beta, emb, blown)
                        except (HypothesisViolation, BranchNotStrictlyEmbedded):
                            continue
                        except NegativeBetti as exc:
                            log.warning("skipping branch %s: %s", emb.line_map, exc)
                            continue
                        rep.extra["policy"] = policy
                        out.append(rep)
                        if stop_at_first and rep.obstructed:
                            return out
    out.sort(key=lambda r: (not r.obstructed, r.p, r.alpha, r.beta,
                            sorted(r.branch_lines), r.extra.get("policy", "")))
    return out
