from __future__ import annotations

import json
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from arrange.arrangement import (
    SubArrangementEmbedding,
    b_alpha_beta,
    fano,
    generic,
    iter_subarrangements,
    projective_plane,
)
from arrange.blowup import BlowupModel, intersection_number, proper_transforms
from arrange.errors import (
    BranchNotStrictlyEmbedded,
    HypothesisViolation,
    InvalidDeletion,
    NotPrime,
)
from arrange.obstruct import (
    NOT_OBSTRUCTED,
    OBSTRUCTED,
    blow_policies,
    branch_candidates,
    find_obstructions,
    inertia,
    integer_rank,
    obstruct_arrangement,
    obstruct_deletion,
    obstruct_projective_plane,
    standard_branch,
)


def block_sum(block, times):
    b = np.array(block)
    out = np.zeros((b.shape[0] * times,) * 2, dtype=int)
    for i in range(times):
        s = slice(i * b.shape[0], (i + 1) * b.shape[0])
        out[s, s] = b
    return out


# --- projective planes ------------------------------------------------------


def test_fano_report():
    rep = obstruct_projective_plane(2)
    assert rep.cover.chi_total == 12 and rep.cover.b2_total == 10
    assert rep.cover.b2_minus == (7, 2) and rep.cover.b2_minus_total == 9
    total = rep.inequality("total")
    assert (total.lower_bound, total.available) == (10, 9)
    assert not rep.inequality("coarse").holds
    assert rep.verdict == OBSTRUCTED and rep.witness == total
    assert rep.corollary_nonfillable


def test_p3_report():
    rep = obstruct_projective_plane(3)
    c = rep.inequality("coarse")
    assert (c.lower_bound, c.available) == (27, 22) and rep.witness == c


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
def test_all_small_planes_obstructed(p):
    rep = obstruct_projective_plane(p)
    assert rep.obstructed and rep.recheck()
    assert rep.cover.b2_total == p * (p * p - 3 * p + 8) - 2
    assert rep.inequality("coarse").lower_bound == p * (p * p - p + 3)
    # p(p^2-p+1) lifts of (-p)-spheres and 2p lifts of (-1)-spheres
    assert len(rep.outside_lines) == p * p - p + 1
    assert sorted(rep.branch_lift_squares) == [Fraction(-1)] * (2 * p)


def test_plane_inequality_symbolic():
    p = sympy.symbols("p", positive=True, integer=True)
    lhs = p * (p ** 2 - 3 * p + 8) - 2
    rhs = p * (p ** 2 - p + 3)
    assert sympy.expand(rhs - lhs - (2 * p ** 2 - 5 * p + 2)) == 0
    for q in sympy.primerange(2, 51):
        holds = bool(lhs.subs(p, q) < rhs.subs(p, q))
        assert holds == (q > 2)


def test_plane_not_prime():
    with pytest.raises(NotPrime):
        obstruct_projective_plane(9)


def test_specialization_matches_general_pipeline():
    for p in (2, 3, 5):
        arr = projective_plane(p)
        emb = standard_branch(p)
        a = obstruct_projective_plane(p).to_dict()
        b = obstruct_arrangement(arr, p, 1, 1, emb, range(arr.num_points)).to_dict()
        for key in ("cover", "outside_form", "outside_rank", "eigen_form", "eigen_lower_bound",
                    "inequalities", "verdict", "b2_total", "b2_minus_total"):
            assert a[key] == b[key], key


@pytest.mark.parametrize("p", [2, 3, 5])
def test_outside_form_matches_hand_formula(p):
    arr = projective_plane(p)
    blown = set(range(arr.num_points))
    rep = obstruct_arrangement(arr, p, 1, 1, standard_branch(p), sorted(blown))
    F = proper_transforms(BlowupModel(arr, sorted(blown)))
    lines = rep.outside_lines
    for a, i in enumerate(lines):
        for b, j in enumerate(lines):
            if i == j:
                hand = 1 - int(arr.incidence[i].sum())
            else:
                hand = 1 - sum(1 for q in blown if arr.incidence[i, q] and arr.incidence[j, q])
            assert rep.outside_form[a, b] == hand == intersection_number(F[i], F[j])


def test_monotonicity_in_blown_points():
    arr = projective_plane(3)
    emb = standard_branch(3)
    branch_pts = set(emb.point_map)
    off = [q for q in range(arr.num_points) if q not in branch_pts]
    base = obstruct_arrangement(arr, 3, 1, 1, emb, sorted(branch_pts))
    for k in range(1, len(off) + 1):
        rep = obstruct_arrangement(arr, 3, 1, 1, emb, sorted(branch_pts | set(off[:k])))
        for r in (1, 2):
            assert rep.cover.b2_minus[r] == base.cover.b2_minus[r] + k


# --- inertia helpers --------------------------------------------------------


@given(st.integers(1, 6), st.integers(0, 10**6))
def test_inertia_matches_sympy(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(-3, 4, size=(n, n))
    m = a + a.T
    pos, neg, zero = inertia(m)
    ev = np.linalg.eigvalsh(m.astype(float))
    assert pos == int((ev > 1e-9).sum()) and neg == int((ev < -1e-9).sum())
    assert pos + neg == integer_rank(m) == sympy.Matrix(m.tolist()).rank()
    assert zero == n - pos - neg


# --- deletion ---------------------------------------------------------------


def test_deletion_examples():
    assert obstruct_deletion(3, 2).obstructed
    assert not obstruct_deletion(3, 3).obstructed
    rep = obstruct_deletion(5, 10)
    assert rep.obstructed
    q = rep.inequality("eigen", 2)
    assert (q.lower_bound, q.available) == (11, 10)


def test_deletion_numbers():
    p, t = 5, 10
    rep = obstruct_deletion(p, t)
    r0 = (p - 1) // 2
    q = rep.inequality("eigen", r0)
    assert q.lower_bound == (p * p + p + 1 - t) - 2 * p
    assert q.available == (p * p + p + 1) - 2 * p - Fraction(p * p - 3, 2)
    assert rep.extra["threshold"] == {"num": 11, "den": 1}


def test_deletion_errors():
    branch = set(standard_branch(3).line_map)
    with pytest.raises(InvalidDeletion):
        obstruct_deletion(3, 1, deleted=[min(branch)])
    with pytest.raises(InvalidDeletion):
        obstruct_deletion(3, 8)
    with pytest.raises(ValueError):
        obstruct_deletion(2, 1)


def test_deletion_explicit_lines_agree():
    branch = set(standard_branch(5).line_map)
    free = [x for x in range(31) if x not in branch]
    a = obstruct_deletion(5, 4, deleted=free[-4:])
    b = obstruct_deletion(5, 4)
    assert a.verdict == b.verdict and a.inequalities == b.inequalities


# --- general pipeline -------------------------------------------------------


def test_b11_alone_not_obstructed():
    arr = b_alpha_beta(2, 1, 1)
    emb = SubArrangementEmbedding(tuple(range(4)), tuple(range(6)), True)
    rep = obstruct_arrangement(arr, 2, 1, 1, emb, range(6))
    assert rep.outside_lines == () and rep.outside_rank == 0
    assert rep.verdict == NOT_OBSTRUCTED and rep.witness is None and rep.recheck()
    assert not rep.corollary_nonfillable


def test_hypothesis_violation():
    arr = projective_plane(2)
    emb = standard_branch(2)
    # leaving a branch intersection unblown breaks the blow-up hypothesis
    blown = [q for q in range(7) if q != emb.point_map[-1]]
    with pytest.raises(HypothesisViolation):
        obstruct_arrangement(arr, 2, 1, 1, emb, blown)


def test_non_strict_branch_rejected():
    arr = projective_plane(3)
    pattern = b_alpha_beta(2, 1, 1)
    emb_plain = next(iter_subarrangements(arr, pattern, strict=False))
    with pytest.raises((BranchNotStrictlyEmbedded, HypothesisViolation)):
        obstruct_arrangement(arr, 2, 1, 1, emb_plain, range(arr.num_points))


def test_nk14_obstruction(nk14, validate_schema):
    arr = nk14.arrangements[0]
    assert len(branch_candidates(arr, 2, 2, 2)) == 7
    emb = standard_branch(2, 2, 2, host=arr)
    rep = obstruct_arrangement(arr, 2, 2, 2, emb, sorted(set(emb.point_map)))
    assert len(rep.blown_points) == 18
    assert np.array_equal(rep.outside_form, block_sum([[-3, 1], [1, -3]], 3))
    assert np.array_equal(rep.eigen_form, block_sum([[-6, 2], [2, -6]], 3))
    assert rep.outside_rank == 6 and rep.cover.b2_minus[1] == 3
    assert rep.witness.route == "eigen" and rep.obstructed
    validate_schema(rep.to_dict(), "obstruction-report")


def test_find_obstructions_on_fano():
    reps = find_obstructions(fano(), primes=(2,), max_ab=1)
    assert reps and reps[0].obstructed
    assert all(r.recheck() for r in reps)
    assert {r.extra["policy"] for r in reps} <= {"all", "branch"}


def test_blow_policies_on_plane():
    arr = projective_plane(2)
    emb = standard_branch(2)
    pol = blow_policies(arr, emb)
    assert pol["all"] == list(range(7))
    assert len(pol["branch"]) == 6


def test_generic_has_no_obstruction():
    assert all(not r.obstructed for r in find_obstructions(generic(5), primes=(2,), max_ab=1))


@pytest.mark.parametrize("p", [2, 3])
def test_report_json_schema(p, validate_schema):
    rep = obstruct_projective_plane(p)
    d = json.loads(rep.to_json())
    validate_schema(d, "obstruction-report")
    assert d["schema"] == "obstruction-report/1"
    assert rep.to_json() == obstruct_projective_plane(p).to_json()


def test_deletion_schema(validate_schema):
    validate_schema(obstruct_deletion(3, 1).to_dict(), "obstruction-report")
