"""Acceptance criteria 1-10, one test each.

Every test records its criterion number and a short numeric detail; the
conftest hook prints one PASS/FAIL line per criterion after the run.
"""

from __future__ import annotations

import io
import json
import time

import numpy as np
import pytest

from arrange.arrangement import b_alpha_beta, fano, find_subarrangement, projective_plane, random_arrangement
from arrange.blowup import BlowupModel, relation_code
from arrange.cli import run
from arrange.cover import bpab_invariants, casson_gordon_epsilon
from arrange.errors import InvalidDeletion
from arrange.gf import min_weight, min_weight_codewords
from arrange.obstruct import deletion_threshold, obstruct_deletion, standard_branch
from arrange.plumbing import gs_all_ones, plumbing_matrix
from arrange.symplectic import Grid, area_form_value, constant_strand, find_epsilon, steep_strand
from arrange.wiring import canonicalize, dictionary_word, from_letters, replay
from oracles import reduced_words_bfs

PRIMES_TO_7 = (2, 3, 5, 7)


def cli_json(*argv):
    buf = io.StringIO()
    t0 = time.perf_counter()
    code = run([*argv, "--json"], stdout=buf)
    elapsed = time.perf_counter() - t0
    assert code == 0
    return json.loads(buf.getvalue()), elapsed


def block_sum(block, times):
    b = np.array(block)
    size = b.shape[0]
    out = np.zeros((size * times, size * times), dtype=int)
    for i in range(times):
        out[i * size:(i + 1) * size, i * size:(i + 1) * size] = b
    return out


def test_criterion_01_fano(record_property):
    record_property("criterion", (1, "Fano obstruction, p=2"))
    d, elapsed = cli_json("obstruct", "pp", "--p", "2")
    cover = {e["r"]: e for e in d["cover"]["eigenspaces"]}
    record_property("detail", f"chi={d['cover']['chi_total']} b2={d['b2_total']} "
                              f"b2-={d['b2_minus_total']} time={elapsed:.3f}s")
    assert d["cover"]["chi_total"] == 12
    assert d["b2_total"] == 10
    assert cover[1]["b2_minus"] == 2 and cover[0]["b2_minus"] == 7
    assert d["b2_minus_total"] == 9
    total = next(q for q in d["inequalities"] if q["route"] == "total")
    assert (total["lower_bound"], total["available"]) == (10, 9) and total["holds"]
    assert d["verdict"] == "Obstructed"
    assert elapsed < 1.0


def test_criterion_02_planes(record_property):
    record_property("criterion", (2, "P(2,3) and P(2,5) obstructions"))
    details = []
    for p, b2, needed in ((3, 22, 27), (5, 88, 115)):
        assert b2 == p * (p * p - 3 * p + 8) - 2
        assert needed == p * (p * p - p + 3)
        d, elapsed = cli_json("obstruct", "pp", "--p", str(p))
        coarse = next(q for q in d["inequalities"] if q["route"] == "coarse")
        details.append(f"p={p}: {d['b2_total']}<{coarse['lower_bound']} {elapsed:.3f}s")
        record_property("detail", "; ".join(details))
        assert d["b2_total"] == b2
        assert coarse["lower_bound"] == needed and coarse["available"] == b2
        assert d["verdict"] == "Obstructed"
        assert elapsed < 1.0


def test_criterion_03_nk14(record_property, nk14):
    record_property("criterion", (3, "(14_4) search and obstruction"))
    record_property("detail", f"search {nk14.elapsed:.1f}s")
    assert len(nk14.data["arrangements"]) >= 1
    assert nk14.data["classes"] == 1 and nk14.data["complete"]
    assert nk14.elapsed <= 600
    d, elapsed = cli_json("obstruct", "custom", "--in", str(nk14.path),
                          "--p", "2", "--alpha", "2", "--beta", "2", "--blown", "branch")
    record_property("detail", f"search {nk14.elapsed:.1f}s, obstruction {elapsed:.3f}s, "
                              f"rank {d['outside_rank']} vs b2-(1)="
                              f"{d['cover']['eigenspaces'][1]['b2_minus']}")
    assert d["branch_embedding"]["strict"]
    assert len(d["blown_points"]) == 18
    assert d["outside_form"] == block_sum([[-3, 1], [1, -3]], 3).tolist()
    assert d["eigen_form"] == block_sum([[-6, 2], [2, -6]], 3).tolist()
    assert d["outside_rank"] == 6
    assert d["cover"]["eigenspaces"][1]["b2_minus"] == 3
    eigen = next(q for q in d["inequalities"] if q["route"] == "eigen" and q["r"] == 1)
    assert (eigen["lower_bound"], eigen["available"]) == (6, 3) and eigen["holds"]
    assert d["verdict"] == "Obstructed"
    assert elapsed < 1.0


def test_criterion_04_min_weight(record_property):
    record_property("criterion", (4, "relation-code minimum weight 2p"))
    details = []
    for p in (2, 3):
        t0 = time.perf_counter()
        host = projective_plane(p)
        basis = relation_code(BlowupModel(host), p)
        summary = min_weight(basis)
        words = min_weight_codewords(basis)
        pattern = b_alpha_beta(p, 1, 1)
        supports_ok = all(
            find_subarrangement(host, pattern, strict=False, limit=1, within_lines=w.support())
            for w in words)
        elapsed = time.perf_counter() - t0
        details.append(f"p={p}: w={summary.min_weight} words={len(words)} {elapsed:.2f}s")
        record_property("detail", "; ".join(details))
        assert summary.min_weight == 2 * p
        assert all(len(w.support()) == 2 * p for w in words)
        assert supports_ok
        if p == 3:
            assert elapsed < 60


def test_criterion_05_bpab_codes(record_property):
    record_property("criterion", (5, "B^p_{a,b} relation code is 1-dimensional"))
    for p, a, b in ((2, 1, 1), (2, 2, 2), (3, 1, 1)):
        basis = relation_code(BlowupModel(b_alpha_beta(p, a, b)), p)
        assert len(basis) == 1
        expected = np.array([1] * (p * a) + [p - 1] * (p * b))
        v = basis[0].entries
        assert any(np.array_equal((c * v) % p, expected) for c in range(1, p))


def test_criterion_06_cover_consistency(record_property):
    record_property("criterion", (6, "branched-cover invariant consistency"))
    checked = 0
    for p in PRIMES_TO_7:
        for a in (1, 2):
            for b in (1, 2):
                for N in range(2 + p * p * a * b, 61):
                    inv = bpab_invariants(p, a, b, N)
                    for r in range(1, p):
                        eps = casson_gordon_epsilon(1 - N, p, r, -2 * p * p * a * b)
                        assert inv.b2_plus[r] - inv.b2_minus[r] == eps
                        assert inv.b2_plus[r] + inv.b2_minus[r] == 3 + N - 2 * p * (a + b)
                        checked += 1
    record_property("detail", f"{checked} (p,a,b,N,r) cases")
    assert checked > 0


def test_criterion_07_deletion_boundary(record_property):
    record_property("criterion", (7, "deletion theorem boundary"))
    details = []
    for p in (3, 5, 7, 11):
        available = p * p - p + 1
        thr = deletion_threshold(p)
        for t in range(p * p + 1):
            if t > available:
                with pytest.raises(InvalidDeletion):
                    obstruct_deletion(p, t)
                continue
            rep = obstruct_deletion(p, t)
            assert rep.obstructed == (t < thr), (p, t)
            assert rep.recheck()
        details.append(f"p={p}: obstructed iff t<{thr}")
    record_property("detail", "; ".join(details))


def test_criterion_08_wiring(record_property):
    record_property("criterion", (8, "canonicalization of every reduced word, n<=5"))
    t0 = time.perf_counter()
    count = 0
    for n in range(2, 6):
        words, _ = reduced_words_bfs(n)
        target = dictionary_word(n)
        for word in sorted(words):
            w = from_letters(n, word)
            out, moves = canonicalize(w)
            assert out == target
            assert replay(w, moves, check_each=True) == target
            count += 1
    elapsed = time.perf_counter() - t0
    record_property("detail", f"{count} words, {elapsed:.2f}s")
    assert elapsed < 60


def test_criterion_09_plumbing(record_property):
    record_property("criterion", (9, "all-ones G-S positivity"))
    rng = np.random.default_rng(20261014)
    arrs = [random_arrangement(int(rng.integers(2, 13)), rng, float(rng.random()))
            for _ in range(200)]
    arrs += [fano(), b_alpha_beta(2, 2, 2)]
    for arr in arrs:
        pm = plumbing_matrix(arr)
        out = gs_all_ones(pm)
        assert all(c >= 1 for c in out["line_coords"])
        mult = arr.multiplicities()
        assert out["point_coords"] == [int(mult[j]) - 1 for j in pm.multipoints]
        assert all(c >= 2 for c in out["point_coords"])
    record_property("detail", f"{len(arrs)} arrangements")


def test_criterion_10_symplectic(record_property):
    record_property("criterion", (10, "area-form positivity and stretch search"))
    grid = Grid()
    c = constant_strand(0.7)
    R, T = grid.points(c)
    for eps in (1.0, 0.3, 1e-3):
        assert np.abs(area_form_value(c, R, T, eps) - 1.0).max() <= 1e-12
    s = steep_strand()
    R, T = grid.points(s)
    worst = float(area_form_value(s, R, T, 1.0).min())
    res = find_epsilon([s], grid)
    after = float(area_form_value(s, R, T, res.epsilon).min())
    record_property("detail", f"min at eps=1: {worst:.3f}; eps={res.epsilon}, min {after:.3f}")
    assert worst < 0
    assert res.epsilon > 0 and after > 1e-6
