"""Plumbing matrix of an arrangement and the positive G-S criterion.

Each line gives a sphere vertex; each point of multiplicity at least three
is traded for an exceptional sphere.  With ``A`` the line/multipoint
incidence, ``n_j`` the number of multipoints on line ``j`` and
``delta_ij = 1`` when lines ``i, j`` meet at a multipoint,

    Q = [[B, A], [A^T, -I]],   B_jj = 1 - n_j,   B_ij = 1 - delta_ij.

The criterion asks for ``z > 0`` with ``Q z > 0``.

>>> from arrange.arrangement import fano
>>> pm = plumbing_matrix(fano())
>>> gs_all_ones(pm)["point_coords"]
[2, 2, 2, 2, 2, 2, 2]
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from .arrangement import Arrangement
from .errors import Infeasible, SearchSpaceTooLarge

FM_VARIABLE_CAP = 40
FM_CONSTRAINT_CAP = 200_000


@dataclass(frozen=True, eq=False)
class PlumbingMatrix:
    k: int
    N: int
    Q: np.ndarray
    A: np.ndarray
    B: np.ndarray
    multipoints: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "N": self.N,
            "multipoints": list(self.multipoints),
            "Q": self.Q.tolist(),
            "blocks": {"A": self.A.tolist(), "B": self.B.tolist(),
                       "lower_right": (-np.eye(self.N, dtype=np.int64)).tolist()},
        }


def plumbing_matrix(arr: Arrangement) -> PlumbingMatrix:
    mult = arr.multiplicities()
    multi = tuple(int(j) for j in np.flatnonzero(mult >= 3))
    k, N = arr.num_lines, len(multi)
    A = arr.incidence[:, list(multi)].astype(np.int64).reshape(k, N)
    n = A.sum(axis=1)
    B = np.empty((k, k), dtype=np.int64)
    for i in range(k):
        for j in range(k):
            if i == j:
                B[i, j] = 1 - n[i]
            else:
                B[i, j] = 1 - int(mult[arr.meet(i, j)] >= 3)
    Q = np.block([[B, A], [A.T, -np.eye(N, dtype=np.int64)]]).astype(np.int64)
    return PlumbingMatrix(k, N, Q, A, B, multi)


def gs_all_ones(pm: PlumbingMatrix) -> dict:
    """``Q z`` at ``z = (1, ..., 1)`` split into line and point coordinates."""
    v = pm.Q @ np.ones(pm.k + pm.N, dtype=np.int64)
    lines = v[:pm.k].tolist()
    points = v[pm.k:].tolist()
    return {"line_coords": lines, "point_coords": points, "positive": bool(np.all(v > 0))}


@dataclass(frozen=True)
class GSCertificate:
    z: tuple[int, ...]
    Qz: tuple[int, ...]
    method: str

    def to_dict(self) -> dict:
        return {"z": list(self.z), "Qz": list(self.Qz), "method": self.method}


# ---------------------------------------------------------------------------
# exact Fourier-Motzkin


def _normalize(coeffs: tuple[Fraction, ...], rhs: Fraction):
    """Scale ``coeffs . x >= rhs`` so the first nonzero coefficient is +-1."""
    lead = next((c for c in coeffs if c != 0), None)
    if lead is None:
        return coeffs, rhs
    s = abs(lead)
    return tuple(c / s for c in coeffs), rhs / s


def fm_feasible_point(G, h) -> list[Fraction] | None:
    """A rational ``x`` with ``G x >= h`` or ``None`` if there is none.

    Eliminates variables in index order, keeping each stage for the back
    substitution.
    """
    G = np.asarray(G, dtype=object)
    m, n = G.shape
    if n > FM_VARIABLE_CAP:
        raise SearchSpaceTooLarge(n, FM_VARIABLE_CAP)
    cur = {_normalize(tuple(Fraction(int(x)) for x in G[i]), Fraction(int(h[i]))) for i in range(m)}
    stages = []
    for var in range(n):
        stages.append(cur)
        lower, upper, rest = [], [], set()
        for c, b in cur:
            if c[var] > 0:
                lower.append((c, b))
            elif c[var] < 0:
                upper.append((c, b))
            else:
                rest.add((c, b))
        nxt = set(rest)
        for cl, bl in lower:
            for cu, bu in upper:
                a, u = cl[var], -cu[var]
                coeffs = tuple(u * x + a * y for x, y in zip(cl, cu))
                nxt.add(_normalize(coeffs, u * bl + a * bu))
                if len(nxt) > FM_CONSTRAINT_CAP:
                    raise SearchSpaceTooLarge(n, FM_VARIABLE_CAP)
        cur = nxt
    if any(b > 0 for _, b in cur):
        return None
    x = [Fraction(0)] * n
    for var in range(n - 1, -1, -1):
        lo, hi = None, None
        for c, b in stages[var]:
            if c[var] == 0:
                continue
            slack = b - sum(c[j] * x[j] for j in range(var + 1, n))
            bound = slack / c[var]
            if c[var] > 0:
                lo = bound if lo is None else max(lo, bound)
            else:
                hi = bound if hi is None else min(hi, bound)
        if lo is not None:
            x[var] = lo
        elif hi is not None:
            x[var] = min(hi, Fraction(0))
    return x


def gs_criterion(Q) -> GSCertificate:
    """An integer ``z > 0`` with ``Q z > 0``.

    Tries the all-ones vector, then solves ``z >= 1, Q z >= 1`` exactly
    (equivalent by scaling, since the strict system is homogeneous).
    """
    Q = np.asarray(Q.Q if isinstance(Q, PlumbingMatrix) else Q, dtype=np.int64)
    if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
        raise ValueError("Q must be square")
    n = Q.shape[0]
    ones = np.ones(n, dtype=np.int64)
    if np.all(Q @ ones > 0):
        return GSCertificate(tuple(ones.tolist()), tuple((Q @ ones).tolist()), "all-ones")
    G = np.vstack([np.eye(n, dtype=np.int64), Q])
    h = np.ones(2 * n, dtype=np.int64)
    x = fm_feasible_point(G, h)
    if x is None:
        raise Infeasible("no z > 0 with Q z > 0")
    den = lcm(*(v.denominator for v in x))
    z = np.array([int(v * den) for v in x], dtype=np.int64)
    Qz = Q @ z
    if not (np.all(z > 0) and np.all(Qz > 0)):
        raise AssertionError("Fourier-Motzkin back substitution produced an invalid point")
    return GSCertificate(tuple(z.tolist()), tuple(Qz.tolist()), "fourier-motzkin")
