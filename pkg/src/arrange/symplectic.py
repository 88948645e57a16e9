"""Grid check of the area-form positivity of complexified wiring strands.

A strand is a family of curves ``t -> q(s, t)`` indexed by ``s = |r|`` with
``r`` in ``[-1, 1]``.  After stretching the diagram by ``1/epsilon`` in the
``t`` direction the pairing of the two tangent vectors of the complexified
strand is

    (1 + a^2)^(-3/2) * [ (1 + a^2)^2
                         + r * (-eps^2 q_r q_tt + eps q_tr a^2 (a - 1)) ]

with ``a = eps * q_t`` and all ``q`` derivatives taken at ``(|r|, t)``.
Derivatives come from fourth-order central differences.

This certifies positivity on a sample grid only.

>>> s = StrandFunction(lambda s, t: 0.0 * t + 2.0)
>>> float(area_form_value(s, 0.3, 0.1, 1.0))
1.0
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, NoEpsilonFound

DEFAULT_STEP = 1e-3
DEFAULT_MARGIN = 1e-6


def _d1(f, x, h):
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h)


def _d2(f, x, h):
    return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h)


class StrandFunction:
    """``q(s, t)`` for ``s`` in ``[0, 1]`` and ``t`` in ``[a, b]``.

    ``func`` must accept numpy arrays and broadcast.  It is evaluated a
    few steps ``h`` outside the domain by the difference stencils, so it
    should extend smoothly there.
    """

    def __init__(self, func: Callable, t_range: tuple[float, float] = (-1.0, 1.0),
                 h: float = DEFAULT_STEP, name: str = "strand"):
        a, b = map(float, t_range)
        if not a < b:
            raise DomainError("t range must have a < b")
        if h <= 0:
            raise DomainError("finite-difference step must be positive")
        self.func = func
        self.t_range = (a, b)
        self.h = float(h)
        self.name = name

    def _check(self, r, t):
        r = np.asarray(r, dtype=float)
        t = np.asarray(t, dtype=float)
        a, b = self.t_range
        if np.any(np.abs(r) > 1 + 1e-12) or np.any(t < a - 1e-12) or np.any(t > b + 1e-12):
            raise DomainError(f"sample outside r in [-1,1], t in [{a},{b}]")
        if not (np.all(np.isfinite(r)) and np.all(np.isfinite(t))):
            raise DomainError("non-finite sample")
        return np.abs(r), t

    def q(self, r, t):
        s, t = self._check(r, t)
        return np.asarray(self.func(s, t), dtype=float) + 0.0 * (s + t)

    def derivatives(self, r, t) -> dict[str, np.ndarray]:
        """``q_t, q_r, q_tt, q_tr`` at ``(|r|, t)`` by central differences."""
        s, t = self._check(r, t)
        s, t = np.broadcast_arrays(s, t)
        h = self.h
        f = self.func

        def F(ss, tt):
            return np.asarray(f(ss, tt), dtype=float) + 0.0 * (ss + tt)

        q_t = _d1(lambda x: F(s, x), t, h)
        q_r = _d1(lambda x: F(x, t), s, h)
        q_tt = _d2(lambda x: F(s, x), t, h)
        q_tr = _d1(lambda x: _d1(lambda y: F(x, y), t, h), s, h)
        out = {"q_t": q_t, "q_r": q_r, "q_tt": q_tt, "q_tr": q_tr}
        for k, v in out.items():
            if not np.all(np.isfinite(v)):
                raise DomainError(f"non-finite derivative {k}")
        return out


def area_form_from_derivatives(r, d: dict, epsilon: float):
    if epsilon <= 0:
        raise DomainError("epsilon must be positive")
    eps = float(epsilon)
    a = eps * d["q_t"]
    one = 1.0 + a * a
    bracket = one * one + np.asarray(r, dtype=float) * (
        -eps * eps * d["q_r"] * d["q_tt"] + eps * d["q_tr"] * a * a * (a - 1.0))
    return bracket * one ** -1.5


def area_form_value(s: StrandFunction, r, t, epsilon: float):
    """Stretched area-form pairing at ``(r, t)`` (arrays broadcast)."""
    if epsilon <= 0:
        raise DomainError("epsilon must be positive")
    return area_form_from_derivatives(r, s.derivatives(r, t), epsilon)


@dataclass(frozen=True)
class Grid:
    """``nr`` samples of ``r`` in ``[-1, 1]`` times ``nt`` samples of ``t``."""

    nr: int = 41
    nt: int = 201

    def __post_init__(self):
        if self.nr < 1 or self.nt < 1:
            raise DomainError("grid resolution must be positive")

    def points(self, strand: StrandFunction) -> tuple[np.ndarray, np.ndarray]:
        r = np.linspace(-1.0, 1.0, self.nr) if self.nr > 1 else np.zeros(1)
        a, b = strand.t_range
        t = np.linspace(a, b, self.nt) if self.nt > 1 else np.array([(a + b) / 2])
        return np.meshgrid(r, t, indexing="ij")

    def refine(self) -> "Grid":
        """Nested refinement: every old sample stays a sample."""
        return Grid(2 * self.nr - 1, 2 * self.nt - 1)


@dataclass(frozen=True)
class StrandEpsilon:
    name: str
    epsilon: float
    min_value: float
    argmin: tuple[float, float]

    def to_dict(self) -> dict:
        return {"name": self.name, "epsilon": self.epsilon, "min_value": self.min_value,
                "argmin": {"r": self.argmin[0], "t": self.argmin[1]}}


@dataclass(frozen=True)
class EpsilonResult:
    epsilon: float
    strands: tuple[StrandEpsilon, ...]
    margin: float

    def to_dict(self) -> dict:
        return {"epsilon": self.epsilon, "margin": self.margin,
                "strands": [s.to_dict() for s in self.strands]}


def strand_epsilon(strand: StrandFunction, grid: Grid = Grid(), margin: float = DEFAULT_MARGIN,
                   factor: float = 0.5, floor: float = 1e-12) -> StrandEpsilon:
    """Largest ``epsilon`` in ``1, factor, factor^2, ...`` with every grid
    value above ``margin``."""
    R, T = grid.points(strand)
    d = strand.derivatives(R, T)
    eps = 1.0
    while eps >= floor:
        v = area_form_from_derivatives(R, d, eps)
        k = int(np.argmin(v))
        if v.flat[k] > margin:
            return StrandEpsilon(strand.name, eps, float(v.flat[k]),
                                 (float(R.flat[k]), float(T.flat[k])))
        eps *= factor
    raise NoEpsilonFound(f"no epsilon >= {floor} makes strand {strand.name!r} positive")


def find_epsilon(strands: Sequence[StrandFunction], grid: Grid = Grid(),
                 margin: float = DEFAULT_MARGIN, factor: float = 0.5,
                 floor: float = 1e-12) -> EpsilonResult:
    """Per-strand stretch factors and their minimum, which works for all."""
    if not strands:
        raise ValueError("need at least one strand")
    per = tuple(strand_epsilon(s, grid, margin, factor, floor) for s in strands)
    return EpsilonResult(min(p.epsilon for p in per), per, margin)


# ---------------------------------------------------------------------------
# inputs


_ALLOWED = ("tanh", "exp", "sin", "cos", "sqrt", "log", "atan", "sinh", "cosh", "Abs", "pi")


def strand_from_expression(expr: str, t_range=(-1.0, 1.0), h: float = DEFAULT_STEP,
                           name: str | None = None) -> StrandFunction:
    """Closed form in ``r`` (meaning ``|r|``) and ``t``, e.g. ``"0.5*r*tanh(4*t)"``."""
    import sympy

    r, t = sympy.symbols("r t", real=True)
    local = {"r": r, "t": t, **{f: getattr(sympy, f) for f in _ALLOWED}}
    try:
        e = sympy.sympify(expr, locals=local)
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise DomainError(f"cannot parse strand expression {expr!r}: {exc}") from None
    extra = e.free_symbols - {r, t}
    if extra:
        raise DomainError(f"unknown symbols {sorted(map(str, extra))} in {expr!r}")
    f = sympy.lambdify((r, t), e, modules="numpy")
    return StrandFunction(f, t_range, h, name or expr)


def strand_from_csv(path, h: float | None = None, name: str | None = None,
                    degree: int = 3) -> StrandFunction:
    """Strand from a CSV with columns ``r,t,q`` sampled on a full grid with
    ``r >= 0``; interpolated by a bicubic spline."""
    from scipy.interpolate import RectBivariateSpline

    rows = []
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            try:
                rows.append((float(rec["r"]), float(rec["t"]), float(rec["q"])))
            except (KeyError, ValueError) as exc:
                raise DomainError(f"bad CSV row {rec}: {exc}") from None
    if not rows:
        raise DomainError("empty strand CSV")
    rs = sorted({x[0] for x in rows})
    ts = sorted({x[1] for x in rows})
    if len(rows) != len(rs) * len(ts):
        raise DomainError("CSV samples must form a full (r, t) grid")
    if rs[0] < 0:
        raise DomainError("CSV radii must be nonnegative")
    k = min(degree, len(rs) - 1, len(ts) - 1)
    if k < 1:
        raise DomainError("need at least two r and two t values")
    Q = np.empty((len(rs), len(ts)))
    ri = {v: i for i, v in enumerate(rs)}
    ti = {v: i for i, v in enumerate(ts)}
    for a, b, c in rows:
        Q[ri[a], ti[b]] = c
    spline = RectBivariateSpline(rs, ts, Q, kx=k, ky=k)

    def f(s, t):
        s, t = np.broadcast_arrays(np.asarray(s, float), np.asarray(t, float))
        return spline.ev(s.ravel(), t.ravel()).reshape(s.shape)

    if h is None:
        h = min(DEFAULT_STEP, (ts[1] - ts[0]) / 4, (rs[1] - rs[0]) / 4)
    return StrandFunction(f, (ts[0], ts[-1]), h, name or str(path))


def steep_strand(k: float = 8.0) -> StrandFunction:
    """Demonstration strand ``q(s, t) = (1 + s) tanh(k t)`` on ``t in [-1, 1]``.

    Steep enough that the unstretched pairing goes negative; a small
    stretch factor repairs it.
    """
    return StrandFunction(lambda s, t: (1.0 + s) * np.tanh(k * t), (-1.0, 1.0),
                          name=f"(1+r)tanh({k:g}t)")


def constant_strand(c: float = 0.0) -> StrandFunction:
    return StrandFunction(lambda s, t: c + 0.0 * (s + t), name=f"const({c:g})")


def format_float(x: float) -> str:
    """Twelve significant digits, as used in reports."""
    if math.isnan(x) or math.isinf(x):
        return str(x)
    return f"{x:.12g}"
