"""Second homology of the plane blown up at some points of an arrangement.

Classes are integer vectors over the basis ``(h, e_1, ..., e_N)`` where
``h`` is the line class and ``e_j`` the exceptional sphere over the j-th
blown point.  The intersection form is ``diag(1, -1, ..., -1)``.

>>> from arrange.arrangement import fano
>>> model = BlowupModel(fano())
>>> F = proper_transforms(model)
>>> intersection_number(F[0], F[0])
-2
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .arrangement import Arrangement
from .errors import IndexOutOfRange, LengthMismatch, ModelMismatch
from .gf import FpMatrix, FpVector, _require_prime, kernel_basis


class BlowupModel:
    """An arrangement together with an ordered set of blown-up points.

    ``blown_points=None`` blows up every point of the arrangement.
    """

    __slots__ = ("arrangement", "blown_points")

    def __init__(self, arrangement: Arrangement, blown_points: Sequence[int] | None = None):
        if blown_points is None:
            blown_points = range(arrangement.num_points)
        pts = tuple(int(j) for j in blown_points)
        if len(set(pts)) != len(pts):
            raise ValueError("blown points must be distinct")
        for j in pts:
            if not 0 <= j < arrangement.num_points:
                raise IndexOutOfRange(f"point {j} out of range 0..{arrangement.num_points - 1}")
        self.arrangement = arrangement
        self.blown_points = pts

    @property
    def N(self) -> int:
        return len(self.blown_points)

    @property
    def basis_labels(self) -> tuple[str, ...]:
        return ("h",) + tuple(f"e{k + 1}" for k in range(self.N))

    def exceptional_index(self, point: int) -> int:
        """Position (1..N) of the exceptional class over ``point``."""
        return self.blown_points.index(point) + 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, BlowupModel):
            return NotImplemented
        return self.arrangement == other.arrangement and self.blown_points == other.blown_points

    def __hash__(self) -> int:
        return hash((self.arrangement, self.blown_points))

    def __repr__(self) -> str:
        return f"BlowupModel({self.arrangement!r}, N={self.N})"

    def to_dict(self) -> dict:
        d = self.arrangement.to_dict()
        d["blown_points"] = list(self.blown_points)
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "BlowupModel":
        return cls(Arrangement.from_dict(data), data.get("blown_points"))


@dataclass(frozen=True, eq=False)
class H2Class:
    model: BlowupModel
    coefficients: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=np.int64).reshape(-1)
        if len(c) != 1 + self.model.N:
            raise LengthMismatch(f"expected {1 + self.model.N} coefficients, got {len(c)}")
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    def _check(self, other: "H2Class") -> None:
        if self.model is not other.model and self.model != other.model:
            raise ModelMismatch("classes live on different blow-ups")

    def __add__(self, other: "H2Class") -> "H2Class":
        self._check(other)
        return H2Class(self.model, self.coefficients + other.coefficients)

    def __sub__(self, other: "H2Class") -> "H2Class":
        self._check(other)
        return H2Class(self.model, self.coefficients - other.coefficients)

    def __rmul__(self, k: int) -> "H2Class":
        return H2Class(self.model, int(k) * self.coefficients)

    def __neg__(self) -> "H2Class":
        return H2Class(self.model, -self.coefficients)

    def __eq__(self, other) -> bool:
        if not isinstance(other, H2Class):
            return NotImplemented
        return self.model == other.model and np.array_equal(self.coefficients, other.coefficients)

    def __hash__(self) -> int:
        return hash(self.coefficients.tobytes())

    def reduce(self, d: int) -> np.ndarray:
        return self.coefficients % d

    def __str__(self) -> str:
        terms = []
        for label, c in zip(self.model.basis_labels, self.coefficients.tolist()):
            if c == 0:
                continue
            mag = "" if abs(c) == 1 else str(abs(c))
            sign = "-" if c < 0 else "+"
            terms.append(f"{sign} {mag}{label}")
        if not terms:
            return "0"
        s = " ".join(terms)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


def hyperplane(model: BlowupModel) -> H2Class:
    c = np.zeros(1 + model.N, dtype=np.int64)
    c[0] = 1
    return H2Class(model, c)


def exceptional(model: BlowupModel, k: int) -> H2Class:
    """The class ``e_k`` for ``1 <= k <= N``."""
    c = np.zeros(1 + model.N, dtype=np.int64)
    c[k] = 1
    return H2Class(model, c)


def proper_transforms(model: BlowupModel) -> list[H2Class]:
    """Class of the proper transform of each line, in line order."""
    inc = model.arrangement.incidence[:, list(model.blown_points)].astype(np.int64)
    out = []
    for i in range(model.arrangement.num_lines):
        out.append(H2Class(model, np.concatenate(([1], -inc[i]))))
    return out


def intersection_number(a: H2Class, b: H2Class) -> int:
    a._check(b)
    x, y = a.coefficients, b.coefficients
    return int(x[0] * y[0] - np.dot(x[1:], y[1:]))


def relation_matrix(model: BlowupModel) -> np.ndarray:
    """Lines x (1 + N) integer matrix ``[1 | incidence columns of blown points]``."""
    inc = model.arrangement.incidence[:, list(model.blown_points)].astype(np.int64)
    return np.hstack([np.ones((inc.shape[0], 1), dtype=np.int64), inc])


def relation_code(model: BlowupModel, d: int) -> list[FpVector]:
    """Basis of the mod ``d`` relations among the proper transforms.

    A tuple ``a`` is a relation when ``sum(a) = 0`` and, for each blown
    point, the coefficients of the lines through it also sum to 0 mod d.
    """
    _require_prime(d)
    return kernel_basis(FpMatrix(d, relation_matrix(model)))


def relation_sum(model: BlowupModel, a) -> H2Class:
    """Integer combination ``sum_i a_i [F_i]`` using residues as given."""
    coeffs = np.asarray(a.entries if isinstance(a, FpVector) else a, dtype=np.int64)
    if len(coeffs) != model.arrangement.num_lines:
        raise LengthMismatch(
            f"relation has {len(coeffs)} entries but there are {model.arrangement.num_lines} lines")
    F = np.array([f.coefficients for f in proper_transforms(model)])
    return H2Class(model, coeffs @ F)


def verify_relation(model: BlowupModel, a, d: int) -> bool:
    """True when ``sum_i a_i [F_i]`` vanishes in homology mod ``d``."""
    return not np.any(relation_sum(model, a).reduce(d))
