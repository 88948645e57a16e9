"""Exact linear algebra over Z/d and minimum weights of small codes.

Kernels are left kernels throughout: a vector ``x`` is in the kernel of
``m`` when ``x @ m == 0 (mod d)``, i.e. coefficients multiply rows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arrangement import is_prime
from .errors import CompositeModulus, LengthMismatch, SearchSpaceTooLarge

DEFAULT_ENUM_CAP = 1 << 24


@dataclass(frozen=True, eq=False)
class FpVector:
    modulus: int
    entries: np.ndarray

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError("modulus must be at least 2")
        arr = np.asarray(self.entries, dtype=np.int64).reshape(-1) % self.modulus
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    def __len__(self) -> int:
        return len(self.entries)

    def weight(self) -> int:
        return int(np.count_nonzero(self.entries))

    def support(self) -> tuple[int, ...]:
        return tuple(np.flatnonzero(self.entries).tolist())

    def tolist(self) -> list[int]:
        return self.entries.tolist()

    def __eq__(self, other) -> bool:
        if not isinstance(other, FpVector):
            return NotImplemented
        return self.modulus == other.modulus and np.array_equal(self.entries, other.entries)

    def __hash__(self) -> int:
        return hash((self.modulus, self.entries.tobytes()))

    def __repr__(self) -> str:
        return f"FpVector(mod {self.modulus}, {self.tolist()})"

    def to_dict(self) -> dict:
        return {"modulus": self.modulus, "entries": self.tolist()}


@dataclass(frozen=True, eq=False)
class FpMatrix:
    modulus: int
    entries: np.ndarray

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError("modulus must be at least 2")
        arr = np.atleast_2d(np.asarray(self.entries, dtype=np.int64)) % self.modulus
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return self.modulus == other.modulus and np.array_equal(self.entries, other.entries)

    def __hash__(self) -> int:
        return hash((self.modulus, self.entries.shape, self.entries.tobytes()))

    def left_apply(self, v: FpVector) -> FpVector:
        """``v @ self`` reduced mod d."""
        if len(v) != self.rows:
            raise LengthMismatch(f"vector of length {len(v)} against {self.rows} rows")
        return FpVector(self.modulus, v.entries @ self.entries)

    def to_dict(self) -> dict:
        return {"modulus": self.modulus, "entries": self.entries.tolist()}


def _require_prime(d: int) -> None:
    if not is_prime(d):
        raise CompositeModulus(d)


def rref(a: np.ndarray, p: int, col_order=None) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod prime ``p`` and the pivot columns.

    Pivots are taken as the first nonzero entry scanning columns in
    ``col_order`` (natural order by default).
    """
    m = np.array(a, dtype=np.int64) % p
    nrows, ncols = m.shape
    order = range(ncols) if col_order is None else col_order
    pivots: list[int] = []
    r = 0
    for c in order:
        if r == nrows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        m[r] = (m[r] * pow(int(m[r, c]), -1, p)) % p
        others = np.flatnonzero(m[:, c])
        for rr in others:
            if rr != r:
                m[rr] = (m[rr] - m[rr, c] * m[r]) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(m: FpMatrix) -> int:
    _require_prime(m.modulus)
    return len(rref(m.entries, m.modulus)[1])


def rank_reversed(m: FpMatrix) -> int:
    """Rank by eliminating columns right to left; a cross-check for :func:`rank`."""
    _require_prime(m.modulus)
    return len(rref(m.entries, m.modulus, col_order=range(m.cols - 1, -1, -1))[1])


def kernel_basis(m: FpMatrix) -> list[FpVector]:
    """Echelonized basis of the left kernel ``{x : x @ m = 0 mod d}``.

    Basis vectors are indexed by the free coordinates of the reduced system
    ``m.T x = 0``; each has a 1 in its own free coordinate and 0 in the
    other free ones.
    """
    p = m.modulus
    _require_prime(p)
    red, pivots = rref(m.entries.T, p)
    n = m.rows
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for f in free:
        x = np.zeros(n, dtype=np.int64)
        x[f] = 1
        for r, c in enumerate(pivots):
            x[c] = (-red[r, f]) % p
        basis.append(FpVector(p, x))
    return basis


@dataclass(frozen=True)
class CodeSummary:
    modulus: int
    length: int
    dimension: int
    min_weight: int
    min_weight_witness: FpVector
    count_min_weight: int

    def to_dict(self) -> dict:
        return {
            "modulus": self.modulus,
            "length": self.length,
            "dimension": self.dimension,
            "min_weight": self.min_weight,
            "min_weight_witness": self.min_weight_witness.tolist(),
            "count_min_weight": self.count_min_weight,
        }


def _basis_array(code_basis: list[FpVector]) -> tuple[int, np.ndarray]:
    if not code_basis:
        raise ValueError("code basis must be nonempty")
    p = code_basis[0].modulus
    if any(v.modulus != p for v in code_basis):
        raise ValueError("basis vectors have different moduli")
    n = len(code_basis[0])
    if any(len(v) != n for v in code_basis):
        raise LengthMismatch("basis vectors have different lengths")
    _require_prime(p)
    return p, np.array([v.entries for v in code_basis], dtype=np.int64)


def iter_codewords(code_basis: list[FpVector], cap: int = DEFAULT_ENUM_CAP,
                   chunk: int = 1 << 15):
    """Yield arrays of all codewords (including zero) in chunks, spanning
    coefficient tuples in lexicographic order."""
    p, b = _basis_array(code_basis)
    dim = b.shape[0]
    total = p ** dim
    if total > cap:
        raise SearchSpaceTooLarge(dim, cap)
    powers = p ** np.arange(dim - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        coeffs = (idx[:, None] // powers[None, :]) % p
        yield (coeffs @ b) % p


def span_set(code_basis: list[FpVector], cap: int = DEFAULT_ENUM_CAP) -> set[tuple[int, ...]]:
    out: set[tuple[int, ...]] = set()
    for words in iter_codewords(code_basis, cap):
        out.update(map(tuple, words.tolist()))
    return out


def min_weight(code_basis: list[FpVector], cap: int = DEFAULT_ENUM_CAP) -> CodeSummary:
    """Exact minimum weight by exhausting the span of ``code_basis``.

    The witness is the lexicographically smallest codeword of minimum
    weight.  ``cap`` bounds the number of codewords enumerated.
    """
    p, b = _basis_array(code_basis)
    dim = len(rref(b, p)[1])
    # work with an independent basis so every codeword is visited once
    if dim < len(code_basis):
        red, _ = rref(b, p)
        code_basis = [FpVector(p, red[r]) for r in range(dim)]
    best_w = None
    best: tuple[int, ...] | None = None
    count = 0
    for words in iter_codewords(code_basis, cap):
        w = np.count_nonzero(words, axis=1)
        w = np.where(w == 0, np.iinfo(np.int64).max, w)
        m = int(w.min())
        if m == np.iinfo(np.int64).max:
            continue
        cands = sorted(map(tuple, words[w == m].tolist()))
        if best_w is None or m < best_w:
            best_w, best, count = m, cands[0], len(cands)
        elif m == best_w:
            count += len(cands)
            if cands[0] < best:
                best = cands[0]
    if best_w is None:
        raise ValueError("code has no nonzero codewords")
    return CodeSummary(p, b.shape[1], dim, best_w, FpVector(p, best), count)


def min_weight_codewords(code_basis: list[FpVector],
                         cap: int = DEFAULT_ENUM_CAP) -> list[FpVector]:
    """All codewords of minimum nonzero weight, sorted lexicographically."""
    summary = min_weight(code_basis, cap)
    p, b = _basis_array(code_basis)
    red, piv = rref(b, p)
    basis = [FpVector(p, red[r]) for r in range(len(piv))]
    out = []
    for words in iter_codewords(basis, cap):
        w = np.count_nonzero(words, axis=1)
        out.extend(map(tuple, words[w == summary.min_weight].tolist()))
    return [FpVector(p, np.array(v)) for v in sorted(out)]
