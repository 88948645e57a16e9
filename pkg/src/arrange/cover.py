"""Closed-form invariants of cyclic branched covers of blown-up planes.

All signature data is exact: :class:`fractions.Fraction` values, never
floats.

>>> branched_euler(10, 2, 4)
12
>>> casson_gordon_epsilon(-6, 2, 1, -8)
Fraction(-2, 1)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .arrangement import is_prime
from .errors import NegativeBetti, NotPrime


def branched_euler(chi_base: int, d: int, num_branch_components: int) -> int:
    """Euler characteristic of a d-fold cyclic cover branched over
    ``num_branch_components`` disjoint embedded spheres."""
    if d < 1 or num_branch_components < 0:
        raise ValueError("need d >= 1 and a nonnegative number of branch components")
    f = 2 * num_branch_components
    return d * (chi_base - f) + f


def casson_gordon_epsilon(sign_base: int, d: int, r: int, f_square: int) -> Fraction:
    """Signature of the ``omega^r`` eigenspace of the deck action.

    ``f_square`` is the self-intersection of the total branch locus.
    """
    if d < 1 or not 0 <= r < d:
        raise ValueError(f"need 0 <= r < d, got r={r}, d={d}")
    return Fraction(sign_base) - Fraction(2 * r * (d - r), d * d) * f_square


@dataclass(frozen=True)
class CoverInvariants:
    d: int
    b2_plus: tuple[int, ...]
    b2_minus: tuple[int, ...]
    epsilon: tuple[Fraction, ...]
    chi_total: int
    b1: int = 0
    params: dict = field(default_factory=dict, compare=False)

    @property
    def b2(self) -> tuple[int, ...]:
        return tuple(a + b for a, b in zip(self.b2_plus, self.b2_minus))

    @property
    def b2_total(self) -> int:
        return sum(self.b2)

    @property
    def b2_minus_total(self) -> int:
        return sum(self.b2_minus)

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "params": dict(self.params),
            "chi_total": self.chi_total,
            "b1": self.b1,
            "eigenspaces": [
                {
                    "r": r,
                    "b2_plus": self.b2_plus[r],
                    "b2_minus": self.b2_minus[r],
                    "b2": self.b2[r],
                    "epsilon": _frac_dict(self.epsilon[r]),
                }
                for r in range(self.d)
            ],
        }


def _frac_dict(q: Fraction) -> dict:
    return {"num": q.numerator, "den": q.denominator}


def bpab_invariants(p: int, alpha: int, beta: int, N: int) -> CoverInvariants:
    """Invariants of the p-fold cover of the plane blown up at ``N`` points,
    branched over the proper transforms of a ``B^p_{alpha,beta}`` family.

    The caller certifies that the blown points include exactly the points
    of the family on its own lines; this function checks only the count.

    >>> inv = bpab_invariants(2, 1, 1, 7)
    >>> inv.b2_plus, inv.b2_minus, inv.chi_total
    ((1, 0), (7, 2), 12)
    """
    if not is_prime(p):
        raise NotPrime(p)
    if alpha < 1 or beta < 1:
        raise ValueError("alpha and beta must be positive")
    needed = 2 + p * p * alpha * beta
    if N < needed:
        raise ValueError(f"N={N} is smaller than the {needed} points of the branch family")
    s = p * (alpha + beta)
    plus = [1]
    minus = [N]
    eps = [casson_gordon_epsilon(1 - N, p, 0, -2 * p * p * alpha * beta)]
    for r in range(1, p):
        q = 2 * alpha * beta * r * (p - r)
        bp = 2 + q - s
        bm = 1 + N - q - s
        if bp < 0 or bm < 0:
            raise NegativeBetti(
                f"eigenspace r={r} would have b2+={bp}, b2-={bm} "
                f"for p={p}, alpha={alpha}, beta={beta}, N={N}")
        plus.append(bp)
        minus.append(bm)
        eps.append(casson_gordon_epsilon(1 - N, p, r, -2 * p * p * alpha * beta))
    chi = branched_euler(3 + N, p, s)
    return CoverInvariants(
        d=p, b2_plus=tuple(plus), b2_minus=tuple(minus), epsilon=tuple(eps),
        chi_total=chi, b1=0,
        params={"p": p, "alpha": alpha, "beta": beta, "N": N},
    )
