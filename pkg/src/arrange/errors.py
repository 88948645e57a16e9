"""Exception hierarchy shared by every module.

All errors raised for bad caller input derive from :class:`ArrangeError`
(itself a ``ValueError``), so the CLI can map them to exit code 2.
"""

from __future__ import annotations


class ArrangeError(ValueError):
    """Base class for input and precondition failures."""


# arrangement
class InvalidArrangement(ArrangeError):
    pass


class PairWithoutPoint(InvalidArrangement):
    def __init__(self, i: int, j: int):
        self.lines = (i, j)
        super().__init__(f"lines {i} and {j} share no point")


class PairWithMultiplePoints(InvalidArrangement):
    def __init__(self, i: int, j: int, p: int, q: int):
        self.lines = (i, j)
        self.points = (p, q)
        super().__init__(f"lines {i} and {j} share points {p} and {q}")


class IsolatedOrDuplicatePoint(InvalidArrangement):
    def __init__(self, j: int, reason: str = ""):
        self.point = j
        super().__init__(f"point {j} is isolated or duplicated{': ' + reason if reason else ''}")


class NotPrime(ArrangeError):
    def __init__(self, p: int):
        self.p = p
        super().__init__(f"{p} is not prime")


class IndexOutOfRange(ArrangeError, IndexError):
    pass


class NotAnNkConfiguration(ArrangeError):
    pass


# linear algebra
class CompositeModulus(ArrangeError):
    def __init__(self, d: int):
        self.modulus = d
        super().__init__(f"modulus {d} is not prime; only prime moduli are supported here")


class SearchSpaceTooLarge(ArrangeError):
    def __init__(self, dim: int, cap: int):
        self.dim = dim
        self.cap = cap
        super().__init__(f"code of dimension {dim} has more codewords than the cap {cap}")


class LengthMismatch(ArrangeError):
    pass


class ModelMismatch(ArrangeError):
    pass


# cover / obstruct
class NegativeBetti(ArrangeError):
    pass


class HypothesisViolation(ArrangeError):
    pass


class BranchNotStrictlyEmbedded(ArrangeError):
    pass


class InvalidDeletion(ArrangeError):
    pass


# wiring
class NotWirable(ArrangeError):
    pass


class MoveNotApplicable(ArrangeError):
    def __init__(self, position: int, reason: str):
        self.position = position
        self.reason = reason
        super().__init__(f"move not applicable at position {position}: {reason}")


class InvalidDiagram(ArrangeError):
    pass


# symplectic
class DomainError(ArrangeError):
    pass


class NoEpsilonFound(ArrangeError):
    pass


# plumbing
class Infeasible(ArrangeError):
    pass
