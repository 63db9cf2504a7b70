"""Hirzebruch-Jung continued fractions and chain rewriting.

A chain is a tuple of integers ``(c_1, ..., c_t)`` standing for a linear
configuration of rational curves with self-intersections ``-c_i``.  All
arithmetic is exact; values that would divide by zero evaluate to the point
at infinity instead of raising.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import EntryNotOne, InvalidFraction, NotReduced, PositionOutOfRange

Chain = tuple[int, ...]


@dataclass(frozen=True)
class ProjectiveRational:
    """A point of the rational projective line, kept in normal form.

    ``den == 0`` is infinity (stored as ``1/0``); otherwise the fraction is
    reduced with a positive denominator.
    """

    num: int
    den: int

    def __post_init__(self):
        num, den = self.num, self.den
        if den == 0:
            if num == 0:
                raise InvalidFraction("0/0 is not a projective rational")
            num = 1
        else:
            if den < 0:
                num, den = -num, -den
            g = gcd(num, den)
            num, den = num // g, den // g
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def infinity(cls) -> "ProjectiveRational":
        return cls(1, 0)

    @classmethod
    def from_fraction(cls, value) -> "ProjectiveRational":
        value = Fraction(value)
        return cls(value.numerator, value.denominator)

    @property
    def is_infinite(self) -> bool:
        return self.den == 0

    def to_fraction(self) -> Fraction:
        if self.is_infinite:
            raise ZeroDivisionError("infinity has no Fraction value")
        return Fraction(self.num, self.den)

    def to_json(self) -> dict:
        return {"num": str(self.num), "den": str(self.den)}

    @classmethod
    def from_json(cls, obj) -> "ProjectiveRational":
        return cls(int(obj["num"]), int(obj["den"]))

    def __eq__(self, other):
        if isinstance(other, ProjectiveRational):
            return (self.num, self.den) == (other.num, other.den)
        if isinstance(other, (int, Fraction)):
            return not self.is_infinite and self.to_fraction() == other
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __str__(self):
        if self.is_infinite:
            return "inf"
        if self.den == 1:
            return str(self.num)
        return f"{self.num}/{self.den}"


def as_chain(entries: Iterable[int]) -> Chain:
    return tuple(int(c) for c in entries)


def eval_chain(chain: Sequence[int]) -> ProjectiveRational:
    """Evaluate ``[c_1, ..., c_t]`` right to left in homogeneous coordinates.

    >>> str(eval_chain([3, 4, 2]))
    '19/7'
    >>> eval_chain([]).is_infinite
    True
    """
    # (p : q) represents p/q; c - 1/(p/q) = (c*p - q) / p
    p, q = 1, 0
    for c in reversed(chain):
        p, q = c * p - q, p
    return ProjectiveRational(p, q)


def expand_fraction(n: int, a: int) -> Chain:
    """The reduced chain (all entries >= 2) whose value is ``n/a``."""
    if not (n > a >= 1) or gcd(n, a) != 1:
        raise InvalidFraction(f"need n > a >= 1 and gcd(n, a) = 1, got n={n}, a={a}")
    out = []
    while a:
        b = -(-n // a)
        out.append(b)
        n, a = a, b * a - n
    return tuple(out)


def _check_reduced(chain: Sequence[int]) -> None:
    if not chain:
        raise NotReduced("empty chain")
    if any(c < 2 for c in chain):
        raise NotReduced(f"chain {list(chain)} has an entry below 2")


def dual_chain(chain: Sequence[int]) -> Chain:
    """Riemenschneider dual via the point diagram.

    Row ``i`` holds ``c_i - 1`` dots, starting in the column of the last dot
    of the previous row; the dual entries are the column heights plus one.
    """
    _check_reduced(chain)
    heights: list[int] = []
    col = 0
    for c in chain:
        for k in range(c - 1):
            if col + k == len(heights):
                heights.append(0)
            heights[col + k] += 1
        col += c - 2
    return tuple(h + 1 for h in heights)


def blow_up_at(chain: Sequence[int], position: int) -> Chain:
    """Blow up at a junction or at an end of the chain.

    ``position`` runs over ``0 .. len(chain)``: 0 is the left end,
    ``len(chain)`` the right end, and ``0 < position < len(chain)`` the node
    between entries ``position - 1`` and ``position``.
    """
    t = len(chain)
    if t == 0 or not 0 <= position <= t:
        raise PositionOutOfRange(f"position {position} not in 0..{t} for chain {list(chain)}")
    out = list(chain)
    if position > 0:
        out[position - 1] += 1
    if position < t:
        out[position] += 1
    out.insert(position, 1)
    return tuple(out)


def contract_at(chain: Sequence[int], index: int) -> Chain:
    """Blow down the (-1)-curve at ``index``; inverse of :func:`blow_up_at`."""
    if not 0 <= index < len(chain):
        raise PositionOutOfRange(f"index {index} out of range for chain {list(chain)}")
    if chain[index] != 1:
        raise EntryNotOne(f"entry {index} of {list(chain)} is {chain[index]}, not 1")
    out = list(chain)
    if index > 0:
        out[index - 1] -= 1
    if index + 1 < len(out):
        out[index + 1] -= 1
    del out[index]
    return tuple(out)


@dataclass(frozen=True)
class ZeroCheck:
    """Verdict of :func:`is_zero_chain` plus the contraction indices used."""

    is_zero: bool
    witness: tuple[int, ...]

    def __bool__(self):
        return self.is_zero


def is_zero_chain(chain: Sequence[int]) -> ZeroCheck:
    """Does the chain blow down to ``[0]``?  Contracts the leftmost 1 first."""
    current = tuple(chain)
    witness = []
    while current != (0,):
        try:
            i = current.index(1)
        except ValueError:
            return ZeroCheck(False, tuple(witness))
        witness.append(i)
        current = contract_at(current, i)
    return ZeroCheck(True, tuple(witness))


def blow_down_normal_form(chain: Sequence[int]) -> Chain:
    """Contract interior (-1)-entries until none is left."""
    current = tuple(chain)
    while True:
        for i in range(1, len(current) - 1):
            if current[i] == 1:
                current = contract_at(current, i)
                break
        else:
            return current


def format_chain(chain: Sequence[int]) -> str:
    return "[" + ",".join(str(c) for c in chain) + "]"
