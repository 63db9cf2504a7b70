"""Class T and Wahl chains: recognition, generation, discrepancies."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Sequence

from .cfrac import Chain, eval_chain, expand_fraction
from .errors import NotReduced, NotWahl

NOT_T = "NotT"
DU_VAL = "DuValA"
CLASS_T = "ClassT"
WAHL = "Wahl"

# reverse moves recorded in derivations
STRIP_FIRST = "strip-first"  # [2, b_1, ..., b_r + 1] -> [b_1, ..., b_r]
STRIP_LAST = "strip-last"  # [b_1 + 1, ..., b_r, 2] -> [b_1, ..., b_r]


@dataclass(frozen=True)
class SingularityType:
    """The cyclic quotient singularity 1/n(1,a); ``n == 1`` is a smooth point."""

    n: int
    a: int

    def __post_init__(self):
        if self.n < 1 or not 0 <= self.a < max(self.n, 1) or (self.n > 1 and gcd(self.n, self.a) != 1):
            raise ValueError(f"bad singularity type 1/{self.n}(1,{self.a})")

    @property
    def is_smooth(self) -> bool:
        return self.n == 1

    def chain(self) -> Chain:
        return () if self.is_smooth else expand_fraction(self.n, self.a)

    def __str__(self):
        return f"1/{self.n}(1,{self.a})"


@dataclass(frozen=True)
class TClassification:
    kind: str
    d: int | None = None
    m: int | None = None
    a: int | None = None
    k: int | None = None
    base_chain: Chain = ()
    derivation: tuple[str, ...] = ()

    @property
    def is_t(self) -> bool:
        return self.kind != NOT_T

    @property
    def is_wahl(self) -> bool:
        return self.kind == WAHL

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.kind == DU_VAL:
            out["k"] = self.k
        elif self.kind in (CLASS_T, WAHL):
            out.update(d=self.d, m=self.m, a=self.a)
        return out


def _is_t_base(chain: Chain) -> int:
    """Return d for a base chain [4] (d=1) or [3,2,...,2,3] (d = length), else 0."""
    if chain == (4,):
        return 1
    if len(chain) >= 2 and chain[0] == 3 and chain[-1] == 3 and all(c == 2 for c in chain[1:-1]):
        return len(chain)
    return 0


def classify_chain(chain: Sequence[int]) -> TClassification:
    """Recognise class T chains by undoing the extension moves.

    >>> classify_chain([3, 3]).to_json()
    {'kind': 'ClassT', 'd': 2, 'm': 2, 'a': 1}
    """
    chain = tuple(chain)
    if not chain or any(c < 2 for c in chain):
        raise NotReduced(f"classify_chain needs a reduced chain, got {list(chain)}")
    if all(c == 2 for c in chain):
        return TClassification(DU_VAL, k=len(chain))

    current = chain
    moves: list[str] = []
    while True:
        d = _is_t_base(current)
        if d:
            break
        if len(current) < 2:
            return TClassification(NOT_T)
        if current[0] == 2 and current[-1] >= 3:
            current = current[1:-1] + (current[-1] - 1,)
            moves.append(STRIP_FIRST)
        elif current[-1] == 2 and current[0] >= 3:
            current = (current[0] - 1,) + current[1:-1]
            moves.append(STRIP_LAST)
        else:
            return TClassification(NOT_T)

    value = eval_chain(chain)
    m = isqrt(value.num // d)
    assert d * m * m == value.num
    a, rem = divmod(value.den + 1, d * m)
    assert rem == 0
    kind = WAHL if d == 1 else CLASS_T
    return TClassification(kind, d=d, m=m, a=a, base_chain=current, derivation=tuple(reversed(moves)))


def extend_first(chain: Chain) -> Chain:
    """[b_1, ..., b_r] -> [2, b_1, ..., b_r + 1]"""
    return (2,) + chain[:-1] + (chain[-1] + 1,)


def extend_last(chain: Chain) -> Chain:
    """[b_1, ..., b_r] -> [b_1 + 1, ..., b_r, 2]"""
    return (chain[0] + 1,) + chain[1:] + (2,)


def generate_wahl_chains(max_len: int) -> list[Chain]:
    """All Wahl chains of length at most ``max_len``, shortest first."""
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    out = []
    level = [(4,)]
    while level and len(level[0]) <= max_len:
        out.extend(sorted(level))
        level = sorted({f(c) for c in level for f in (extend_first, extend_last)})
    return out


def discrepancies(chain: Sequence[int]) -> list[Fraction]:
    """Discrepancies d_j of the exceptional curves over the contracted chain.

    Solves ``sum_j d_j (E_j . E_i) = K . E_i = e_i - 2`` with a tridiagonal
    elimination over the rationals.
    """
    chain = tuple(chain)
    if not chain or any(c < 2 for c in chain):
        raise NotReduced(f"discrepancies need a reduced chain, got {list(chain)}")
    t = len(chain)
    # rows: -e_i d_i + d_{i-1} + d_{i+1} = e_i - 2 ; Thomas algorithm
    diag = [Fraction(-c) for c in chain]
    rhs = [Fraction(c - 2) for c in chain]
    for i in range(1, t):
        w = Fraction(1) / diag[i - 1]
        diag[i] -= w
        rhs[i] -= w * rhs[i - 1]
    sol = [Fraction(0)] * t
    sol[-1] = rhs[-1] / diag[-1]
    for i in range(t - 2, -1, -1):
        sol[i] = (rhs[i] - sol[i + 1]) / diag[i]
    return sol


def log_discrepancies(chain: Sequence[int]) -> list[Fraction]:
    """The values 1 + d_j (called alpha in the maximal resolution algorithm)."""
    return [1 + d for d in discrepancies(chain)]


@dataclass(frozen=True)
class WahlData:
    chain: Chain
    m: int
    a: int
    initial_index: int  # 1-based, so E_{initial_index} is the initial curve
    nu: tuple[int, ...]
    discrepancies: tuple[Fraction, ...] = field(repr=False)


def nu_sequence(chain: Sequence[int]) -> tuple[int, ...]:
    """Multiplicities nu_1..nu_{s+1} obtained by replaying the derivation from [4].

    The seed [4] carries nu = (1) with the extra (-1)-curve of multiplicity 2;
    each extension move adds a curve whose multiplicity is the sum of the two
    curves it separates.
    """
    cls = classify_chain(chain)
    if not cls.is_wahl:
        raise NotWahl(f"{list(chain)} is not a Wahl chain")
    nu = [1]
    last = 2
    for move in cls.derivation:
        if move == STRIP_FIRST:  # undone by extend_first
            nu, last = [last] + nu, last + nu[-1]
        else:
            nu, last = nu + [last], last + nu[0]
    return tuple(nu) + (last,)


def wahl_data(chain: Sequence[int]) -> WahlData:
    chain = tuple(chain)
    nu = nu_sequence(chain)
    m = nu[-1]
    a = nu[-1] - nu[-2]
    ones = [i for i, v in enumerate(nu[:-1]) if v == 1]
    assert len(ones) == 1
    ds = tuple(Fraction(v, m) - 1 for v in nu[:-1])
    return WahlData(chain, m, a, ones[0] + 1, nu, ds)


def relative_canonical_degree(curve_selfint: int, touching_discrepancies: Sequence) -> Fraction:
    """K . C on the partially contracted surface for a kept curve C."""
    return Fraction(-2 - curve_selfint) - sum((Fraction(d) for d in touching_discrepancies), Fraction(0))
