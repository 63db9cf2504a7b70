"""Zero continued fractions bounded by the dual expansion, K_e(n/(n-a)).

Each tuple names the minimal symplectic filling W_{n,a}(n_1, ..., n_e) and,
through the correspondence in :mod:`singcalc.identify`, a smoothing component.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .cfrac import Chain, eval_chain, expand_fraction
from .errors import DegenerateLength
from .tsing import SingularityType


@dataclass(frozen=True, order=True)
class FillingDescriptor:
    n_tuple: Chain
    bounds: Chain
    singularity: SingularityType

    @property
    def e(self) -> int:
        return len(self.n_tuple)

    @property
    def d_vector(self) -> Chain:
        """Number of (-1)-curves attached to each boundary curve D_i."""
        return tuple(b - x for b, x in zip(self.bounds, self.n_tuple))

    @property
    def filling_name(self) -> str:
        s = self.singularity
        return f"W_{{{s.n},{s.a}}}({','.join(map(str, self.n_tuple))})"


def _zero_chains(bounds: Chain) -> frozenset[Chain]:
    # Zero chains of length e are the triangle counts at vertices 1..e of the
    # triangulations of a polygon with vertices 0..e.  A triangulation of the
    # sub-polygon i..j is split by the triangle (i, k, j) on its base edge, so
    # the admissible count vectors are built bottom-up over intervals, dropping
    # any vector that already exceeds a bound.  Vertex 0 is unconstrained.
    e = len(bounds)
    if e == 1:
        return frozenset({(0,)}) if bounds[0] >= 0 else frozenset()
    cap = (None,) + tuple(bounds)

    def fits(v, x):
        return v == 0 or x <= cap[v]

    table: dict[tuple[int, int], set[tuple[int, ...]]] = {}
    for i in range(e):
        table[i, i + 1] = {(0, 0)}
    for width in range(2, e + 1):
        for i in range(0, e - width + 1):
            j = i + width
            out = set()
            for k in range(i + 1, j):
                for left in table[i, k]:
                    if not fits(i, left[0] + 1):
                        continue
                    for right in table[k, j]:
                        mid = left[-1] + right[0] + 1
                        last = right[-1] + 1
                        if fits(k, mid) and fits(j, last):
                            out.add((left[0] + 1,) + left[1:-1] + (mid,) + right[1:-1] + (last,))
            table[i, j] = out
    return frozenset(v[1:] for v in table[0, e])


def enumerate_zero_chains(e: int, bounds: Sequence[int]) -> set[Chain]:
    """All chains of length ``e`` obtained from [0] by blow-ups, entrywise <= bounds."""
    bounds = tuple(bounds)
    if len(bounds) != e:
        raise ValueError(f"bounds has length {len(bounds)}, expected {e}")
    return set(_zero_chains(bounds))


def k_set(n: int, a: int) -> list[FillingDescriptor]:
    bounds = expand_fraction(n, n - a)
    if len(bounds) == 1:
        raise DegenerateLength(
            f"1/{n}(1,{a}) has a dual expansion of length 1; K_1 is empty by definition"
        )
    sing = SingularityType(n, a)
    return [FillingDescriptor(z, bounds, sing) for z in sorted(enumerate_zero_chains(len(bounds), bounds))]


def _continuant(entries: Sequence[int]) -> int:
    """Determinant of the tridiagonal matrix with the given diagonal and -1 off it."""
    prev, cur = 1, 0
    if entries:
        prev, cur = 1, entries[0]
    for x in entries[1:]:
        prev, cur = cur, x * cur - prev
    return cur if entries else 1


def is_positive_semidefinite_tridiagonal(diag: Sequence[int]) -> bool:
    # Principal submatrices of a tridiagonal matrix split into blocks of
    # consecutive indices, so checking every consecutive run suffices.
    e = len(diag)
    for i in range(e):
        for j in range(i + 1, e + 1):
            if _continuant(diag[i:j]) < 0:
                return False
    return True


def is_admissible_zero(chain: Sequence[int]) -> bool:
    """Matrix form of membership: M(n) is PSD of rank >= e-1 and [n] = 0.

    The rank condition always holds because the -1 off-diagonal makes the
    minor obtained by deleting the first row and last column equal to +-1.
    """
    chain = tuple(chain)
    if not chain or any(x < 0 for x in chain):
        return False
    if not is_positive_semidefinite_tridiagonal(chain):
        return False
    return eval_chain(chain) == 0
