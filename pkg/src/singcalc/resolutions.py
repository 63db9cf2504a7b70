"""Minimal, maximal, P- and crepant M-resolutions of cyclic quotient singularities.

A partial resolution is modelled by its minimal resolution (a chain) together
with the contiguous runs of curves that get contracted to singular points.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .cfrac import Chain, blow_down_normal_form, blow_up_at, contract_at, expand_fraction
from .mmp import BOUNDARY, INTERIOR, SECTION, CurveRecord, FamilyState
from .errors import BoundExceeded, InvalidInput, MalformedDecoration
from .tsing import (
    DU_VAL,
    TClassification,
    classify_chain,
    discrepancies,
    log_discrepancies,
    relative_canonical_degree,
)

DEFAULT_BRUTE_FORCE_BOUND = 60


@dataclass(frozen=True, order=True)
class DecoratedResolution:
    """A chain plus the half-open index spans ``[start, stop)`` of its blocks.

    Curves outside every span are kept curves of the partial resolution.
    """

    chain: Chain
    spans: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "chain", tuple(self.chain))
        spans = tuple(sorted((int(s), int(t)) for s, t in self.spans))
        object.__setattr__(self, "spans", spans)
        prev_stop = None
        for s, t in spans:
            if not 0 <= s < t <= len(self.chain):
                raise MalformedDecoration(f"block span {(s, t)} out of range for chain of length {len(self.chain)}")
            if prev_stop is not None and s <= prev_stop:
                raise MalformedDecoration("blocks overlap or touch; separate them by a kept curve")
            prev_stop = t

    @property
    def blocks(self) -> list[Chain]:
        return [self.chain[s:t] for s, t in self.spans]

    def block_of(self) -> list[int | None]:
        """Block index of every node, or None for kept curves."""
        out: list[int | None] = [None] * len(self.chain)
        for b, (s, t) in enumerate(self.spans):
            for i in range(s, t):
                out[i] = b
        return out

    def kinds(self) -> list[TClassification]:
        return [classify_chain(c) for c in self.blocks]

    def is_minimal(self) -> bool:
        return not self.spans

    def to_json(self) -> dict:
        owner = self.block_of()
        nodes = []
        for c, b in zip(self.chain, owner):
            node = {"s": -c}
            if b is not None:
                node["block"] = b
            nodes.append(node)
        return {"nodes": nodes, "blocks": [{"chain": list(c)} for c in self.blocks]}

    @classmethod
    def from_json(cls, obj) -> "DecoratedResolution":
        try:
            chain = tuple(-int(node["s"]) for node in obj["nodes"])
            owners = [node.get("block") for node in obj["nodes"]]
            n_blocks = len(obj.get("blocks", []))
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedDecoration(f"cannot parse decorated resolution: {exc}") from None
        spans = []
        for b in range(n_blocks):
            idx = [i for i, o in enumerate(owners) if o == b]
            if not idx or idx != list(range(idx[0], idx[-1] + 1)):
                raise MalformedDecoration(f"block {b} is empty or not contiguous")
            spans.append((idx[0], idx[-1] + 1))
            declared = tuple(obj["blocks"][b]["chain"])
            if declared != chain[idx[0] : idx[-1] + 1]:
                raise MalformedDecoration(f"block {b} chain {list(declared)} disagrees with its nodes")
        if any(o is not None and not 0 <= o < n_blocks for o in owners):
            raise MalformedDecoration("node refers to an undeclared block")
        return cls(chain, tuple(spans))

    def __str__(self):
        owner = self.block_of()
        parts = []
        i = 0
        while i < len(self.chain):
            if owner[i] is None:
                parts.append(str(-self.chain[i]))
                i += 1
            else:
                s, t = self.spans[owner[i]]
                parts.append("[" + ",".join(str(c) for c in self.chain[s:t]) + "]")
                i = t
        return " - ".join(parts) if parts else "(smooth)"


@dataclass(frozen=True)
class MaximalResolution:
    chain: Chain
    alphas: tuple[Fraction, ...]


def maximal_resolution(n: int, a: int, order: Sequence[int] | None = None) -> MaximalResolution:
    """Blow up nodes whose log discrepancies sum below 1 until none is left.

    ``order`` is only for testing order independence: when given, it is used
    as a stream of tie-breaking choices among the eligible nodes.
    """
    chain = expand_fraction(n, a)
    alphas = log_discrepancies(chain)
    choices = iter(order or ())
    while True:
        eligible = [i for i in range(1, len(chain)) if alphas[i - 1] + alphas[i] < 1]
        if not eligible:
            return MaximalResolution(chain, tuple(alphas))
        pick = eligible[next(choices, 0) % len(eligible)]
        chain = blow_up_at(chain, pick)
        alphas.insert(pick, alphas[pick - 1] + alphas[pick])


@lru_cache(maxsize=256)
def intermediate_chains(n: int, a: int) -> frozenset[Chain]:
    """Chains between the minimal and the maximal resolution (both included)."""
    top = maximal_resolution(n, a).chain
    seen = {top}
    todo = [top]
    while todo:
        c = todo.pop()
        for i in range(1, len(c) - 1):
            if c[i] == 1:
                nxt = contract_at(c, i)
                if nxt not in seen:
                    seen.add(nxt)
                    todo.append(nxt)
    return frozenset(seen)


def _end_discrepancies(block: Chain, kind: TClassification) -> tuple[Fraction, Fraction]:
    if kind.kind == DU_VAL:
        return Fraction(0), Fraction(0)
    ds = discrepancies(block)
    return ds[0], ds[-1]


def kept_curve_degrees(dec: DecoratedResolution) -> list[tuple[int, Fraction]]:
    """(node index, K.C) for every kept curve, with touching block-end discrepancies."""
    owner = dec.block_of()
    ends = {}
    for b, (block, kind) in enumerate(zip(dec.blocks, dec.kinds())):
        if kind.is_t:
            ends[b] = _end_discrepancies(block, kind)
    out = []
    for i, c in enumerate(dec.chain):
        if owner[i] is not None:
            continue
        touching = []
        if i > 0 and owner[i - 1] is not None and owner[i - 1] in ends:
            touching.append(ends[owner[i - 1]][1])
        if i + 1 < len(dec.chain) and owner[i + 1] is not None and owner[i + 1] in ends:
            touching.append(ends[owner[i + 1]][0])
        out.append((i, relative_canonical_degree(-c, touching)))
    return out


@dataclass
class ValidationReport:
    mode: str
    checks: dict[str, bool] = field(default_factory=dict)
    messages: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def __bool__(self):
        return self.ok


def validate_p_resolution(dec: DecoratedResolution, n: int, a: int, mode: str = "P") -> ValidationReport:
    """Check a decorated chain as a P-resolution (``mode='P'``) or M-resolution (``'M'``)."""
    if mode not in ("P", "M"):
        raise ValueError("mode must be 'P' or 'M'")
    if any(c < 1 for c in dec.chain):
        raise MalformedDecoration(f"chain {list(dec.chain)} has non-positive entries")
    report = ValidationReport(mode)

    blocks_ok = True
    for block in dec.blocks:
        if any(c < 2 for c in block):
            blocks_ok = False
            report.messages.append(f"block {list(block)} contains a (-1)-curve")
            continue
        kind = classify_chain(block)
        if mode == "P" and not kind.is_t:
            blocks_ok = False
            report.messages.append(f"block {list(block)} is not of class T")
        if mode == "M" and not kind.is_wahl:
            blocks_ok = False
            report.messages.append(f"block {list(block)} is not a Wahl chain")
    report.checks["class_t"] = blocks_ok

    canonical_ok = True
    if blocks_ok:
        for i, deg in kept_curve_degrees(dec):
            good = deg > 0 if mode == "P" else deg >= 0
            if not good:
                canonical_ok = False
                report.messages.append(f"kept curve {i} (self-intersection {-dec.chain[i]}) has K.C = {deg}")
    else:
        canonical_ok = False
    report.checks["canonical"] = canonical_ok

    minimal = expand_fraction(n, a)
    dominates = blow_down_normal_form(dec.chain) == minimal
    if not dominates:
        report.messages.append("chain does not blow down to the minimal resolution")
    report.checks["dominates_minimal"] = dominates
    if mode == "P":
        dominated = dec.chain in intermediate_chains(n, a)
        if not dominated:
            report.messages.append("chain is not dominated by the maximal resolution")
        report.checks["dominated_by_maximal"] = dominated
    return report


def crepant_m_resolution(dec: DecoratedResolution) -> DecoratedResolution:
    """Replace class T blocks by chains of Wahl blocks joined by (-1)-curves.

    Du Val blocks are resolved (their curves become kept curves); Wahl blocks
    pass through unchanged.
    """
    owner = dec.block_of()
    chain: list[int] = []
    spans: list[tuple[int, int]] = []
    i = 0
    while i < len(dec.chain):
        b = owner[i]
        if b is None:
            chain.append(dec.chain[i])
            i += 1
            continue
        s, t = dec.spans[b]
        block = dec.chain[s:t]
        kind = classify_chain(block)
        if not kind.is_t:
            raise InvalidInput(f"block {list(block)} is not of class T")
        if kind.kind == DU_VAL:
            chain.extend(block)
        else:
            wahl = expand_fraction(kind.m * kind.m, kind.m * kind.a - 1) if kind.d > 1 else block
            for copy in range(kind.d):
                if copy:
                    chain.append(1)
                spans.append((len(chain), len(chain) + len(wahl)))
                chain.extend(wahl)
        i = t
    return DecoratedResolution(tuple(chain), tuple(spans))


def compactify(dec: DecoratedResolution, n: int, a: int) -> FamilyState:
    """Initial MMP state: the M-resolution glued to the compactifying boundary.

    The central chain is the resolution, one (-1)-curve, then D_e, ..., D_1
    with D_1 of self-intersection -(a_1 - 1), then the (+1)-section.
    """
    report = validate_p_resolution(dec, n, a, mode="M")
    if not report.ok:
        raise InvalidInput("compactify needs an M-resolution: " + "; ".join(report.messages))
    bounds = expand_fraction(n, n - a)
    e = len(bounds)
    curves = []
    owner = dec.block_of()
    for i, (c, b) in enumerate(zip(dec.chain, owner)):
        curves.append(CurveRecord(i, -c, INTERIOR, block=b))
    next_id = len(curves)
    curves.append(CurveRecord(next_id, -1, INTERIOR))
    next_id += 1
    ledger = {}
    for j in range(e, 0, -1):
        selfint = -(bounds[j - 1] - 1) if j == 1 else -bounds[j - 1]
        curves.append(CurveRecord(next_id, selfint, BOUNDARY, boundary_index=j))
        ledger[j] = [next_id]
        next_id += 1
    curves.append(CurveRecord(next_id, 1, SECTION))
    return FamilyState(curves, bounds, ledger=ledger, d={j: 0 for j in range(1, e + 1)}, next_block=len(dec.spans))


def _t_spans(chain: Chain) -> dict[int, list[tuple[int, TClassification]]]:
    out: dict[int, list[tuple[int, TClassification]]] = {}
    for s in range(len(chain)):
        for t in range(s + 1, len(chain) + 1):
            if chain[t - 1] < 2:
                break
            kind = classify_chain(chain[s:t])
            if kind.is_t:
                out.setdefault(s, []).append((t, kind))
    return out


def _decorations(chain: Chain):
    """Block layouts whose kept curves all have K.C > 0.

    K.C of a kept curve depends only on the blocks next to it, so the check
    is made as soon as the right-hand neighbour is decided.
    """
    starts = _t_spans(chain)
    ends: dict[tuple[int, int], tuple[Fraction, Fraction]] = {}
    for s, options in starts.items():
        for t, kind in options:
            ends[s, t] = _end_discrepancies(chain[s:t], kind)
    L = len(chain)

    def rec(pos: int, left_disc, pending, acc: list):
        # left_disc: discrepancy of the block end just before pos (None if pos
        # follows a kept curve); pending: partial K.C of a kept curve at pos-1
        if pos == L:
            if pending is None or pending > 0:
                yield tuple(acc)
            return
        if pending is None or pending > 0:
            here = Fraction(chain[pos] - 2) - (left_disc or 0)
            yield from rec(pos + 1, None, here, acc)
        if left_disc is None:
            for t, _kind in starts.get(pos, ()):
                first, last = ends[pos, t]
                if pending is not None and not pending - first > 0:
                    continue
                acc.append((pos, t))
                yield from rec(t, last, None, acc)
                acc.pop()

    yield from rec(0, None, None, [])


def enumerate_p_resolutions_bruteforce(n: int, a: int, bound: int = DEFAULT_BRUTE_FORCE_BOUND) -> list[DecoratedResolution]:
    """Every P-resolution, by testing all decorations of all intermediate chains."""
    if n > bound:
        raise BoundExceeded(f"n = {n} exceeds the brute-force bound {bound}")
    found = set()
    for chain in intermediate_chains(n, a):
        for spans in _decorations(chain):
            dec = DecoratedResolution(chain, spans)
            if validate_p_resolution(dec, n, a).ok:
                found.add(dec)
    return sorted(found)
