"""Controlled semi-stable MMP on compactified chains.

The engine only ever sees the central fibre as a chain of curves.  Usual flips
are carried out as blow-down cascades; Iitaka-Kodaira contractions blow down a
(-1)-curve away from the singular points and record which boundary curve the
corresponding (-1)-curve of the general fibre meets.  The ledger keeps, for
every boundary curve D_j of the general fibre, the central-fibre curves it
degenerates to.
"""

from __future__ import annotations

import copy
import os
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .cfrac import Chain, eval_chain
from .errors import (
    AmbiguousAttachment,
    PreconditionViolation,
    StepBudgetExceeded,
    UnsupportedConfiguration,
)

INTERIOR = "interior"
BOUNDARY = "boundary"
SECTION = "section"

FLIP = "flip"
CONTRACT = "contract"
BOUNDARY_EVENT = "boundary"


@dataclass
class CurveRecord:
    id: int
    selfint: int
    role: str = INTERIOR
    boundary_index: int | None = None
    block: int | None = None

    @property
    def label(self) -> str:
        if self.role == BOUNDARY:
            return f"D{self.boundary_index}"
        if self.role == SECTION:
            return "S"
        return f"C{self.id}"


@dataclass
class FamilyState:
    curves: list[CurveRecord]
    bounds: Chain
    ledger: dict[int, list[int]] = field(default_factory=dict)
    discovered: list[dict] = field(default_factory=list)
    d: dict[int, int] = field(default_factory=dict)
    op_log: list[dict] = field(default_factory=list)
    next_block: int = 0

    @property
    def e(self) -> int:
        return len(self.bounds)

    def copy(self) -> "FamilyState":
        return copy.deepcopy(self)

    def index_of(self, curve_id: int) -> int:
        for i, c in enumerate(self.curves):
            if c.id == curve_id:
                return i
        raise KeyError(f"no curve with id {curve_id}")

    def curve(self, curve_id: int) -> CurveRecord:
        return self.curves[self.index_of(curve_id)]

    def selfints(self) -> list[int]:
        return [c.selfint for c in self.curves]

    def blocks(self) -> dict[int, tuple[int, int]]:
        """Block id -> half-open index span in the current chain."""
        spans: dict[int, tuple[int, int]] = {}
        for i, c in enumerate(self.curves):
            if c.block is not None:
                s, _ = spans.get(c.block, (i, i))
                spans[c.block] = (s, i + 1)
        return spans

    def block_chain(self, block: int) -> Chain:
        s, t = self.blocks()[block]
        return tuple(-c.selfint for c in self.curves[s:t])

    def d_vector(self) -> Chain:
        return tuple(self.d.get(j, 0) for j in range(1, self.e + 1))

    def classes_containing(self, curve_id: int) -> list[int]:
        return [j for j, members in self.ledger.items() if curve_id in members]

    def snapshot(self) -> dict:
        spans = self.blocks()
        return {
            "chain": self.selfints(),
            "blocks": [list(spans[b]) for b in sorted(spans)],
        }

    def check_invariants(self) -> None:
        from .tsing import classify_chain

        for b in self.blocks():
            s, t = self.blocks()[b]
            if any(c.block != b for c in self.curves[s:t]):
                raise AssertionError(f"block {b} is not contiguous")
            if not classify_chain(self.block_chain(b)).is_wahl:
                raise AssertionError(f"block {b} is not a Wahl chain")
        seen: set[int] = set()
        for members in self.ledger.values():
            if seen & set(members):
                raise AssertionError("ledger classes overlap")
            seen |= set(members)

    def to_json(self) -> dict:
        return {
            "curves": [
                {
                    "id": c.id,
                    "s": c.selfint,
                    "role": c.role,
                    **({"j": c.boundary_index} if c.boundary_index is not None else {}),
                    **({"block": c.block} if c.block is not None else {}),
                }
                for c in self.curves
            ],
            "bounds": list(self.bounds),
            "ledger": {str(j): list(v) for j, v in sorted(self.ledger.items())},
            "d": [self.d.get(j, 0) for j in range(1, self.e + 1)],
        }


def _neighbors(state: FamilyState, idx: int) -> list[int]:
    return [i for i in (idx - 1, idx + 1) if 0 <= i < len(state.curves)]


def _blow_down(state: FamilyState, idx: int) -> None:
    for i in _neighbors(state, idx):
        state.curves[i].selfint += 1
    gone = state.curves.pop(idx)
    for members in state.ledger.values():
        if gone.id in members:
            members.remove(gone.id)


def _log(state: FamilyState, op: str, curve: CurveRecord, before: dict, **extra) -> None:
    entry = {"op": op, "curve": curve.label, "before": before["chain"], "after": state.selfints()}
    entry.update(extra)
    entry["blocks_after"] = state.snapshot()["blocks"]
    state.op_log.append(entry)


def _apply_flip(state: FamilyState, curve_id: int) -> dict:
    idx = state.index_of(curve_id)
    c = state.curves[idx]
    if c.selfint != -1 or c.role == SECTION:
        raise PreconditionViolation(f"{c.label} is not a (-1)-curve off the section")
    if c.block is not None:
        raise PreconditionViolation(f"{c.label} lies inside a singularity")
    sides = [i for i in _neighbors(state, idx) if state.curves[i].block is not None]
    if len(sides) == 2:
        raise UnsupportedConfiguration(f"{c.label} meets two singular points (mk2A)")
    if not sides:
        raise PreconditionViolation(f"{c.label} does not meet a singular point")
    side = sides[0]
    block = state.curves[side].block
    s, t = state.blocks()[block]
    if side not in (s, t - 1):
        raise UnsupportedConfiguration(f"{c.label} meets an inner curve of its block (mk1A with 1 < i < s)")
    if s == t - 1:
        on_left = side < idx
    else:
        on_left = side == t - 1
    # E_1, ..., E_s with E_s touching c
    members = [cv.id for cv in state.curves[s:t]]
    if not on_left:
        members.reverse()
    # When c is itself a limit component of some D_j it simply leaves that
    # class; only the classes of R gain the flipped curve.
    dropped = state.classes_containing(c.id)
    other = [i for i in _neighbors(state, idx) if i != side]
    r_id = state.curves[other[0]].id if other else None

    before = state.snapshot()
    e_before = tuple(-state.curve(m).selfint for m in members)
    _blow_down(state, idx)
    contracted = 1
    cascade = set(members[1:])
    while True:
        hit = [m for m in cascade if state.curve(m).selfint == -1]
        if not hit:
            break
        cascade.discard(hit[0])
        _blow_down(state, state.index_of(hit[0]))
        contracted += 1

    survivors = [m for m in members if any(cv.id == m for cv in state.curves)]
    assert survivors and survivors[0] == members[0], "the initial-end curve E_1 must survive"
    c_plus = state.curve(members[0])
    c_plus.block = None
    new_block = None
    if len(survivors) > 1:
        new_block = state.next_block
        state.next_block += 1
        for m in survivors[1:]:
            state.curve(m).block = new_block
    if r_id is not None:
        for j in state.classes_containing(r_id):
            state.ledger[j].append(c_plus.id)

    # both block entries are listed from E_1 towards the flipping curve
    new_chain = tuple(-state.curve(m).selfint for m in survivors[1:])
    info = {
        "block_before": list(e_before),
        "block_after": list(new_chain),
        "flipped_selfint": c_plus.selfint,
        "contracted": contracted,
        "left_classes": dropped,
    }
    _log(state, FLIP, c, before, **info)
    return info


def usual_flip(state: FamilyState, curve_id: int) -> FamilyState:
    """Flip the mk1A neighbourhood of ``curve_id``; returns a new state."""
    new = state.copy()
    _apply_flip(new, curve_id)
    return new


def attachments(state: FamilyState, curve_id: int) -> dict[int, int]:
    """att_j = sum of intersections of the curve with the limit components of D_j."""
    idx = state.index_of(curve_id)
    near = {state.curves[i].id for i in _neighbors(state, idx)}
    out = {}
    for j, members in state.ledger.items():
        v = sum(-1 if g == curve_id else 1 if g in near else 0 for g in members)
        if v:
            out[j] = v
    return out


def _apply_contract(state: FamilyState, curve_id: int) -> int | None:
    idx = state.index_of(curve_id)
    c = state.curves[idx]
    if c.selfint != -1 or c.role == SECTION or c.block is not None:
        raise PreconditionViolation(f"{c.label} is not a smooth (-1)-curve off the section")
    if any(state.curves[i].block is not None for i in _neighbors(state, idx)):
        raise PreconditionViolation(f"{c.label} passes through a singular point")
    before = state.snapshot()
    sole = [j for j in state.classes_containing(curve_id) if state.ledger[j] == [curve_id]]
    if sole:
        j = sole[0]
        del state.ledger[j]
        _blow_down(state, idx)
        _log(state, BOUNDARY_EVENT, c, before, boundary=j, attached=None)
        return None
    att = attachments(state, curve_id)
    attached = None
    if att:
        if len(att) != 1 or list(att.values()) != [1]:
            raise AmbiguousAttachment(f"{c.label} has attachment vector {att}")
        (attached,) = att
        state.d[attached] = state.d.get(attached, 0) + 1
        state.discovered.append({"curve": c.label, "attachments": {attached: 1}})
    _blow_down(state, idx)
    _log(state, CONTRACT, c, before, attached=attached)
    return attached


def ik_contract(state: FamilyState, curve_id: int) -> FamilyState:
    """Iitaka-Kodaira contraction of a smooth (-1)-curve; returns a new state."""
    new = state.copy()
    _apply_contract(new, curve_id)
    return new


@dataclass
class MmpTrace:
    final_state: FamilyState
    flips: int
    contractions: int
    d_vector: Chain

    @property
    def op_log(self) -> list[dict]:
        return self.final_state.op_log


def default_step_budget(length: int) -> int:
    env = os.environ.get("SINGCALC_STEP_BUDGET")
    if env:
        return int(env)
    return 10 * length * length


def _enabled_minus_one(state: FamilyState) -> list[int]:
    out = []
    for i, c in enumerate(state.curves):
        if c.selfint == -1 and c.role != SECTION and c.block is None:
            if not any(state.curves[k].block is not None for k in _neighbors(state, i)):
                out.append(c.id)
    return out


def run_controlled_mmp(
    state: FamilyState,
    budget: int | None = None,
    order: str = "interior-first",
    observer: Callable[[FamilyState], None] | None = None,
) -> MmpTrace:
    """Remove every Wahl block by flips and contractions, then contract leftovers.

    Blocks are handled from the one nearest the section inwards.  Once the
    fibre is smooth, enabled (-1)-curves are contracted one at a time, taking
    the one farthest from the section (``order="interior-first"``) or the one
    nearest to it (``order="boundary-first"``).  ``observer`` is called with
    the working state after every step.
    """
    if order not in ("interior-first", "boundary-first"):
        raise ValueError(f"unknown contraction order {order!r}")
    state = state.copy()
    if budget is None:
        budget = default_step_budget(len(state.curves))
    steps = flips = contractions = 0

    def tick():
        nonlocal steps
        if observer is not None and steps:
            observer(state)
        steps += 1
        if steps > budget:
            raise StepBudgetExceeded(f"MMP did not finish within {budget} steps")

    while True:
        spans = state.blocks()
        if not spans:
            break
        tick()
        block = max(spans, key=lambda b: spans[b][0])
        _, t = spans[block]
        target = next((i for i in range(t, len(state.curves)) if state.curves[i].selfint == -1
                       and state.curves[i].role != SECTION), None)
        if target is None:
            raise PreconditionViolation("no (-1)-curve between the last singular point and the section")
        cid = state.curves[target].id
        if target == t:
            _apply_flip(state, cid)
            flips += 1
        else:
            _apply_contract(state, cid)
            contractions += 1

    while True:
        enabled = _enabled_minus_one(state)
        if not enabled:
            break
        tick()
        _apply_contract(state, enabled[0] if order == "interior-first" else enabled[-1])
        contractions += 1

    if observer is not None and steps:
        observer(state)
    return MmpTrace(state, flips, contractions, state.d_vector())


def flip_closed_form(block: Sequence[int]) -> tuple[Chain, int]:
    """New Wahl chain and self-intersection of C+ for a usual flip, by formula.

    With i the last index with e_i >= 3, the new singularity is
    [e_2, ..., e_i - 1] and C+ is the image of E_1.
    """
    e = tuple(block)
    i = max(k for k, v in enumerate(e) if v >= 3)
    if i == 0:
        return (), -(e[0] - 1)
    return e[1:i] + (e[i] - 1,), -e[0]


def contracted_type(block: Sequence[int]):
    """Delta/Omega of the singularity obtained by contracting C and the block."""
    e = list(block)
    e[-1] -= 1
    return eval_chain(e)
