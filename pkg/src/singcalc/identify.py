"""Milnor fibres versus minimal symplectic fillings for cyclic quotients.

The forward direction runs the controlled MMP on a compactified M-resolution
and reads off how many (-1)-curves of the general fibre meet each boundary
curve.  The backward direction rebuilds a P-resolution from a zero continued
fraction by undoing those contractions.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .cfrac import expand_fraction, eval_chain, is_zero_chain
from .errors import InvalidDescriptor, InvalidInput, NotInK, SingcalcError
from .kset import FillingDescriptor, k_set
from .mmp import MmpTrace, run_controlled_mmp
from .resolutions import (
    DecoratedResolution,
    compactify,
    crepant_m_resolution,
    enumerate_p_resolutions_bruteforce,
    validate_p_resolution,
)
from .tsing import SingularityType

log = logging.getLogger(__name__)


def run_forward(dec: DecoratedResolution, n: int, a: int) -> MmpTrace:
    """Crepant M-resolution, compactification and MMP for a P- or M-resolution."""
    if not (validate_p_resolution(dec, n, a, "P").ok or validate_p_resolution(dec, n, a, "M").ok):
        raise InvalidInput(f"{dec} is neither a P- nor an M-resolution of 1/{n}(1,{a})")
    return run_controlled_mmp(compactify(crepant_m_resolution(dec), n, a))


def milnor_fiber_descriptor(dec: DecoratedResolution, n: int, a: int) -> FillingDescriptor:
    trace = run_forward(dec, n, a)
    bounds = expand_fraction(n, n - a)
    n_tuple = tuple(b - d for b, d in zip(bounds, trace.d_vector))
    if min(n_tuple) < 1 or not is_zero_chain(n_tuple):
        raise NotInK(f"MMP produced {list(n_tuple)}, which is not a zero continued fraction below {list(bounds)}")
    desc = FillingDescriptor(n_tuple, bounds, SingularityType(n, a))
    if len(bounds) > 1 and desc not in k_set(n, a):
        raise NotInK(f"{list(n_tuple)} is not in K_{len(bounds)}")
    return desc


def p_resolution_from_descriptor(desc: FillingDescriptor, n: int, a: int) -> DecoratedResolution:
    """Rebuild the P-resolution whose Milnor fibre is the given filling.

    Works on the boundary chain D_e, ..., D_1 with D_1 of self-intersection
    -a_1 (one more blow-up at the section than in the compactification), each
    D_i carrying d_i attached (-1)-curves.  Pieces of the resolution are
    produced starting next to the boundary.
    """
    bounds = expand_fraction(n, n - a)
    if tuple(desc.bounds) != bounds or len(desc.n_tuple) != len(bounds):
        raise InvalidDescriptor(f"descriptor bounds {list(desc.bounds)} do not belong to 1/{n}(1,{a})")
    d = [b - x for b, x in zip(bounds, desc.n_tuple)]
    if min(d) < 0 or min(desc.n_tuple) < 1:
        raise InvalidDescriptor(f"{list(desc.n_tuple)} is not bounded entrywise by {list(bounds)}")

    # [c, attached] from D_e down to D_1
    curves = [[bounds[j], d[j]] for j in range(len(bounds) - 1, -1, -1)]
    pieces: list[tuple[str, tuple[int, ...]]] = []

    def exhausted():
        return len(curves) == 1 and curves[0] == [0, 0]

    for _ in range(sum(d) + 1):
        if exhausted():
            break
        first = curves[0]
        if first[1] > 0:
            case = "a"
            if first[1] > 1:
                pieces.append(("block", (2,) * (first[1] - 1)))
            target = 0
        else:
            case = "b"
            r1 = next((i for i in range(1, len(curves)) if curves[i][1] > 0), None)
            if r1 is None:
                raise InvalidDescriptor(f"{list(desc.n_tuple)}: no attached curve left but the chain is not exhausted")
            value = eval_chain([c for c, _ in curves[:r1]])
            if value.is_infinite or not value.num > value.den >= 1:
                raise InvalidDescriptor(f"{list(desc.n_tuple)}: boundary segment evaluates to {value}")
            dd = curves[r1][1]
            np_, ap = value.num, value.den
            pieces.append(("block", expand_fraction(dd * np_ * np_, dd * np_ * ap - 1)))
            target = r1
        # contract the attached curves of the target, then boundary images
        curves[target][0] -= curves[target][1]
        curves[target][1] = 0
        m = 0
        while True:
            i = next((k for k, (c, att) in enumerate(curves) if c == 1 and att == 0), None)
            if i is None or len(curves) == 1:
                break
            if i == 0:
                m += 1
            for k in (i - 1, i + 1):
                if 0 <= k < len(curves):
                    curves[k][0] -= 1
            del curves[i]
        if exhausted():
            break
        pieces.append(("kept", (2 + m if case == "a" else 1 + m,)))
    else:
        raise InvalidDescriptor(f"{list(desc.n_tuple)}: backward algorithm did not terminate")
    if not exhausted():
        raise InvalidDescriptor(f"{list(desc.n_tuple)}: boundary chain was not exhausted")

    chain: list[int] = []
    spans = []
    for kind, entries in reversed(pieces):
        if kind == "block":
            spans.append((len(chain), len(chain) + len(entries)))
        chain.extend(entries)
    return DecoratedResolution(tuple(chain), tuple(spans))


@dataclass
class CorrespondenceReport:
    singularity: SingularityType
    pairs: list[tuple[DecoratedResolution, FillingDescriptor]] = field(default_factory=list)
    bijective: bool = False
    k_set_size: int = 0
    p_resolution_count: int = 0
    failures: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        s = self.singularity
        return {
            "n": s.n,
            "a": s.a,
            "bijective": self.bijective,
            "k_set_size": self.k_set_size,
            "p_resolution_count": self.p_resolution_count,
            "pairs": [pair_json(dec, desc) for dec, desc in self.pairs],
            "failures": self.failures,
        }


def pair_json(dec: DecoratedResolution, desc: FillingDescriptor) -> dict:
    return {
        "p_resolution": dec.to_json(),
        "descriptor": list(desc.n_tuple),
        "filling": desc.filling_name,
    }


def verify_correspondence(n: int, a: int, check_count: bool = True) -> CorrespondenceReport:
    report = CorrespondenceReport(SingularityType(n, a))
    descs = k_set(n, a)
    report.k_set_size = len(descs)
    images = set()
    for desc in descs:
        try:
            dec = p_resolution_from_descriptor(desc, n, a)
            check = validate_p_resolution(dec, n, a)
            if not check.ok:
                report.failures.append(f"{list(desc.n_tuple)} -> {dec}: not a P-resolution ({'; '.join(check.messages)})")
                continue
            back = milnor_fiber_descriptor(dec, n, a)
        except SingcalcError as exc:
            report.failures.append(f"{list(desc.n_tuple)}: [{exc.code}] {exc}")
            continue
        if back != desc:
            report.failures.append(f"{list(desc.n_tuple)} -> {dec} -> {list(back.n_tuple)}")
            continue
        if dec in images:
            report.failures.append(f"{dec} reached twice")
        images.add(dec)
        report.pairs.append((dec, desc))
    if check_count:
        report.p_resolution_count = len(enumerate_p_resolutions_bruteforce(n, a))
        if report.p_resolution_count != report.k_set_size:
            report.failures.append(f"{report.p_resolution_count} P-resolutions but |K| = {report.k_set_size}")
    else:
        report.p_resolution_count = len(images)
    report.bijective = not report.failures
    if report.failures:
        log.warning("1/%d(1,%d): %d failures", n, a, len(report.failures))
    return report
