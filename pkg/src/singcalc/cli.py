"""Command line front-end: ``singcalc <subcommand> ...``.

Exit status is 0 on success, 1 on a domain error (the error is written to
stderr as JSON) and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from math import gcd
from pathlib import Path

from .cfrac import dual_chain, expand_fraction, format_chain
from .dot import resolution_to_dot, state_to_dot
from .errors import InvalidInput, SingcalcError
from .identify import milnor_fiber_descriptor, pair_json, verify_correspondence
from .kset import k_set
from .mmp import run_controlled_mmp
from .resolutions import (
    DecoratedResolution,
    compactify,
    crepant_m_resolution,
    enumerate_p_resolutions_bruteforce,
    maximal_resolution,
)


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _load_resolution(source: str, n: int, a: int) -> DecoratedResolution:
    """An index into the ``pres`` listing, a JSON file path, or inline JSON."""
    if source.lstrip("-").isdigit():
        listing = enumerate_p_resolutions_bruteforce(n, a)
        idx = int(source)
        if not 0 <= idx < len(listing):
            raise InvalidInput(f"P-resolution index {idx} out of range (1/{n}(1,{a}) has {len(listing)})")
        return listing[idx]
    path = Path(source)
    text = path.read_text() if path.is_file() else source
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"--pres is neither an index, a file nor JSON: {exc}") from None
    return DecoratedResolution.from_json(payload)


def cmd_cf(args, out):
    chain = expand_fraction(args.n, args.a)
    out.write((_dump(list(chain)) if args.json else format_chain(chain)) + "\n")


def cmd_dual(args, out):
    chain = dual_chain(expand_fraction(args.n, args.a))
    out.write((_dump(list(chain)) if args.json else format_chain(chain)) + "\n")


def cmd_ke(args, out):
    descs = k_set(args.n, args.a)
    if args.json:
        out.write(_dump([list(d.n_tuple) for d in descs]) + "\n")
    else:
        for d in descs:
            out.write(f"({','.join(map(str, d.n_tuple))})  {d.filling_name}\n")


def cmd_maxres(args, out):
    res = maximal_resolution(args.n, args.a)
    if args.json:
        out.write(_dump({"chain": list(res.chain), "alphas": [str(x) for x in res.alphas]}) + "\n")
    else:
        out.write(format_chain(res.chain) + "\n")
        out.write("alpha: " + " ".join(str(x) for x in res.alphas) + "\n")


def cmd_pres(args, out):
    listing = enumerate_p_resolutions_bruteforce(args.n, args.a)
    if args.json:
        out.write(_dump([dec.to_json() for dec in listing]) + "\n")
    elif args.dot:
        for i, dec in enumerate(listing):
            out.write(resolution_to_dot(dec, f"P{i}"))
    else:
        for i, dec in enumerate(listing):
            out.write(f"{i}: {dec}\n")


def cmd_crepant(args, out):
    dec = crepant_m_resolution(_load_resolution(args.pres, args.n, args.a))
    if args.json:
        out.write(_dump(dec.to_json()) + "\n")
    elif args.dot:
        out.write(resolution_to_dot(dec, "M"))
    else:
        out.write(f"{dec}\n")


def cmd_mmp(args, out):
    dec = _load_resolution(args.pres, args.n, args.a)
    state = compactify(crepant_m_resolution(dec), args.n, args.a)
    frames = [state_to_dot(state, "step0")]

    def keep_frame(current):
        frames.append(state_to_dot(current, f"step{len(frames)}"))

    trace = run_controlled_mmp(state, budget=args.step_budget, observer=keep_frame if args.dot_frames else None)
    for entry in trace.op_log:
        out.write(_dump(entry) + "\n")
    out.write(_dump({"flips": trace.flips, "contractions": trace.contractions, "d": list(trace.d_vector)}) + "\n")
    if args.dot_frames:
        folder = Path(args.dot_frames)
        folder.mkdir(parents=True, exist_ok=True)
        for k, text in enumerate(frames):
            (folder / f"step{k:03d}.dot").write_text(text)


def cmd_identify(args, out):
    if args.pres is not None:
        decs = [_load_resolution(args.pres, args.n, args.a)]
    else:
        decs = enumerate_p_resolutions_bruteforce(args.n, args.a)
    for dec in decs:
        out.write(_dump(pair_json(dec, milnor_fiber_descriptor(dec, args.n, args.a))) + "\n")


def cmd_verify(args, out) -> int:
    report = verify_correspondence(args.n, args.a)
    if args.json:
        out.write(_dump(report.to_json()) + "\n")
    else:
        out.write(f"bijective: {str(report.bijective).lower()} ({len(report.pairs)} pairs)\n")
        for line in report.failures:
            out.write(f"  {line}\n")
    return 0 if report.bijective else 1


def _sweep_one(pair):
    n, a = pair
    report = verify_correspondence(n, a)
    return n, a, report.bijective, report.k_set_size, report.failures


def sweep_pairs(min_n: int, max_n: int):
    """Coprime (n, a) with a dual expansion of length at least 2."""
    return [(n, a) for n in range(min_n, max_n + 1) for a in range(1, n - 1) if gcd(n, a) == 1]


def cmd_sweep(args, out) -> int:
    pairs = sweep_pairs(args.min_n, args.max_n)
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_sweep_one, pairs, chunksize=8))
    else:
        results = [_sweep_one(p) for p in pairs]
    bad = [r for r in results if not r[2]]
    if args.json:
        out.write(_dump({
            "pairs": len(results),
            "failures": [{"n": n, "a": a, "failures": f} for n, a, _, _, f in bad],
            "bijective": not bad,
        }) + "\n")
    else:
        for n, a, _, _, failures in bad:
            out.write(f"1/{n}(1,{a}): {'; '.join(failures)}\n")
        out.write(f"sweep {args.min_n}..{args.max_n}: {len(results)} pairs, {len(bad)} failing\n")
    return 1 if bad else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="singcalc", description="Combinatorics of cyclic quotient surface singularities.")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_na(name, help_text, formats=("json",)):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("n", type=int)
        p.add_argument("a", type=int)
        fmt = p.add_mutually_exclusive_group()
        if "json" in formats:
            fmt.add_argument("--json", action="store_true", help="machine-readable output")
        if "dot" in formats:
            fmt.add_argument("--dot", action="store_true", help="Graphviz output")
        p.set_defaults(json=False, dot=False)
        return p

    with_na("cf", "continued fraction expansion of n/a").set_defaults(func=cmd_cf)
    with_na("dual", "dual expansion, i.e. of n/(n-a)").set_defaults(func=cmd_dual)
    with_na("ke", "zero continued fractions K_e(n/(n-a))").set_defaults(func=cmd_ke)
    with_na("maxres", "maximal resolution and log discrepancies").set_defaults(func=cmd_maxres)
    with_na("pres", "all P-resolutions", ("json", "dot")).set_defaults(func=cmd_pres)

    p = with_na("crepant", "crepant M-resolution of a P-resolution", ("json", "dot"))
    p.add_argument("--pres", required=True, help="index in the pres listing, JSON file, or inline JSON")
    p.set_defaults(func=cmd_crepant)

    p = with_na("mmp", "run the controlled MMP, one JSON object per step", ())
    p.add_argument("--pres", required=True, help="index in the pres listing, JSON file, or inline JSON")
    p.add_argument("--step-budget", type=int, default=None)
    p.add_argument("--dot-frames", metavar="DIR", help="also write one DOT file per step")
    p.set_defaults(func=cmd_mmp)

    p = with_na("identify", "pair P-resolutions with fillings", ())
    target = p.add_mutually_exclusive_group()
    target.add_argument("--all", action="store_true", help="every P-resolution (default)")
    target.add_argument("--pres", help="index in the pres listing, JSON file, or inline JSON")
    p.set_defaults(func=cmd_identify)

    with_na("verify", "check the P-resolution / K_e correspondence").set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="verify every coprime (n, a) in a range")
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--min-n", type=int, default=3)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        status = args.func(args, out)
    except SingcalcError as exc:
        sys.stderr.write(_dump(exc.to_json()) + "\n")
        return 1
    return status or 0


if __name__ == "__main__":
    sys.exit(main())
