"""Command-line interface.

Exit codes: 0 success, 1 domain error (unrepairable node, insufficient data,
...), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from flowercode import __version__
from flowercode.core import FRCode, code_from_matrix, incidence_matrix, matrix_from_csv, matrix_to_csv, validate
from flowercode.dress import DressSystem, build_system, run_scenario
from flowercode.gf256 import FileBlob
from flowercode.errors import DomainError, FlowerCodeError
from flowercode.flower import (Jump, JumpFunctions, construct, cycle_table, multi_ring_node_seq, plan_from_spec,
                               rendered_rows)
from flowercode.repair import analyze
from flowercode.sequences import (canonicalize_dropping, decode_chi, decode_dropping, decode_node,
                                  dropping_to_node, format_sequence, incidence_from_dropping, node_sequence_of,
                                  node_to_dropping, parse_sequence, ring_layout)

log = logging.getLogger("flowercode")

SEQUENCE_KINDS = ("dropping", "node", "chi")


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_json(path: str) -> dict:
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from None


def load_code(path: str, strict: bool = False) -> FRCode:
    """An FR code JSON, a construction spec JSON, or a CSV incidence matrix."""
    if path.endswith(".csv"):
        code = code_from_matrix(matrix_from_csv(_read(path)))
    else:
        data = _load_json(path)
        code = construct(data) if "kind" in data else FRCode.from_dict(data)
    if strict:
        problems = validate(code, strict=True)
        if problems:
            raise UsageError(f"{path}: " + "; ".join(problems))
    return code


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _code_text(code: FRCode) -> str:
    lines = [f"U{i}: " + (", ".join(f"P{p}" for p in node) or "-") for i, node in enumerate(code.nodes, start=1)]
    prof = code.profiles()
    lines.append(f"(n, theta, alpha, rho) = ({code.n}, {code.theta}, {code.alpha}, {code.rho})")
    lines.append("alpha_i = " + str(list(prof.alpha_vec)) + "  rho_j = " + str(list(prof.rho_vec)))
    return "\n".join(lines) + "\n"


def cmd_construct(args) -> int:
    kind = args.kind
    if kind in SEQUENCE_KINDS:
        seq = parse_sequence(_read(args.spec), kind)
        code = {"dropping": decode_dropping, "node": decode_node, "chi": decode_chi}[kind](seq)
        grid = ring_layout(canonicalize_dropping(seq)) if kind == "dropping" else None
    else:
        spec = _load_json(args.spec)
        if kind:
            spec["kind"] = kind
        code = construct(spec)
        grid = None
        if spec["kind"] == "single_ring":
            grid = cycle_table(plan_from_spec(spec))
        elif spec["kind"] == "multi_ring":
            jumps = JumpFunctions(Jump.from_json(spec.get("f_in", 0)), Jump.from_json(spec.get("f_ex", 0)))
            s = multi_ring_node_seq(code.n, code.theta, int(spec["rho"]), jumps)
            grid = ring_layout(node_to_dropping(s))
    if args.strict:
        problems = validate(code, strict=True)
        if problems:
            raise UsageError("; ".join(problems))
    if args.format == "text":
        text = ""
        if grid is not None:
            rows = rendered_rows(grid)
            text += "".join(f"U{i}: {row}  | {a}\n" for i, (row, a)
                            in enumerate(zip(rows, code.profiles().alpha_vec), start=1))
        _emit(text + _code_text(code), args.out)
    else:
        _emit(code.to_json() + "\n", args.out)
    return 0


def cmd_convert(args) -> int:
    src, dst = args.src, args.dst
    if src in SEQUENCE_KINDS:
        seq = parse_sequence(_read(args.input), src)
    elif src == "code":
        seq = load_code(args.input)
    elif src == "matrix":
        seq = code_from_matrix(matrix_from_csv(_read(args.input)))
    else:
        raise UsageError(f"unknown source form {src!r}")

    if src == "dropping" and dst == "dropping":
        out = format_sequence(canonicalize_dropping(seq))
    elif src == "dropping" and dst == "node":
        out = format_sequence(dropping_to_node(seq))
    elif src == "dropping" and dst == "matrix":
        out = matrix_to_csv(incidence_from_dropping(seq))
    elif src == "node" and dst == "dropping":
        out = format_sequence(node_to_dropping(seq))
    elif dst == "code":
        code = _to_code(src, seq)
        out = code.to_json() + "\n"
    elif dst == "matrix":
        out = matrix_to_csv(incidence_matrix(_to_code(src, seq)))
    elif src in ("code", "matrix", "node") and dst in ("node", "dropping"):
        node_seq = seq if src == "node" else node_sequence_of(seq)
        out = format_sequence(node_seq if dst == "node" else node_to_dropping(node_seq))
    else:
        raise UsageError(f"no conversion from {src} to {dst}")
    _emit(out, args.out)
    return 0


def _to_code(src: str, obj) -> FRCode:
    if src == "dropping":
        return decode_dropping(obj)
    if src == "node":
        return decode_node(obj)
    if src == "chi":
        return decode_chi(obj)
    return obj


def cmd_analyze(args) -> int:
    report = analyze(load_code(args.code, strict=args.strict))
    for w in report.warnings:
        log.warning(w)
    if args.format == "text":
        _emit(report.render_table(), args.out)
    else:
        _emit(json.dumps(report.to_dict(), indent=2) + "\n", args.out)
    return 0


def cmd_export(args) -> int:
    _emit(matrix_to_csv(incidence_matrix(load_code(args.code, strict=args.strict))), args.out)
    return 0


def cmd_simulate(args) -> int:
    code = load_code(args.code, strict=args.strict)
    if args.file:
        try:
            payload = Path(args.file).read_bytes()
        except OSError as exc:
            raise UsageError(f"cannot read {args.file}: {exc.strerror}") from None
    else:
        payload = np.random.default_rng(args.seed).integers(0, 256, args.size, dtype=np.uint8).tobytes()
    transcript = run_scenario(code, payload, args.B, args.fail, args.strategy)
    if args.snapshot:
        Path(args.snapshot).write_bytes(build_system(code, FileBlob(payload, args.B)).to_bytes())
        transcript["snapshot"] = args.snapshot
    _emit(json.dumps(transcript, indent=2) + "\n", args.out)
    return 0 if all(v == "pass" for v in transcript["checks"].values()) else 1


def cmd_inspect(args) -> int:
    try:
        system = DressSystem.from_bytes(Path(args.snapshot).read_bytes())
    except OSError as exc:
        raise UsageError(f"cannot read {args.snapshot}: {exc.strerror}") from None
    info = {
        "n": system.code.n,
        "theta": system.code.theta,
        "B": system.B,
        "length": system.length,
        "failed": sorted(system.failed),
        "stored_blocks": system.stored_blocks(),
        "k_star": system.min_reconstruction_degree(),
    }
    _emit(json.dumps(info, indent=2) + "\n", args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="flowercode", description="Flower code construction, analysis and simulation")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, code_input=True):
        if code_input:
            sp.add_argument("--code", required=True, help="FR code JSON, construction spec JSON, or CSV matrix")
        sp.add_argument("--out", help="write results here instead of stdout")
        sp.add_argument("--strict", action="store_true", help="reject codes with unstored packets or empty nodes")

    c = sub.add_parser("construct", help="build a code from a construction spec or sequence file")
    c.add_argument("--kind", choices=["single_ring", "multi_ring", *SEQUENCE_KINDS])
    c.add_argument("--spec", required=True)
    c.add_argument("--format", choices=["json", "text"], default="json")
    common(c, code_input=False)
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("convert", help="convert between dropping/node/chi sequences, codes and matrices")
    v.add_argument("--from", dest="src", required=True, choices=[*SEQUENCE_KINDS, "code", "matrix"])
    v.add_argument("--to", dest="dst", required=True, choices=["dropping", "node", "code", "matrix"])
    v.add_argument("--in", dest="input", required=True)
    v.add_argument("--out")
    v.set_defaults(func=cmd_convert)

    a = sub.add_parser("analyze", help="repair degrees and helper sets")
    a.add_argument("--format", choices=["json", "text"], default="json")
    common(a)
    a.set_defaults(func=cmd_analyze)

    e = sub.add_parser("export", help="write the incidence matrix as CSV")
    common(e)
    e.set_defaults(func=cmd_export)

    s = sub.add_parser("simulate", help="run a DRESS failure/repair/collect scenario")
    common(s)
    s.add_argument("--file", help="payload file (default: random bytes, see --size/--seed)")
    s.add_argument("--size", type=int, default=1024)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--B", type=int, required=True, help="message symbols per stripe")
    s.add_argument("--fail", type=int, required=True, help="node to fail and repair")
    s.add_argument("--strategy", choices=["min_contact", "sdr"], default="min_contact")
    s.add_argument("--snapshot", help="also write the stored system snapshot here")
    s.set_defaults(func=cmd_simulate)

    i = sub.add_parser("inspect", help="summarize a stored system snapshot")
    i.add_argument("--snapshot", required=True)
    i.add_argument("--out")
    i.set_defaults(func=cmd_inspect)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (UsageError, FlowerCodeError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
