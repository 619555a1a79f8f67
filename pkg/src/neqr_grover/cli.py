"""Command-line front end.

Subcommands: ``encode``, ``search``, ``semiclassical``, ``scan``, ``report``.
Exit status: 0 ok, 1 usage error, 2 input or parse error, 3 capacity or
no-marked-items error.

Every JSON document carries a ``manifest`` block. Its ``timestamp`` is the
only field that varies between identical runs; set ``SOURCE_DATE_EPOCH`` to
pin it.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .errors import (
    CapacityExceededError,
    ImageIOError,
    InvalidArgumentError,
    InvalidImageError,
    NoMarkedItemsError,
    ParseError,
)
from .grover import SearchMode, run_search, semiclassical_runs
from .image import DarkPixel, ThresholdConfig, classical_scan, load_pgm
from .neqr import decode_outcome, encode_neqr, prepare_state
from .qasm import circuit_to_qasm
from .report import complexity_report
from .statevector import bitstring

SCHEMA_VERSION = "1.0"
CSV_HEADER = ["bitstring", "x", "y", "intensity", "exact_probability", "count"]

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_SEARCH = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    when = datetime.fromtimestamp(int(epoch), timezone.utc) if epoch else datetime.now(timezone.utc)
    return when.isoformat(timespec="seconds")


def _manifest(args, **extra) -> dict:
    return {
        "command": args.command,
        "image": getattr(args, "image", None),
        "threshold": getattr(args, "threshold", None),
        "mode": getattr(args, "mode", None),
        "shots": getattr(args, "shots", None),
        "seed": getattr(args, "seed", None),
        **extra,
        "tool_version": __version__,
        "timestamp": _timestamp(),
    }


def _document(kind: str, args, body: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, "kind": kind, "manifest": _manifest(args), **body}


def _dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise ImageIOError(f"cannot write {path}: {exc.strerror or exc}") from exc


def _pixels_json(pixels: list[DarkPixel]) -> list[dict]:
    return [{"x": p.x, "y": p.y, "intensity": p.intensity} for p in pixels]


def _print_pixels(pixels: list[DarkPixel]) -> None:
    for p in pixels:
        print(f"{p.x},{p.y},{p.intensity}")


def cmd_encode(args) -> None:
    prepared = encode_neqr(load_pgm(args.image))
    qasm = circuit_to_qasm(prepared.circuit)
    if args.qasm:
        _write(args.qasm, qasm)
    if args.state:
        layout = prepared.layout
        state = prepare_state(prepared)
        amplitudes = []
        for i, a in enumerate(state.amplitudes):
            if abs(a) <= 1e-12:
                continue
            bits = bitstring(i, state.qubit_count)
            x, y, v = decode_outcome(bits, layout)
            amplitudes.append({
                "index": i, "bitstring": bits, "re": float(a.real), "im": float(a.imag),
                "x": x, "y": y, "intensity": v,
            })
        body = {
            "qubit_count": state.qubit_count,
            "layout": {"n": layout.n, "q": layout.q, "total_qubits": layout.total_qubits},
            "gate_count": len(prepared.circuit),
            "amplitudes": amplitudes,
        }
        _write(args.state, _dumps(_document("state", args, body)))
    if not (args.qasm or args.state):
        sys.stdout.write(qasm)


def cmd_search(args) -> None:
    image = load_pgm(args.image)
    result = run_search(image, ThresholdConfig(args.threshold), args.mode, args.shots, args.seed)
    plan = result.plan
    outcomes = [
        {
            "rank": rank,
            "bitstring": o.bitstring,
            "x": o.x,
            "y": o.y,
            "intensity": o.intensity,
            "dark": o.dark,
            "in_image": o.in_image,
            "exact_probability": o.exact_probability,
            "count": o.count,
        }
        for rank, o in enumerate(result.outcomes, start=1)
    ]
    body = {
        "plan": {
            "mode": plan.mode.value,
            "search_space_size": plan.search_space_size,
            "marked_count": plan.marked_count,
            "iterations": plan.iterations,
        },
        "oracle_invocations": result.oracle_invocations,
        "total_dark_probability": result.total_dark_probability,
        "predicate_dark_probability": result.predicate_dark_probability,
        "outcomes": outcomes,
    }
    _write(args.out, _dumps(_document("search", args, body)))

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for o in outcomes:
        writer.writerow([o[k] for k in CSV_HEADER])
    _write(args.csv or str(Path(args.out).with_suffix(".csv")), buf.getvalue())

    for o in result.top():
        print(f"{o.x},{o.y},{o.intensity}\t{o.exact_probability:.6f}\t{o.count}")


def cmd_semiclassical(args) -> None:
    image = load_pgm(args.image)
    runs = semiclassical_runs(image, ThresholdConfig(args.threshold), args.seed, args.shots)
    pixels = [DarkPixel(*r.located, image.pixel(*r.located)) for r in runs]
    _print_pixels(pixels)
    if args.out:
        body = {
            "pixels": _pixels_json(pixels),
            "runs": [
                {
                    "marked": {"x": r.marked[0], "y": r.marked[1]},
                    "located": {"x": r.located[0], "y": r.located[1]},
                    "iterations": r.plan.iterations,
                    "marked_probability": r.marked_probability,
                    "histogram": r.histogram,
                }
                for r in runs
            ],
        }
        _write(args.out, _dumps(_document("pixels", args, body)))


def cmd_scan(args) -> None:
    pixels = classical_scan(load_pgm(args.image), ThresholdConfig(args.threshold))
    _print_pixels(pixels)
    if args.out:
        _write(args.out, _dumps(_document("pixels", args, {"pixels": _pixels_json(pixels)})))


def cmd_report(args) -> None:
    report = complexity_report(args.n, args.q, args.marked)
    sys.stdout.write(_dumps(_document("report", args, {"report": report.to_dict()})))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="neqr-grover", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="NEQR-encode an image")
    p.add_argument("--image", required=True, help="PGM file (P2 or P5)")
    p.add_argument("--qasm", help="write the preparation circuit as OpenQASM 2.0")
    p.add_argument("--state", help="write the nonzero amplitudes as JSON")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("search", help="single-run Grover search for dark pixels")
    p.add_argument("--image", required=True)
    p.add_argument("--threshold", type=int, default=100)
    p.add_argument("--mode", choices=[SearchMode.PAPER.value, SearchMode.AMPLITUDE.value],
                   default=SearchMode.PAPER.value)
    p.add_argument("--shots", type=int, default=1024)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="JSON result path")
    p.add_argument("--csv", help="histogram CSV path (default: --out with .csv suffix)")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("semiclassical", help="per-pixel Grover over the position register")
    p.add_argument("--image", required=True)
    p.add_argument("--threshold", type=int, default=100)
    p.add_argument("--shots", type=int, default=64)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_semiclassical)

    p = sub.add_parser("scan", help="classical threshold scan")
    p.add_argument("--image", required=True)
    p.add_argument("--threshold", type=int, default=100)
    p.add_argument("--out")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("report", help="query-complexity report")
    p.add_argument("--n", type=int, required=True, help="log2 of the image side")
    p.add_argument("--q", type=int, default=8, help="intensity bits")
    p.add_argument("--marked", type=int, required=True)
    p.set_defaults(func=cmd_report)
    return parser


def run_cli(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        args.func(args)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except InvalidArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, InvalidImageError, ImageIOError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (CapacityExceededError, NoMarkedItemsError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SEARCH
    return EXIT_OK


def main() -> None:
    sys.exit(run_cli())
