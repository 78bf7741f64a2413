"""``scaffoldlab analyze`` command line entry point."""

from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .errors import ConfigError, ContractViolation, PrecisionExhausted, ScaffoldLabError
from .report import analyze, load_config, render_report

EXIT_OK, EXIT_CONFIG, EXIT_PRECISION, EXIT_CONTRACT = 0, 1, 2, 3


def _run_one(path: str, fmt: str, precision, window) -> tuple[int, bytes, str]:
    """Analyze one config file; returns (exit code, rendered report, error message)."""
    try:
        cfg = load_config(path)
        report = analyze(cfg, precision=precision, window=window)
    except ConfigError as exc:
        return EXIT_CONFIG, b"", f"{path}: config error: {exc}"
    except PrecisionExhausted as exc:
        return EXIT_PRECISION, b"", f"{path}: {exc}"
    except ContractViolation as exc:
        return EXIT_CONTRACT, b"", f"{path}: contract violation: {exc}"
    except ScaffoldLabError as exc:
        return exc.exit_code, b"", f"{path}: {exc}"
    return EXIT_OK, render_report(report, fmt), ""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="scaffoldlab", description="Galois scaffolds for cyclic p^n-extensions of F_p((t)).")
    parser.add_argument("-v", "--verbose", action="store_true", help="log pipeline stages to stderr")
    sub = parser.add_subparsers(dest="command", required=True)
    an = sub.add_parser("analyze", help="analyze one or more case files")
    an.add_argument("configs", nargs="+", metavar="config.json")
    fmt = an.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
    fmt.add_argument("--text", dest="fmt", action="store_const", const="text")
    an.add_argument("--out", metavar="DIR", help="write <stem>.json / <stem>.txt into DIR instead of stdout")
    an.add_argument("--precision", type=int, metavar="N", help="initial series precision (overrides the config)")
    an.add_argument("--window", type=int, nargs=2, metavar=("LO", "HI"), help="scaffold verification window [LO, HI)")
    an.add_argument("-j", "--jobs", type=int, default=None, help="worker processes for several configs")
    an.set_defaults(fmt="json")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    if args.window is not None and args.window[0] >= args.window[1]:
        print("error: --window needs LO < HI", file=sys.stderr)
        return EXIT_CONFIG
    window = tuple(args.window) if args.window else None
    jobs = [(c, args.fmt, args.precision, window) for c in args.configs]
    if len(jobs) > 1 and args.jobs != 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_one, *zip(*jobs)))
    else:
        results = [_run_one(*job) for job in jobs]

    out_dir = Path(args.out) if args.out else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
    code = EXIT_OK
    for (path, *_), (rc, body, err) in zip(jobs, results):
        code = max(code, rc)
        if rc:
            print(err, file=sys.stderr)
            continue
        if out_dir:
            suffix = ".json" if args.fmt == "json" else ".txt"
            (out_dir / (Path(path).stem + suffix)).write_bytes(body)
        else:
            sys.stdout.buffer.write(body)
            sys.stdout.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
