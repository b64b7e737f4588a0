"""Command-line front end: verification runs, certificates, fuzz reports.

Exit codes: 0 when every identity is PROVED (or every fuzz trial passes),
1 when any identity is REFUTED (or any counterexample is found), 2 on
errors: unreadable files, parse failures, bad flags, or an order-cap abort.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .lang import ParseError, parse_file
from .prover import (
    ABORTED,
    PROVED,
    REFUTED,
    EliminationOrderError,
    ProverConfig,
    fuzz,
    prove,
)

EXIT_OK = 0
EXIT_FALSIFIED = 1
EXIT_ERROR = 2


@dataclass
class ReportEntry:
    path: str
    line: int
    verdict: str
    ms: int
    cert_file: str = ""
    note: str = ""

    def render(self) -> str:
        out = f"{self.path}:{self.line}: {self.verdict} ({self.ms} ms)"
        if self.cert_file:
            out += f" -> {self.cert_file}"
        if self.note:
            out += f" {self.note}"
        return out


@dataclass
class RunReport:
    entries: list = field(default_factory=list)

    @property
    def proved(self) -> int:
        return sum(1 for e in self.entries if e.verdict == PROVED)

    @property
    def refuted(self) -> int:
        return sum(1 for e in self.entries if e.verdict == REFUTED)

    @property
    def aborted(self) -> int:
        return sum(1 for e in self.entries if e.verdict == ABORTED)

    def render(self) -> str:
        lines = [entry.render() for entry in self.entries]
        lines.append(
            f"total: {len(self.entries)} identities, {self.proved} proved, "
            f"{self.refuted} refuted, {self.aborted} aborted"
        )
        return "\n".join(lines)


def _load(path: str):
    """Parse one input file or report (None, exit_code)."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: {path}: {exc}", file=sys.stderr)
        return None
    try:
        return parse_file(text)
    except ParseError as exc:
        print(f"{path}:{exc}", file=sys.stderr)
        return None


def _cert_stem(path: str, used: set) -> str:
    stem = Path(path).stem or "certs"
    candidate, k = stem, 1
    while candidate in used:
        k += 1
        candidate = f"{stem}-{k}"
    used.add(candidate)
    return candidate


def cmd_verify(args) -> int:
    elim = [s.strip() for s in args.elim_order.split(",") if s.strip()] if args.elim_order else None
    config = ProverConfig(max_order=args.max_order)
    cert_dir = None
    if args.cert_out:
        cert_dir = Path(args.cert_out)
        try:
            cert_dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            print(f"error: {args.cert_out}: {exc}", file=sys.stderr)
            return EXIT_ERROR

    report = RunReport()
    errors = False
    used_stems: set = set()
    for path in args.paths:
        source = _load(path)
        if source is None:
            errors = True
            continue
        stem = _cert_stem(path, used_stems) if cert_dir else ""
        for i, identity in enumerate(source.identities, start=1):
            try:
                cert = prove(identity, elimination_order=elim, config=config)
            except EliminationOrderError as exc:
                print(f"error: {path}:{identity.line}: {exc}", file=sys.stderr)
                errors = True
                continue
            entry = ReportEntry(path, identity.line, cert.verdict, cert.ms)
            if cert.verdict == ABORTED:
                entry.note = f"({cert.reason})"
                errors = True
            if cert_dir is not None:
                cert_path = cert_dir / f"{stem}-{i:03d}.json"
                try:
                    cert_path.write_text(
                        json.dumps(cert.to_json_dict(), indent=2) + "\n", encoding="utf-8"
                    )
                except OSError as exc:
                    print(f"error: {cert_path}: {exc}", file=sys.stderr)
                    return EXIT_ERROR
                entry.cert_file = str(cert_path)
            if args.fuzz_after and cert.verdict == PROVED:
                result = fuzz(identity, args.trials, args.seed, args.range)
                if result.ok:
                    entry.note = (entry.note + f" fuzz=PASS({args.trials})").strip()
                else:
                    print(
                        f"error: {path}:{identity.line}: oracle disagrees with PROVED "
                        f"verdict: {result.counterexample.describe()}",
                        file=sys.stderr,
                    )
                    errors = True
            report.entries.append(entry)
    print(report.render())
    if errors:
        return EXIT_ERROR
    return EXIT_FALSIFIED if report.refuted else EXIT_OK


def cmd_fuzz(args) -> int:
    lines = []
    errors = False
    falsified = False
    total = 0
    for path in args.paths:
        source = _load(path)
        if source is None:
            errors = True
            continue
        for identity in source.identities:
            total += 1
            result = fuzz(identity, args.trials, args.seed, args.range)
            if result.ok:
                lines.append(f"{path}:{identity.line}: PASS ({args.trials} trials)")
            else:
                falsified = True
                lines.append(
                    f"{path}:{identity.line}: COUNTEREXAMPLE "
                    f"{result.counterexample.describe()}"
                )
    lines.append(f"total: {total} identities fuzzed")
    print("\n".join(lines))
    if errors:
        return EXIT_ERROR
    return EXIT_FALSIFIED if falsified else EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="horaprove",
        description="Prove or refute identities among generalized Fibonacci sequences.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="decide every identity in the given files")
    verify.add_argument("paths", nargs="+", help="identity files")
    verify.add_argument("--cert-out", metavar="DIR", help="write one JSON certificate per identity")
    verify.add_argument(
        "--elim-order",
        metavar="m,n,k",
        help="index elimination order (extra names are ignored per identity)",
    )
    verify.add_argument("--max-order", type=int, default=64, metavar="K",
                        help="abort when an annihilator order exceeds K (default 64)")
    verify.add_argument("--fuzz-after", action="store_true",
                        help="run the numeric oracle on every PROVED identity")
    verify.add_argument("--seed", type=int, default=0, help="oracle seed (default 0)")
    verify.add_argument("--trials", type=int, default=200, help="oracle trials (default 200)")
    verify.add_argument("--range", type=int, default=9,
                        help="oracle bound for scalars and indices (default 9)")

    fuzz_cmd = sub.add_parser("fuzz", help="numerically test every identity in the given files")
    fuzz_cmd.add_argument("paths", nargs="+", help="identity files")
    fuzz_cmd.add_argument("--seed", type=int, default=0, help="oracle seed (default 0)")
    fuzz_cmd.add_argument("--trials", type=int, default=200, help="oracle trials (default 200)")
    fuzz_cmd.add_argument("--range", type=int, default=9,
                          help="oracle bound for scalars and indices (default 9)")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code or 0)
    if getattr(args, "trials", 1) < 1:
        print("error: --trials must be at least 1", file=sys.stderr)
        return EXIT_ERROR
    if getattr(args, "range", 1) < 1:
        print("error: --range must be at least 1", file=sys.stderr)
        return EXIT_ERROR
    if getattr(args, "max_order", 1) < 1:
        print("error: --max-order must be at least 1", file=sys.stderr)
        return EXIT_ERROR
    if args.command == "verify":
        return cmd_verify(args)
    return cmd_fuzz(args)


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
