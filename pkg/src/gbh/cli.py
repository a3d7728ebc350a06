"""Command-line front end (``gbh`` / ``python -m gbh``).

Exit codes: 0 success, 2 bad input, 3 computation error, 4 bad
configuration, 5 a verification found a mismatch.  Data goes to stdout or
``--out``; log lines go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import dataclass

from .blowup import report_json, verify_les
from .errors import ComputationError, ConfigError, GBHError, InputError, VerificationError
from .families import load_family, scan_family
from .graph import load_graph
from .homology import configuration_homology, verify_quasi_isomorphism
from .linalg import Field
from .modules import homology_betti_table
from .oracle import DEFAULT_BUDGET, verify_oracle

log = logging.getLogger("gbh")

EXIT_OK, EXIT_INPUT, EXIT_COMPUTATION, EXIT_CONFIG, EXIT_MISMATCH = 0, 2, 3, 4, 5


@dataclass
class RunConfig:
    field: Field
    truncation: int | None
    q_max: int
    p_max: int
    j_max: int
    window: list[int] | None
    fmt: str
    budget: int
    jobs: int

    def validate(self) -> "RunConfig":
        for name in ("q_max", "p_max", "j_max", "budget"):
            if getattr(self, name) < 0:
                raise ConfigError(f"--{name.replace('_', '')} must be nonnegative")
        if self.truncation is not None and self.truncation < 0:
            raise ConfigError("--trunc must be nonnegative")
        if self.window is not None and not self.window:
            raise ConfigError("empty --window")
        if self.jobs < 1:
            raise ConfigError("--jobs must be at least 1")
        return self


def parse_window(text: str) -> list[int]:
    """``a..b`` (inclusive) or a single integer."""
    try:
        if ".." in text:
            a, b = (int(x) for x in text.split("..", 1))
        else:
            a = b = int(text)
    except ValueError:
        raise ConfigError(f"bad window {text!r}; expected a..b") from None
    if a < 0 or b < a:
        raise ConfigError(f"empty or negative window {text!r}")
    return list(range(a, b + 1))


def _default_jobs() -> int:
    raw = os.environ.get("GBH_JOBS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigError(f"GBH_JOBS={raw!r} is not an integer") from None


def _config(args) -> RunConfig:
    return RunConfig(
        field=Field.parse(args.field),
        truncation=args.trunc,
        q_max=args.qmax,
        p_max=args.pmax,
        j_max=args.jmax,
        window=parse_window(args.window) if args.window else None,
        fmt=args.format,
        budget=args.budget,
        jobs=args.jobs if args.jobs is not None else _default_jobs(),
    ).validate()


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
        log.info("wrote %s", out)
    else:
        sys.stdout.write(text)


def _load_graph(path: str):
    try:
        return load_graph(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _rows_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# -- commands --------------------------------------------------------------------

def cmd_homology(args) -> int:
    cfg = _config(args)
    G = _load_graph(args.graph)
    reduced = not args.full
    if args.all:
        table = []
        for n in range(args.nmax + 1):
            for q in range(cfg.q_max + 1):
                table.append((q, n, configuration_homology(G, q, n, reduced)))
        if cfg.fmt == "json":
            text = json.dumps([{"q": q, "n": n, **h.to_dict()} for q, n, h in table], indent=2) + "\n"
        else:
            text = _rows_csv(["q", "n", "free_rank", "torsion"],
                             [[q, n, h.free_rank, " ".join(map(str, h.torsion))] for q, n, h in table])
        _emit(text, args.out)
        return EXIT_OK
    if args.q is None or args.n is None:
        raise ConfigError("homology needs --q and --n (or --all)")
    h = configuration_homology(G, args.q, args.n, reduced)
    if cfg.fmt == "json":
        text = json.dumps({"q": args.q, "n": args.n, **h.to_dict()}) + "\n"
    else:
        text = f"H_{args.q} = {h}\n"
    _emit(text, args.out)
    return EXIT_OK


def cmd_betti(args) -> int:
    cfg = _config(args)
    G = _load_graph(args.graph)
    if args.q is None:
        raise ConfigError("betti needs --q")
    table = homology_betti_table(G, args.q, cfg.p_max, cfg.j_max, cfg.field, N=cfg.truncation)
    text = json.dumps(table.to_dict(), indent=2) + "\n" if cfg.fmt == "json" else table.to_csv()
    _emit(text, args.out)
    return EXIT_OK


def cmd_family_scan(args) -> int:
    cfg = _config(args)
    try:
        family = load_family(args.family)
    except OSError as exc:
        raise InputError(f"cannot read {args.family}: {exc.strerror}") from None
    if args.q is None or args.p is None:
        raise ConfigError("family-scan needs --q and --p")
    window = cfg.window or list(range(family.n_min + 2, family.n_min + 8))
    log.info("scanning n in %s..%s", window[0], window[-1])
    scan = scan_family(family, args.q, args.p, window, cfg.j_max, cfg.field,
                       max_degree=args.degree, jobs=cfg.jobs)
    if cfg.fmt == "json":
        text = json.dumps({"rows": [dict(zip("n q p j beta".split(), r)) for r in scan.rows()],
                           "report": scan.to_dict()}, indent=2, sort_keys=True) + "\n"
    else:
        text = scan.to_csv()
    _emit(text, args.out)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(json.dumps(scan.to_dict(), indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def _verdict(report: dict, fmt: str, out: str | None, columns: list[str]) -> int:
    if fmt == "json":
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    else:
        text = _rows_csv(columns, [[r[c] for c in columns] for r in report["rows"]])
    _emit(text, out)
    if not report["passed"]:
        log.error("verification failed")
        return EXIT_MISMATCH
    log.info("all checks passed")
    return EXIT_OK


def cmd_quasi_iso_check(args) -> int:
    cfg = _config(args)
    G = _load_graph(args.graph)
    report = verify_quasi_isomorphism(G, cfg.q_max, args.nmax, cfg.field)
    return _verdict(report, cfg.fmt, args.out, ["q", "n", "full", "reduced", "induced_iso", "passed"])


def cmd_oracle_check(args) -> int:
    cfg = _config(args)
    G = _load_graph(args.graph)
    report = verify_oracle(G, cfg.q_max, args.nmax, cfg.budget)
    return _verdict(report, cfg.fmt, args.out, ["q", "n", "swiatkowski", "oracle", "passed"])


def cmd_blowup_verify(args) -> int:
    cfg = _config(args)
    G = _load_graph(args.graph)
    if args.vertex is None:
        raise ConfigError("blowup-verify needs --vertex")
    report = verify_les(G, args.vertex, cfg.q_max, args.nmax, cfg.field)
    _emit(report_json(report) + "\n", args.out)
    if not report["passed"]:
        log.error("exactness check failed")
        return EXIT_MISMATCH
    return EXIT_OK


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default="q", help="q, f2, f3, ... (default q)")
    common.add_argument("--trunc", type=int, default=None, help="module truncation degree")
    common.add_argument("--q", type=int, default=None)
    common.add_argument("--n", type=int, default=None)
    common.add_argument("--p", type=int, default=None)
    common.add_argument("--pmax", type=int, default=2)
    common.add_argument("--jmax", type=int, default=4)
    common.add_argument("--window", default=None, help="range of n as a..b")
    common.add_argument("--out", default=None, help="write data here instead of stdout")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="oracle cell budget")
    common.add_argument("--jobs", type=int, default=None, help="worker processes (default $GBH_JOBS or 1)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="gbh", description="Homology of graph configuration spaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("homology", parents=[common], help="H_q(UF_n(G); Z)")
    p.add_argument("graph")
    p.add_argument("--all", action="store_true", help="tabulate q <= qmax, n <= nmax")
    p.add_argument("--qmax", type=int, default=2)
    p.add_argument("--nmax", type=int, default=3)
    p.add_argument("--full", action="store_true", help="use the unreduced complex")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("betti", parents=[common], help="graded Betti table of H_q")
    p.add_argument("graph")
    p.add_argument("--qmax", type=int, default=2)
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("family-scan", parents=[common], help="Betti numbers across an FI-graph family")
    p.add_argument("family")
    p.add_argument("--qmax", type=int, default=2)
    p.add_argument("--degree", type=int, default=2, help="maximal degree of the fitted polynomial")
    p.add_argument("--report", default=None, help="also write the stabilization report (JSON) here")
    p.set_defaults(func=cmd_family_scan)

    for name, func, help_text, qmax, nmax in (
        ("quasi-iso-check", cmd_quasi_iso_check, "compare full and reduced complexes", 2, 4),
        ("oracle-check", cmd_oracle_check, "compare with the discretized model", 2, 3),
        ("blowup-verify", cmd_blowup_verify, "check the blow-up exact sequences", 2, 4),
    ):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("graph")
        p.add_argument("--qmax", type=int, default=qmax)
        p.add_argument("--nmax", type=int, default=nmax)
        if name == "blowup-verify":
            p.add_argument("--vertex", default=None)
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="gbh: %(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except GBHError as exc:
        code, kind = _classify(exc)
        print(f"gbh: {kind}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return code


def _classify(exc: GBHError) -> tuple[int, str]:
    for cls, code, kind in (
        (InputError, EXIT_INPUT, "input error"),
        (ComputationError, EXIT_COMPUTATION, "computation error"),
        (ConfigError, EXIT_CONFIG, "configuration error"),
        (VerificationError, EXIT_MISMATCH, "verification failed"),
    ):
        if isinstance(exc, cls):
            return code, kind
    return EXIT_COMPUTATION, "error"

if __name__ == "__main__":
    sys.exit(main())
