"""Command-line front end: ``analyze``, ``census`` and ``verify-paper``."""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from dataclasses import dataclass

from .census import STANDARD_MAX, compare_to_paper, run_census
from .circulant import CirculantGraph, ConnectionSet, ParseError
from .conditions import StabilityReport, stability_verdict
from .zmod import CapExceeded, check_cap

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_PARSE = 2
EXIT_CAP = 3
EXIT_IO = 4


@dataclass
class CliConfig:
    command: str
    literal: str | None = None
    min_n: int = 1
    max_n: int = STANDARD_MAX
    jobs: int = 1
    fmt: str = "text"
    out: str | None = None
    extended: bool = False
    cache_dir: str | None = None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ParseError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="circstab", description="Stability of circulant graphs under the canonical double cover.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="analyze one connection set, e.g. 10:1,2,8,9")
    a.add_argument("literal", help="connection set as n:s1,s2,... (ascending)")
    a.add_argument("--format", dest="fmt", choices=("json", "csv", "text"), default="json")
    a.add_argument("--out")

    c = sub.add_parser("census", help="enumerate nontrivially unstable circulants")
    c.add_argument("--min", dest="min_n", type=int, default=1)
    c.add_argument("--max", dest="max_n", type=int, default=STANDARD_MAX)
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--format", dest="fmt", choices=("json", "csv", "text"), default="text")
    c.add_argument("--out", help="write the summary here instead of stdout")
    c.add_argument("--extended", action="store_true", help=f"allow orders above {STANDARD_MAX}")
    c.add_argument("--cache-dir")

    v = sub.add_parser("verify-paper", help="run the reproduction checks")
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--extended", action="store_true", help="also compare the order 40..50 counts")
    v.add_argument("--cache-dir")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def parse_config(argv) -> CliConfig:
    ns = build_parser().parse_args(argv)
    cfg = CliConfig(ns.command)
    for name in ("literal", "min_n", "max_n", "jobs", "fmt", "out", "extended", "cache_dir"):
        if hasattr(ns, name):
            setattr(cfg, name, getattr(ns, name))
    if ns.verbose:
        logging.basicConfig(level=logging.INFO, format="%(message)s")
    return cfg


# ---------------------------------------------------------------------------
# rendering


def render_report(report: StabilityReport, fmt: str) -> str:
    if fmt == "json":
        return report.to_json()
    d = report.to_dict()
    wilson = ";".join(f"{w['type']}" for w in report.wilson_types)
    new = ";".join(c["condition"] for c in report.new_conditions)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["graph", "verdict", "reasons", "autX", "autBX", "wilson", "new", "unexplained"])
        w.writerow([d["graph"], d["verdict"], ";".join(d["trivialityReasons"]), d["autX"], d["autBX"],
                    wilson, new, str(d["unexplained"]).lower()])
        return buf.getvalue()
    lines = [
        f"graph      {d['graph']}",
        f"verdict    {d['verdict']}",
        f"reasons    {', '.join(d['trivialityReasons']) or '-'}",
        f"|Aut X|    {d['autX']}",
        f"|Aut BX|   {d['autBX']}",
    ]
    for w in report.wilson_types:
        params = ", ".join(f"{k}={v}" for k, v in w.items() if k != "type")
        lines.append(f"wilson     {w['type']} ({params})")
    for c in report.new_conditions:
        params = ", ".join(f"{k}={v}" for k, v in c.items() if k != "condition")
        lines.append(f"condition  {c['condition']} ({params})")
    for w in report.witnesses:
        lines.append(f"witness    {w['source']}")
    if report.unexplained:
        lines.append("unexplained by the implemented conditions")
    return "\n".join(lines) + "\n"


def render_census(summary, fmt: str) -> str:
    if fmt == "json":
        return summary.to_json()
    if fmt == "csv":
        return summary.to_csv()
    lines = [summary.to_csv().rstrip("\n")]
    for n, o in sorted(summary.orders.items()):
        for r in o.no_wilson():
            lines.append(f"no-wilson-type {r.connection.literal()}")
        for r in o.unexplained():
            lines.append(f"unexplained {r.connection.literal()}")
    lines.append(compare_to_paper(summary).render().rstrip("\n"))
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(cfg: CliConfig) -> int:
    x = CirculantGraph(ConnectionSet.parse(cfg.literal))
    check_cap(x.n)
    report = stability_verdict(x, canonical=False)
    _emit(render_report(report, cfg.fmt), cfg.out)
    return EXIT_OK


def cmd_census(cfg: CliConfig) -> int:
    if cfg.min_n < 1 or cfg.max_n < cfg.min_n:
        raise ParseError("need 1 <= --min <= --max")
    if cfg.jobs < 1:
        raise ParseError("--jobs must be positive")
    check_cap(cfg.max_n)
    if cfg.max_n > STANDARD_MAX and not cfg.extended:
        raise ParseError(f"orders above {STANDARD_MAX} need --extended")
    summary = run_census(cfg.min_n, cfg.max_n, cfg.jobs, cfg.cache_dir)
    _emit(render_census(summary, cfg.fmt), cfg.out)
    if cfg.out is not None or cfg.fmt == "text":
        print(summary.summary_line())
    return EXIT_OK


def cmd_verify_paper(cfg: CliConfig) -> int:
    from .verify import run_all

    results = run_all(cfg.extended, cfg.cache_dir, cfg.jobs, echo=print)
    failed = [r for r in results if r.required and r.passed is False]
    print(f"criteria failed: {len(failed)}")
    return EXIT_FAIL if failed else EXIT_OK


COMMANDS = {"analyze": cmd_analyze, "census": cmd_census, "verify-paper": cmd_verify_paper}


def main(argv=None) -> int:
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
        return COMMANDS[cfg.command](cfg)
    except CapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAP
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
