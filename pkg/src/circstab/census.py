"""Exhaustive census of nontrivially unstable circulant graphs.

Connection sets are enumerated as bitmasks over negation pairs
``{s, n - s}`` (plus ``{n/2}`` for even ``n``).  Cheap filters and the
reduction to one set per multiplier orbit are vectorized with numpy; the
survivors go through the automorphism engine one at a time.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .autoeng import is_isomorphic
from .circulant import CirculantGraph, ConnectionSet
from .conditions import NONTRIVIAL, cover_is_unstable, stability_verdict
from .twoprime import orders_predicate
from .zmod import check_cap, has_ci_guarantee, mask_elements, prime_factors, units

log = logging.getLogger(__name__)

CHUNK_BITS = 18
STANDARD_MAX = 38

# published reference values
REFERENCE_TOTAL_TO_38 = 3576
WILSON_TOTAL_TO_38 = 3274
REFERENCE_EXTENDED_TOTAL = 67725  # orders 39..50
REFERENCE_NO_WILSON = {24: 6, 40: 52, 48: 262, 50: 2}

WILSON_NAMES = ("C1", "C2", "C3", "C4")
CONDITION_NAMES = WILSON_NAMES + ("generalized-HK", "iso-translate", "xe-c4", "xe-general")


# ---------------------------------------------------------------------------
# vectorized enumeration


def negation_pairs(n: int) -> list[int]:
    """Smallest member of each pair ``{s, -s}`` of nonzero residues."""
    return list(range(1, (n + 1) // 2)) + ([n // 2] if n % 2 == 0 and n > 1 else [])


def chunk_count(n: int) -> int:
    return 1 << max(0, len(negation_pairs(n)) - CHUNK_BITS)


def _expand(pm: np.ndarray, pairs: list[int], n: int, m: int = 1) -> np.ndarray:
    """Full residue masks of ``m * S`` for pair masks ``pm``."""
    out = np.zeros_like(pm)
    one = np.uint64(1)
    for i, s in enumerate(pairs):
        bit = (pm >> np.uint64(i)) & one
        out |= bit << np.uint64(m * s % n)
        out |= bit << np.uint64(-m * s % n)
    return out


def candidate_masks(n: int, chunk: int = 0) -> list[int]:
    """Connected, nonbipartite, twin-free connection sets of one chunk that
    are least (as integers) in their multiplier orbit, ascending."""
    check_cap(n)
    if n < 3:
        return []
    pairs = negation_pairs(n)
    k = len(pairs)
    low = min(k, CHUNK_BITS)
    start = chunk << low
    pm = np.arange(start, start + (1 << low), dtype=np.uint64)
    full = _expand(pm, pairs, n)
    ok = np.ones(len(pm), dtype=bool)
    primes = prime_factors(n)
    for p in primes:
        multiples = np.uint64(sum(1 << x for x in range(0, n, p)))
        ok &= (full & ~multiples) != 0
    if n % 2 == 0:
        ok &= (full & np.uint64(sum(1 << x for x in range(0, n, 2)))) != 0
    top = np.uint64((1 << n) - 1)
    for p in primes:
        h = np.uint64(n // p)
        rot = ((full << h) | (full >> np.uint64(n) - h)) & top
        ok &= rot != full
    pm, full = pm[ok], full[ok]
    keep = np.ones(len(pm), dtype=bool)
    for m in units(n):
        if m == 1 or m == n - 1:
            continue
        keep &= full <= _expand(pm, pairs, n, m)
    return sorted(int(v) for v in full[keep])


# ---------------------------------------------------------------------------
# records


@dataclass(frozen=True)
class CensusRecord:
    n: int
    mask: int
    certificate: str
    verdict: str
    flags: tuple[str, ...]

    @property
    def connection(self) -> ConnectionSet:
        return ConnectionSet(self.n, self.mask)

    @property
    def no_wilson_type(self) -> bool:
        return not any(f in WILSON_NAMES for f in self.flags)

    @property
    def unexplained(self) -> bool:
        return not any(f in CONDITION_NAMES for f in self.flags)

    def to_line(self) -> str:
        return ";".join([str(self.n), ",".join(map(str, mask_elements(self.mask))),
                         self.certificate, self.verdict, ",".join(self.flags)])

    @classmethod
    def from_line(cls, line: str) -> CensusRecord:
        n, elems, cert, verdict, flags = line.rstrip("\n").split(";")
        n = int(n)
        mask = sum(1 << int(e) for e in elems.split(",") if e)
        return cls(n, mask, cert, verdict, tuple(f for f in flags.split(",") if f))


def classify(n: int, mask: int) -> CensusRecord | None:
    """Record for a filtered candidate, or ``None`` when it is stable."""
    x = CirculantGraph(ConnectionSet(n, mask))
    if not cover_is_unstable(x):
        return None
    report = stability_verdict(x, conditions=True, canonical=True)
    if report.verdict != NONTRIVIAL:
        raise AssertionError(f"filtered candidate {x.connection} reported {report.verdict}")
    flags = sorted(report.condition_names(), key=CONDITION_NAMES.index)
    if n % 2 == 0 and mask >> (n // 2) & 1:
        flags.append("aux-loop")
    return CensusRecord(n, mask, report.certificate.hex(), report.verdict, tuple(flags))


def _chunk_records(task: tuple[int, int]) -> list[CensusRecord]:
    n, chunk = task
    out = []
    for mask in candidate_masks(n, chunk):
        rec = classify(n, mask)
        if rec is not None:
            out.append(rec)
    return out


def _dedup(n: int, records: Iterable[CensusRecord]) -> list[CensusRecord]:
    records = sorted(records, key=lambda r: r.mask)
    if has_ci_guarantee(n):
        return records
    seen, out = set(), []
    for r in records:
        if r.certificate not in seen:
            seen.add(r.certificate)
            out.append(r)
    return out


# ---------------------------------------------------------------------------
# cache


class OrderCache:
    """Per-order record file with chunk and completion markers."""

    def __init__(self, directory: str | os.PathLike, n: int):
        self.path = Path(directory) / f"order_{n:02d}.txt"
        self.n = n

    def load(self) -> tuple[set[int], list[CensusRecord], bool]:
        done, records, complete = set(), [], False
        if not self.path.exists():
            return done, records, complete
        pending = []
        with open(self.path) as fh:
            for line in fh:
                if line.startswith("#chunk "):
                    done.add(int(line.split()[1]))
                    records.extend(pending)
                    pending = []
                elif line.startswith("#complete"):
                    complete = True
                elif line.strip():
                    pending.append(CensusRecord.from_line(line))
        # records after the last marker belong to an interrupted chunk
        return done, records, complete

    def append_chunk(self, chunk: int, records: list[CensusRecord]) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a") as fh:
            for r in records:
                fh.write(r.to_line() + "\n")
            fh.write(f"#chunk {chunk}\n")

    def mark_complete(self) -> None:
        with open(self.path, "a") as fh:
            fh.write("#complete\n")

    def reset(self) -> None:
        if self.path.exists():
            self.path.unlink()


def enumerate_order(n: int, workers: int = 1, cache_dir: str | os.PathLike | None = None,
                    executor: ProcessPoolExecutor | None = None) -> Iterator[CensusRecord]:
    """One record per isomorphism class of nontrivially unstable circulants
    of order ``n``, in ascending order of connection-set mask."""
    check_cap(n)
    chunks = chunk_count(n)
    cache = OrderCache(cache_dir, n) if cache_dir is not None else None
    done, records, complete = cache.load() if cache else (set(), [], False)
    if cache and complete and len(done) == chunks:
        yield from _dedup(n, records)
        return
    if cache and complete:
        cache.reset()
        done, records = set(), []
    todo = [(n, c) for c in range(chunks) if c not in done]
    if executor is not None and workers > 1 and len(todo) > 1:
        results = executor.map(_chunk_records, todo)
    else:
        results = map(_chunk_records, todo)
    for (_, c), recs in zip(todo, results):
        records.extend(recs)
        if cache:
            cache.append_chunk(c, recs)
    if cache:
        cache.mark_complete()
    yield from _dedup(n, records)


# ---------------------------------------------------------------------------
# summaries


@dataclass
class OrderSummary:
    n: int
    records: list[CensusRecord] = field(default_factory=list)

    @property
    def nontrivially_unstable(self) -> int:
        return len(self.records)

    def count(self, *names: str) -> int:
        return sum(1 for r in self.records if any(f in names for f in r.flags))

    def no_wilson(self) -> list[CensusRecord]:
        return [r for r in self.records if r.no_wilson_type]

    def unexplained(self) -> list[CensusRecord]:
        return [r for r in self.records if r.unexplained]

    def row(self) -> dict:
        return {
            "order": self.n,
            "nontrivially_unstable": self.nontrivially_unstable,
            "c1": self.count("C1"),
            "c2": self.count("C2"),
            "c3": self.count("C3"),
            "c4": self.count("C4"),
            "general_hk": self.count("generalized-HK"),
            "iso_translate": self.count("iso-translate"),
            "xe": self.count("xe-c4", "xe-general"),
            "no_wilson_type": len(self.no_wilson()),
        }


CSV_FIELDS = ("order", "nontrivially_unstable", "c1", "c2", "c3", "c4", "general_hk",
              "iso_translate", "xe", "no_wilson_type")


@dataclass
class CensusSummary:
    min_n: int
    max_n: int
    orders: dict[int, OrderSummary]

    @property
    def total(self) -> int:
        return sum(o.nontrivially_unstable for o in self.orders.values())

    def records(self) -> list[CensusRecord]:
        return [r for n in sorted(self.orders) for r in self.orders[n].records]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
        w.writeheader()
        for n in sorted(self.orders):
            w.writerow(self.orders[n].row())
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "min": self.min_n,
            "max": self.max_n,
            "total_nontrivially_unstable": self.total,
            "orders": [
                {**o.row(),
                 "no_wilson_sets": [r.connection.literal() for r in o.no_wilson()],
                 "unexplained_sets": [r.connection.literal() for r in o.unexplained()],
                 "aux_loop_graphs": o.count("aux-loop")}
                for _, o in sorted(self.orders.items())
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def summary_line(self) -> str:
        return f"total_nontrivially_unstable={self.total}"


def run_census(min_n: int, max_n: int, worker_count: int = 1,
               cache_dir: str | os.PathLike | None = None) -> CensusSummary:
    """Census over ``min_n <= n <= max_n``; a pure function of the bounds."""
    if min_n < 1 or max_n < min_n:
        raise ValueError("need 1 <= min_n <= max_n")
    check_cap(max_n)
    orders = {}
    executor = ProcessPoolExecutor(worker_count) if worker_count > 1 else None
    try:
        for n in range(min_n, max_n + 1):
            recs = list(enumerate_order(n, worker_count, cache_dir, executor))
            orders[n] = OrderSummary(n, recs)
            log.info("order %d: %d nontrivially unstable", n, len(recs))
    finally:
        if executor is not None:
            executor.shutdown()
    return CensusSummary(min_n, max_n, orders)


# ---------------------------------------------------------------------------
# comparison with published values


@dataclass
class ComparisonRow:
    quantity: str
    order: int | None
    ours: int
    reference: int | None
    note: str = ""

    @property
    def match(self) -> bool | None:
        return None if self.reference is None else self.ours == self.reference

    def status(self) -> str:
        return {None: "no reference", True: "match", False: "MISMATCH"}[self.match]


@dataclass
class Comparison:
    rows: list[ComparisonRow]
    order24_matches: list[bool] | None = None

    @property
    def ok(self) -> bool:
        if self.order24_matches is not None and not all(self.order24_matches):
            return False
        return all(r.match is not False for r in self.rows if r.order is None or r.order <= STANDARD_MAX)

    def render(self) -> str:
        lines = []
        for r in self.rows:
            where = "all" if r.order is None else str(r.order)
            ref = "-" if r.reference is None else str(r.reference)
            extra = f"  ({r.note})" if r.note else ""
            lines.append(f"{r.quantity:<24} {where:>4} ours={r.ours:<6} ref={ref:<6} {r.status()}{extra}")
        if self.order24_matches is not None:
            lines.append("order-24 exceptions matched: "
                         + " ".join("yes" if m else "no" for m in self.order24_matches))
        return "\n".join(lines) + "\n"


def match_order24(summary: CensusSummary) -> list[bool] | None:
    """For each published order-24 exception, whether it is isomorphic to one
    of our no-Wilson-type records (and the counts agree)."""
    from .fixtures import order24_exceptions

    if 24 not in summary.orders:
        return None
    ours = [CirculantGraph(r.connection).graph for r in summary.orders[24].no_wilson()]
    out = []
    for s in order24_exceptions():
        g = CirculantGraph(s).graph
        out.append(any(is_isomorphic(g, h)[0] for h in ours))
    if len(ours) != len(out):
        out.append(False)
    return out


def compare_to_paper(summary: CensusSummary) -> Comparison:
    rows = []
    for n, o in sorted(summary.orders.items()):
        ref = 0 if orders_predicate(n) else None
        rows.append(ComparisonRow("nontrivially_unstable", n, o.nontrivially_unstable, ref,
                                  "order admits none" if ref == 0 else ""))
        if n in REFERENCE_NO_WILSON:
            nw_ref = REFERENCE_NO_WILSON[n]
        elif n < 40:
            nw_ref = 0
        else:
            nw_ref = None
        rows.append(ComparisonRow("no_wilson_type", n, len(o.no_wilson()), nw_ref,
                                  "reference only" if n > STANDARD_MAX and nw_ref is not None else ""))
    orders = set(summary.orders)
    if set(range(1, 39)) <= orders:
        total = sum(summary.orders[n].nontrivially_unstable for n in range(1, 39))
        rows.append(ComparisonRow("total_up_to_38", None, total, REFERENCE_TOTAL_TO_38,
                                  f"Wilson reported {WILSON_TOTAL_TO_38}"))
    if set(range(39, 51)) <= orders:
        total = sum(summary.orders[n].nontrivially_unstable for n in range(39, 51))
        rows.append(ComparisonRow("total_39_to_50", 39, total, REFERENCE_EXTENDED_TOTAL,
                                  "reference only"))
    return Comparison(rows, match_order24(summary))
