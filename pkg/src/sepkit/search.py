"""Exhaustive search for integer polynomials with record small sep or abssep.

The box holds every polynomial of degree 2..D with coefficients in [-B, B].
Both metrics are invariant under P -> -P and P(x) -> P(-x), so only one
member of each orbit is visited: the leading coefficient is taken positive
and, of P and (-1)^d P(-x), the larger ascending coefficient tuple is kept.

Each chunk of raw tuples is screened in hardware precision by the batch
kernel.  Rows the kernel flags (near-coincident pairs, root error estimates
comparable to the gap) are certified on the spot.  The remaining rows enter
a pool if their float value is within a factor 4 of the running k-th best
value; the pool is pruned with that same rule, so its final content depends
only on the set of rows seen, never on the order.  Survivors are certified
at the end and the top k are reported, ordered by (upper, lower, coeffs).

Progress is appended to a JSON-lines checkpoint after every chunk.
"""

from __future__ import annotations

import csv
import io
import json
import math
import multiprocessing
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import _kernels
from . import roots as _roots
from .dyadic import to_decimal
from .errors import CheckpointError
from .poly import IntPolynomial, is_separable

METRICS = ("sep", "abssep")
MARGIN = 4.0
CHUNK_SIZE = 200_000
CHECKPOINT_VERSION = 1


@dataclass(frozen=True)
class SearchBox:
    max_degree: int
    coeff_bound: int

    def __post_init__(self):
        if self.max_degree < 2:
            raise ValueError("max_degree must be >= 2")
        if self.coeff_bound < 1:
            raise ValueError("coeff_bound must be >= 1")

    def raw_count(self, d: int) -> int:
        """Tuples of exact degree d with positive leading coefficient."""
        B = self.coeff_bound
        return B * (2 * B + 1) ** d


@dataclass(frozen=True)
class RecordEntry:
    poly: IntPolynomial
    metric: str
    value_lower: Fraction
    value_upper: Fraction
    witness: tuple[int, int]
    witness_realness: tuple[bool, bool]
    squarefree_substituted: bool = False

    def sort_key(self):
        return (self.value_upper, self.value_lower, self.poly.coeffs)

    def to_json(self) -> dict:
        return {
            "coeffs": list(self.poly.coeffs),
            "poly": str(self.poly),
            "metric": self.metric,
            "lower": to_decimal(self.value_lower, 17, "down"),
            "upper": to_decimal(self.value_upper, 17, "up"),
            "witness": list(self.witness),
            "witness_real": list(self.witness_realness),
            "squarefree_substituted": self.squarefree_substituted,
        }

    def _state(self) -> list:
        return [list(self.poly.coeffs), self.metric, _q(self.value_lower), _q(self.value_upper),
                list(self.witness), list(self.witness_realness), self.squarefree_substituted]

    @classmethod
    def _from_state(cls, s) -> "RecordEntry":
        return cls(IntPolynomial(s[0]), s[1], _unq(s[2]), _unq(s[3]), tuple(s[4]), tuple(s[5]), s[6])


def _q(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _unq(s: str) -> Fraction:
    return Fraction(s)


# ------------------------------------------------------------ symmetry


def _partner(coeffs: tuple[int, ...]) -> tuple[int, ...]:
    """Coefficients of (-1)^d P(-x), which has the same leading coefficient."""
    d = len(coeffs) - 1
    return tuple(c if (d + k) % 2 == 0 else -c for k, c in enumerate(coeffs))


def canonicalize(P: IntPolynomial) -> IntPolynomial:
    """Representative of {+-P(+-x)}: positive lead, then the larger ascending tuple.

    Taking the larger tuple makes the representative start with the
    constant term of larger sign, which reproduces the way the record
    polynomials are usually written (14x^3+17x^2-13x+2, not its mirror).
    """
    if P.is_zero:
        raise ValueError("canonical form of the zero polynomial")
    if P.lead < 0:
        P = -P
    return IntPolynomial(max(P.coeffs, _partner(P.coeffs)))


def _chunk_rows(d: int, B: int, start: int, stop: int) -> tuple[np.ndarray, int]:
    """Canonical tuples among raw indices [start, stop) of degree d, plus the symmetry skip count.

    Index order: a_0 varies fastest, a_d in 1..B slowest.
    """
    R = 2 * B + 1
    idx = np.arange(start, stop, dtype=np.int64)
    rows = np.empty((idx.size, d + 1), dtype=np.int64)
    rest = idx.copy()
    for k in range(d):
        rows[:, k] = rest % R - B
        rest //= R
    rows[:, d] = rest + 1
    # first coefficient where P and its partner differ decides the order
    odd = [(d + k) % 2 == 1 for k in range(d + 1)]
    keep = np.ones(idx.size, dtype=bool)
    decided = np.zeros(idx.size, dtype=bool)
    for k in range(d + 1):
        if not odd[k]:
            continue
        c = rows[:, k]
        nz = (c != 0) & ~decided
        keep[nz] = c[nz] > 0
        decided |= nz
    return rows[keep], int(idx.size - keep.sum())


def enumerate_box(box: SearchBox, metric: str | None = None, counters: dict | None = None):
    """Yield one canonical polynomial per orbit, degrees 2..D.

    For ``metric == "sep"`` non-separable polynomials are skipped.  Skip
    counts go to ``counters`` when given.
    """
    counters = counters if counters is not None else {}
    for key in ("emitted", "skipped_symmetry", "skipped_non_separable"):
        counters.setdefault(key, 0)
    for d in range(2, box.max_degree + 1):
        n = box.raw_count(d)
        for start in range(0, n, CHUNK_SIZE):
            rows, skipped = _chunk_rows(d, box.coeff_bound, start, min(n, start + CHUNK_SIZE))
            counters["skipped_symmetry"] += skipped
            for r in rows.tolist():
                P = IntPolynomial(r)
                if metric == "sep" and not is_separable(P):
                    counters["skipped_non_separable"] += 1
                    continue
                counters["emitted"] += 1
                yield P


# ------------------------------------------------------------ certification


def certify(P: IntPolynomial, metric: str, tol: Fraction = _roots.DEFAULT_TOL) -> tuple[RecordEntry | None, str]:
    """Certified record entry for P, or (None, reason) when P is not admissible."""
    if metric == "sep":
        if not is_separable(P):
            return None, "non_separable"
        res = _roots.sep(P, tol=tol)
    elif metric == "abssep":
        res = _roots.abssep(P, tol=tol)
    else:
        raise ValueError(f"unknown metric {metric!r}")
    if res.status != _roots.POSITIVE:
        return None, "undefined"
    return RecordEntry(P, metric, res.value.lo, res.value.hi, res.witness, res.witness_real,
                       res.squarefree_substituted), ""


def _below(entry: RecordEntry, threshold: Fraction, tol: Fraction) -> bool:
    """Certified decision of value < threshold, refining a straddling enclosure."""
    lo, hi = entry.value_lower, entry.value_upper
    while lo < threshold <= hi:
        tol = tol / 1024
        refined, _ = certify(entry.poly, entry.metric, tol)
        lo, hi = refined.value_lower, refined.value_upper
        if tol < Fraction(1, 2**400):
            raise _roots.PrecisionExhausted("value too close to the threshold")
    return hi < threshold


# ------------------------------------------------------------ chunk screening


@dataclass
class _Task:
    degree: int
    start: int
    stop: int
    B: int
    metric: str
    top_k: int
    backend: str
    tol: Fraction
    threshold: float | None = None  # fixed-threshold mode


def _screen_chunk(task: _Task) -> dict:
    rows, skipped = _chunk_rows(task.degree, task.B, task.start, task.stop)
    out = {"scanned": int(rows.shape[0]), "skipped_symmetry": skipped, "skipped_non_separable": 0,
           "skipped_undefined": 0, "certified": [], "candidates": []}
    if rows.shape[0] == 0:
        return out
    m = _kernels.METRIC_SEP if task.metric == "sep" else _kernels.METRIC_ABSSEP
    values, flags = _kernels.screen(rows.astype(np.float64), m, backend=task.backend)
    for r in np.nonzero(flags)[0]:
        entry, why = certify(IntPolynomial(rows[r].tolist()), task.metric, task.tol)
        if entry is None:
            out["skipped_" + why] += 1
        else:
            out["certified"].append(entry)
    clean = np.nonzero(~flags & np.isfinite(values))[0]
    out["skipped_undefined"] += int(np.count_nonzero(~flags & ~np.isfinite(values)))
    if task.threshold is not None:
        limit = MARGIN * task.threshold
    else:
        vals = sorted([float(values[r]) for r in clean] + [float(e.value_upper) for e in out["certified"]])
        limit = MARGIN * vals[task.top_k - 1] if len(vals) >= task.top_k else math.inf
    for r in clean:
        if values[r] <= limit:
            out["candidates"].append((tuple(rows[r].tolist()), float(values[r])))
    return out


# ------------------------------------------------------------ pool


@dataclass
class _Pool:
    top_k: int
    candidates: dict = field(default_factory=dict)  # coeffs -> float value
    certified: dict = field(default_factory=dict)  # coeffs -> RecordEntry
    threshold: float | None = None

    def kth(self) -> float:
        vals = sorted(list(self.candidates.values()) + [float(e.value_upper) for e in self.certified.values()])
        return vals[self.top_k - 1] if len(vals) >= self.top_k else math.inf

    def limit(self) -> float:
        if self.threshold is not None:
            return MARGIN * self.threshold
        return MARGIN * self.kth()

    def merge(self, chunk: dict):
        for c, v in chunk["candidates"]:
            self.candidates[tuple(c)] = v
        for e in chunk["certified"]:
            self.certified[e.poly.coeffs] = e
        lim = self.limit()
        self.candidates = {c: v for c, v in self.candidates.items() if v <= lim}
        self.certified = {c: e for c, e in self.certified.items() if float(e.value_lower) <= lim}


# ------------------------------------------------------------ checkpoint


@dataclass
class Checkpoint:
    box: SearchBox
    metric: str
    top_k: int
    backend: str
    chunk_size: int
    next_task: int
    ranges: list
    pool: _Pool
    counters: dict

    def to_line(self) -> str:
        return json.dumps({
            "version": CHECKPOINT_VERSION,
            "box": [self.box.max_degree, self.box.coeff_bound],
            "metric": self.metric,
            "top_k": self.top_k,
            "backend": self.backend,
            "chunk_size": self.chunk_size,
            "next_task": self.next_task,
            "ranges": self.ranges,
            "threshold": self.pool.threshold,
            "candidates": sorted([list(c), v] for c, v in self.pool.candidates.items()),
            "certified": sorted(e._state() for e in self.pool.certified.values()),
            "counters": self.counters,
        }, sort_keys=True)

    @classmethod
    def from_line(cls, obj: dict) -> "Checkpoint":
        pool = _Pool(obj["top_k"], threshold=obj["threshold"])
        pool.candidates = {tuple(c): v for c, v in obj["candidates"]}
        pool.certified = {tuple(s[0]): RecordEntry._from_state(s) for s in obj["certified"]}
        return cls(SearchBox(*obj["box"]), obj["metric"], obj["top_k"], obj["backend"], obj["chunk_size"],
                   obj["next_task"], obj["ranges"], pool, obj["counters"])


def read_checkpoint(path) -> dict | None:
    """Last complete line of a checkpoint file; a torn final line is ignored."""
    path = Path(path)
    if not path.exists():
        return None
    text = path.read_text()
    lines = text.split("\n")[:-1]  # anything after the last newline is torn
    obj = None
    for n, ln in enumerate(lines):
        if not ln.strip():
            continue
        try:
            obj = json.loads(ln)
        except json.JSONDecodeError as exc:
            raise CheckpointError(f"{path}: line {n + 1} is not valid JSON ({exc})") from exc
        if not isinstance(obj, dict) or obj.get("version") != CHECKPOINT_VERSION:
            raise CheckpointError(f"{path}: line {n + 1} is not a version {CHECKPOINT_VERSION} checkpoint")
    return obj


def _drop_torn_tail(path: Path):
    text = path.read_text()
    if text and not text.endswith("\n"):
        path.write_text(text[: text.rfind("\n") + 1])


def _ranges(tasks, next_task) -> list:
    out = {}
    for n, t in enumerate(tasks):
        r = out.setdefault(t.degree, {"degree": t.degree, "start": t.start, "stop": t.stop, "next": t.start})
        r["stop"] = t.stop
        if n < next_task:
            r["next"] = t.stop
    return list(out.values())


# ------------------------------------------------------------ driver


@dataclass(frozen=True)
class SearchResult:
    records: list
    counters: dict
    screen_limit: float
    margin_ok: bool


def _tasks(box: SearchBox, metric, top_k, backend, tol, chunk_size, threshold=None) -> list[_Task]:
    tasks = []
    for d in range(2, box.max_degree + 1):
        n = box.raw_count(d)
        for start in range(0, n, chunk_size):
            tasks.append(_Task(d, start, min(n, start + chunk_size), box.coeff_bound, metric, top_k,
                               backend, tol, threshold))
    return tasks


def _run(box, metric, top_k, checkpoint_path, workers, backend, tol, chunk_size, threshold, stop_after):
    if metric not in METRICS:
        raise ValueError(f"metric must be one of {METRICS}")
    backend = backend or _kernels.BACKEND
    tasks = _tasks(box, metric, top_k, backend, tol, chunk_size, threshold)
    pool = _Pool(top_k, threshold=threshold)
    counters = {"scanned": 0, "skipped_symmetry": 0, "skipped_non_separable": 0, "skipped_undefined": 0}
    first = 0
    if checkpoint_path is not None:
        checkpoint_path = Path(checkpoint_path)
        state = read_checkpoint(checkpoint_path)
        if checkpoint_path.exists():
            _drop_torn_tail(checkpoint_path)
        if state is not None:
            try:
                ck = Checkpoint.from_line(state)
            except (KeyError, TypeError, ValueError) as exc:
                raise CheckpointError(f"{checkpoint_path}: malformed checkpoint record ({exc!r})") from exc
            expected = (box, metric, top_k, backend, chunk_size, threshold)
            found = (ck.box, ck.metric, ck.top_k, ck.backend, ck.chunk_size, ck.pool.threshold)
            if expected != found:
                raise CheckpointError(f"{checkpoint_path}: checkpoint is for {found}, this run is {expected}; "
                                      f"cursor at task {ck.next_task}")
            if not 0 <= ck.next_task <= len(tasks):
                raise CheckpointError(f"{checkpoint_path}: cursor {ck.next_task} outside 0..{len(tasks)}")
            pool, counters, first = ck.pool, ck.counters, ck.next_task

    def save(done: int):
        if checkpoint_path is None:
            return
        ck = Checkpoint(box, metric, top_k, backend, chunk_size, done, _ranges(tasks, done), pool, counters)
        with open(checkpoint_path, "a") as fh:
            fh.write(ck.to_line() + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    todo = tasks[first:]
    if stop_after is not None:
        todo = todo[:stop_after]

    def consume(results):
        for n, chunk in enumerate(results, start=first + 1):
            for key in counters:
                counters[key] += chunk[key]
            pool.merge(chunk)
            save(n)

    if workers > 1 and len(todo) > 1:
        ctx = multiprocessing.get_context("fork" if os.name == "posix" else "spawn")
        with ctx.Pool(workers) as mp:
            consume(mp.imap(_screen_chunk, todo))
    else:
        consume(map(_screen_chunk, todo))

    if stop_after is not None and first + len(todo) < len(tasks):
        return None
    entries = list(pool.certified.values())
    for c in sorted(pool.candidates):
        entry, why = certify(IntPolynomial(c), metric, tol)
        if entry is None:
            counters["skipped_" + why] = counters.get("skipped_" + why, 0) + 1
        else:
            entries.append(entry)
    entries.sort(key=RecordEntry.sort_key)
    limit = pool.limit()
    return entries, counters, limit


def search_records(box: SearchBox, metric: str, top_k: int = 1, checkpoint_path=None, workers: int = 1,
                   backend: str | None = None, tol: Fraction = _roots.DEFAULT_TOL,
                   chunk_size: int = CHUNK_SIZE, stop_after: int | None = None) -> SearchResult | None:
    """Top ``top_k`` polynomials of the box by certified metric value.

    ``stop_after`` processes only that many further chunks and returns None
    unless the run completes; together with ``checkpoint_path`` it simulates
    an interrupted run.
    """
    if top_k < 1:
        raise ValueError("top_k must be >= 1")
    out = _run(box, metric, top_k, checkpoint_path, workers, backend, tol, chunk_size, None, stop_after)
    if out is None:
        return None
    entries, counters, limit = out
    records = entries[:top_k]
    margin_ok = len(records) < top_k or float(records[-1].value_upper) <= limit
    return SearchResult(records, counters, limit, margin_ok)


def uniqueness_check(box: SearchBox, metric: str, threshold, workers: int = 1, backend: str | None = None,
                     tol: Fraction = _roots.DEFAULT_TOL, chunk_size: int = CHUNK_SIZE) -> int:
    """Number of canonical polynomials in the box with certified metric below ``threshold``."""
    threshold = Fraction(threshold)
    if threshold <= 0:
        return 0
    entries, _, _ = _run(box, metric, 1, None, workers, backend, tol, chunk_size, float(threshold), None)
    return sum(1 for e in entries if _below(e, threshold, tol))


# ------------------------------------------------------------ output


def records_json(records) -> str:
    return json.dumps([r.to_json() for r in records], indent=2) + "\n"


def records_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["coeffs", "metric", "lower", "upper", "witness_real"])
    for r in records:
        w.writerow([",".join(map(str, r.poly.coeffs)), r.metric, to_decimal(r.value_lower, 17, "down"),
                    to_decimal(r.value_upper, 17, "up"), ";".join(str(b).lower() for b in r.witness_realness)])
    return buf.getvalue()


def write_records(records, out_path) -> tuple[Path, Path]:
    """Write ``out_path`` (JSON) and a ``records.csv`` next to it."""
    out = Path(out_path)
    out.write_text(records_json(records))
    csv_path = out.with_name("records.csv") if out.name == "records.json" else out.with_suffix(".csv")
    csv_path.write_text(records_csv(records))
    return out, csv_path
