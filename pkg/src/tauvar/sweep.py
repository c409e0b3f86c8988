"""Experiment sweeps: flat-text configuration, JSONL records, CSV summaries.

A sweep runs experiment() over the product k_list x d_list x c_list and
persists one line-delimited JSON record per point next to a CSV summary.
Rows are written in input order as points finish, so a crashed run leaves a
usable prefix, and re-running an identical configuration reproduces the CSV
byte for byte apart from the runtime column, regardless of worker count.

Configuration files are flat "key = value" text (diff-friendly provenance):

    k = 2,3                  # list of k values
    d = 4,12,35              # fixed moduli, or  d = primes:100..200
    c = 2.5                  # list of exponents, X = d^c
    cutoff = smooth          # sharp | smooth
    gamma_method = simple    # simple | piecewise | mc
    prime_bound = 1000000    # Euler-product truncation for a_k
    samples = 1000000        # Monte-Carlo sample count (gamma_method = mc)
    seed = 1                 # Monte-Carlo seed
    workers = 1              # worker processes
    out = runs/sweep1        # output directory
"""

from __future__ import annotations

import csv
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple

from .arith import DEFAULT_SEGMENT_SIZE, primes_upto
from .variance import VarianceReport, experiment

__all__ = [
    "SCHEMA_VERSION",
    "CSV_COLUMNS",
    "SweepConfig",
    "SweepResult",
    "parse_config",
    "load_config",
    "run_sweep",
    "read_records",
]

SCHEMA_VERSION = 1

CSV_COLUMNS = (
    "k",
    "d",
    "c",
    "X",
    "cutoff",
    "variance",
    "main_term",
    "ratio",
    "gamma_method",
    "runtime_s",
)

_KNOWN_KEYS = {
    "k",
    "d",
    "c",
    "cutoff",
    "gamma_method",
    "prime_bound",
    "samples",
    "seed",
    "workers",
    "out",
    "segment_size",
}


@dataclass(frozen=True)
class SweepConfig:
    """One sweep: the grid, the evaluator choices, and output placement."""

    k_list: Tuple[int, ...]
    d_list: Tuple[int, ...]
    c_list: Tuple[float, ...]
    cutoff: str = "smooth"
    gamma_method: str = "simple"
    prime_bound: int = 10**6
    samples: int = 10**6
    seed: int = 1
    workers: int = 1
    out: Optional[str] = None
    segment_size: int = DEFAULT_SEGMENT_SIZE

    def __post_init__(self) -> None:
        if self.cutoff not in ("sharp", "smooth"):
            raise ValueError(f"cutoff must be sharp or smooth, got {self.cutoff!r}")
        if self.gamma_method not in ("simple", "piecewise", "mc"):
            raise ValueError(f"unknown gamma method {self.gamma_method!r}")
        for k in self.k_list:
            for c in self.c_list:
                self._check_domain(k, c)

    def _check_domain(self, k: int, c: float) -> None:
        if self.gamma_method == "simple" and not (k - 1 < c < k):
            raise ValueError(
                f"gamma_method=simple needs c in (k-1, k); (k={k}, c={c}) violates it"
            )
        if self.gamma_method == "piecewise" and (k != 3 or not 0 <= c <= 3):
            raise ValueError(
                f"gamma_method=piecewise needs k=3 and c in [0,3]; got (k={k}, c={c})"
            )
        if self.gamma_method == "mc" and not (0 < c < k):
            raise ValueError(
                f"gamma_method=mc needs c in (0, k); (k={k}, c={c}) violates it"
            )

    def points(self) -> Iterator[Tuple[int, int, float]]:
        for k in self.k_list:
            for d in self.d_list:
                for c in self.c_list:
                    yield k, d, c


def _parse_d_spec(spec: str) -> Tuple[int, ...]:
    spec = spec.strip()
    if spec.startswith("primes:"):
        body = spec[len("primes:") :]
        lo_s, _, hi_s = body.partition("..")
        lo, hi = int(lo_s), int(hi_s)
        if not (2 <= lo <= hi):
            raise ValueError(f"bad prime range {spec!r}")
        ps = primes_upto(hi)
        return tuple(int(p) for p in ps[ps >= lo])
    if not spec:
        return ()
    return tuple(int(tok) for tok in spec.split(","))


def parse_config(text: str) -> SweepConfig:
    """Parse the flat key = value format; unknown keys are rejected."""
    raw: Dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        key, sep, value = body.partition("=")
        if not sep:
            raise ValueError(f"config line {lineno}: expected 'key = value', got {line!r}")
        key = key.strip()
        if key not in _KNOWN_KEYS:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
        raw[key] = value.strip()
    kwargs: Dict[str, object] = {}
    if "k" in raw:
        kwargs["k_list"] = tuple(int(t) for t in raw["k"].split(",") if t.strip())
    if "d" in raw:
        kwargs["d_list"] = _parse_d_spec(raw["d"])
    if "c" in raw:
        kwargs["c_list"] = tuple(float(t) for t in raw["c"].split(",") if t.strip())
    for key in ("prime_bound", "samples", "seed", "workers", "segment_size"):
        if key in raw:
            kwargs[key] = int(raw[key])
    for key in ("cutoff", "gamma_method", "out"):
        if key in raw:
            kwargs[key] = raw[key]
    for key_name, field_name in (("k", "k_list"), ("d", "d_list"), ("c", "c_list")):
        if field_name not in kwargs:
            raise ValueError(f"config is missing the {key_name!r} key")
    return SweepConfig(**kwargs)  # type: ignore[arg-type]


def load_config(path: str | Path) -> SweepConfig:
    return parse_config(Path(path).read_text())


@dataclass
class SweepResult:
    config: SweepConfig
    records: List[VarianceReport] = field(default_factory=list)
    failures: List[Tuple[Tuple[int, int, float], str]] = field(default_factory=list)
    csv_path: Optional[Path] = None
    jsonl_path: Optional[Path] = None

    @property
    def ok(self) -> bool:
        return not self.failures


def _csv_row(report: VarianceReport) -> List[str]:
    return [
        str(report.k),
        str(report.d),
        repr(report.c),
        repr(report.x),
        report.cutoff,
        repr(report.variance),
        repr(report.main_term),
        "" if report.ratio is None else repr(report.ratio),
        report.gamma_method,
        repr(report.wall_time_s),
    ]


def _run_point(args) -> VarianceReport:
    k, d, c, cfg_dict = args
    return experiment(
        k,
        d,
        c,
        cutoff=cfg_dict["cutoff"],
        gamma_method=cfg_dict["gamma_method"],
        prime_bound=cfg_dict["prime_bound"],
        mc_samples=cfg_dict["samples"],
        mc_seed=cfg_dict["seed"],
        segment_size=cfg_dict["segment_size"],
        workers=1,
    )


def run_sweep(config: SweepConfig, out_dir: str | Path | None = None) -> SweepResult:
    """Run every (k, d, c) point, flushing records and CSV rows incrementally.

    Per-point failures are reported on stderr and recorded; remaining points
    still run.  Points are dispatched to a process pool when workers > 1 but
    results are always written in input order.
    """
    out = Path(out_dir) if out_dir is not None else (Path(config.out) if config.out else None)
    if out is None:
        raise ValueError("sweep needs an output directory (config key 'out' or argument)")
    out.mkdir(parents=True, exist_ok=True)
    probe = out / ".write-probe"
    probe.write_text("")  # fail fast if the directory is not writable
    probe.unlink()

    result = SweepResult(config=config)
    result.csv_path = out / "summary.csv"
    result.jsonl_path = out / "results.jsonl"
    points = list(config.points())
    cfg_dict = {
        "cutoff": config.cutoff,
        "gamma_method": config.gamma_method,
        "prime_bound": config.prime_bound,
        "samples": config.samples,
        "seed": config.seed,
        "segment_size": config.segment_size,
    }

    with open(result.csv_path, "w", newline="") as csv_f, open(
        result.jsonl_path, "w"
    ) as jsonl_f:
        writer = csv.writer(csv_f)
        writer.writerow(CSV_COLUMNS)
        csv_f.flush()

        def emit(point: Tuple[int, int, float], report: Optional[VarianceReport], err: str | None) -> None:
            if report is None:
                print(f"sweep point {point} failed: {err}", file=sys.stderr)
                result.failures.append((point, err or "unknown error"))
                return
            result.records.append(report)
            writer.writerow(_csv_row(report))
            csv_f.flush()
            record = {
                "schema_version": SCHEMA_VERSION,
                "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime()),
                "report": report.to_dict(),
            }
            jsonl_f.write(json.dumps(record, sort_keys=True) + "\n")
            jsonl_f.flush()

        if config.workers > 1 and len(points) > 1:
            with ProcessPoolExecutor(max_workers=config.workers) as pool:
                futures = [pool.submit(_run_point, (k, d, c, cfg_dict)) for (k, d, c) in points]
                for point, fut in zip(points, futures):
                    try:
                        emit(point, fut.result(), None)
                    except Exception as exc:  # noqa: BLE001 - per-point isolation
                        emit(point, None, f"{type(exc).__name__}: {exc}")
        else:
            for point in points:
                try:
                    emit(point, _run_point((*point, cfg_dict)), None)
                except Exception as exc:  # noqa: BLE001 - per-point isolation
                    emit(point, None, f"{type(exc).__name__}: {exc}")

    return result


def read_records(jsonl_path: str | Path) -> List[Dict[str, object]]:
    """Load persisted records; schema version is checked."""
    out: List[Dict[str, object]] = []
    for line in Path(jsonl_path).read_text().splitlines():
        if not line.strip():
            continue
        rec = json.loads(line)
        if rec.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported record schema {rec.get('schema_version')!r}")
        out.append(rec)
    return out
