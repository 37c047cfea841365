"""Parameter sweeps over (q, d, family, seed)."""

from __future__ import annotations

import configparser
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .field import FieldCtx, is_prime
from .mattila import AnalysisReport, bound_report
from .point_sets import FAMILIES, generate

log = logging.getLogger(__name__)

MAX_GRID_POINTS = 2 ** 22
SEEDED_FAMILIES = {"random"}


class GridTooLarge(ValueError):
    pass


def check_grid(q: int, d: int) -> None:
    if q ** d > MAX_GRID_POINTS:
        raise GridTooLarge(f"q^d = {q}^{d} = {q ** d} exceeds the {MAX_GRID_POINTS} grid-point limit")


def ceil_root(base: int, num: int, den: int) -> int:
    """ceil(base^(num/den)) for den in {1, 2}, computed in integers."""
    if den == 1:
        return base ** num
    if den != 2:
        raise ValueError("only integer and half-integer exponents are supported")
    n = base ** num
    return math.isqrt(n - 1) + 1


def resolve_cardinality(spec: str, q: int, d: int) -> int:
    """``crit`` -> ceil(q^{d/2}), ``falconer`` -> ceil(q^{(d+1)/2}), else an integer."""
    if spec == "crit":
        return ceil_root(q, d, 2)
    if spec == "falconer":
        return ceil_root(q, d + 1, 2)
    return int(spec)


@dataclass(frozen=True)
class FamilySpec:
    name: str
    params: tuple[tuple[str, str], ...] = ()

    @classmethod
    def parse(cls, text: str) -> "FamilySpec":
        name, *rest = text.strip().split(":")
        if name not in FAMILIES:
            raise ValueError(f"unknown family {name!r}")
        params = []
        for item in rest:
            key, sep, val = item.partition("=")
            if not sep or key not in ("r", "n"):
                raise ValueError(f"bad family parameter {item!r} in {text!r}")
            params.append((key, val))
        if name == "random" and "n" not in dict(params):
            raise ValueError("random family needs n=<int|crit|falconer>")
        return cls(name, tuple(params))

    def __str__(self):
        return ":".join([self.name] + [f"{k}={v}" for k, v in self.params])


@dataclass
class SweepConfig:
    primes: list[int]
    dims: list[int]
    families: list[FamilySpec]
    seeds: list[int] = field(default_factory=lambda: [0])
    out: str | None = None
    format: str = "csv"
    jobs: int = 1

    def __post_init__(self):
        bad = [q for q in self.primes if q < 3 or not is_prime(q)]
        if bad:
            raise ValueError(f"not odd primes: {bad}")
        if not self.primes or not self.dims or not self.families:
            raise ValueError("sweep needs at least one prime, dimension and family")
        if any(d < 1 for d in self.dims):
            raise ValueError("dimensions must be >= 1")
        if self.format not in ("csv", "json"):
            raise ValueError(f"unknown format {self.format!r}")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.replace(",", " ").split()]


def load_config(path) -> SweepConfig:
    """Read a key = value sweep file (an optional ``[sweep]`` header is allowed)."""
    text = Path(path).read_text()
    if not text.lstrip().startswith("["):
        text = "[sweep]\n" + text
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    parser.read_string(text)
    sec = parser["sweep"]
    return SweepConfig(
        primes=_int_list(sec.get("primes", "")),
        dims=_int_list(sec.get("dims", "")),
        families=[FamilySpec.parse(f) for f in sec.get("families", "").split(",") if f.strip()],
        seeds=_int_list(sec.get("seeds", "0")),
        out=sec.get("out"),
        format=sec.get("format", "csv"),
        jobs=sec.getint("jobs", 1),
    )


def expand_jobs(cfg: SweepConfig) -> list[tuple]:
    """Cartesian product of the config axes; incompatible combos are skipped."""
    jobs = []
    for q in cfg.primes:
        for d in cfg.dims:
            check_grid(q, d)
            for fam in cfg.families:
                if fam.name in ("paraboloid", "sphere") and d < 2 or fam.name == "diagonal" and d != 2:
                    log.info("skipping %s for d=%d", fam, d)
                    continue
                params = dict(fam.params)
                seeds = cfg.seeds if fam.name in SEEDED_FAMILIES else [None]
                for seed in seeds:
                    kwargs = {}
                    if "r" in params:
                        kwargs["r"] = int(params["r"])
                    if "n" in params:
                        n = resolve_cardinality(params["n"], q, d)
                        if n > q ** d:
                            log.info("skipping %s: n=%d exceeds q^d", fam, n)
                            continue
                        kwargs["n"] = n
                    jobs.append((q, d, fam.name, seed, kwargs))
    return jobs


def run_job(job: tuple) -> AnalysisReport:
    q, d, family, seed, kwargs = job
    pset = generate(family, FieldCtx(q), d, seed=seed or 0, **kwargs)
    if seed is None:
        pset.provenance.pop("seed", None)
    return bound_report(pset)


def run_sweep(cfg: SweepConfig, jobs: int | None = None) -> list[AnalysisReport]:
    """Analyze every job; row order is independent of the worker count."""
    work = expand_jobs(cfg)
    workers = jobs or cfg.jobs
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(run_job, work))
    else:
        reports = [run_job(j) for j in work]
    return sorted(reports, key=AnalysisReport.sort_key)
