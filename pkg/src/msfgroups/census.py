"""Group enumeration by order and the f_max census table."""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable, TextIO

from . import __version__
from .group_core import (
    GroupSpec,
    classify,
    factorize,
    format_group_spec,
    mu,
    partitions,
)
from .sumfree import enumerate_maximal_sumfree

#: Constant c in the 2^((1/2 - c) mu) comparison column.
HALF_BOUND_C = 1e-4

CSV_COLUMNS = [
    "group", "n", "type", "mu", "fmax", "log2fmax_over_mu",
    "bound_half", "bound_third", "ineq_half", "ineq_third",
]


@dataclass
class Config:
    """Run-time caps and knobs.  Precedence: explicit flags > environment > defaults."""

    fmax_cap: int = 30
    count_cap: int = 20
    mis_cap: int = 40
    jobs: int = 1
    seed: int = 0

    ENV = {
        "fmax_cap": "MSFG_FMAX_CAP",
        "count_cap": "MSFG_COUNT_CAP",
        "mis_cap": "MSFG_MIS_CAP",
        "jobs": "MSFG_JOBS",
        "seed": "MSFG_SEED",
    }

    @classmethod
    def resolve(cls, environ: dict | None = None, **flags) -> "Config":
        env = os.environ if environ is None else environ
        cfg = cls()
        for name, var in cls.ENV.items():
            if var in env:
                try:
                    setattr(cfg, name, int(env[var]))
                except ValueError:
                    raise ValueError(f"environment variable {var} must be an integer") from None
        for name, value in flags.items():
            if value is not None:
                setattr(cfg, name, value)
        return cfg

    def as_metadata(self) -> dict:
        return {
            "fmax_cap": self.fmax_cap,
            "count_cap": self.count_cap,
            "mis_cap": self.mis_cap,
        }


def enumerate_groups_of_order(n: int) -> list[GroupSpec]:
    """One canonical spec per isomorphism class of abelian groups of order n."""
    if n < 1:
        raise ValueError("order must be positive")
    if n == 1:
        return [GroupSpec(())]
    per_prime = []
    for p, a in sorted(factorize(n).items()):
        per_prime.append([tuple(p**k for k in sorted(lam)) for lam in partitions(a)])
    out = [GroupSpec(sum(combo, ())) for combo in itertools.product(*per_prime)]
    return sorted(out, key=format_group_spec)


@dataclass
class CensusRow:
    group: str
    n: int
    type: str
    mu: int
    fmax: int | None
    log2fmax_over_mu: float | None
    bound_half: float
    bound_third: float
    ineq_half: bool | None
    ineq_third: bool | None


def census_row(G: GroupSpec, fmax_cap: int = 30) -> CensusRow:
    m = mu(G)
    bound_half = m / 2
    bound_third = m / 3 * math.log2(3)
    fmax = None
    ratio = None
    ineq_half = ineq_third = None
    if G.n <= fmax_cap:
        fmax = enumerate_maximal_sumfree(G, cap=fmax_cap).count
        lf = math.log2(fmax)
        ratio = lf / m if m > 0 else None
        ineq_half = lf <= (0.5 - HALF_BOUND_C) * m
        ineq_third = lf <= bound_third
    return CensusRow(format_group_spec(G), G.n, str(classify(G)), m, fmax, ratio,
                     bound_half, bound_third, ineq_half, ineq_third)


def _row_task(args):
    G, cap = args
    return census_row(G, cap)


def census(orders: Iterable[int], fmax_cap: int = 30, jobs: int = 1) -> list[CensusRow]:
    """One row per abelian group of each order, sorted by (n, spec string)."""
    groups = [G for n in orders for G in enumerate_groups_of_order(n)]
    tasks = [(G, fmax_cap) for G in groups]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_row_task, tasks))
    else:
        rows = [_row_task(t) for t in tasks]
    return sorted(rows, key=lambda r: (r.n, r.group))


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.6f}"
    return str(v)


def write_csv(rows: list[CensusRow], fh: TextIO) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        d = asdict(r)
        w.writerow([_fmt(d[c]) for c in CSV_COLUMNS])


def write_json(rows: list[CensusRow], fh: TextIO, config: Config) -> None:
    doc = {
        "metadata": {
            "version": __version__,
            "seed": config.seed,
            "caps": config.as_metadata(),
            "half_bound_c": HALF_BOUND_C,
        },
        "rows": [_json_row(r) for r in rows],
    }
    json.dump(doc, fh, indent=2, sort_keys=False)
    fh.write("\n")


def _json_row(r: CensusRow) -> dict:
    d = asdict(r)
    for k in ("log2fmax_over_mu", "bound_half", "bound_third"):
        if d[k] is not None:
            d[k] = round(d[k], 6)
    return d


def render(rows: list[CensusRow], fmt: str, config: Config) -> str:
    buf = io.StringIO()
    if fmt == "json":
        write_json(rows, buf, config)
    else:
        write_csv(rows, buf)
    return buf.getvalue()
