"""Approximation-ratio sweeps: generate instances, run solvers, write CSV and plots."""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path

from issue_control.election import TieRule, check_norm
from issue_control.errors import CapacityError, InstanceParseError, UsageError
from issue_control.exact import DEFAULT_MAX_ISSUES, solve_maxsupport_exhaustive
from issue_control.generators import MAX_TREE_ISSUES, GenConfig, GenKind, generate
from issue_control.heuristics import greedy_max_support
from issue_control.poly import best_single_issue

CSV_HEADER = (
    "sweep_param", "sweep_value", "seed", "solver", "support",
    "optimum", "ratio", "zero_opt_flag", "millis",
)
SOLVERS = ("exhaustive", "greedy", "best_single_issue")
SWEEP_PARAMS = ("m", "n", "l")
DEFAULT_SWEEPS = {
    "m": (2, 3, 4, 5, 6),
    "n": (20, 50, 100, 200),
    "l": tuple(range(4, 15)),
}
_MASK64 = 2**64 - 1


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def instance_seed(base_seed: int, sweep_value: int, index: int) -> int:
    """64-bit seed for one instance: splitmix64 folded over (base, value, index)."""
    h = _splitmix64(base_seed & _MASK64)
    h = _splitmix64(h ^ (sweep_value & _MASK64))
    return _splitmix64(h ^ (index & _MASK64))


@dataclass(frozen=True)
class ExperimentSpec:
    """One sweep: two of (m, n, l) fixed, the third taking ``sweep_values``."""

    kind: GenKind = GenKind.GAUSSIAN
    sweep_param: str = "m"
    sweep_values: tuple = DEFAULT_SWEEPS["m"]
    num_candidates: int = 3
    num_voters: int = 100
    num_issues: int = 10
    instances_per_point: int = 100
    p: int = 2
    tie: TieRule = TieRule.WORST_CASE
    base_seed: int = 0
    solvers: tuple = SOLVERS
    max_issues: int = DEFAULT_MAX_ISSUES
    timing: bool = False
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "kind", GenKind(self.kind))
        object.__setattr__(self, "tie", TieRule.parse(self.tie))
        object.__setattr__(self, "sweep_values", tuple(int(v) for v in self.sweep_values))
        object.__setattr__(self, "solvers", tuple(self.solvers))
        if self.sweep_param not in SWEEP_PARAMS:
            raise UsageError(f"sweep parameter must be one of {SWEEP_PARAMS}, got {self.sweep_param!r}")
        if not self.sweep_values:
            raise UsageError("sweep needs at least one value")
        if self.instances_per_point < 1:
            raise UsageError("instances_per_point must be at least 1")
        unknown = set(self.solvers) - set(SOLVERS)
        if unknown or not self.solvers:
            raise UsageError(f"solvers must be a nonempty subset of {SOLVERS}")
        if self.workers < 1:
            raise UsageError("workers must be at least 1")
        check_norm(self.p)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentSpec":
        known = {f.name for f in fields(cls)}
        extra = set(data) - known
        if extra:
            raise UsageError(f"unknown experiment fields: {sorted(extra)}")
        return cls(**data)

    def config_for(self, value: int, seed: int) -> GenConfig:
        m, n, l = self.num_candidates, self.num_voters, self.num_issues
        if self.sweep_param == "m":
            m = value
        elif self.sweep_param == "n":
            n = value
        else:
            l = value
        return GenConfig(m, n, l, seed, self.kind)

    def check_capacity(self) -> None:
        issues = max(self.sweep_values) if self.sweep_param == "l" else self.num_issues
        if issues > self.max_issues:
            raise CapacityError(
                f"sweep reaches {issues} issues, beyond the exhaustive limit of {self.max_issues}"
            )
        if self.kind is GenKind.TREE_BINARY and issues > MAX_TREE_ISSUES:
            raise CapacityError(f"tree generator supports at most {MAX_TREE_ISSUES} issues")
        # generator-level validation of every point before any work starts
        for value in self.sweep_values:
            self.config_for(value, 0)


@dataclass(frozen=True, order=True)
class ResultRow:
    sweep_param: str
    sweep_value: int
    seed: int
    solver: str
    support: int
    optimum: int
    zero_opt: bool
    millis: float | None = field(default=None, compare=False)

    @property
    def ratio(self) -> float:
        return 1.0 if self.optimum == 0 else self.support / self.optimum

    def csv_fields(self) -> list:
        return [
            self.sweep_param, self.sweep_value, self.seed, self.solver, self.support,
            self.optimum, repr(self.ratio), int(self.zero_opt),
            "" if self.millis is None else f"{self.millis:.3f}",
        ]


def _timed(fn, *args):
    start = time.perf_counter()
    result = fn(*args)
    return result, (time.perf_counter() - start) * 1000.0


def _run_instance(spec: ExperimentSpec, value: int, index: int) -> list:
    seed = instance_seed(spec.base_seed, value, index)
    election = generate(spec.config_for(value, seed))
    p = spec.p if spec.kind is GenKind.GAUSSIAN else 1
    opt, opt_ms = _timed(solve_maxsupport_exhaustive, election, p, spec.tie, spec.max_issues)
    optimum = opt.target_support
    runs = {"exhaustive": (opt, opt_ms)}
    if "greedy" in spec.solvers:
        runs["greedy"] = _timed(greedy_max_support, election, p, spec.tie)
    if "best_single_issue" in spec.solvers:
        runs["best_single_issue"] = _timed(best_single_issue, election, spec.tie)
    rows = []
    for name in spec.solvers:
        outcome, millis = runs[name]
        rows.append(ResultRow(
            spec.sweep_param, value, seed, name, outcome.target_support, optimum,
            optimum == 0, millis if spec.timing else None,
        ))
    return rows


def _run_point(args) -> list:
    spec, value, index = args
    return _run_instance(spec, value, index)


def run_experiment(spec: ExperimentSpec) -> list:
    """All result rows of a sweep, in (sweep value, instance index, solver) order.

    Refuses with :class:`CapacityError` before generating anything if a sweep
    point is beyond the exhaustive solver.  With ``workers > 1`` instances run
    in worker processes; the returned order is the same either way.
    """
    spec.check_capacity()
    jobs = [(spec, v, i) for v in spec.sweep_values for i in range(spec.instances_per_point)]
    if spec.workers > 1:
        with ProcessPoolExecutor(spec.workers) as pool:
            chunks = list(pool.map(_run_point, jobs, chunksize=8))
    else:
        chunks = [_run_point(job) for job in jobs]
    return [row for chunk in chunks for row in chunk]


@dataclass(frozen=True)
class SummaryRow:
    sweep_param: str
    sweep_value: int
    solver: str
    mean_ratio: float
    instances: int
    zero_opt: int


def summarize(rows) -> list:
    """Mean ratio per (sweep value, solver), computed from the ratios as written to CSV."""
    groups: dict = {}
    for row in rows:
        key = (row.sweep_param, row.sweep_value, row.solver)
        groups.setdefault(key, []).append(row)
    order = {name: i for i, name in enumerate(SOLVERS)}
    out = []
    for key in sorted(groups, key=lambda k: (k[0], k[1], order.get(k[2], len(order)), k[2])):
        group = groups[key]
        ratios = [float(repr(r.ratio)) for r in group]
        out.append(SummaryRow(*key, sum(ratios) / len(ratios), len(group), sum(r.zero_opt for r in group)))
    return out


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(row.csv_fields())
    return buf.getvalue()


def summary_to_text(summary) -> str:
    lines = [f"{'param':>5} {'value':>6} {'solver':<18} {'mean_ratio':>10} {'n':>4} {'zero_opt':>8}"]
    for s in summary:
        lines.append(
            f"{s.sweep_param:>5} {s.sweep_value:>6} {s.solver:<18} {s.mean_ratio:>10.4f} "
            f"{s.instances:>4} {s.zero_opt:>8}"
        )
    return "\n".join(lines) + "\n"


def read_results_csv(path) -> list:
    """Parse a results CSV back into rows; raises :class:`InstanceParseError` if malformed."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InstanceParseError(f"cannot read {path}: {exc}") from None
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(header) != CSV_HEADER:
        raise InstanceParseError(f"{path}: missing or unexpected CSV header")
    rows = []
    for number, record in enumerate(reader, 2):
        if not record:
            continue
        try:
            if len(record) != len(CSV_HEADER):
                raise ValueError(f"expected {len(CSV_HEADER)} fields, got {len(record)}")
            param, value, seed, solver, support, optimum, ratio, flag, millis = record
            if param not in SWEEP_PARAMS or solver not in SOLVERS or flag not in ("0", "1"):
                raise ValueError("unknown parameter, solver or flag")
            row = ResultRow(
                param, int(value), int(seed), solver, int(support), int(optimum),
                flag == "1", float(millis) if millis else None,
            )
            if float(ratio) != row.ratio:
                raise ValueError("ratio does not match support/optimum")
        except ValueError as exc:
            raise InstanceParseError(f"{path}: line {number}: {exc}") from None
        rows.append(row)
    if not rows:
        raise InstanceParseError(f"{path}: CSV has no data rows")
    return rows


_SWEEP_LABELS = {"m": "number of candidates", "n": "number of voters", "l": "number of issues"}


def emit_plots(csv_path, out_dir) -> dict:
    """Write one SVG per swept parameter; returns ``{param: {solver: [(x, mean), ...]}}``.

    The returned series are exactly the plotted points.  Nothing is written
    if the CSV cannot be parsed.
    """
    summary = summarize(read_results_csv(csv_path))
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    series: dict = {}
    for s in summary:
        series.setdefault(s.sweep_param, {}).setdefault(s.solver, []).append((s.sweep_value, s.mean_ratio))
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for param, by_solver in series.items():
        fig, ax = plt.subplots(figsize=(5, 3.5))
        for solver, points in by_solver.items():
            xs, ys = zip(*points)
            ax.plot(xs, ys, marker="o", label=solver)
        ax.set_ylim(0.0, 1.05)
        ax.set_xlabel(_SWEEP_LABELS[param])
        ax.set_ylabel("mean approximation ratio")
        ax.legend(loc="lower left")
        fig.tight_layout()
        fig.savefig(out_dir / f"ratio_vs_{param}.svg", format="svg", metadata={"Date": None})
        plt.close(fig)
    return series
