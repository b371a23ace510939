"""Seeded batch experiments over deployments, clustering and grouping algorithms.

A plan fixes a scenario and a (realization x repetition x algorithm x alpha
x tr) grid. Each realization gets one deployment and one clustering pass;
every grouping run then draws from its own seed, derived from the grid
coordinates (tr excluded, see :func:`cell_seed`), so cells can be added,
dropped or reordered without changing any other cell.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from typing import Iterable, Sequence

from .clustering import ClusterSpec, dynamic_clustering
from .graph import UndirectedGraph, complement
from .grouping import (
    CostParams,
    GroupingSolution,
    dsatur,
    elf_greedy,
    joint_cost,
    partialcol_baseline,
    psg,
    size_variance,
    tabucol_baseline,
)
from .mobility import Scenario, generate_deployment, preset_scenario
from .seeding import MASK64, make_rng, mix64, splitmix64

RECORD_HEADER = (
    "scenario,algorithm,alpha,tr,realization,repetition,k,cost,"
    "ungrouped,evenness,ts_iterations,wall_time_ms,seed"
)

# algorithms whose outcome depends on tr
_TR_ALGORITHMS = {"psg", "partialcol+modts"}
ALGORITHMS = ("psg", "partialcol", "tabucol", "dsatur", "elf-greedy", "partialcol+elf", "partialcol+modts")
BASELINES = ("dsatur", "partialcol", "tabucol")


@dataclass(frozen=True)
class AlgorithmSpec:
    """An algorithm plus its parameters.

    ``label`` names the records; seeds derive from ``name`` so that two
    labelled variants of one algorithm (e.g. with and without REvES) are
    run on paired random streams.
    """

    name: str
    params: CostParams = field(default_factory=CostParams)
    label: str | None = None

    def __post_init__(self):
        if self.name not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.name!r}; expected one of {ALGORITHMS}")

    @property
    def tag(self) -> str:
        return self.label or self.name

    @property
    def uses_tr(self) -> bool:
        return self.name in _TR_ALGORITHMS


@dataclass(frozen=True)
class ExperimentPlan:
    scenario: Scenario
    algorithms: tuple[AlgorithmSpec, ...]
    realizations: int = 20
    repetitions: int = 20
    alpha_grid: tuple[float, ...] = (0.5,)
    tr_grid: tuple[float, ...] = (0.7,)
    base_seed: int = 0
    xi_cs: float = 0.7
    xi_ps: float = 0.7

    def __post_init__(self):
        if self.realizations < 1 or self.repetitions < 1:
            raise ValueError("realizations and repetitions must be at least 1")
        if not self.algorithms:
            raise ValueError("plan needs at least one algorithm")
        if any(not 0 < a < 1 for a in self.alpha_grid) or not self.alpha_grid:
            raise ValueError("alpha values must lie in (0, 1)")
        if any(not 0 < t <= 1 for t in self.tr_grid) or not self.tr_grid:
            raise ValueError("tr values must lie in (0, 1]")
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        object.__setattr__(self, "alpha_grid", tuple(float(a) for a in self.alpha_grid))
        object.__setattr__(self, "tr_grid", tuple(float(t) for t in self.tr_grid))


@dataclass(frozen=True)
class ExperimentRecord:
    """One grouping run. ``tr`` is None for algorithms that ignore it.

    A non-empty ``skipped`` marks a cell that could not run (the reason
    code); its metric fields are then meaningless.
    """

    scenario: str
    algorithm: str
    alpha: float
    tr: float | None
    realization: int
    repetition: int
    k: int
    cost: float
    ungrouped: int
    evenness: float
    ts_iterations: int
    wall_time_ms: float
    seed: int
    skipped: str = ""

    @property
    def sort_key(self):
        return (self.scenario, self.algorithm, self.alpha,
                -1.0 if self.tr is None else self.tr, self.realization, self.repetition)

    def csv_row(self) -> str:
        tr = "" if self.tr is None else f"{self.tr:.6f}"
        return (f"{self.scenario},{self.algorithm},{self.alpha:.6f},{tr},{self.realization},"
                f"{self.repetition},{self.k},{self.cost:.6f},{self.ungrouped},{self.evenness:.6f},"
                f"{self.ts_iterations},{self.wall_time_ms:.6f},{self.seed}")


def realization_seed(base_seed: int, realization: int) -> int:
    return (base_seed ^ splitmix64(realization)) & MASK64


def cell_seed(base_seed: int, realization: int, repetition: int, algorithm: str,
              alpha_index: int) -> int:
    """Stream for one grid cell.

    The tr value is deliberately left out: cells that differ only in tr
    replay the same random stream, so a PSG run with a larger tr follows
    the smaller-tr run step for step until the two acceptance tests
    disagree.
    """
    return mix64(base_seed, realization, repetition, algorithm, alpha_index)


def build_instance(scenario: Scenario, seed: int, xi_cs: float = 0.7, xi_ps: float = 0.7):
    """Deployment, clustering result and complement graph for one realization."""
    dep = generate_deployment(scenario, seed)
    res = dynamic_clustering(dep, ClusterSpec.for_deployment(dep, xi_cs, xi_ps))
    return dep, res, complement(res.graph)


@dataclass(frozen=True)
class RunResult:
    solution: GroupingSolution
    iterations: int


def run_algorithm(spec: AlgorithmSpec, g_prime: UndirectedGraph, params: CostParams, seed: int) -> RunResult:
    rng = make_rng(seed)
    name = spec.name
    if name == "psg":
        out = psg(g_prime, params, rng)
        return RunResult(out.solution, out.iterations_used)
    if name == "partialcol+modts":
        out = psg(g_prime, params, rng, init="greedy")
        return RunResult(out.solution, out.iterations_used)
    if name == "partialcol":
        res = partialcol_baseline(g_prime, params, rng)
        return RunResult(res.solution, res.iterations)
    if name == "partialcol+elf":
        res = partialcol_baseline(g_prime, params, rng, init="elf")
        return RunResult(res.solution, res.iterations)
    if name == "tabucol":
        res = tabucol_baseline(g_prime, params, rng)
        return RunResult(res.solution, res.iterations)
    if name == "dsatur":
        return RunResult(dsatur(g_prime)[1], 0)
    if name == "elf-greedy":
        k, _ = dsatur(g_prime)
        return RunResult(elf_greedy(g_prime, k, params.alpha, params.variance)[0], 0)
    raise ValueError(f"unknown algorithm {name!r}")


def _cells(plan: ExperimentPlan):
    for spec in plan.algorithms:
        trs = list(enumerate(plan.tr_grid)) if spec.uses_tr else [(0, None)]
        for ai, alpha in enumerate(plan.alpha_grid):
            for ti, tr in trs:
                params = replace(spec.params, alpha=alpha, **({} if tr is None else {"tr": tr}))
                yield spec, ai, alpha, ti, tr, params


def _run_realization(plan: ExperimentPlan, r: int, timing: bool) -> list[ExperimentRecord]:
    name = plan.scenario.name
    records = []
    try:
        _, _, g_prime = build_instance(plan.scenario, realization_seed(plan.base_seed, r), plan.xi_cs, plan.xi_ps)
        reason = ""
    except ValueError as exc:
        g_prime = None
        reason = "empty_deployment" if "empty" in str(exc) else "insufficient_suitable_nodes"
    for spec, ai, alpha, ti, tr, params in _cells(plan):
        for q in range(plan.repetitions):
            seed = cell_seed(plan.base_seed, r, q, spec.name, ai)
            if g_prime is None:
                records.append(ExperimentRecord(name, spec.tag, alpha, tr, r, q, 0, math.nan, 0,
                                                math.nan, 0, 0.0, seed, reason))
                continue
            t0 = time.perf_counter()
            out = run_algorithm(spec, g_prime, params, seed)
            wall = (time.perf_counter() - t0) * 1000 if timing else 0.0
            s = out.solution
            v = size_variance(s.sizes, params.variance)
            records.append(ExperimentRecord(
                name, spec.tag, alpha, tr, r, q, s.k, joint_cost(s, alpha, params.variance),
                len(s.ungrouped), v, out.iterations, wall, seed))
    return records


def run_plan(plan: ExperimentPlan, *, timing: bool = False, workers: int = 1) -> list[ExperimentRecord]:
    """Execute every cell of ``plan``; skipped cells are kept with a reason code.

    Records come back sorted by (scenario, algorithm, alpha, tr, realization,
    repetition), whatever the execution order. ``timing=False`` records a
    zero wall time so that outputs are byte-reproducible.
    """
    reals = range(plan.realizations)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_realization, [plan] * len(reals), reals, [timing] * len(reals)))
    else:
        chunks = [_run_realization(plan, r, timing) for r in reals]
    records = [rec for chunk in chunks for rec in chunk]
    records.sort(key=lambda rec: rec.sort_key)
    return records


def records_to_csv(records: Iterable[ExperimentRecord]) -> str:
    ok = sorted((r for r in records if not r.skipped), key=lambda r: r.sort_key)
    return RECORD_HEADER + "\n" + "".join(r.csv_row() + "\n" for r in ok)


def records_from_csv(text: str) -> list[ExperimentRecord]:
    reader = csv.DictReader(io.StringIO(text))
    if ",".join(reader.fieldnames or ()) != RECORD_HEADER:
        raise ValueError("unexpected record header")
    out = []
    for row in reader:
        out.append(ExperimentRecord(
            row["scenario"], row["algorithm"], float(row["alpha"]),
            float(row["tr"]) if row["tr"] else None, int(row["realization"]), int(row["repetition"]),
            int(row["k"]), float(row["cost"]), int(row["ungrouped"]), float(row["evenness"]),
            int(row["ts_iterations"]), float(row["wall_time_ms"]), int(row["seed"])))
    return out


# -- aggregation -------------------------------------------------------------

@dataclass(frozen=True)
class SummaryRow:
    scenario: str
    algorithm: str
    alpha: float
    tr: float | None
    runs: int
    skipped: int
    groups: float
    cost: float
    ungrouped: float
    evenness: float
    ts_iterations: float
    wall_time_ms: float


def comparable_cost(evenness: float, alpha: float = 0.5) -> float:
    """Cost of a complete coloring (no ungrouped nodes) at weight ``alpha``."""
    return (1 - alpha) * evenness


def _mean(xs: Sequence[float]) -> float:
    return math.fsum(xs) / len(xs) if xs else math.nan


def aggregate(records: Iterable[ExperimentRecord]) -> list[SummaryRow]:
    """Per-(scenario, algorithm, alpha, tr) means; independent of record order."""
    cells: dict[tuple, list[ExperimentRecord]] = {}
    for rec in records:
        key = (rec.scenario, rec.algorithm, rec.alpha, rec.tr)
        cells.setdefault(key, []).append(rec)
    if not cells:
        raise ValueError("no records to aggregate")
    rows = []
    for (scen, algo, alpha, tr), recs in cells.items():
        ok = [r for r in recs if not r.skipped]
        rows.append(SummaryRow(
            scen, algo, alpha, tr, len(ok), len(recs) - len(ok),
            _mean([r.k for r in ok]),
            _mean([r.cost for r in ok]),
            _mean([r.ungrouped for r in ok]),
            _mean([r.evenness for r in ok]),
            _mean([r.ts_iterations for r in ok]),
            _mean([r.wall_time_ms for r in ok]),
        ))
    rows.sort(key=lambda s: (s.scenario, s.algorithm, s.alpha, -1.0 if s.tr is None else s.tr))
    return rows


def summary_to_csv(rows: Iterable[SummaryRow]) -> str:
    out = io.StringIO()
    out.write("scenario,algorithm,alpha,tr,runs,skipped,groups,cost,ungrouped,evenness,ts_iterations,wall_time_ms\n")
    for s in rows:
        tr = "" if s.tr is None else f"{s.tr:.6f}"
        out.write(f"{s.scenario},{s.algorithm},{s.alpha:.6f},{tr},{s.runs},{s.skipped},{s.groups:.6f},"
                  f"{s.cost:.6f},{s.ungrouped:.6f},{s.evenness:.6f},{s.ts_iterations:.6f},{s.wall_time_ms:.6f}\n")
    return out.getvalue()


def pct_change(new: float, base: float) -> float:
    return (new - base) / base * 100.0


# -- summary tables ----------------------------------------------------------

def compare_experiment(scenario: Scenario, base_seed: int, *, realizations: int = 20, repetitions: int = 20,
                       tr_values: Sequence[float] = (0.7, 0.4, 0.1), params: CostParams | None = None,
                       workers: int = 1) -> list[dict]:
    """PSG at several tr values against DSatur, PartialCol and TabuCol at alpha = 0.5."""
    params = params or CostParams()
    algos = [AlgorithmSpec("psg", params)] + [AlgorithmSpec(b, params) for b in BASELINES]
    plan = ExperimentPlan(scenario, tuple(algos), realizations, repetitions, (0.5,), tuple(tr_values), base_seed)
    summary = {(s.algorithm, s.tr): s for s in aggregate(run_plan(plan, workers=workers))}
    rows = []
    for tr in plan.tr_grid:
        s = summary[("psg", tr)]
        rows.append(_table_row(scenario.name, f"PSG(tr={tr:g})", s))
    for b, label in zip(BASELINES, ("DSatur", "PartialCol", "TabuCol")):
        s = summary[(b, None)]
        row = _table_row(scenario.name, label, s)
        row["cost"] = comparable_cost(s.evenness, 0.5)
        rows.append(row)
    return rows


def _table_row(scenario: str, label: str, s: SummaryRow) -> dict:
    return dict(scenario=scenario, algorithm=label, groups=s.groups, cost=s.cost, ungrouped=s.ungrouped,
                evenness=s.evenness, ts_iterations=s.ts_iterations, runs=s.runs, skipped=s.skipped)


ABLATION_VARIANTS = (
    ("PartialCol", "partialcol", None),
    ("+ELF", "partialcol+elf", None),
    ("+mod. TS (tr=0.7)", "partialcol+modts", 0.7),
    ("+mod. TS (tr=0.1)", "partialcol+modts", 0.1),
)


def ablation_experiment(scenario: Scenario, base_seed: int, *, realizations: int = 20, repetitions: int = 20,
                        params: CostParams | None = None, workers: int = 1) -> list[dict]:
    """PartialCol with ELF start or the joint-cost tabu search swapped in, at alpha = 0.5."""
    params = params or CostParams()
    algos = (AlgorithmSpec("partialcol", params), AlgorithmSpec("partialcol+elf", params),
             AlgorithmSpec("partialcol+modts", params))
    plan = ExperimentPlan(scenario, algos, realizations, repetitions, (0.5,), (0.7, 0.1), base_seed)
    summary = {(s.algorithm, s.tr): s for s in aggregate(run_plan(plan, workers=workers))}
    base = summary[("partialcol", None)]
    rows = []
    for label, algo, tr in ABLATION_VARIANTS:
        s = summary[(algo, tr)]
        row = _table_row(scenario.name, label, s)
        row["groups_change_pct"] = pct_change(s.groups, base.groups)
        row["cost_change_pct"] = pct_change(s.cost, base.cost)
        rows.append(row)
    return rows


REVES_ALPHAS = tuple(round(0.1 * i, 1) for i in range(1, 10))


def reves_experiment(scenario: Scenario, base_seed: int, *, realizations: int = 20, repetitions: int = 20,
                     params: CostParams | None = None, alphas: Sequence[float] = REVES_ALPHAS,
                     timing: bool = False, workers: int = 1) -> list[dict]:
    """PSG (tr = 0.7) with and without REvES, averaged over the alpha sweep."""
    params = replace(params or CostParams(), tr=0.7)
    off = AlgorithmSpec("psg", replace(params, reves_enabled=False), label="psg")
    on = AlgorithmSpec("psg", replace(params, reves_enabled=True), label="psg+reves")
    plan = ExperimentPlan(scenario, (off, on), realizations, repetitions, tuple(alphas), (0.7,), base_seed)
    records = run_plan(plan, timing=timing, workers=workers)
    per_alpha = aggregate(records)

    def avg(label: str, attr: str) -> float:
        return _mean([getattr(s, attr) for s in per_alpha if s.algorithm == label])

    rows = []
    for metric, attr in (("groups", "groups"), ("cost", "cost"), ("total_iterations", "ts_iterations"),
                         ("wall_time_ms", "wall_time_ms")):
        without, with_ = avg("psg", attr), avg("psg+reves", attr)
        change = pct_change(with_, without) if without else math.nan
        rows.append(dict(scenario=scenario.name, metric=metric, without_reves=without,
                         with_reves=with_, change_pct=change))
    return rows


def table_to_csv(rows: Sequence[dict]) -> str:
    if not rows:
        return ""
    out = io.StringIO()
    w = csv.DictWriter(out, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: (f"{v:.6f}" if isinstance(v, float) else v) for k, v in row.items()})
    return out.getvalue()


# -- round schedule ----------------------------------------------------------

@dataclass(frozen=True)
class RoundEntry:
    round: int
    group: int  # 1-based color set index
    members: tuple[int, ...]


def emit_schedule(s: GroupingSolution) -> list[RoundEntry]:
    """One round per color set, largest first (ties by set index); U gets no round."""
    order = sorted(range(s.k), key=lambda j: (-len(s.color_sets[j]), j))
    return [RoundEntry(r, j + 1, tuple(sorted(s.color_sets[j]))) for r, j in enumerate(order, 1)]


def format_schedule(entries: Sequence[RoundEntry]) -> str:
    return "".join(f"round={e.round} group=S{e.group} size={len(e.members)} "
                   f"members={','.join(map(str, e.members))}\n" for e in entries)


# -- config ------------------------------------------------------------------

_PARAM_KEYS = {f.name for f in fields(CostParams)}
_SCENARIO_KEYS = {f.name for f in fields(Scenario)}


def load_config(text: str) -> tuple[Scenario, dict]:
    """Parse a JSON config whose keys are Scenario and CostParams field names.

    A ``preset`` key starts from a named preset and overrides the rest.
    Returns the scenario and a dict of CostParams overrides.
    """
    data = json.loads(text)
    if not isinstance(data, dict):
        raise ValueError("config must be a JSON object")
    unknown = set(data) - _PARAM_KEYS - _SCENARIO_KEYS - {"preset"}
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    scen = {k: v for k, v in data.items() if k in _SCENARIO_KEYS}
    if "speed_range" in scen:
        scen["speed_range"] = tuple(scen["speed_range"])
    if "preset" in data:
        scenario = preset_scenario(data["preset"], **{k: v for k, v in scen.items() if k != "name"})
        if "name" in scen:
            scenario = replace(scenario, name=scen["name"])
    else:
        scenario = Scenario(**scen)
    return scenario, {k: v for k, v in data.items() if k in _PARAM_KEYS}
