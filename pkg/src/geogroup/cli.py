"""Command-line entry point: ``geogroup <subcommand> ...``."""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace
from pathlib import Path

from . import harness
from .grouping import CostParams, parse_solution
from .iid import iid_report, read_measurements
from .mobility import PRESET_NAMES, preset_scenario


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _u64(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _scenario(arg: str):
    if arg in PRESET_NAMES:
        return preset_scenario(arg), {}
    path = Path(arg)
    if not path.is_file():
        raise SystemExit(f"--scenario: {arg!r} is neither a preset {PRESET_NAMES} nor a config file")
    return harness.load_config(path.read_text())


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_estimate_iid(a) -> None:
    m = read_measurements(Path(a.input).read_text())
    base = 2.0 if a.kl_units == "bits" else math.e
    _write(a.out, iid_report(m, a.ref, a.kl_threshold, a.corr_threshold, a.confidence, a.bins, kl_base=base))


def cmd_simulate(a) -> None:
    scenario, overrides = _scenario(a.scenario)
    params = CostParams(**overrides)
    params = replace(params, reves_enabled=a.reves or params.reves_enabled,
                     reves_ws=a.reves_ws or params.reves_ws, reves_p=a.reves_p or params.reves_p)
    plan = harness.ExperimentPlan(
        scenario, (harness.AlgorithmSpec(a.algo, params),), a.realizations, a.repetitions,
        tuple(a.alpha), tuple(a.tr), a.seed)
    records = harness.run_plan(plan, timing=a.timing, workers=a.workers)
    _write(a.out, harness.records_to_csv(records))
    skipped = sum(1 for r in records if r.skipped)
    if skipped:
        print(f"skipped {skipped} cells", file=sys.stderr)


def _table(a, fn, **kw) -> None:
    scenario, overrides = _scenario(a.scenario)
    rows = fn(scenario, a.seed, realizations=a.realizations, repetitions=a.repetitions,
              params=CostParams(**overrides), workers=a.workers, **kw)
    _write(a.out, harness.table_to_csv(rows))


def cmd_schedule(a) -> None:
    sol, _ = parse_solution(Path(a.solution).read_text())
    _write(a.out, harness.format_schedule(harness.emit_schedule(sol)))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="geogroup", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("estimate-iid", help="derive d_max / d_min from probe measurements")
    e.add_argument("--input", required=True)
    e.add_argument("--ref", required=True)
    e.add_argument("--kl-threshold", type=float, required=True)
    e.add_argument("--corr-threshold", type=float, required=True)
    e.add_argument("--confidence", type=float, default=0.95)
    e.add_argument("--bins", type=int, default=5)
    e.add_argument("--kl-units", choices=("nats", "bits"), default="nats")
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_estimate_iid)

    def grid(sp, seed_required=False):
        sp.add_argument("--scenario", required=True, help=f"{'|'.join(PRESET_NAMES)} or a JSON config file")
        sp.add_argument("--seed", type=_u64, default=None if seed_required else 0, required=seed_required)
        sp.add_argument("--realizations", type=int, default=20)
        sp.add_argument("--repetitions", type=int, default=20)
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--out", required=True)

    s = sub.add_parser("simulate", help="run one algorithm over a seeded grid, write records CSV")
    grid(s)
    s.add_argument("--algo", required=True, choices=harness.ALGORITHMS)
    s.add_argument("--alpha", type=_floats, default=[0.5])
    s.add_argument("--tr", type=_floats, default=[0.7])
    s.add_argument("--reves", action="store_true")
    s.add_argument("--reves-ws", type=int, default=None)
    s.add_argument("--reves-p", type=int, default=None)
    s.add_argument("--timing", action="store_true", help="record wall times (output no longer byte-reproducible)")
    s.set_defaults(func=cmd_simulate)

    ab = sub.add_parser("ablate", help="ablation table (PartialCol variants)")
    grid(ab, seed_required=True)
    ab.set_defaults(func=lambda a: _table(a, harness.ablation_experiment))

    c = sub.add_parser("compare", help="PSG against DSatur / PartialCol / TabuCol")
    grid(c, seed_required=True)
    c.set_defaults(func=lambda a: _table(a, harness.compare_experiment))

    r = sub.add_parser("reves", help="PSG with and without early stopping")
    grid(r, seed_required=True)
    r.set_defaults(func=lambda a: _table(a, harness.reves_experiment, timing=True))

    sc = sub.add_parser("schedule", help="turn a solution file into a round schedule")
    sc.add_argument("--solution", required=True)
    sc.add_argument("--out", required=True)
    sc.set_defaults(func=cmd_schedule)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    args.func(args)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
