"""Experiment harness: config parsing, repeated seeded runs, CSV/table reports.

Config files are flat ``key = value`` text with ``[policy]`` sections,
e.g.::

    seed = 42
    runs = 10
    frame_seconds = 30

    [policy]
    kind = MM
    lower = 0.3
    upper = 0.7

Thresholds in config files are fractions; the --lower/--upper command
line flags take percentages.  An empty config reproduces the default
seven-row experiment (NPA, DVFS, ST 50/60%, MM 30-70/40-80/50-90%).
An optional ``[sweep]`` section with ``pairs = 0.3:0.7, 0.4:0.8``
expands every threshold-taking policy given without thresholds across
the grid (ST uses the upper value of each pair).
"""

import argparse
import csv
import io
import statistics
import sys
from dataclasses import dataclass, field, replace

from . import __version__
from .engine import InfeasibleScenarioError, run
from .model import Scenario, default_paper_scenario
from .policies import PolicyConfig
from .workload import child_rng

DEFAULT_POLICIES = (
    PolicyConfig("NPA"),
    PolicyConfig("DVFS"),
    PolicyConfig("ST", upper_threshold=0.5),
    PolicyConfig("ST", upper_threshold=0.6),
    PolicyConfig("MM", 0.3, 0.7),
    PolicyConfig("MM", 0.4, 0.8),
    PolicyConfig("MM", 0.5, 0.9),
)

CSV_COLUMNS = ["policy", "lower_pct", "upper_pct",
               "energy_kwh_mean", "energy_kwh_std",
               "sla_pct_mean", "sla_pct_std",
               "migrations_mean", "migrations_std",
               "avg_sla_pct_mean", "duration_s_mean",
               "seed", "runs", "frame_seconds"]


class ConfigError(ValueError):
    """Malformed or invalid experiment configuration."""


@dataclass(frozen=True)
class _SweepPolicy:
    # placeholder for a thresholded policy awaiting [sweep] expansion
    kind: str
    lower_threshold: float = None
    upper_threshold: float = None


@dataclass
class ExperimentSpec:
    scenario: Scenario
    policies: list
    threshold_grid: list = field(default_factory=list)
    output_path: str = None

    def __post_init__(self):
        if not self.policies:
            raise ConfigError("at least one policy is required")


@dataclass
class ReportRow:
    policy: str
    lower_threshold: float
    upper_threshold: float
    energy_kwh_mean: float
    energy_kwh_std: float
    sla_pct_mean: float
    sla_pct_std: float
    migrations_mean: float
    migrations_std: float
    avg_sla_pct_mean: float
    duration_s_mean: float


@dataclass
class Report:
    rows: list
    metadata: dict


_SCALAR_KEYS = {"seed": int, "runs": int, "frame_seconds": float,
                "hosts": int, "vms": int, "out": str}
_POLICY_KEYS = {"kind": str, "lower": float, "upper": float}


def parse_config(text: str) -> ExperimentSpec:
    """Parse the documented config format into a validated ExperimentSpec."""
    scalars = {}
    policy_sections = []
    sweep_pairs = []
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip().lower()
            if name == "policy":
                policy_sections.append({})
                section = policy_sections[-1]
            elif name == "sweep":
                section = "sweep"
            else:
                raise ConfigError("line %d: unknown section [%s]" % (lineno, name))
            continue
        if "=" not in line:
            raise ConfigError("line %d: expected key = value" % lineno)
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if section is None:
            if key not in _SCALAR_KEYS:
                raise ConfigError("line %d: unknown key %r" % (lineno, key))
            try:
                scalars[key] = _SCALAR_KEYS[key](value)
            except ValueError:
                raise ConfigError("line %d: bad value for %r" % (lineno, key))
        elif section == "sweep":
            if key != "pairs":
                raise ConfigError("line %d: unknown sweep key %r" % (lineno, key))
            try:
                for pair in value.split(","):
                    lo, _, hi = pair.strip().partition(":")
                    sweep_pairs.append((float(lo), float(hi)))
            except ValueError:
                raise ConfigError("line %d: bad threshold pair" % lineno)
        else:
            if key not in _POLICY_KEYS:
                raise ConfigError("line %d: unknown policy key %r" % (lineno, key))
            try:
                section[key] = _POLICY_KEYS[key](value)
            except ValueError:
                raise ConfigError("line %d: bad value for %r" % (lineno, key))

    policies = []
    for sec in policy_sections:
        if "kind" not in sec:
            raise ConfigError("[policy] section missing 'kind'")
        kind, lower, upper = sec["kind"], sec.get("lower"), sec.get("upper")
        if (sweep_pairs and lower is None and upper is None
                and kind in ("ST", "MM", "HPG", "RC")):
            # thresholds come from the [sweep] grid at expansion time
            policies.append(_SweepPolicy(kind))
            continue
        try:
            policies.append(PolicyConfig(kind=kind, lower_threshold=lower,
                                         upper_threshold=upper))
        except ValueError as exc:
            raise ConfigError(str(exc))
    if not policies:
        policies = list(DEFAULT_POLICIES)

    scenario = default_paper_scenario(
        frame_seconds=scalars.get("frame_seconds", 30.0),
        seed=scalars.get("seed", 42),
        runs=scalars.get("runs", 10),
        n_hosts=scalars.get("hosts", 100),
        n_vms=scalars.get("vms", 290))
    return ExperimentSpec(scenario=scenario, policies=policies,
                          threshold_grid=sweep_pairs,
                          output_path=scalars.get("out"))


def expand_rows(spec: ExperimentSpec) -> list:
    """One PolicyConfig per report row, grid-expanded where applicable."""
    rows = []
    for p in spec.policies:
        if p.kind in ("NPA", "DVFS") or p.upper_threshold is not None:
            rows.append(p)
        elif spec.threshold_grid:
            for lo, hi in sorted(spec.threshold_grid):
                if p.kind == "ST":
                    rows.append(PolicyConfig("ST", upper_threshold=hi))
                else:
                    rows.append(PolicyConfig(p.kind, lo, hi))
        else:
            raise ConfigError("policy %s needs thresholds or a [sweep] grid" % p.kind)
    return rows


def _std(values):
    return statistics.stdev(values) if len(values) > 1 else 0.0


def run_experiment(spec: ExperimentSpec) -> Report:
    """Execute every (policy, thresholds) row over `runs` child-seeded runs."""
    base = spec.scenario
    rows = []
    for p in expand_rows(spec):
        scenario = replace(base, policy=p.kind,
                           lower_threshold=p.lower_threshold,
                           upper_threshold=p.upper_threshold)
        try:
            results = [run(scenario, seed=child_rng(base.seed, i).seed)
                       for i in range(base.runs)]
        except InfeasibleScenarioError as exc:
            raise InfeasibleScenarioError("%s (policy row %s)" % (exc, p.kind))
        rows.append(ReportRow(
            policy=p.kind,
            lower_threshold=p.lower_threshold,
            upper_threshold=p.upper_threshold,
            energy_kwh_mean=statistics.fmean(r.energy_kwh for r in results),
            energy_kwh_std=_std([r.energy_kwh for r in results]),
            sla_pct_mean=statistics.fmean(r.sla_violation_pct for r in results),
            sla_pct_std=_std([r.sla_violation_pct for r in results]),
            migrations_mean=statistics.fmean(r.migration_count for r in results),
            migrations_std=_std([float(r.migration_count) for r in results]),
            avg_sla_pct_mean=statistics.fmean(r.avg_sla_pct for r in results),
            duration_s_mean=statistics.fmean(r.sim_duration_s for r in results)))
    metadata = {"seed": base.seed, "runs": base.runs,
                "frame_seconds": base.frame_seconds,
                "hosts": len(base.hosts), "vms": len(base.vms),
                "version": __version__}
    return Report(rows=rows, metadata=metadata)


def _fmt(value, places=6):
    if value is None:
        return ""
    return ("%.*f" % (places, value)).rstrip("0").rstrip(".") or "0"


def _row_cells(row: ReportRow, meta):
    static = row.policy in ("NPA", "DVFS")
    return [
        row.policy,
        _fmt(None if row.lower_threshold is None else 100.0 * row.lower_threshold, 1),
        _fmt(None if row.upper_threshold is None else 100.0 * row.upper_threshold, 1),
        _fmt(row.energy_kwh_mean), _fmt(row.energy_kwh_std),
        "" if static else _fmt(row.sla_pct_mean),
        "" if static else _fmt(row.sla_pct_std),
        _fmt(row.migrations_mean), _fmt(row.migrations_std),
        "" if static else _fmt(row.avg_sla_pct_mean),
        _fmt(row.duration_s_mean),
        str(meta["seed"]), str(meta["runs"]), _fmt(meta["frame_seconds"]),
    ]


def emit_report(report: Report, format="csv") -> bytes:
    """Render the report as RFC-4180 CSV or an aligned text table."""
    table = [CSV_COLUMNS] + [_row_cells(r, report.metadata) for r in report.rows]
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerows(table)
        return buf.getvalue().encode("utf-8")
    if format == "table":
        widths = [max(len(row[i]) for row in table) for i in range(len(CSV_COLUMNS))]
        lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
                 for row in table]
        return ("\n".join(lines) + "\n").encode("utf-8")
    raise ValueError("unknown format %r" % (format,))


class _Parser(argparse.ArgumentParser):
    # validation failures exit 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, "%s: error: %s\n" % (self.prog, message))


def build_parser():
    parser = _Parser(prog="dcsim",
                     description="Energy-aware VM consolidation experiments")
    parser.add_argument("--config", help="experiment config file")
    parser.add_argument("--policy", action="append",
                        help="policy to run (repeatable): NPA, DVFS, ST, MM, HPG, RC")
    parser.add_argument("--lower", type=float, help="lower threshold, percent")
    parser.add_argument("--upper", type=float, help="upper threshold, percent")
    parser.add_argument("--seed", type=int, help="master RNG seed")
    parser.add_argument("--runs", type=int, help="repetitions per row")
    parser.add_argument("--frame-seconds", type=float, help="frame length in seconds")
    parser.add_argument("--hosts", type=int, help="number of hosts in the fleet")
    parser.add_argument("--vms", type=int, help="number of VMs in the fleet")
    parser.add_argument("--format", choices=["csv", "table"], default="csv")
    parser.add_argument("--out", help="output path (default: stdout)")
    return parser


def _spec_from_args(args) -> ExperimentSpec:
    text = ""
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            text = fh.read()
    spec = parse_config(text)
    scenario_overrides = {}
    for name, attr in (("seed", "seed"), ("runs", "runs"),
                       ("frame_seconds", "frame_seconds")):
        value = getattr(args, name)
        if value is not None:
            scenario_overrides[attr] = value
    if args.hosts is not None or args.vms is not None:
        base = spec.scenario
        spec.scenario = default_paper_scenario(
            frame_seconds=base.frame_seconds, seed=base.seed, runs=base.runs,
            n_hosts=args.hosts if args.hosts is not None else len(base.hosts),
            n_vms=args.vms if args.vms is not None else len(base.vms))
    if scenario_overrides:
        spec.scenario = replace(spec.scenario, **scenario_overrides)
    if args.policy:
        lower = None if args.lower is None else args.lower / 100.0
        upper = None if args.upper is None else args.upper / 100.0
        try:
            spec.policies = [
                PolicyConfig(kind,
                             lower_threshold=lower if kind in ("MM", "HPG", "RC") else None,
                             upper_threshold=upper if kind in ("ST", "MM", "HPG", "RC") else None)
                for kind in args.policy]
        except ValueError as exc:
            raise ConfigError(str(exc))
    if args.out is not None:
        spec.output_path = args.out
    return spec


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = _spec_from_args(args)
        report = run_experiment(spec)
    except (ConfigError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except InfeasibleScenarioError as exc:
        print("infeasible scenario: %s" % exc, file=sys.stderr)
        return 2
    payload = emit_report(report, format=args.format)
    if spec.output_path:
        with open(spec.output_path, "wb") as fh:
            fh.write(payload)
    else:
        sys.stdout.buffer.write(payload)
    return 0


if __name__ == "__main__":
    sys.exit(main())
