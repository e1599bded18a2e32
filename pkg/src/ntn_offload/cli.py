"""Command line entry point and file formats.

Scenario configs are flat `key = value` text with dotted keys, for example
`radio.B_u = 1.4e6`; `#` starts a comment. Unknown keys are errors. The
same format is written back as `manifest.txt` so every run can be reloaded
exactly.

Commands:
  snapshot  run one snapshot and write per-task and per-tier CSVs
  sweep     run a delay-price sweep over one or more methods
  selftest  run built-in consistency checks on the default scenario

Exit codes: 0 success, 1 runtime error, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional, Sequence

from .orchestrator import (
    METHOD_PROPOSED,
    METHODS,
    PLACE_LOCAL,
    PLACE_MCC,
    PLACE_MEC,
    SnapshotReport,
    SweepResult,
    run_snapshot,
    run_sweep,
    tasks_for_snapshot,
)
from .scenario import (
    AtgEnvironment,
    ComputeParams,
    CostParams,
    GroundDevice,
    PayloadClassSpec,
    Position3D,
    RadioParams,
    Scenario,
    ScenarioError,
    place_gds,
    validate_scenario,
)
from .taskgen import default_class_specs

DEFAULT_CTAU_GRID = (10.0, 100.0, 1000.0, 10_000.0, 100_000.0)
DEFAULT_SNAPSHOTS = 20


class ConfigError(ValueError):
    pass


class MissingScenario(ValueError):
    pass


@dataclass(frozen=True)
class RunManifest:
    command: str
    scenario_path: Optional[str]
    output_dir: str
    overrides: tuple[tuple[str, str], ...]
    seed: Optional[int]
    ctau_grid: tuple[float, ...]
    n_snapshots: int
    method: str


# ---------------------------------------------------------------------------
# Config format


def _parse_config_text(text: str, source: str = "<config>") -> dict[str, str]:
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        entries[key.strip()] = value.strip()
    return entries


def _pos(value: str, key: str) -> Position3D:
    parts = [p.strip() for p in value.split(",")]
    if len(parts) != 3:
        raise ConfigError(f"{key}: expected 'x,y,z', got {value!r}")
    return Position3D(*(float(p) for p in parts))


_RADIO_FLOATS = {
    "radio.B_u": "B_u", "radio.B_h": "B_h",
    "radio.f_c_access": "f_c_access", "radio.f_c_feeder": "f_c_feeder",
    "radio.N0": "N0", "radio.p_i": "p_i", "radio.p_h": "p_h", "radio.p_s": "p_s",
    "radio.rician_K": "rician_K", "radio.G_atm": "G_atm",
    "radio.psd_ref_bw_access": "psd_ref_bw_access",
    "radio.psd_ref_bw_feeder": "psd_ref_bw_feeder",
}
_RADIO_INTS = {
    "radio.M_h_d": "M_h_d", "radio.M_h_u": "M_h_u",
    "radio.M_s": "M_s", "radio.M_g": "M_g",
}
_ATG_FLOATS = {
    "radio.atg.a": "a", "radio.atg.b": "b",
    "radio.atg.eta_los_db": "eta_los_db", "radio.atg.eta_nlos_db": "eta_nlos_db",
}
_COST_FLOATS = {"cost.c_tau": "c_tau", "cost.c_Bu": "c_Bu", "cost.c_Bh": "c_Bh"}
_COMPUTE_FLOATS = {"compute.F_h": "F_h", "compute.f_local": "f_local"}
_CLASS_FLOATS = ("mean_bits", "rel_std", "mu", "tau_max", "mix_fraction")


def scenario_from_entries(entries: dict[str, str]) -> Scenario:
    """Build a validated Scenario from dotted-key entries plus defaults."""
    radio_kw, atg_kw, cost_kw, compute_kw = {}, {}, {}, {}
    class_kw: dict[str, dict[str, float]] = {}
    gd_explicit: dict[int, Position3D] = {}
    top: dict[str, object] = {}
    gd_count, gd_radius = 14, 500.0

    for key, value in entries.items():
        try:
            if key in _RADIO_FLOATS:
                radio_kw[_RADIO_FLOATS[key]] = float(value)
            elif key in _RADIO_INTS:
                radio_kw[_RADIO_INTS[key]] = int(value)
            elif key in _ATG_FLOATS:
                atg_kw[_ATG_FLOATS[key]] = float(value)
            elif key in _COST_FLOATS:
                cost_kw[_COST_FLOATS[key]] = float(value)
            elif key in _COMPUTE_FLOATS:
                compute_kw[_COMPUTE_FLOATS[key]] = float(value)
            elif key == "compute.haps_share_policy":
                compute_kw["haps_share_policy"] = value
            elif key == "seed":
                top["seed"] = int(value)
            elif key == "price_margin_eps":
                top["price_margin_eps"] = float(value)
            elif key == "gd.count":
                gd_count = int(value)
            elif key == "gd.radius_m":
                gd_radius = float(value)
            elif key in ("haps.pos", "leo.pos", "gw.pos"):
                top[key.split(".")[0]] = _pos(value, key)
            elif key.startswith("gd.") and key.endswith(".pos"):
                idx = int(key.split(".")[1])
                gd_explicit[idx] = _pos(value, key)
            elif key.startswith("class."):
                _, name, field_name = key.split(".", 2)
                if field_name not in _CLASS_FLOATS:
                    raise ConfigError(f"unknown config key {key!r}")
                class_kw.setdefault(name, {})[field_name] = float(value)
            else:
                raise ConfigError(f"unknown config key {key!r}")
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"{key}: bad value {value!r} ({exc})") from exc

    if atg_kw:
        radio_kw["atg_env"] = AtgEnvironment(**{**AtgEnvironment().__dict__, **atg_kw})

    classes = []
    for spec in default_class_specs():
        override = class_kw.pop(spec.name, {})
        classes.append(replace(spec, **override))
    for name, fields in class_kw.items():
        missing = [f for f in _CLASS_FLOATS if f not in fields]
        if missing:
            raise ConfigError(f"class.{name}: missing fields {missing}")
        classes.append(PayloadClassSpec(name=name, **fields))

    seed = int(top.get("seed", 1))
    if gd_explicit:
        count = max(gd_explicit) + 1
        missing = [i for i in range(count) if i not in gd_explicit]
        if missing:
            raise ConfigError(f"gd positions missing for indices {missing}")
        gds = tuple(GroundDevice(i, gd_explicit[i]) for i in range(count))
    else:
        gds = place_gds(gd_count, gd_radius, seed)

    return validate_scenario(
        Scenario(
            gds=gds,
            haps_pos=top.get("haps", Position3D(0.0, 0.0, 20e3)),
            leo_pos=top.get("leo", Position3D(0.0, 5e3, 500e3)),
            gw_pos=top.get("gw", Position3D(0.0, 10e3, 0.0)),
            radio=RadioParams(**radio_kw),
            cost=CostParams(**cost_kw),
            compute=ComputeParams(**compute_kw),
            classes=tuple(classes),
            seed=seed,
            price_margin_eps=float(top.get("price_margin_eps", 1e-3)),
        )
    )


def load_scenario(path: str, overrides: Sequence[tuple[str, str]] = ()) -> Scenario:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read scenario file {path}: {exc}") from exc
    entries = _parse_config_text(text, source=path)
    for key, value in overrides:
        entries[key] = value
    return scenario_from_entries(entries)


def scenario_to_entries(s: Scenario) -> list[tuple[str, str]]:
    """Serialize a scenario to dotted-key entries that reload identically."""
    out: list[tuple[str, str]] = [("seed", repr(s.seed))]
    out.append(("price_margin_eps", repr(s.price_margin_eps)))
    r = s.radio
    for key, attr in _RADIO_FLOATS.items():
        out.append((key, repr(getattr(r, attr))))
    for key, attr in _RADIO_INTS.items():
        out.append((key, repr(getattr(r, attr))))
    for key, attr in _ATG_FLOATS.items():
        out.append((key, repr(getattr(r.atg_env, attr))))
    for key, attr in _COST_FLOATS.items():
        out.append((key, repr(getattr(s.cost, attr))))
    for key, attr in _COMPUTE_FLOATS.items():
        out.append((key, repr(getattr(s.compute, attr))))
    out.append(("compute.haps_share_policy", s.compute.haps_share_policy))
    for prefix, pos in (("haps", s.haps_pos), ("leo", s.leo_pos), ("gw", s.gw_pos)):
        out.append((f"{prefix}.pos", f"{pos.x!r},{pos.y!r},{pos.z!r}"))
    out.append(("gd.count", repr(len(s.gds))))
    for g in s.gds:
        out.append((f"gd.{g.id}.pos", f"{g.pos.x!r},{g.pos.y!r},{g.pos.z!r}"))
    for spec in s.classes:
        for field_name in _CLASS_FLOATS:
            out.append((f"class.{spec.name}.{field_name}", repr(getattr(spec, field_name))))
    return out


# ---------------------------------------------------------------------------
# Report writers

TIER_COLUMNS = ["c_tau", "method", "tier", "real_cost_mean", "real_cost_std"]
PLACEMENT_COLUMNS = ["c_tau", "method", "payload_class", "location", "fraction"]
TASK_COLUMNS = [
    "c_tau", "method", "seed", "task_id", "payload_class", "d_bits", "mu",
    "tau_max", "placement", "deadline_miss", "price_mec", "price_mcc", "rho",
    "tx_access_s", "tx_feeder_s", "compute_s", "total_delay_s",
]


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _task_rows(rep: SnapshotReport) -> list[list]:
    rows = []
    for o in rep.outcomes:
        rows.append([
            rep.c_tau, rep.method, rep.seed, o.task_id, o.payload_class, o.d,
            o.mu, o.tau_max, o.placement, o.deadline_miss, o.price_mec,
            o.price_mcc, o.rho, o.delays.tx_access, o.delays.tx_feeder,
            o.delays.compute, o.delays.total,
        ])
    return rows


def _snapshot_rows(rep: SnapshotReport):
    tiers = [
        ("gd", rep.tier.real_gd_total),
        ("mec", rep.tier.real_mec),
        ("mcc", rep.tier.real_mcc),
    ]
    tier_rows = [[rep.c_tau, rep.method, name, value, 0.0] for name, value in tiers]
    totals: dict[str, int] = {}
    counts: dict[tuple[str, str], int] = {}
    for o in rep.outcomes:
        totals[o.payload_class] = totals.get(o.payload_class, 0) + 1
        counts[(o.payload_class, o.placement)] = counts.get((o.payload_class, o.placement), 0) + 1
    place_rows = [
        [rep.c_tau, rep.method, cls, place, counts.get((cls, place), 0) / totals[cls]]
        for cls in sorted(totals)
        for place in (PLACE_LOCAL, PLACE_MEC, PLACE_MCC)
    ]
    return tier_rows, place_rows, _task_rows(rep)


def _sweep_rows(result: SweepResult):
    tier_rows, place_rows, task_rows = [], [], []
    for cell in result.cells:
        for tier in ("gd", "mec", "mcc"):
            tier_rows.append([
                cell.c_tau, cell.method, tier,
                cell.real_cost_mean[tier], cell.real_cost_std[tier],
            ])
        for (cls, place), frac in sorted(cell.placement_fraction.items()):
            place_rows.append([cell.c_tau, cell.method, cls, place, frac])
    for rep in result.reports:
        task_rows.extend(_task_rows(rep))
    return tier_rows, place_rows, task_rows


def write_reports(obj, output_dir: str, scenario: Scenario, extra_manifest: Sequence[str] = ()) -> list[Path]:
    """Write tier_costs.csv, placement.csv, tasks.csv and manifest.txt."""
    out = Path(output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        if isinstance(obj, SnapshotReport):
            tier_rows, place_rows, task_rows = _snapshot_rows(obj)
        elif isinstance(obj, SweepResult):
            tier_rows, place_rows, task_rows = _sweep_rows(obj)
        else:
            raise TypeError(f"cannot write reports for {type(obj)!r}")
        paths = [out / "tier_costs.csv", out / "placement.csv", out / "tasks.csv", out / "manifest.txt"]
        _write_csv(paths[0], TIER_COLUMNS, tier_rows)
        _write_csv(paths[1], PLACEMENT_COLUMNS, place_rows)
        _write_csv(paths[2], TASK_COLUMNS, task_rows)
        lines = [f"# {line}" for line in extra_manifest]
        lines += [f"{k} = {v}" for k, v in scenario_to_entries(scenario)]
        paths[3].write_text("\n".join(lines) + "\n", encoding="utf-8")
        return paths
    except OSError as exc:
        raise IOError(f"cannot write reports under {output_dir}: {exc}") from exc


# ---------------------------------------------------------------------------
# Argument handling


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit code 2 with usage, no traceback
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(2)


def _build_parser() -> _Parser:
    parser = _Parser(prog="ntn-offload", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("snapshot", "sweep", "selftest"):
        p = sub.add_parser(name)
        p.add_argument("--scenario", default=None, help="scenario config file")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--seed", type=int, default=None, help="override the scenario seed")
        p.add_argument("--set", dest="overrides", action="append", default=[],
                       metavar="KEY=VALUE", help="override a config entry (repeatable)")
        if name == "sweep":
            p.add_argument("--ctau-grid", default=None,
                           help="comma-separated delay-price grid")
            p.add_argument("--snapshots", type=int, default=DEFAULT_SNAPSHOTS)
            p.add_argument("--method", default="all",
                           choices=[*METHODS, "all"])
        elif name == "snapshot":
            p.add_argument("--method", default=METHOD_PROPOSED,
                           choices=[*METHODS, "all"])
    return parser


def parse_args(argv: Sequence[str]) -> RunManifest:
    args = _build_parser().parse_args(argv)
    if args.command in ("snapshot", "sweep") and not args.scenario:
        raise MissingScenario(f"{args.command} requires --scenario PATH")
    overrides = []
    for item in args.overrides:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        overrides.append((key.strip(), value.strip()))
    grid = DEFAULT_CTAU_GRID
    if getattr(args, "ctau_grid", None):
        try:
            grid = tuple(float(x) for x in args.ctau_grid.split(","))
        except ValueError as exc:
            raise ConfigError(f"--ctau-grid: {exc}") from exc
        if not grid:
            raise ConfigError("--ctau-grid must list at least one value")
    return RunManifest(
        command=args.command,
        scenario_path=args.scenario,
        output_dir=args.out,
        overrides=tuple(overrides),
        seed=args.seed,
        ctau_grid=grid,
        n_snapshots=getattr(args, "snapshots", DEFAULT_SNAPSHOTS),
        method=getattr(args, "method", METHOD_PROPOSED),
    )


def _selftest(out_dir: str) -> int:
    """Quick consistency pass over the default scenario; prints one line per
    check and returns a process exit code."""
    from .scenario import default_scenario

    checks = []
    scn = default_scenario()
    tasks = tasks_for_snapshot(scn)
    rep = run_snapshot(scn, tasks)
    checks.append(("snapshot determinism", rep == run_snapshot(scn, tasks)))
    checks.append(("bandwidth budget", sum(o.rho for o in rep.outcomes) <= 1.0 + 1e-9))
    checks.append(("feeder share in range", 0.0 <= rep.rho_b <= 1.0))
    checks.append(("prices non-negative",
                   all(o.price_mec >= 0 and o.price_mcc >= 0 for o in rep.outcomes)))
    checks.append(("flag consistency", all(o.beta_hs <= o.beta_uh for o in rep.outcomes)))
    misses = [o for o in rep.outcomes if not o.deadline_miss and o.delays.total > o.tau_max]
    checks.append(("deadlines honored", not misses))
    zero_sum = rep.tier.real_gd_total + rep.tier.real_mec + rep.tier.real_mcc
    checks.append(("real costs cancel across tiers", abs(zero_sum) <= 1e-9))
    ok = True
    for name, passed in checks:
        print(f"{'PASS' if passed else 'FAIL'}  {name}")
        ok &= passed
    return 0 if ok else 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        manifest = parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (MissingScenario, ConfigError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2

    try:
        if manifest.command == "selftest":
            return _selftest(manifest.output_dir)
        scenario = load_scenario(manifest.scenario_path, manifest.overrides)
        if manifest.seed is not None:
            scenario = scenario.with_seed(manifest.seed)
        methods = METHODS if manifest.method == "all" else (manifest.method,)
        header = [
            f"command: {manifest.command}",
            f"methods: {','.join(methods)}",
        ]
        if manifest.command == "snapshot":
            tasks = tasks_for_snapshot(scenario)
            if len(methods) == 1:
                result = run_snapshot(scenario, tasks, methods[0])
            else:
                result = run_sweep(scenario, [scenario.cost.c_tau], 1, methods)
        else:
            header.append(f"ctau_grid: {','.join(repr(x) for x in manifest.ctau_grid)}")
            header.append(f"snapshots: {manifest.n_snapshots}")
            result = run_sweep(scenario, manifest.ctau_grid, manifest.n_snapshots, methods)
        paths = write_reports(result, manifest.output_dir, scenario, header)
        print("\n".join(str(p) for p in paths))
        return 0
    except (ScenarioError, ConfigError, IOError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
