"""Command-line front end: scenario runs, parameter sweeps, serialization.

Configs are TOML; each run writes ledger.csv (one row per grid time,
fixed column order) and summary.json.  Exit codes: 0 all checks passed,
2 some check failed, 1 configuration or runtime error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import __version__, qstate, scenarios
from .ell_ledger import BetaSolution
from .errors import ConfigError, EntroLedgerError

CSV_COLUMNS = [
    "t", "S_A", "S_B", "S_AB", "I_AB", "beta_B", "beta_B_kind", "Qdot_B",
    "sigma_clausius", "sigma_clausius_quadrature", "sigma_fixed_beta",
    "sigma_fixed_kind", "Q_energy", "delta_sum_vn", "s_obs_A", "s_obs_B",
    "sigma_obs", "beta_obs_B", "beta_obs_kind",
]

COARSE_GRAINING_CHOICES = ("energy_bins", "half_chain_number", "identity", "eigenbasis")


@dataclasses.dataclass(frozen=True)
class ScenarioDef:
    builder: object
    params: dict            # name -> default (type inferred from the default)
    demonstrates: str
    check_names: tuple


SCENARIOS: dict[str, ScenarioDef] = {
    "gas_expansion": ScenarioDef(
        scenarios.gas_expansion,
        {"L": 8, "L_init": 4, "N": 1, "J": 1.0, "g": 0.3},
        "expansion entropy grows with particle number while the "
        "correlation-based production stays below 2 ln 2 (qubit B)",
        ("sigma_ell_bound", "master_identity"),
    ),
    "driven_qubit": ScenarioDef(
        scenarios.driven_qubit,
        {"levels_B": 16, "g": 0.2},
        "a long drive cannot push the correlation-based production of a "
        "single qubit above 2 ln 2",
        ("sigma_ell_bound", "master_identity"),
    ),
    "twin_bodies": ScenarioDef(
        scenarios.twin_bodies,
        {"n_spins": 3, "beta_A0": 1.0, "beta_B0": 1.0, "g": 0.1,
         "field": 4.0, "j_xy": 0.4},
        "energy flow between identical bodies follows the energy "
        "difference; at equal temperatures the entropy-matched beta "
        "still drifts with no energy flow",
        ("hot_to_cold", "no_energy_flow", "beta_drift", "heat_definitions_disagree"),
    ),
    "pure_bath": ScenarioDef(
        scenarios.pure_bath,
        {"d_B": 8, "excited_index": 0, "g": 0.2},
        "every pure eigenstate of B maps to temperature zero regardless "
        "of its energy, and the fixed-beta production diverges",
        ("beta0_zero_temperature", "fixed_beta_divergent"),
    ),
    "degenerate_ground": ScenarioDef(
        scenarios.degenerate_ground,
        {"g0": 2, "s_target": 0.0, "g": 0.05},
        "the entropy-matching equation has no solution below ln g0 when "
        "the ground level is degenerate",
        ("beta_classification",),
    ),
}

SAMPLER_PARAMS = {"trials": 100, "d_A": 2, "d_B": 2}

TOP_LEVEL_KEYS = {"scenario", "output_dir", "dt", "steps", "seed", "dim_cap",
                  "params", "coarse_graining"}


def load_config(path: str | Path) -> dict:
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config does not parse as TOML: {exc}") from exc

    unknown = set(raw) - TOP_LEVEL_KEYS
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(sorted(unknown))}")
    name = raw.get("scenario")
    if not name:
        raise ConfigError("config is missing the 'scenario' key")
    if name != "bounds_sampler" and name not in SCENARIOS:
        raise ConfigError(f"unknown scenario {name!r}; see 'entroledger list'")

    allowed = dict(SAMPLER_PARAMS) if name == "bounds_sampler" else SCENARIOS[name].params
    params = dict(raw.get("params", {}))
    unknown = set(params) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown scenario parameter(s): {', '.join(sorted(unknown))}")
    for key, default in allowed.items():
        value = params.get(key, default)
        if isinstance(default, int) and not isinstance(default, bool):
            if isinstance(value, float) and not value.is_integer():
                raise ConfigError(f"parameter {key!r} must be an integer")
            value = int(value)
        else:
            value = float(value)
        params[key] = value

    cg = dict(raw.get("coarse_graining", {}))
    unknown = set(cg) - {"A", "B"}
    if unknown:
        raise ConfigError(f"unknown coarse_graining key(s): {', '.join(sorted(unknown))}")
    for side, choice in cg.items():
        base = str(choice).split(":")[0]
        if base not in COARSE_GRAINING_CHOICES:
            raise ConfigError(f"unknown coarse-graining {choice!r} for side {side}")

    return {
        "scenario": name,
        "params": params,
        "dt": float(raw["dt"]) if "dt" in raw else None,
        "steps": int(raw["steps"]) if "steps" in raw else None,
        "seed": int(raw.get("seed", 0)),
        "dim_cap": int(raw["dim_cap"]) if "dim_cap" in raw else None,
        "output_dir": raw.get("output_dir"),
        "coarse_graining": cg,
    }


def _resolve_coarse_graining(choice: str, hamiltonian: np.ndarray) -> qstate.CoarseGraining:
    base, _, arg = choice.partition(":")
    if base == "identity":
        return qstate.identity_coarse_graining(hamiltonian.shape[0])
    if base == "eigenbasis":
        return qstate.eigenbasis_coarse_graining(hamiltonian)
    if base == "energy_bins":
        return qstate.energy_coarse_graining(hamiltonian, int(arg or 4))
    raise ConfigError(
        f"coarse-graining {choice!r} cannot be built from a Hamiltonian alone"
    )


def build_scenario(config: dict) -> scenarios.Scenario:
    name = config["scenario"]
    kwargs = dict(config["params"])
    if config["dt"] is not None:
        kwargs["dt"] = config["dt"]
    if config["steps"] is not None:
        kwargs["steps"] = config["steps"]
    sc = SCENARIOS[name].builder(**kwargs)
    cg = config["coarse_graining"]
    replacements = {}
    if "A" in cg:
        replacements["cg_a"] = _resolve_coarse_graining(cg["A"], sc.model.h_a)
    if "B" in cg:
        replacements["cg_b"] = _resolve_coarse_graining(cg["B"], sc.model.h_b)
    return dataclasses.replace(sc, **replacements) if replacements else sc


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def _fmt(value: float) -> str:
    """17-significant-digit decimal, empty for undefined cells."""
    if value is None or not math.isfinite(value):
        return ""
    return format(value, ".17g")


def _beta_cells(sol: BetaSolution) -> tuple[str, str]:
    kind = sol.flag if sol.flag in ("degenerate", "non_monotone") else sol.kind.value
    return _fmt(sol.beta if math.isfinite(sol.beta) else math.nan), kind


def ledger_rows(run: scenarios.ScenarioRun) -> list[dict]:
    ell, obs = run.ell, run.obs
    rows = []
    for k, t in enumerate(ell.times):
        beta_cell, beta_kind = _beta_cells(ell.betas[k])
        beta_obs_cell, beta_obs_kind = _beta_cells(obs.beta_obs[k])
        rows.append({
            "t": _fmt(float(t)),
            "S_A": _fmt(ell.s_a[k]), "S_B": _fmt(ell.s_b[k]), "S_AB": _fmt(ell.s_ab[k]),
            "I_AB": _fmt(ell.i_ab[k]),
            "beta_B": beta_cell, "beta_B_kind": beta_kind,
            "Qdot_B": _fmt(ell.qdot_b[k]) if ell.qdot_defined[k] else "",
            "sigma_clausius": _fmt(ell.sigma_clausius[k]),
            "sigma_clausius_quadrature": (_fmt(ell.sigma_clausius_quadrature[k])
                                          if ell.quadrature_defined[k] else ""),
            "sigma_fixed_beta": (_fmt(ell.sigma_fixed_beta[k])
                                 if ell.sigma_fixed_kind[k] == "finite" else ""),
            "sigma_fixed_kind": ell.sigma_fixed_kind[k],
            "Q_energy": _fmt(ell.q_energy[k]),
            "delta_sum_vn": _fmt(obs.delta_sum_vn[k]),
            "s_obs_A": _fmt(obs.s_obs_a[k]), "s_obs_B": _fmt(obs.s_obs_b[k]),
            "sigma_obs": _fmt(obs.sigma_obs[k]),
            "beta_obs_B": beta_obs_cell, "beta_obs_kind": beta_obs_kind,
        })
    return rows


def write_ledger_csv(path: Path, rows: list[dict]) -> None:
    lines = [",".join(CSV_COLUMNS)]
    lines += [",".join(row[col] for col in CSV_COLUMNS) for row in rows]
    path.write_text("\n".join(lines) + "\n")


def _column_stats(rows: list[dict]) -> dict:
    stats = {}
    for col in CSV_COLUMNS:
        if col.endswith("_kind"):
            continue
        values = [float(r[col]) for r in rows if r[col] != ""]
        if values:
            stats[col] = {"min": min(values), "max": max(values)}
    return stats


def run_from_config(config: dict, out_dir: Path) -> int:
    """Execute one configured run; returns the process exit code."""
    t0 = time.monotonic()
    out_dir.mkdir(parents=True, exist_ok=True)
    summary = {"config": {k: v for k, v in config.items() if k != "output_dir"},
               "version": __version__}

    if config["scenario"] == "bounds_sampler":
        p = config["params"]
        report = scenarios.bounds_sampler(
            seed=config["seed"], trials=p["trials"], d_a=p["d_A"], d_b=p["d_B"],
            dt=config["dt"] or 0.05, steps=config["steps"] or 100,
            dim_cap=config["dim_cap"])
        checks = [
            {"name": "mutual_information_bound",
             "passed": report.violations_mi == 0,
             "measured": report.violations_mi, "threshold": 0,
             "detail": f"max ratio to bound {report.max_ratio_mi!r}"},
            {"name": "bath_entropy_change_bound",
             "passed": report.violations_ds_b == 0,
             "measured": report.violations_ds_b, "threshold": 0,
             "detail": f"max ratio to bound {report.max_ratio_ds_b!r}"},
        ]
        summary["report"] = dataclasses.asdict(report)
    else:
        sc = build_scenario(config)
        run = scenarios.run_scenario(sc, dim_cap=config["dim_cap"])
        rows = ledger_rows(run)
        write_ledger_csv(out_dir / "ledger.csv", rows)
        checks = [dataclasses.asdict(r) for r in run.check_results]
        summary["ledger_stats"] = _column_stats(rows)

    summary["checks"] = checks
    summary["wall_time_s"] = time.monotonic() - t0
    (out_dir / "summary.json").write_text(json.dumps(summary, indent=2, default=str) + "\n")
    return 0 if all(c["passed"] for c in checks) else 2


def sweep_from_config(config: dict, out_dir: Path, param: str,
                      values: list[float]) -> int:
    name = config["scenario"]
    allowed = dict(SAMPLER_PARAMS) if name == "bounds_sampler" else SCENARIOS[name].params
    if param not in allowed:
        raise ConfigError(f"{param!r} is not a parameter of scenario {name!r}")
    if not values:
        raise ConfigError("sweep needs a non-empty value list")
    out_dir.mkdir(parents=True, exist_ok=True)

    def one(value: float) -> tuple[float, Path, int]:
        sub_config = dict(config)
        sub_config["params"] = dict(config["params"])
        default = allowed[param]
        sub_config["params"][param] = (int(value) if isinstance(default, int)
                                       else float(value))
        sub_dir = out_dir / f"{param}={value:g}"
        return value, sub_dir, run_from_config(sub_config, sub_dir)

    with ThreadPoolExecutor(max_workers=min(4, len(values))) as pool:
        results = list(pool.map(one, values))

    lines = ["value,max_sigma_clausius,max_sigma_obs,max_I_AB,checks_passed,checks_total"]
    worst = 0
    for value, sub_dir, code in results:
        worst = max(worst, code)
        summary = json.loads((sub_dir / "summary.json").read_text())
        stats = summary.get("ledger_stats", {})
        def col_max(col):
            return _fmt(stats[col]["max"]) if col in stats else ""
        checks = summary["checks"]
        lines.append(",".join([
            _fmt(value), col_max("sigma_clausius"), col_max("sigma_obs"),
            col_max("I_AB"), str(sum(1 for c in checks if c["passed"])),
            str(len(checks)),
        ]))
    (out_dir / "sweep.csv").write_text("\n".join(lines) + "\n")
    return worst


def list_scenarios() -> str:
    lines = []
    for name, d in SCENARIOS.items():
        params = ", ".join(f"{k}={v!r}" for k, v in d.params.items())
        lines.append(f"{name}")
        lines.append(f"  parameters: {params}")
        lines.append(f"  demonstrates: {d.demonstrates}")
        lines.append(f"  checks: {', '.join(d.check_names)}")
    params = ", ".join(f"{k}={v!r}" for k, v in SAMPLER_PARAMS.items())
    lines.append("bounds_sampler")
    lines.append(f"  parameters: {params} (plus top-level seed)")
    lines.append("  demonstrates: randomized stress test of the correlation bounds "
                 "2 min(ln d_A, ln d_B) and 3 ln d_A")
    lines.append("  checks: mutual_information_bound, bath_entropy_change_bound")
    return "\n".join(lines)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="entroledger",
        description="Exact bipartite dynamics with side-by-side thermodynamic ledgers.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute one configured scenario")
    p_run.add_argument("config", help="TOML run configuration")
    p_run.add_argument("--out", help="output directory (overrides config)")

    p_sweep = sub.add_parser("sweep", help="run a scenario over a parameter sweep")
    p_sweep.add_argument("config")
    p_sweep.add_argument("--param", required=True)
    p_sweep.add_argument("--values", required=True,
                         help="comma-separated numeric values")
    p_sweep.add_argument("--out", help="output directory (overrides config)")

    sub.add_parser("list", help="list scenarios, parameters and checks")

    args = parser.parse_args(argv)
    try:
        if args.command == "list":
            print(list_scenarios())
            return 0
        config = load_config(args.config)
        out_dir = Path(args.out or config["output_dir"] or ".")
        if args.command == "run":
            return run_from_config(config, out_dir)
        try:
            values = [float(v) for v in args.values.split(",") if v.strip()]
        except ValueError as exc:
            raise ConfigError(f"bad sweep values: {exc}") from exc
        return sweep_from_config(config, out_dir, args.param, values)
    except EntroLedgerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
