"""Execute a validated experiment config and render its report."""
from __future__ import annotations

import csv
import io
import json
import os
from pathlib import Path

import numpy as np

from . import equilibrium as eq
from .config import OUTPUT_DIR_ENV, ExperimentConfig
from .ewl import InducedGame, outcome_distribution, payoff
from .gates import FIXED_GATE_NAMES, named_gate
from .qmat import index_to_bits


def fmt(v: float) -> str:
    return f"{float(v):.12g}"


def bitstring(bits) -> str:
    return "".join(str(b) for b in bits)


def _profile_label(strategy) -> str:
    def one(u):
        for name in FIXED_GATE_NAMES:
            if np.array_equal(u, named_gate(name)):
                return name
        return "[" + ";".join(fmt(z.real) + ("+" if z.imag >= 0 else "") + fmt(z.imag) + "j" for z in np.ravel(u)) + "]"
    if isinstance(strategy, tuple):
        return "(" + one(strategy[0]) + "|" + one(strategy[1]) + ")"
    return one(strategy)


class Report:
    """Rows for CSV output plus a JSON-ready mapping describing the same result."""

    def __init__(self, header: list[str], rows: list[list], data: dict):
        self.header = header
        self.rows = rows
        self.data = data

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header)
        w.writerows(self.rows)
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(self.data, indent=2, sort_keys=True) + "\n"

    def render(self, fmt_name: str) -> str:
        return self.to_json() if fmt_name == "report_json" else self.to_csv()


def _player_cols(prefix: str, n: int) -> list[str]:
    return [f"{prefix}{i + 1}" for i in range(n)]


def _base(cfg: ExperimentConfig) -> dict:
    return {
        "analysis": cfg.analysis,
        "procedure": cfg.procedure.name if cfg.procedure is not None else None,
        "scenario": cfg.scenario.name if cfg.scenario is not None else None,
    }


def run_distribution(cfg: ExperimentConfig) -> Report:
    dist = outcome_distribution(cfg.procedure, cfg.profile, cfg.input)
    n = dist.n
    rows = [[bitstring(index_to_bits(i, n)), fmt(p)] for i, p in enumerate(dist.probs)]
    data = _base(cfg) | {
        "input": list(cfg.input) if cfg.input is not None else None,
        "distribution": {bitstring(index_to_bits(i, n)): float(p) for i, p in enumerate(dist.probs)},
    }
    return Report(["output", "probability"], rows, data)


def run_payoff(cfg: ExperimentConfig) -> Report:
    n = cfg.scenario.n
    header = _player_cols("strategy_", n) + _player_cols("payoff_", n)
    if cfg.profile is not None:
        values = payoff(cfg.procedure, cfg.scenario, cfg.profile)
        labels = [_profile_label(s) for s in cfg.profile]
        rows = [labels + [fmt(v) for v in values]]
        data = _base(cfg) | {"payoffs": [float(v) for v in values]}
        return Report(header, rows, data)
    g = InducedGame(cfg.procedure, cfg.scenario)
    table = g.payoff_tensor(cfg.parameters.budget)
    rows, entries = [], []
    for prof in np.ndindex(*g.sizes):
        labels = list(g.profile_labels(prof))
        rows.append(labels + [fmt(v) for v in table[prof]])
        entries.append({"profile": labels, "payoffs": [float(v) for v in table[prof]]})
    return Report(header, rows, _base(cfg) | {"table": entries})


def run_nash(cfg: ExperimentConfig) -> Report:
    g = InducedGame(cfg.procedure, cfg.scenario)
    reports = eq.find_pure_nash(g, cfg.parameters.epsilon, cfg.parameters.budget)
    n = g.n
    header = _player_cols("strategy_", n) + _player_cols("payoff_", n) + ["epsilon"]
    rows = [list(r.labels) + [fmt(v) for v in r.payoffs] + [fmt(r.epsilon)] for r in reports]
    data = _base(cfg) | {
        "epsilon_threshold": cfg.parameters.epsilon,
        "equilibria": [
            {"profile": list(r.labels), "payoffs": list(r.payoffs), "epsilon": r.epsilon} for r in reports
        ],
    }
    return Report(header, rows, data)


def run_pareto(cfg: ExperimentConfig) -> Report:
    g = InducedGame(cfg.procedure, cfg.scenario)
    n = g.n
    header = _player_cols("strategy_", n) + _player_cols("payoff_", n) + ["pareto_optimal"]
    profiles = eq.all_profiles(g, cfg.parameters.budget)
    values = g.payoffs(profiles)
    if cfg.profile is not None:
        target = _locate(g, cfg.profile)
        flags = {target: eq.is_pareto_optimal(g, target, profiles)}
    else:
        flags = {tuple(int(v) for v in p): eq.is_pareto_optimal(g, p, profiles) for p in profiles}
    rows, entries = [], []
    for flat, prof in enumerate(map(tuple, profiles)):
        prof = tuple(int(v) for v in prof)
        if prof not in flags:
            continue
        labels = list(g.profile_labels(prof))
        rows.append(labels + [fmt(v) for v in values[flat]] + [str(flags[prof]).lower()])
        entries.append({"profile": labels, "payoffs": [float(v) for v in values[flat]], "pareto_optimal": flags[prof]})
    return Report(header, rows, _base(cfg) | {"profiles": entries})


def _locate(g: InducedGame, profile) -> tuple[int, ...]:
    """Index profile of explicit strategies; they must be members of the game's strategy sets."""
    out = []
    for player, s in enumerate(profile):
        for idx in range(g.sizes[player]):
            cand = g.strategy(player, idx)
            pairs = zip(cand, s) if isinstance(s, tuple) else [(cand, s)]
            if all(np.allclose(a, b, atol=1e-9) for a, b in pairs):
                out.append(idx)
                break
        else:
            raise ValueError(f"strategy of player {player + 1} is not in the game's strategy set")
    return tuple(out)


def run_classical_bound(cfg: ExperimentConfig) -> Report:
    rep = eq.classical_deterministic_bound(cfg.scenario, cfg.parameters.budget)
    funcs = [bitstring(f) for f in rep.best_profile]
    header = _player_cols("response_", cfg.scenario.n) + ["value", "exact"]
    rows = [funcs + [fmt(rep.value), str(rep.exact)]]
    data = _base(cfg) | {
        "value": rep.value,
        "exact": str(rep.exact),
        "best_profile": funcs,
        "payoffs": list(rep.payoffs),
    }
    return Report(header, rows, data)


def run_symmetric_max(cfg: ExperimentConfig) -> Report:
    g = InducedGame(cfg.procedure, cfg.scenario)
    best, value = eq.grid_search_symmetric_max(g, cfg.parameters.budget)
    gap = eq.deviation_gap(g, (best,) * g.n)
    label = g.label(0, best)
    data = _base(cfg) | {"strategy": label, "value": value, "deviation_gap": gap}
    return Report(["strategy", "value", "deviation_gap"], [[label, fmt(value), fmt(gap)]], data)


def run_verify(cfg: ExperimentConfig) -> Report:
    from .claims import claims_report, verify_claims

    return claims_report(verify_claims(cfg.parameters.samples, cfg.parameters.seed))


ANALYSIS_RUNNERS = {
    "distribution": run_distribution,
    "payoff": run_payoff,
    "nash": run_nash,
    "pareto": run_pareto,
    "classical_bound": run_classical_bound,
    "symmetric_max": run_symmetric_max,
    "verify_claims": run_verify,
}


def output_path(cfg: ExperimentConfig) -> Path | None:
    if cfg.output_path == "-":
        return None
    ext = "json" if cfg.output_format == "report_json" else "csv"
    name = cfg.output_path or f"{cfg.analysis}.{ext}"
    path = Path(name)
    if not path.is_absolute():
        path = Path(os.environ.get(OUTPUT_DIR_ENV, ".")) / path
    return path


def run(cfg: ExperimentConfig) -> tuple[Report, Path | None]:
    """Run the configured analysis and write its artifact; ``None`` path means stdout."""
    report = ANALYSIS_RUNNERS[cfg.analysis](cfg)
    text = report.render(cfg.output_format)
    dest = output_path(cfg)
    if dest is None:
        print(text, end="")
    else:
        dest.parent.mkdir(parents=True, exist_ok=True)
        dest.write_text(text)
    return report, dest
