"""YAML experiment configuration: loading, validation and serialisation.

See the README for the schema. Complex numbers are written as
two-element ``[re, im]`` lists; a matrix is a list of rows of such pairs.
Validation errors carry the dotted path of the offending field.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np
import yaml

from . import gates
from .ewl import (
    CATALOG_NAMES,
    DEFAULT_BUDGET,
    CatalogParams,
    EwlProcedure,
    FiniteSpace,
    GridSpace,
    catalog,
)
from .claims import SEED
from .gates import GateLabel, Su2Params
from .qmat import MAX_QUBITS, is_unitary, pure_density
from .scenario import BUILTIN, PayoffTable2x2, Scenario

ANALYSES = ("distribution", "payoff", "nash", "pareto", "classical_bound", "symmetric_max", "verify_claims")
FORMATS = ("table_csv", "report_json")
OUTPUT_DIR_ENV = "EWLGAMES_OUTPUT_DIR"


class ConfigError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass(frozen=True)
class Parameters:
    gamma: float = gates.DEFAULT_GAMMA
    alpha: float = 1.0
    eps1: float = gates.DEFAULT_EPS[0]
    eps2: float = gates.DEFAULT_EPS[1]
    theta_points: int = 13
    phi_points: int = 13
    chi_points: int = 13
    epsilon: float = 0.0
    seed: int = SEED
    samples: int = 1_000_000
    budget: int = DEFAULT_BUDGET


@dataclass(eq=False)
class ExperimentConfig:
    analysis: str
    procedure: EwlProcedure | None
    scenario: Scenario | None
    parameters: Parameters = field(default_factory=Parameters)
    profile: list | None = None
    input: tuple[int, ...] | None = None
    output_format: str = "table_csv"
    output_path: str | None = None
    source: dict = field(default_factory=dict, repr=False)


# --- complex values -------------------------------------------------------

def complex_to_pair(z) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def matrix_to_config(m) -> list:
    return [[complex_to_pair(v) for v in row] for row in np.asarray(m)]


def _complex(value, path) -> complex:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        return complex(float(value[0]), float(value[1]))
    raise ConfigError(path, f"expected a number or [re, im], got {value!r}")


def parse_matrix(value, path) -> np.ndarray:
    if not isinstance(value, list) or not value or not all(isinstance(r, list) for r in value):
        raise ConfigError(path, "expected a matrix (list of rows of [re, im])")
    width = len(value[0])
    if any(len(r) != width for r in value):
        raise ConfigError(path, "matrix rows have unequal length")
    m = np.array(
        [[_complex(v, f"{path}[{i}][{j}]") for j, v in enumerate(row)] for i, row in enumerate(value)],
        dtype=np.complex128,
    )
    if not np.all(np.isfinite(m)):
        raise ConfigError(path, "matrix has non-finite entries")
    return m


def parse_vector(value, path) -> np.ndarray:
    if not isinstance(value, list) or not value:
        raise ConfigError(path, "expected a list of [re, im] amplitudes")
    return np.array([_complex(v, f"{path}[{i}]") for i, v in enumerate(value)], dtype=np.complex128)


# --- gates and strategies ---------------------------------------------------

def parse_gate_label(value, path) -> GateLabel:
    try:
        if isinstance(value, str):
            return GateLabel(value)
        if isinstance(value, dict) and len(value) == 1:
            (key, arg), = value.items()
            if key == "su2":
                return GateLabel("su2", params=Su2Params(*[float(a) for a in arg]))
            if key == "ewl_J":
                return GateLabel("ewl_J", gamma=float(arg))
    except (TypeError, ValueError) as exc:
        raise ConfigError(path, str(exc)) from None
    raise ConfigError(path, f"not a gate label: {value!r}")


def label_to_config(label: GateLabel):
    if label.name == "su2":
        p = label.params
        return {"su2": [p.theta, p.phi, p.chi]}
    if label.name == "ewl_J":
        return {"ewl_J": label.gamma}
    return label.name


def parse_unitary(value, path) -> np.ndarray:
    if isinstance(value, list) and value and isinstance(value[0], list) and value[0] and isinstance(value[0][0], list):
        u = parse_matrix(value, path)
    else:
        u = gates.named_gate(parse_gate_label(value, path))
    if u.shape != (2, 2):
        raise ConfigError(path, f"strategy must be 2x2, got {u.shape}")
    if not is_unitary(u):
        raise ConfigError(path, "strategy matrix is not unitary")
    return u


def parse_profile(value, n, paired, path) -> list:
    if not isinstance(value, list) or len(value) != n:
        raise ConfigError(path, f"expected a list of {n} strategies")
    out = []
    for i, s in enumerate(value):
        p = f"{path}[{i}]"
        if paired:
            if not isinstance(s, list) or len(s) != 2 or isinstance(s[0], (int, float)):
                raise ConfigError(p, "input scenarios need a pair [U_0, U_1] per player")
            out.append(tuple(parse_unitary(u, f"{p}[{b}]") for b, u in enumerate(s)))
        else:
            out.append(parse_unitary(s, p))
    return out


def parse_space(value, path):
    if isinstance(value, list):
        if not value:
            raise ConfigError(path, "finite strategy space must be non-empty")
        return FiniteSpace(tuple(parse_gate_label(v, f"{path}[{i}]") for i, v in enumerate(value)))
    if isinstance(value, dict) and set(value) == {"grid"}:
        grid = value["grid"] or {}
        known = {f.name for f in fields(GridSpace)}
        for k in grid:
            if k not in known:
                raise ConfigError(f"{path}.grid.{k}", "unknown grid field")
        kwargs = {k: (tuple(v) if k.endswith("_range") else int(v)) for k, v in grid.items()}
        try:
            return GridSpace(**kwargs)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{path}.grid", str(exc)) from None
    raise ConfigError(path, "expected a list of gate labels or {grid: {...}}")


def space_to_config(space) -> object:
    if isinstance(space, FiniteSpace):
        return [label_to_config(l) for l in space.labels]
    return {"grid": {
        "theta_points": space.theta_points, "phi_points": space.phi_points,
        "chi_points": space.chi_points, "theta_range": list(space.theta_range),
        "phi_range": list(space.phi_range), "chi_range": list(space.chi_range),
    }}


# --- procedures and scenarios ----------------------------------------------

def _operator(value, n, path, params: Parameters) -> np.ndarray:
    d = 2**n
    if value in (None, "identity"):
        return np.eye(d, dtype=np.complex128)
    if isinstance(value, dict) and set(value) == {"ewl_J"}:
        if n != 2:
            raise ConfigError(path, "ewl_J is defined for two players only")
        return gates.named_gate(parse_gate_label(value, path))
    m = parse_matrix(value, path)
    if m.shape != (d, d):
        raise ConfigError(path, f"expected a {d}x{d} matrix, got {m.shape}")
    if not is_unitary(m):
        raise ConfigError(path, "operator is not unitary")
    return m


_STATES = ("zero", "ghz", "bell", "minority_rho_in", "fsslh", "f09")


def _state(value, n, path, params: Parameters) -> np.ndarray:
    if isinstance(value, dict) and "state" in value:
        name = value["state"]
        try:
            if name == "zero":
                return gates.ket_zero_density(n)
            if name == "ghz":
                return pure_density(gates.ghz_state(n))
            if name == "bell" and n == 2:
                return gates.bell_density()
            if name == "minority_rho_in" and n == 4:
                return gates.minority_rho_in()
            if name == "fsslh" and n == 4:
                return pure_density(gates.fsslh_psi_in(float(value.get("alpha", params.alpha))))
            if name == "f09" and n == 2:
                return gates.f09_rho(float(value.get("eps1", params.eps1)), float(value.get("eps2", params.eps2)))
        except ValueError as exc:
            raise ConfigError(f"{path}.state", str(exc)) from None
        raise ConfigError(f"{path}.state", f"unknown state {name!r} for n={n}; known: {', '.join(_STATES)}")
    if isinstance(value, dict) and set(value) == {"vector"}:
        v = parse_vector(value["vector"], f"{path}.vector")
        if v.shape != (2**n,):
            raise ConfigError(f"{path}.vector", f"expected {2**n} amplitudes")
        norm = np.linalg.norm(v)
        if abs(norm - 1.0) > 1e-9:
            raise ConfigError(f"{path}.vector", f"state norm is {norm}, expected 1")
        return pure_density(v)
    m = parse_matrix(value, path)
    if m.shape != (2**n, 2**n):
        raise ConfigError(path, f"expected a {2**n}x{2**n} matrix")
    return m


def parse_procedure(d, params: Parameters, path="procedure") -> EwlProcedure:
    if not isinstance(d, dict):
        raise ConfigError(path, "expected a mapping")
    if "catalog" in d:
        extra = set(d) - {"catalog"}
        if extra:
            raise ConfigError(f"{path}.{sorted(extra)[0]}", "catalog procedures take no explicit fields")
        name = d["catalog"]
        if name not in CATALOG_NAMES:
            raise ConfigError(f"{path}.catalog", f"unknown procedure {name!r}; known: {', '.join(CATALOG_NAMES)}")
        return catalog(name, catalog_params(params))[0]
    n = d.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or not 1 <= n <= MAX_QUBITS:
        raise ConfigError(f"{path}.n", f"expected an integer in 1..{MAX_QUBITS}")
    j = _operator(d.get("j"), n, f"{path}.j", params)
    h_raw = d.get("h")
    h = j.conj().T if h_raw == "dagger_of_j" else _operator(h_raw, n, f"{path}.h", params)
    if "rho" not in d:
        raise ConfigError(f"{path}.rho", "missing initial state")
    rho = _state(d["rho"], n, f"{path}.rho", params)
    if "strategies" not in d:
        raise ConfigError(f"{path}.strategies", "missing strategy space")
    space = parse_space(d["strategies"], f"{path}.strategies")
    try:
        return EwlProcedure(n, h, j, rho, space, name=str(d.get("name", "custom")))
    except (ValueError, ArithmeticError) as exc:
        raise ConfigError(path, str(exc)) from None


def procedure_to_config(p: EwlProcedure) -> dict:
    """Explicit, lossless config form of a procedure."""
    return {
        "name": p.name,
        "n": p.n,
        "j": matrix_to_config(p.j_op),
        "h": matrix_to_config(p.h_op),
        "rho": matrix_to_config(p.initial_state),
        "strategies": space_to_config(p.strategy_space),
    }


def parse_scenario(d, path="scenario") -> Scenario:
    if not isinstance(d, dict) or "name" not in d:
        raise ConfigError(f"{path}.name", "missing scenario name")
    name = d["name"]
    if name not in BUILTIN:
        raise ConfigError(f"{path}.name", f"unknown scenario {name!r}; known: {', '.join(BUILTIN)}")
    try:
        if name == "minority":
            return BUILTIN[name](int(d.get("n", 4)))
        if name == "modulo4":
            return BUILTIN[name]()
        table = d.get("table")
        return BUILTIN[name](None if table is None else PayoffTable2x2.from_dict(table))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}.table" if "table" in d else path, str(exc)) from None


def catalog_params(params: Parameters, bos_table: PayoffTable2x2 | None = None) -> CatalogParams:
    kw = {f.name: getattr(params, f.name) for f in fields(CatalogParams) if hasattr(params, f.name)}
    if bos_table is not None:
        kw["bos_table"] = bos_table
    return CatalogParams(**kw)


def parse_parameters(d, path="parameters") -> tuple[Parameters, object, object]:
    d = dict(d or {})
    profile = d.pop("profile", None)
    x = d.pop("input", None)
    known = {f.name: f for f in fields(Parameters)}
    kwargs = {}
    for k, v in d.items():
        if k not in known:
            raise ConfigError(f"{path}.{k}", "unknown parameter")
        want = int if known[k].type in ("int", int) else float
        if isinstance(v, bool) or not isinstance(v, (int, float)) or (want is int and not isinstance(v, int)):
            raise ConfigError(f"{path}.{k}", f"expected {want.__name__}, got {v!r}")
        if want is float and not math.isfinite(v):
            raise ConfigError(f"{path}.{k}", "must be finite")
        kwargs[k] = want(v)
    p = Parameters(**kwargs)
    if p.epsilon < 0:
        raise ConfigError(f"{path}.epsilon", "must be non-negative")
    if p.samples < 1:
        raise ConfigError(f"{path}.samples", "must be positive")
    if p.budget < 1:
        raise ConfigError(f"{path}.budget", "must be positive")
    return p, profile, x


def load_config_dict(raw) -> ExperimentConfig:
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "config must be a mapping")
    for key in raw:
        if key not in ("analysis", "procedure", "scenario", "parameters", "output"):
            raise ConfigError(key, "unknown top-level field")
    analysis = raw.get("analysis")
    if not analysis:
        raise ConfigError("analysis", "missing analysis")
    if analysis not in ANALYSES:
        raise ConfigError("analysis", f"unknown analysis {analysis!r}; known: {', '.join(ANALYSES)}")
    params, profile_raw, input_raw = parse_parameters(raw.get("parameters"))

    out = raw.get("output") or {}
    if not isinstance(out, dict):
        raise ConfigError("output", "expected a mapping")
    fmt = out.get("format", "table_csv")
    if fmt not in FORMATS:
        raise ConfigError("output.format", f"expected one of {', '.join(FORMATS)}")
    dest = out.get("path")
    if dest is not None and not isinstance(dest, str):
        raise ConfigError("output.path", "expected a string")

    cfg = ExperimentConfig(analysis, None, None, params, output_format=fmt, output_path=dest, source=raw)
    if analysis == "verify_claims":
        return cfg

    scenario = parse_scenario(raw["scenario"]) if raw.get("scenario") is not None else None
    if "procedure" in raw:
        proc_raw = raw["procedure"]
        procedure = parse_procedure(proc_raw, params)
        if "catalog" in proc_raw:
            table = None
            if scenario is not None and scenario.name == "battle_sexes":
                table = PayoffTable2x2.from_dict(raw["scenario"].get("table") or PayoffTable2x2.battle_sexes().to_dict())
            procedure, default_scenario = catalog(proc_raw["catalog"], catalog_params(params, table))
            scenario = scenario or default_scenario
    elif analysis != "classical_bound":
        raise ConfigError("procedure", "missing procedure")
    else:
        procedure = None

    if scenario is None:
        raise ConfigError("scenario", "missing scenario (required for explicit procedures)")
    if procedure is not None and procedure.n != scenario.n:
        raise ConfigError("scenario", f"scenario has {scenario.n} players, procedure has {procedure.n}")
    cfg.procedure, cfg.scenario = procedure, scenario

    if profile_raw is not None:
        cfg.profile = parse_profile(profile_raw, scenario.n, scenario.has_input, "parameters.profile")
    if input_raw is not None:
        if not scenario.has_input:
            raise ConfigError("parameters.input", "scenario has no inputs")
        x = tuple(input_raw) if isinstance(input_raw, list) else None
        if x not in scenario.inputs:
            raise ConfigError("parameters.input", f"{input_raw!r} is not a valid input of {scenario.name}")
        cfg.input = x
    if analysis == "distribution" and cfg.profile is None:
        raise ConfigError("parameters.profile", "distribution analysis needs a profile")
    if analysis == "distribution" and scenario.has_input and cfg.input is None:
        raise ConfigError("parameters.input", "distribution on an input scenario needs an input")
    if analysis == "classical_bound" and not scenario.has_input:
        raise ConfigError("scenario", "classical_bound needs a scenario with inputs")
    return cfg


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError("<file>", f"cannot read {path}: {exc.strerror}") from None
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError("<file>", f"parse error: {exc}") from None
    return load_config_dict(raw)


def dump_config(d: dict) -> str:
    return yaml.safe_dump(d, sort_keys=False)


__all__ = [
    "ConfigError", "ExperimentConfig", "Parameters", "load_config", "load_config_dict",
    "procedure_to_config", "dump_config", "parse_procedure", "ANALYSES", "FORMATS", "OUTPUT_DIR_ENV",
]
