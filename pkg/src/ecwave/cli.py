"""
Configuration-driven scenario runner.

Each scenario reads a flat INI file::

    [scenario]
    name = decompose
    seed = 0

    [params]
    state = synthetic
    bubbles = [(1, 1.0), (1, 1e-4)]

Values are parsed as Python literals when possible and kept as strings
otherwise.  Every run writes its artifacts plus ``manifest.json`` (resolved
parameters, tolerances, versions, kernel backend) into the output
directory.

Exit status: 0 all checks pass, 1 validation error, 2 computation error,
3 check failure.
"""

from __future__ import annotations

import argparse
import ast
import configparser
import csv
import json
import math
import platform
import sys
import traceback
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from . import __version__

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_COMPUTATION = 2
EXIT_CHECK = 3

REQUIRED = object()


class ValidationError(ValueError):
    """Configuration problems, collected before any computation."""

    def __init__(self, problems: Sequence[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


# ----------------------------------------------------------------------------
# configuration
# ----------------------------------------------------------------------------


@dataclass
class ScenarioConfig:
    """A scenario name, its parameters, output directory and seed."""

    scenario: str
    params: dict[str, Any] = field(default_factory=dict)
    out_dir: Path = Path("ecwave_out")
    seed: int = 0

    @classmethod
    def from_file(cls, path: str | Path, out_dir: str | Path | None = None,
                  scenario: str | None = None) -> "ScenarioConfig":
        cp = configparser.ConfigParser(interpolation=None)
        cp.optionxform = str
        if not cp.read(path):
            raise ValidationError([f"cannot read config file {path}"])
        head = cp["scenario"] if cp.has_section("scenario") else {}
        name = head.get("name", scenario)
        if name is None:
            raise ValidationError(["config lacks [scenario] name"])
        if scenario is not None and name != scenario:
            raise ValidationError([f"config is for scenario {name!r}, not {scenario!r}"])
        params = {k: parse_value(v) for k, v in cp["params"].items()} if cp.has_section("params") else {}
        seed = parse_value(head.get("seed", "0"))
        out = out_dir if out_dir is not None else head.get("out", "ecwave_out")
        return cls(name, params, Path(out), seed)


def parse_value(text: str) -> Any:
    """Python literal when possible, the stripped string otherwise."""
    t = text.strip()
    try:
        return ast.literal_eval(t)
    except (ValueError, SyntaxError):
        return t


# ----------------------------------------------------------------------------
# parameter specifications
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class Param:
    kind: str
    default: Any = REQUIRED
    help: str = ""
    choices: tuple = ()


def _coerce(name: str, param: Param, value: Any) -> Any:
    k = param.kind
    if value is None and param.default is None:
        return None
    if k == "float":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise TypeError(f"{name}: expected a number")
        return float(value)
    if k == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            raise TypeError(f"{name}: expected an integer")
        return value
    if k == "bool":
        if not isinstance(value, bool):
            raise TypeError(f"{name}: expected True or False")
        return value
    if k == "str":
        value = str(value)
        if param.choices and value not in param.choices:
            raise TypeError(f"{name}: must be one of {list(param.choices)}")
        return value
    if k == "floats":
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            value = [value]
        try:
            return [float(x) for x in value]
        except (TypeError, ValueError):
            raise TypeError(f"{name}: expected a sequence of numbers") from None
    if k == "pairs":
        try:
            out = [(int(a), float(b)) for a, b in value]
        except (TypeError, ValueError):
            raise TypeError(f"{name}: expected a sequence of (sign, scale) pairs") from None
        return out
    if k == "strs":
        if isinstance(value, str):
            return [value]
        return [str(x) for x in value]
    raise AssertionError(k)


def _describe(param: Param) -> str:
    if param.default is REQUIRED:
        d = "required"
    else:
        d = f"default {param.default!r}"
    extra = f", one of {list(param.choices)}" if param.choices else ""
    return f"{param.kind}, {d}{extra}"


@dataclass
class RunReport:
    """Outcome of :func:`run_scenario`."""

    scenario: str
    exit_code: int
    checks: dict[str, bool] = field(default_factory=dict)
    summary: dict[str, Any] = field(default_factory=dict)
    artifacts: list[str] = field(default_factory=list)
    message: str = ""

    @property
    def passed(self) -> bool:
        return self.exit_code == EXIT_OK


@dataclass(frozen=True)
class Scenario:
    name: str
    anchor: str
    params: dict[str, Param]
    runner: Callable[["_Context"], None]

    def resolve(self, given: dict[str, Any]) -> dict[str, Any]:
        problems = []
        unknown = sorted(set(given) - set(self.params))
        if unknown:
            problems.append(f"unknown keys: {unknown}")
        out = {}
        for key, param in self.params.items():
            if key not in given:
                if param.default is REQUIRED:
                    problems.append(f"missing required key {key!r}")
                    continue
                out[key] = param.default
                continue
            try:
                out[key] = _coerce(key, param, given[key])
            except TypeError as e:
                problems.append(str(e))
        if problems:
            raise ValidationError(problems)
        return out


class _Context:
    """State shared between a runner and :func:`run_scenario`."""

    def __init__(self, p: dict, out: Path, seed: int, quiet: bool):
        self.p = p
        self.out = out
        self.seed = seed
        self.quiet = quiet
        self.checks: dict[str, bool] = {}
        self.summary: dict[str, Any] = {}
        self.artifacts: list[str] = []
        self.tolerances: dict[str, float] = {}

    def say(self, text: str) -> None:
        if not self.quiet:
            print(text)

    def check(self, name: str, ok: bool, tol: float | None = None) -> None:
        self.checks[name] = bool(ok)
        if tol is not None:
            self.tolerances[name] = tol
        self.say(f"{'PASS' if ok else 'FAIL'}  {name}")

    def path(self, name: str) -> Path:
        p = self.out / name
        p.parent.mkdir(parents=True, exist_ok=True)
        self.artifacts.append(name)
        return p

    def write_csv(self, name: str, header: Sequence[str], rows) -> None:
        with open(self.path(name), "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in rows:
                w.writerow([_fmt(x) for x in row])

    def write_json(self, name: str, data: dict) -> None:
        self.path(name).write_text(json.dumps(_jsonable(data), indent=2, sort_keys=True) + "\n")


def _fmt(x: Any) -> str:
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    return str(x)


def _jsonable(x: Any) -> Any:
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.floating, float)):
        v = float(x)
        return v if math.isfinite(v) else repr(v)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


# ----------------------------------------------------------------------------
# state files
# ----------------------------------------------------------------------------


def write_state_csv(path: str | Path, state) -> None:
    """Write ``r,u0,u1`` rows at full precision."""
    r = state.grid.nodes
    with open(path, "w", newline="") as fh:
        fh.write("r,u0,u1\n")
        for row in zip(r, state.u0.values, state.u1.values):
            fh.write(",".join(f"{x:.17g}" for x in row) + "\n")


def read_state_csv(path: str | Path):
    """Read ``r,u0,u1`` rows into a StatePair.

    The grid scheme is uniform when the spacing is constant and logarithmic
    otherwise; tails are assumed to decay like ``1/r`` and ``1/r^2``.
    """
    from .core_fields import RadialGrid, RadialProfile, StatePair
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[1] != 3:
        raise ValueError(f"{path}: expected columns r,u0,u1")
    r = data[:, 0]
    d = np.diff(r)
    scheme = "uniform" if np.allclose(d, d[0], rtol=1e-9) else "logarithmic"
    g = RadialGrid(r, scheme)
    return StatePair(RadialProfile(g, data[:, 1], 1.0), RadialProfile(g, data[:, 2], 2.0))


# ----------------------------------------------------------------------------
# scenarios
# ----------------------------------------------------------------------------


def _run_simulate(ctx: _Context) -> None:
    from .nonlinear_evolution import (
        discrete_ground_state,
        evolve,
        relative_energy_drift,
        type_one_data,
    )
    p = ctx.p
    kind = p["initial"]
    initial_psi = None
    init: Any = (lambda r: 0.0 * r, None)
    if kind == "gaussian":
        A, wdt = p["amplitude"], p["width"]
        init = (lambda r: A * np.exp(-(r / wdt) ** 2), None)
    elif kind == "ground_state":
        initial_psi = discrete_ground_state(p["h"], p["radius"], p["scale"])
    elif kind == "type_one":
        init = type_one_data(p["T_plus"], p["core"], p["cut"])
    else:
        if not p["file"]:
            raise ValidationError(["initial = file needs the key 'file'"])
        init = read_state_csv(p["file"])
    traj = evolve(init, p["h"], p["radius"], p["t_end"], snapshots=p["snapshots"],
                  nonlinear=p["nonlinear"], cfl=p["cfl"], dt_amp=p["dt_amp"],
                  u_ceiling=p["u_ceiling"], initial_psi=initial_psi)
    traj.params.update({k: v for k, v in p.items() if k != "file"})
    traj.save(ctx.out / "trajectory")
    ctx.artifacts.append("trajectory/manifest.json")
    ctx.write_csv("energy.csv", ["t", "energy"], zip(traj.times, traj.energies))
    ctx.write_csv("history.csv", ["t", "max_abs_u", "dt"], traj.history)
    drift = relative_energy_drift(traj)
    ctx.summary.update({"blow_up": traj.blow_up, "blow_up_time": traj.blow_up_time,
                        "relative_energy_drift": drift, "steps": int(traj.history.shape[0]),
                        "final_time": float(traj.times[-1])})
    if traj.blow_up:
        ctx.say(f"blow-up detected, fitted time {traj.blow_up_time}")
        if kind == "type_one" and traj.blow_up_time is not None:
            err = abs(traj.blow_up_time / p["T_plus"] - 1.0)
            ctx.summary["blow_up_time_error"] = err
            ctx.check("blow-up time matches T_plus", err <= p["blow_up_tol"], p["blow_up_tol"])
    else:
        ctx.say(f"relative energy drift {drift:.3e}")
        ctx.check("energy drift", drift <= p["energy_tol"], p["energy_tol"])
    ctx.write_json("summary.json", ctx.summary)


def _run_decompose(ctx: _Context) -> None:
    from .core_fields import make_grid
    from .decomposition import extract_bubbles
    from .ground_state import BubbleList, superpose
    p = ctx.p
    if p["state"] == "synthetic":
        bl = BubbleList.from_pairs(p["bubbles"])
        grid = make_grid(p["r_min"], p["r_max"], p["n"])
        state = superpose(grid, bl)
        write_state_csv(ctx.path("state.csv"), state)
    else:
        state = read_state_csv(p["state"])
    res = extract_bubbles(state, None, p["c2"], p["n_max"], tol=p["tol"], refine=p["refine"])
    res.save(ctx.path("decomposition.json"))
    ctx.write_csv("bubbles.csv", ["j", "sign", "scale"],
                  ((j + 1, b.sign, b.scale) for j, b in enumerate(res.bubbles)))
    ctx.summary.update(res.to_dict())
    ctx.say(f"J = {res.J}, case {res.case_tag}, scales {[float(s) for s in res.bubbles.scales]}")
    zero = float(np.max(res.posthoc_zeros)) if res.posthoc_zeros.size else 0.0
    ctx.check("remainder vanishes at accepted crossings", zero <= p["zero_tol"], p["zero_tol"])
    if p["expected_J"] is not None:
        ctx.check("bubble count", res.J == p["expected_J"])


def _run_elliptic(ctx: _Context) -> None:
    from .elliptic import build_phi, mu0_gauss_legendre, ode_residual, solve_w_star
    p = ctx.p
    ws = solve_w_star(p["r_infinity"], p["tol"])
    sol = build_phi(p["c"], ws)
    sol.save(ctx.out)
    ctx.artifacts += ["corrector.csv", "corrector.json"]
    mu_gl = mu0_gauss_legendre(2.0 * p["r_infinity"], p["gl_steps"])
    r = np.geomspace(1e-3, 0.5 * p["r_infinity"], 400)
    resid = float(np.max(np.abs(ode_residual(ws, r))))
    ctx.summary.update({"mu0": sol.mu0, "mu0_gauss_legendre": mu_gl, "beta": sol.beta,
                        "beta_times_c": sol.beta * sol.c, "r4": sol.r4,
                        "max_ode_residual": resid})
    ctx.write_json("summary.json", ctx.summary)
    ctx.say(f"mu0 = {sol.mu0:.15g} (second integrator {mu_gl:.15g}), beta c = {sol.beta * sol.c:.6g}")
    ctx.check("mu0 nonzero", sol.mu0 != 0.0)
    ctx.check("mu0 agrees across integrators", abs(sol.mu0 - mu_gl) <= p["mu0_agreement"],
              p["mu0_agreement"])
    ctx.check("ODE residual", resid <= p["residual_tol"], p["residual_tol"])


def _run_verify_estimate(ctx: _Context) -> None:
    from .estimates import REGISTRY, format_table, verify_scaling
    p = ctx.p
    ids = sorted(REGISTRY) if p["lemmas"] == ["all"] else p["lemmas"]
    bad = [i for i in ids if i not in REGISTRY]
    if bad:
        raise ValidationError([f"unknown lemma ids {bad}; known: {sorted(REGISTRY)}"])
    if p["sweep"] is not None and len(ids) != 1:
        raise ValidationError(["a custom sweep needs exactly one lemma id"])
    reports = [verify_scaling(i, p["sweep"]) for i in ids]
    for r in reports:
        r.save(ctx.out / "reports")
        ctx.artifacts += [f"reports/{r.lemma_id}.json", f"reports/{r.lemma_id}.csv"]
    ctx.write_csv("summary.csv", ["lemma_id", "parameter", "claimed", "slope", "slope_se", "passed"],
                  ((r.lemma_id, r.parameter, r.claimed, r.slope, r.slope_se, r.passed)
                   for r in reports))
    ctx.say(format_table(reports))
    for r in reports:
        ctx.checks[r.lemma_id] = r.passed
    ctx.tolerances["slope_standard_errors"] = 3.0
    ctx.summary["reports"] = {r.lemma_id: r.to_dict() for r in reports}


def _run_bootstrap(ctx: _Context) -> None:
    from .estimates import (
        InadmissibleConstantsError,
        RecursionConstants,
        bootstrap_recursion_check,
        tau_zero,
    )
    p = ctx.p
    c = RecursionConstants(p["c0s"], p["c1s"], p["c2s"], p["c3s"], p["gamma"], p["c1"], p["c2"])
    tau = 0.5 * tau_zero(c) if p["tau"] is None else p["tau"]
    try:
        res = bootstrap_recursion_check(c, p["K"], tau, max_iter=p["max_iter"], tol=p["tol"])
    except InadmissibleConstantsError as e:
        raise ValidationError([f"inadmissible constants: {e}"]) from None
    ctx.write_json("recursion.json", res.to_dict())
    ratios = list(res.ratios) + [math.nan] * (len(res.history) - len(res.ratios))
    ctx.write_csv("history.csv", ["iteration", "M", "ratio_to_previous"],
                  ((i, m, q) for i, (m, q) in enumerate(zip(res.history, [math.nan] + ratios))))
    ctx.summary.update({"M": res.M, "tau": tau, "iterations": len(res.history) - 1,
                        "max_ratio": float(np.max(res.ratios)) if res.ratios.size else 0.0})
    ctx.say(f"M = {res.M:.3e} after {len(res.history) - 1} iterations")
    ctx.check("M converges to 0", res.converged, p["tol"])


def _profile_from_params(p: dict):
    from .linear_radiation import RadiationProfile, indicator_profile
    if p["profile"] == "indicator":
        return indicator_profile(p["a"], p["b"], p["height"])
    return RadiationProfile.from_csv(p["profile"])


def _run_radiation(ctx: _Context) -> None:
    from .core_fields import h_norm, make_grid
    from .linear_radiation import (
        data_from_profile,
        isometry_rhs,
        radiation_field_defects,
        random_profile,
    )
    p = ctx.p
    rng = np.random.default_rng(ctx.seed)
    if p["profile"] == "random":
        profiles = [random_profile(rng, p["support"]) for _ in range(p["n_random"])]
    else:
        profiles = [_profile_from_params(p)]
    for i, G in enumerate(profiles):
        G.to_csv(ctx.path(f"profiles/profile_{i:03d}.csv"))
    rows = []
    worst = 0.0
    for i, G in enumerate(profiles):
        S = G.support_radius
        grid = make_grid(p["r_min"] * S, p["r_max_factor"] * S, p["n"])
        st = data_from_profile(G, grid)
        for R in p["radii"]:
            lhs = h_norm(st, R) ** 2
            rhs = isometry_rhs(G, R)
            rel = abs(lhs - rhs) / rhs if rhs > 0 else abs(lhs)
            worst = max(worst, rel)
            rows.append((i, R, lhs, rhs, rel))
    ctx.write_csv("isometry.csv", ["profile", "R", "energy_sq", "profile_side", "rel_error"], rows)
    drows = []
    worst_defect = 0.0
    for i, G in enumerate(profiles):
        t = p["t_factor"] * G.support_radius
        d1, d2 = radiation_field_defects(G, t)
        m = float(G.l2_sq())
        worst_defect = max(worst_defect, d1 / m, d2 / m)
        drows.append((i, t, d1 / m, d2 / m))
    ctx.write_csv("defects.csv", ["profile", "t", "time_defect_rel", "radial_defect_rel"], drows)
    ctx.summary.update({"isometry_worst_rel": worst, "defect_worst_rel": worst_defect,
                        "profiles": len(profiles)})
    ctx.check("isometry identity", worst <= p["iso_tol"], p["iso_tol"])
    ctx.check("radiation-field limits", worst_defect <= p["defect_tol"], p["defect_tol"])


def _run_tau(ctx: _Context) -> None:
    from .core_fields import exterior, y_norm
    from .linear_radiation import FreeWave, concentration_tau, maximal_function, weak_type_profile
    p = ctx.p
    G = _profile_from_params(p)
    wave = FreeWave(G)
    yn = y_norm(wave, exterior(0.0), scales=(p["lam"], G.support_radius), time_decay=4.0)
    rep = concentration_tau(G, yn.value, p["lam"])
    ctx.summary.update({"term_sup_window": rep.term_sup_window, "term_y_norm": rep.term_y_norm,
                        "term_l1_sup": rep.term_l1_sup, "tau": rep.total,
                        "y_norm_error": yn.abs_error_estimate})
    mass = float(G.l2_sq())
    rows = []
    worst = 0.0
    for d in p["directions"]:
        mf = maximal_function(G, d)
        kap = np.asarray(p["kappas"], dtype=float)
        vals = weak_type_profile(mf, kap, p["t_lo"], p["t_hi"], p["samples"])
        for k, v in zip(kap, vals):
            rows.append((d, k, v, v / mass))
            worst = max(worst, v / mass)
    ctx.write_csv("weak_type.csv", ["direction", "kappa", "kappa_times_measure", "ratio_to_mass"],
                  rows)
    ctx.summary["weak_type_constant"] = worst
    ctx.write_json("tau.json", ctx.summary)
    ctx.say(f"tau terms: {rep.term_sup_window:.9g}, {rep.term_y_norm:.9g}, {rep.term_l1_sup:.9g}")
    ctx.check("weak-type bound", worst <= p["weak_constant"], p["weak_constant"])
    if p["expected_terms"] is not None:
        e1, e3 = p["expected_terms"]
        ok = (abs(rep.term_sup_window - e1) <= p["term_tol"]
              and abs(rep.term_l1_sup - e3) <= p["term_tol"])
        ctx.check("concentration terms match expected values", ok, p["term_tol"])


_COMMON_PROFILE = {
    "profile": Param("str", "indicator", "indicator, or a profile CSV path"),
    "a": Param("float", 0.0, "indicator left end"),
    "b": Param("float", 1.0, "indicator right end"),
    "height": Param("float", 1.0, "indicator height"),
}

SCENARIOS: dict[str, Scenario] = {s.name: s for s in (
    Scenario("simulate", "nonlinear radial evolution: energy identity and explicit blow-up", {
        "initial": Param("str", REQUIRED, "initial data family",
                         ("gaussian", "ground_state", "type_one", "file")),
        "file": Param("str", "", "CSV r,u0,u1 when initial = file"),
        "amplitude": Param("float", 0.5), "width": Param("float", 1.0),
        "scale": Param("float", 1.0), "T_plus": Param("float", 1.0),
        "core": Param("float", 3.0), "cut": Param("float", 4.0),
        "h": Param("float", 0.01), "radius": Param("float", 20.0),
        "t_end": Param("float", 5.0), "snapshots": Param("int", 11),
        "nonlinear": Param("bool", True), "cfl": Param("float", 0.9),
        "dt_amp": Param("float", None), "u_ceiling": Param("float", 1e6),
        "energy_tol": Param("float", 1e-4), "blow_up_tol": Param("float", 1e-2),
    }, _run_simulate),
    Scenario("decompose", "exterior multi-bubble extraction by threshold crossings", {
        "state": Param("str", REQUIRED, "CSV r,u0,u1 or 'synthetic'"),
        "bubbles": Param("pairs", [(1, 1.0), (1, 1e-4)], "synthetic bubbles (sign, scale)"),
        "r_min": Param("float", 1e-10), "r_max": Param("float", 1e6), "n": Param("int", 4001),
        "c2": Param("float", 100.0), "n_max": Param("int", 10), "tol": Param("float", 1e-10),
        "refine": Param("bool", False), "zero_tol": Param("float", 1e-6),
        "expected_J": Param("int", None),
    }, _run_decompose),
    Scenario("elliptic", "linearized elliptic corrector: origin value and matching constant", {
        "c": Param("float", 100.0), "r_infinity": Param("float", 1e4),
        "tol": Param("float", 1e-12), "gl_steps": Param("int", 4000),
        "mu0_agreement": Param("float", 1e-6), "residual_tol": Param("float", 1e-10),
    }, _run_elliptic),
    Scenario("verify-estimate", "channel-norm scaling laws (registry of estimates)", {
        "lemmas": Param("strs", ["all"], "registry ids or 'all'"),
        "sweep": Param("floats", None, "custom sweep for a single id"),
    }, _run_verify_estimate),
    Scenario("bootstrap", "dyadic channel recursion: envelope contraction to zero", {
        "K": Param("int", 10), "tau": Param("float", None, "defaults to half the largest admissible"),
        "c0s": Param("float", 1.0), "c1s": Param("float", 1.0), "c2s": Param("float", 1.0),
        "c3s": Param("float", 1.0), "gamma": Param("float", 21.0), "c1": Param("float", 1e-6),
        "c2": Param("float", 20.0), "max_iter": Param("int", 40), "tol": Param("float", 1e-12),
    }, _run_bootstrap),
    Scenario("radiation", "free-wave radiation fields: isometry and asymptotic limits", {
        **_COMMON_PROFILE,
        "profile": Param("str", "random", "random, indicator, or a profile CSV path"),
        "n_random": Param("int", 20), "support": Param("float", 4.0),
        "radii": Param("floats", [0.0, 0.5, 2.0]), "r_min": Param("float", 2.5e-7),
        "r_max_factor": Param("float", 1e3), "n": Param("int", 20001),
        "t_factor": Param("float", 1e3), "iso_tol": Param("float", 1e-6),
        "defect_tol": Param("float", 1e-4),
    }, _run_radiation),
    Scenario("tau-diagnostic", "radiation concentration functional and maximal-function bound", {
        **_COMMON_PROFILE,
        "lam": Param("float", 1.0),
        "kappas": Param("floats", [1e-3, 3e-3, 1e-2, 3e-2, 1e-1, 3e-1, 1.0]),
        "directions": Param("strs", ["-", "+"]),
        "t_lo": Param("float", -1e3), "t_hi": Param("float", 1e3), "samples": Param("int", 200001),
        "weak_constant": Param("float", 1.0 + 1e-6),
        "expected_terms": Param("floats", [1.0, 1.0], "sup-window and L1 terms"),
        "term_tol": Param("float", 1e-6),
    }, _run_tau),
)}


# ----------------------------------------------------------------------------
# entry points
# ----------------------------------------------------------------------------


def list_scenarios() -> str:
    """Sorted listing of scenarios, their anchors and parameters."""
    lines = []
    for name in sorted(SCENARIOS):
        s = SCENARIOS[name]
        lines.append(f"{name}: {s.anchor}")
        for key in sorted(s.params):
            lines.append(f"    {key} ({_describe(s.params[key])})")
    return "\n".join(lines) + "\n"


def _versions() -> dict:
    import scipy

    from . import kernels
    return {"ecwave": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
            "python": platform.python_version(), "kernel_backend": kernels.BACKEND}


def _provenance(exc: BaseException) -> str:
    mod = "ecwave"
    for frame in traceback.extract_tb(exc.__traceback__):
        parts = Path(frame.filename).parts
        if "ecwave" in parts:
            mod = "ecwave." + Path(frame.filename).stem
    return mod


def run_scenario(config: ScenarioConfig, quiet: bool = False) -> RunReport:
    """Validate ``config``, run it, and write artifacts plus ``manifest.json``."""
    if config.scenario not in SCENARIOS:
        msg = f"unknown scenario {config.scenario!r}; known: {sorted(SCENARIOS)}"
        return RunReport(config.scenario, EXIT_VALIDATION, message=msg)
    sc = SCENARIOS[config.scenario]
    try:
        if isinstance(config.seed, bool) or not isinstance(config.seed, int):
            raise ValidationError(["seed must be an integer"])
        params = sc.resolve(config.params)
        out = Path(config.out_dir)
        out.mkdir(parents=True, exist_ok=True)
    except ValidationError as e:
        return RunReport(sc.name, EXIT_VALIDATION, message=f"invalid configuration: {e}")
    except OSError as e:
        return RunReport(sc.name, EXIT_VALIDATION, message=f"output directory not writable: {e}")
    ctx = _Context(params, out, config.seed, quiet)
    code = EXIT_OK
    message = ""
    try:
        sc.runner(ctx)
    except ValidationError as e:
        return RunReport(sc.name, EXIT_VALIDATION, message=f"invalid configuration: {e}")
    except Exception as e:  # surfaced with module provenance
        code = EXIT_COMPUTATION
        message = f"computation error in {_provenance(e)}: {type(e).__name__}: {e}"
    if code == EXIT_OK and not all(ctx.checks.values()):
        code = EXIT_CHECK
        failed = [k for k, v in ctx.checks.items() if not v]
        message = f"checks failed: {failed}"
    manifest = {"scenario": sc.name, "seed": config.seed, "params": params,
                "tolerances": ctx.tolerances, "checks": ctx.checks, "exit_code": code,
                "versions": _versions(), "artifacts": sorted(ctx.artifacts), "message": message}
    (out / "manifest.json").write_text(json.dumps(_jsonable(manifest), indent=2, sort_keys=True) + "\n")
    return RunReport(sc.name, code, ctx.checks, ctx.summary, sorted(ctx.artifacts), message)


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="ecwave", description=__doc__.split("\n\n")[0].strip())
    sub = parser.add_subparsers(dest="command")
    sub.add_parser("list", help="list scenarios with their parameters")
    for name in sorted(SCENARIOS):
        sp = sub.add_parser(name, help=SCENARIOS[name].anchor)
        sp.add_argument("--config", type=Path, help="INI file with [scenario] and [params]")
        sp.add_argument("--out", type=Path, help="output directory")
        sp.add_argument("--quiet", action="store_true", help="suppress progress output")
        sp.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override a parameter (repeatable)")
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_VALIDATION if e.code else EXIT_OK
    if args.command is None:
        parser.print_help()
        return EXIT_VALIDATION
    if args.command == "list":
        sys.stdout.write(list_scenarios())
        return EXIT_OK
    try:
        if args.config is not None:
            cfg = ScenarioConfig.from_file(args.config, args.out, args.command)
        else:
            cfg = ScenarioConfig(args.command, {}, args.out or Path("ecwave_out"))
        for item in args.set:
            if "=" not in item:
                raise ValidationError([f"--set expects KEY=VALUE, got {item!r}"])
            k, v = item.split("=", 1)
            cfg.params[k.strip()] = parse_value(v)
    except ValidationError as e:
        print(f"invalid configuration: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    report = run_scenario(cfg, quiet=args.quiet)
    if report.message:
        print(report.message, file=sys.stderr)
    return report.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
