"""Scenario files: parsing, validation, and deterministic execution.

A scenario is a YAML document declaring named exponent sets and node sets
plus an ordered task list (criterion, obstruction, solve, crude, growth,
expoly_certify).  Running a scenario yields a JSON-serializable report that
is byte-identical across runs with the same seed; wall-clock metadata lives
in a separate sidecar so reports stay comparable.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from .errors import DomainError, PreconditionError, ResourceLimitError
from .exponents import ExponentSet, Generator, sparse_subsequence
from .expoly import ExpPolynomial, lower_bound_in_angle, zero_free_angle_check
from .geometry import Direction, Ray
from .growth import ExpSum, growth_bound_check
from .interp import (
    DIMENSION_CAP,
    InterpolationProblem,
    solve,
    solve_crude,
    verify_obstruction_pairing,
)
from .nodes import DEFAULT_PREFIX, NodeSet, RayNodes, check_criterion

__all__ = [
    "Scenario",
    "ScenarioError",
    "SCHEMA_TAG",
    "parse_scenario",
    "validate_scenario",
    "run_scenario",
    "render_report",
]

SCHEMA_TAG = "expinterp-report/1"

TASK_KINDS = ("criterion", "obstruction", "solve", "crude", "growth", "expoly_certify")

#: Hard caps keeping scenario runs at desk scale.
PREFIX_CAP = 10_000
GRID_CAP = 512
TRIALS_CAP = 10_000


class ScenarioError(DomainError):
    """Malformed scenario document."""


def _as_complex(v: Any, where: str) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    raise ScenarioError(f"{where}: expected a number or [re, im] pair, got {v!r}")


def _json_complex(z: complex) -> Any:
    if z.imag == 0:
        return z.real
    return [z.real, z.imag]


@dataclass(frozen=True)
class Scenario:
    name: str
    exponent_sets: dict[str, ExponentSet]
    node_sets: dict[str, NodeSet]
    tasks: tuple[dict[str, Any], ...]
    source: dict[str, Any] = field(repr=False, default_factory=dict)


def _parse_generator(g: dict, where: str) -> Generator:
    if not isinstance(g, dict) or "kind" not in g:
        raise ScenarioError(f"{where}: generator needs a 'kind'")
    kind = g["kind"]
    if kind not in ("arithmetic", "geometric"):
        raise ScenarioError(f"{where}: unknown generator kind {kind!r}")
    scale = _as_complex(g.get("scale", 1.0), f"{where}.scale")
    kwargs: dict[str, Any] = {}
    if kind == "geometric":
        kwargs["ratio"] = float(g.get("ratio", 2.0))
    if "index_range" in g:
        kwargs["index_range"] = str(g["index_range"])
    return Generator(kind, scale, **kwargs)


def _parse_exponent_set(spec: dict, where: str) -> ExponentSet:
    if not isinstance(spec, dict):
        raise ScenarioError(f"{where}: expected a mapping")
    explicit = tuple(
        _as_complex(v, f"{where}.explicit[{i}]")
        for i, v in enumerate(spec.get("explicit", []) or [])
    )
    gens = tuple(
        _parse_generator(g, f"{where}.generators[{i}]")
        for i, g in enumerate(spec.get("generators", []) or [])
    )
    return ExponentSet(explicit=explicit, generators=gens)


def _parse_node_set(spec: dict, where: str) -> NodeSet:
    if not isinstance(spec, dict):
        raise ScenarioError(f"{where}: expected a mapping")
    rays = []
    for i, r in enumerate(spec.get("rays", []) or []):
        origin = _as_complex(r.get("origin", 0.0), f"{where}.rays[{i}].origin")
        angle = float(r.get("angle", 0.0))
        params = tuple(float(t) for t in r.get("params", []))
        mults = tuple(int(m) for m in r.get("multiplicities", []) or [])
        rays.append(RayNodes(Ray(origin, angle), params, mults))
    off = tuple(
        (
            _as_complex(o.get("point"), f"{where}.off_ray[{i}].point"),
            int(o.get("multiplicity", 1)),
        )
        for i, o in enumerate(spec.get("off_ray", []) or [])
    )
    return NodeSet(tuple(rays), off)


def parse_scenario(path: str | Path) -> Scenario:
    """Load and structurally parse a scenario file; raises ScenarioError."""
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario {p}: {exc}") from exc
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        loc = f" at line {mark.line + 1}, column {mark.column + 1}" if mark else ""
        raise ScenarioError(f"scenario parse error{loc}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ScenarioError("scenario root must be a mapping")
    name = str(doc.get("name", p.stem))
    exponent_sets = {
        str(k): _parse_exponent_set(v, f"exponent_sets.{k}")
        for k, v in (doc.get("exponent_sets") or {}).items()
    }
    node_sets = {
        str(k): _parse_node_set(v, f"node_sets.{k}")
        for k, v in (doc.get("node_sets") or {}).items()
    }
    tasks = doc.get("tasks") or []
    if not isinstance(tasks, list):
        raise ScenarioError("tasks must be a list")
    return Scenario(name, exponent_sets, node_sets, tuple(tasks), doc)


def _task_diagnostics(sc: Scenario, i: int, task: Any) -> list[str]:
    where = f"tasks[{i}]"
    out: list[str] = []
    if not isinstance(task, dict) or "kind" not in task:
        return [f"{where}: task needs a 'kind'"]
    kind = task["kind"]
    if kind not in TASK_KINDS:
        return [f"{where}: unknown task kind {kind!r}"]
    def need_exponent_set():
        name = task.get("exponent_set")
        if name is None:
            out.append(f"{where}: missing exponent_set reference")
            return None
        if name not in sc.exponent_sets:
            out.append(f"{where}: undefined exponent_set {name!r}")
            return None
        return sc.exponent_sets[name]

    def need_node_set():
        name = task.get("node_set")
        if name is None:
            out.append(f"{where}: missing node_set reference")
            return None
        if name not in sc.node_sets:
            out.append(f"{where}: undefined node_set {name!r}")
            return None
        return sc.node_sets[name]

    if kind == "criterion":
        lam = need_exponent_set()
        need_node_set()
        if lam is not None and not lam.generators:
            out.append(
                f"{where}: bounded exponent set cannot have limit directions, "
                "so the solvability criterion can never hold"
            )
        prefix = int(task.get("prefix", DEFAULT_PREFIX))
        if prefix < 1 or prefix > PREFIX_CAP:
            out.append(f"{where}: prefix must be in [1, {PREFIX_CAP}]")
    elif kind == "obstruction":
        for key in ("mu_l", "mu_k"):
            if key not in task:
                out.append(f"{where}: missing {key}")
        count = int(task.get("count", 25))
        trials = int(task.get("trials", 100))
        if count < 1 or 2 * count > DIMENSION_CAP * 4:
            out.append(f"{where}: count out of range")
        if trials < 1 or trials > TRIALS_CAP:
            out.append(f"{where}: trials must be in [1, {TRIALS_CAP}]")
    elif kind in ("solve", "crude"):
        m = need_node_set()
        if "exponents" in task:
            exps = task["exponents"]
            if isinstance(exps, dict):
                name = exps.get("sparse_of")
                if name not in sc.exponent_sets:
                    out.append(f"{where}: undefined exponent_set {name!r}")
            elif not isinstance(exps, list):
                out.append(f"{where}: exponents must be a list or sparse_of mapping")
        else:
            out.append(f"{where}: missing exponents")
        if "data" not in task:
            out.append(f"{where}: missing data")
        elif m is not None:
            dim = sum(mult for _, mult in m.all_points())
            if len(task["data"]) != dim:
                out.append(
                    f"{where}: data length {len(task['data'])} != total multiplicity {dim}"
                )
            if dim > DIMENSION_CAP:
                out.append(f"{where}: dimension {dim} exceeds cap {DIMENSION_CAP}")
        if kind == "crude" and "deltas" not in task:
            out.append(f"{where}: missing deltas")
    elif kind == "growth":
        if "exponents" not in task:
            out.append(f"{where}: missing exponents")
        if float(task.get("eps", 1.0)) <= 0:
            out.append(f"{where}: eps must be positive")
        n = int(task.get("samples", 100))
        if n < 1 or n > GRID_CAP:
            out.append(f"{where}: samples must be in [1, {GRID_CAP}]")
    elif kind == "expoly_certify":
        if "exponents" not in task:
            out.append(f"{where}: missing exponents")
        grid = int(task.get("grid", 64))
        if grid < 2 or grid > GRID_CAP:
            out.append(f"{where}: grid must be in [2, {GRID_CAP}]")
        if float(task.get("delta", 0.1)) <= 0:
            out.append(f"{where}: delta must be positive")
    return out


def validate_scenario(sc: Scenario) -> list[str]:
    """Full validation without execution; an empty list means runnable."""
    out: list[str] = []
    if not sc.tasks:
        out.append("scenario declares no tasks")
    for i, task in enumerate(sc.tasks):
        out.extend(_task_diagnostics(sc, i, task))
    return out


def _resolve_exponents(sc: Scenario, task: dict, where: str) -> tuple[complex, ...]:
    exps = task["exponents"]
    if isinstance(exps, list):
        return tuple(_as_complex(v, f"{where}.exponents[{i}]") for i, v in enumerate(exps))
    name = exps["sparse_of"]
    targets = tuple(Direction(float(a)) for a in exps.get("targets", [0.0]))
    count = int(exps["count"])
    return tuple(sparse_subsequence(sc.exponent_sets[name], targets, count).points)


def _problem(sc: Scenario, task: dict, where: str) -> InterpolationProblem:
    m = sc.node_sets[task["node_set"]]
    nodes = tuple(m.all_points())
    data = tuple(_as_complex(v, f"{where}.data[{i}]") for i, v in enumerate(task["data"]))
    exps = _resolve_exponents(sc, task, where)
    return InterpolationProblem(nodes, data, exps)


def _run_task(sc: Scenario, i: int, task: dict, seed: int, out_dir: Path | None) -> dict:
    where = f"tasks[{i}]"
    kind = task["kind"]
    rec: dict[str, Any] = {"index": i, "kind": kind}
    if kind == "criterion":
        verdict = check_criterion(
            sc.node_sets[task["node_set"]],
            sc.exponent_sets[task["exponent_set"]],
            int(task.get("prefix", DEFAULT_PREFIX)),
        )
        rec["holds"] = verdict.holds
        rec["witnesses"] = [
            {"ray": w.ray_index, "alpha": w.direction.angle, "margin": w.margin}
            for w in verdict.witnesses
        ]
        rec["violations"] = [
            {
                "kind": v.kind,
                "ray": v.ray_index,
                "mu_l": None if v.mu_l is None else _json_complex(v.mu_l),
                "mu_k": None if v.mu_k is None else _json_complex(v.mu_k),
            }
            for v in verdict.violations
        ]
    elif kind == "obstruction":
        rep = verify_obstruction_pairing(
            _as_complex(task["mu_l"], f"{where}.mu_l"),
            _as_complex(task["mu_k"], f"{where}.mu_k"),
            count=int(task.get("count", 25)),
            trials=int(task.get("trials", 100)),
            seed=seed,
        )
        rec["max_difference"] = rep.max_difference
        rec["column_mismatch"] = rep.column_mismatch
        rec["trials"] = rep.trials
    elif kind in ("solve", "crude"):
        problem = _problem(sc, task, where)
        if kind == "solve":
            rep = solve(problem, tol=float(task.get("tol", 1e-9)))
        else:
            deltas = [float(d) for d in task["deltas"]]
            rep = solve_crude(problem, deltas, tol=float(task.get("tol", 1e-9)))
            rec["deviations"] = list(rep.deviations)
        rec["status"] = rep.status
        rec["residual_rel"] = rep.residual_rel
        rec["condition_estimate"] = rep.condition_estimate
        rec["working_dps"] = rep.working_dps
    elif kind == "growth":
        exps = _resolve_exponents(sc, task, where)
        eps = float(task.get("eps", 1.0))
        n = int(task.get("samples", 100))
        x_max = float(task.get("x_max", 10.0))
        rng = np.random.default_rng([seed, i])
        coeffs = rng.standard_normal(len(exps)) + 1j * rng.standard_normal(len(exps))
        decay = [float(d) for d in task.get("decay", [])] or [1.0] * len(exps)
        u = ExpSum(tuple((c * d, lam) for c, d, lam in zip(coeffs, decay, exps)))
        xs = [x_max * (k + 1) / n for k in range(n)]
        rep = growth_bound_check(u, eps, xs)
        rec["constant"] = rep.constant
        rec["passed"] = rep.passed
        rec["failure_count"] = len(rep.failures)
        if task.get("emit_plot") and out_dir is not None:
            path = out_dir / f"task{i}_growth.csv"
            lines = ["x,value"] + [f"{x},{bound}" for x, _, bound, _ in rep.rows]
            path.write_text("\n".join(lines) + "\n")
            rec["plot"] = path.name
    elif kind == "expoly_certify":
        exps = _resolve_exponents(sc, task, where)
        p = ExpPolynomial.from_exponents(exps)
        alpha = float(task.get("alpha", 0.0))
        delta = float(task.get("delta", 0.1))
        from .expoly import dominant_split

        split = dominant_split(p, alpha)
        epsilon = min(split.gap / 4, 1.0) if math.isfinite(split.gap) else 1.0
        cert = lower_bound_in_angle(p, alpha, delta, epsilon)
        radius = float(task.get("radius", cert.radius))
        rep = zero_free_angle_check(p, alpha, delta, radius, int(task.get("grid", 64)))
        rec["radius"] = cert.radius
        rec["passed"] = rep.passed
        rec["samples"] = rep.samples
        rec["min_log_abs"] = rep.min_log_abs
        rec["failure_count"] = len(rep.failures)
    return rec


def run_scenario(sc: Scenario, seed: int = 0, out_dir: str | Path | None = None) -> dict:
    """Execute every task in order and assemble the deterministic report.

    Precondition and domain errors inside a task abort the run (the caller
    maps them to exit codes); verdicts of "criterion fails" or "singular"
    are successful completions.
    """
    diagnostics = validate_scenario(sc)
    if diagnostics:
        raise ScenarioError("; ".join(diagnostics))
    out = Path(out_dir) if out_dir is not None else None
    records = [_run_task(sc, i, t, seed, out) for i, t in enumerate(sc.tasks)]
    return {
        "schema": SCHEMA_TAG,
        "scenario": sc.name,
        "seed": seed,
        "tasks": records,
    }


def render_report(report: dict) -> str:
    """Canonical byte form: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(report, sort_keys=True, indent=2) + "\n"
