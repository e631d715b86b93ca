"""Scenario configuration, execution, and report serialization.

A scenario is described by one JSON document:

    {
      "scenario": "phase-averaged",
      "seed": 1,
      "shots": 100000,
      "parameters": {"points": "exact"},
      "default_tolerance": 1e-9,
      "expect": {
        "p_a_alice": {"value": 0.25, "tol": 1e-12},
        "naive_concurrence": {"value": 1.0},
        "estimator_valid": {"value": true}
      }
    }

``scenario`` is one of pure-copies, de-finetti, pure-de-finetti,
phase-averaged, eve-antisym, eve-sym, custom.  Complex numbers are written
as [re, im] pairs; kets are lists of 4 such pairs, matrices are nested
lists of them (4x4 for single-copy hypotheses, 16x16 for custom states).
``seed`` defaults to 0 and ``shots`` to none.  Expected values without a
``tol`` use ``default_tolerance``; boolean metrics must match exactly.

Reports serialize to JSON losslessly: parsing an emitted structured report
reconstructs an equal report.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Optional, Union

import numpy as np

from .linalg import DensityOperator, Ket, QubitLayout, validate_density
from .measures import PureEnsemble
from .protocol import (
    EstimateVerdict,
    OutcomeDistribution,
    ShotRecord,
    evaluate_scenario,
    joint_outcome_distribution,
    sample_outcomes,
)
from .states import (
    COPY_MAJOR,
    DeFinettiEnsemble,
    TwoCopyState,
    custom_state,
    de_finetti_state,
    eve_state,
    identical_pure_copies,
    phase_averaged_decomposition,
    phase_averaged_state,
    pure_de_finetti_state,
)

SCENARIO_NAMES = (
    "pure-copies",
    "de-finetti",
    "pure-de-finetti",
    "phase-averaged",
    "eve-antisym",
    "eve-sym",
    "custom",
)

SCENARIO_SUMMARIES = {
    "pure-copies": "two identical copies of a given pure 2-qubit ket",
    "de-finetti": "mixture of identical per-copy mixed-state hypotheses",
    "pure-de-finetti": "mixture of identical per-copy pure-state hypotheses",
    "phase-averaged": "two maximally entangled copies with a shared unknown phase",
    "eve-antisym": "adversarial singlets on both local pairs (p_a forced to 1)",
    "eve-sym": "adversarial symmetric states on both local pairs (p_a forced to 0)",
    "custom": "explicit 16x16 two-copy density matrix",
}

METRIC_NAMES = (
    "p_a_alice",
    "p_a_bob",
    "naive_concurrence",
    "estimator_valid",
    "disagreement_prob",
    "truth_single_copy_concurrence",
    "truth_decomposition_bound",
    "p_aa",
    "p_as",
    "p_sa",
    "p_ss",
)

DEFAULT_EXPECT_TOL = 1e-9


class ConfigError(ValueError):
    """Invalid scenario configuration; carries every violation found."""

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("invalid configuration:\n" + "\n".join(f"  - {p}" for p in self.problems))


@dataclass(frozen=True)
class Expectation:
    metric: str
    value: Union[float, bool]
    tol: float


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str
    parameters: dict
    seed: int = 0
    shots: Optional[int] = None
    expectations: tuple[Expectation, ...] = ()
    default_tolerance: float = DEFAULT_EXPECT_TOL

    def to_dict(self) -> dict:
        doc: dict[str, Any] = {
            "scenario": self.scenario,
            "parameters": self.parameters,
            "seed": self.seed,
            "shots": self.shots,
            "default_tolerance": self.default_tolerance,
        }
        if self.expectations:
            doc["expect"] = {
                e.metric: ({"value": e.value} if isinstance(e.value, bool) else {"value": e.value, "tol": e.tol})
                for e in self.expectations
            }
        return doc


@dataclass(frozen=True)
class CheckResult:
    metric: str
    expected: Union[float, bool]
    actual: Union[float, bool, None]
    tol: float
    passed: bool


@dataclass(frozen=True)
class ScenarioReport:
    config: dict
    verdict: EstimateVerdict
    joint: OutcomeDistribution
    shot_record: Optional[ShotRecord]
    checks: tuple[CheckResult, ...]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


def _parse_complex(node, where: str, problems: list[str]) -> complex:
    if (
        isinstance(node, (list, tuple))
        and len(node) == 2
        and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in node)
    ):
        return complex(node[0], node[1])
    if isinstance(node, (int, float)) and not isinstance(node, bool):
        return complex(node)
    problems.append(f"{where}: expected a number or [re, im] pair, got {node!r}")
    return 0j


def _parse_vector(node, length: int, where: str, problems: list[str]) -> np.ndarray:
    if not isinstance(node, list) or len(node) != length:
        problems.append(f"{where}: expected a list of {length} amplitudes")
        return np.zeros(length, dtype=complex)
    return np.array([_parse_complex(v, f"{where}[{i}]", problems) for i, v in enumerate(node)])


def _parse_matrix(node, side: int, where: str, problems: list[str]) -> np.ndarray:
    if not isinstance(node, list) or len(node) != side:
        problems.append(f"{where}: expected a {side}x{side} matrix")
        return np.zeros((side, side), dtype=complex)
    return np.array([_parse_vector(row, side, f"{where}[{i}]", problems) for i, row in enumerate(node)])


def _parse_expectations(node, default_tol: float, problems: list[str]) -> tuple[Expectation, ...]:
    if node is None:
        return ()
    if not isinstance(node, dict):
        problems.append("expect: must be a mapping of metric name to {value, tol}")
        return ()
    out = []
    for metric, spec in node.items():
        if metric not in METRIC_NAMES:
            problems.append(f"expect.{metric}: unknown metric (choose from {', '.join(METRIC_NAMES)})")
            continue
        if not isinstance(spec, dict) or "value" not in spec:
            problems.append(f"expect.{metric}: must be a mapping with a 'value' entry")
            continue
        value = spec["value"]
        tol = spec.get("tol", default_tol)
        if isinstance(value, bool):
            out.append(Expectation(metric, value, 0.0))
        elif isinstance(value, (int, float)):
            if not (isinstance(tol, (int, float)) and not isinstance(tol, bool) and tol >= 0):
                problems.append(f"expect.{metric}: tol must be a nonnegative number")
                continue
            out.append(Expectation(metric, float(value), float(tol)))
        else:
            problems.append(f"expect.{metric}: value must be a number or boolean")
    return tuple(out)


def parse_config(text: str) -> ScenarioConfig:
    """Parse and validate one JSON scenario document.

    Raises :class:`ConfigError` listing every violation found.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([f"not valid JSON: {exc}"]) from None
    if not isinstance(doc, dict):
        raise ConfigError(["top-level document must be a JSON object"])

    problems: list[str] = []
    known_keys = {"scenario", "parameters", "seed", "shots", "expect", "default_tolerance"}
    for key in doc:
        if key not in known_keys:
            problems.append(f"unknown key {key!r}")

    scenario = doc.get("scenario")
    if scenario not in SCENARIO_NAMES:
        problems.append(f"scenario: must be one of {', '.join(SCENARIO_NAMES)}, got {scenario!r}")
        raise ConfigError(problems)

    seed = doc.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        problems.append(f"seed: must be a nonnegative integer, got {seed!r}")
        seed = 0
    shots = doc.get("shots")
    if shots is not None and (not isinstance(shots, int) or isinstance(shots, bool) or shots < 1):
        problems.append(f"shots: must be a positive integer, got {shots!r}")
        shots = None
    default_tol = doc.get("default_tolerance", DEFAULT_EXPECT_TOL)
    if not isinstance(default_tol, (int, float)) or isinstance(default_tol, bool) or default_tol < 0:
        problems.append(f"default_tolerance: must be a nonnegative number, got {default_tol!r}")
        default_tol = DEFAULT_EXPECT_TOL

    parameters = doc.get("parameters", {})
    if not isinstance(parameters, dict):
        problems.append("parameters: must be a mapping")
        parameters = {}
    else:
        parameters = _validate_parameters(scenario, parameters, problems)

    expectations = _parse_expectations(doc.get("expect"), float(default_tol), problems)

    if problems:
        raise ConfigError(problems)
    return ScenarioConfig(
        scenario=scenario,
        parameters=parameters,
        seed=seed,
        shots=shots,
        expectations=expectations,
        default_tolerance=float(default_tol),
    )


def _validate_parameters(scenario: str, params: dict, problems: list[str]) -> dict:
    """Check parameter structure and that the state constructor accepts it."""
    allowed = {
        "pure-copies": {"ket"},
        "de-finetti": {"members"},
        "pure-de-finetti": {"members"},
        "phase-averaged": {"points"},
        "eve-antisym": set(),
        "eve-sym": set(),
        "custom": {"rho"},
    }[scenario]
    for key in params:
        if key not in allowed:
            problems.append(f"parameters.{key}: not a parameter of scenario {scenario!r}")
    before = len(problems)
    if scenario == "pure-copies" and "ket" not in params:
        problems.append("parameters.ket: required for pure-copies")
    if scenario in ("de-finetti", "pure-de-finetti") and "members" not in params:
        problems.append("parameters.members: required for this scenario")
    if scenario == "custom" and "rho" not in params:
        problems.append("parameters.rho: required for custom")
    if len(problems) > before:
        return params
    try:
        build_state(scenario, params)
    except ConfigError as exc:
        problems.extend(exc.problems)
    except ValueError as exc:
        problems.append(f"parameters: {exc}")
    return params


# ---------------------------------------------------------------------------
# State construction
# ---------------------------------------------------------------------------


def _ket_from_params(node, problems: list[str]) -> Ket:
    amps = _parse_vector(node, 4, "ket", problems)
    if problems:
        raise ConfigError(problems)
    try:
        return Ket(QubitLayout(("A", "B")), amps)
    except ValueError as exc:
        raise ConfigError([f"ket: {exc}"]) from None


def _members_from_params(node, pure: bool, problems: list[str]):
    if not isinstance(node, list) or not node:
        raise ConfigError(["members: expected a nonempty list"])
    members = []
    for i, entry in enumerate(node):
        if not isinstance(entry, dict) or "weight" not in entry:
            problems.append(f"members[{i}]: expected a mapping with 'weight'")
            continue
        w = entry["weight"]
        if not isinstance(w, (int, float)) or isinstance(w, bool):
            problems.append(f"members[{i}].weight: must be a number")
            continue
        seen = len(problems)
        if pure:
            if "ket" not in entry:
                problems.append(f"members[{i}].ket: required")
                continue
            amps = _parse_vector(entry["ket"], 4, f"members[{i}].ket", problems)
            if len(problems) > seen:
                continue
            try:
                members.append((float(w), Ket(QubitLayout(("A", "B")), amps)))
            except ValueError as exc:
                problems.append(f"members[{i}].ket: {exc}")
        else:
            if "rho" not in entry:
                problems.append(f"members[{i}].rho: required")
                continue
            mat = _parse_matrix(entry["rho"], 4, f"members[{i}].rho", problems)
            if len(problems) > seen:
                continue
            report = validate_density(mat)
            if not report.passed:
                problems.append(f"members[{i}].rho: not a valid density operator ({report})")
                continue
            members.append((float(w), DensityOperator(QubitLayout(("A", "B")), mat)))
    if problems:
        raise ConfigError(problems)
    weights = [w for w, _ in members]
    if abs(sum(weights) - 1.0) > 1e-10 or min(weights) < 0.0:
        raise ConfigError(
            [f"members: weights must be nonnegative and sum to 1, got sum {sum(weights)!r}"]
        )
    return members


def build_state(scenario: str, parameters: dict) -> TwoCopyState:
    """Construct the scenario's two-copy state from validated parameters."""
    problems: list[str] = []
    if scenario == "pure-copies":
        return identical_pure_copies(_ket_from_params(parameters.get("ket"), problems))
    if scenario == "de-finetti":
        members = _members_from_params(parameters.get("members"), pure=False, problems=problems)
        return de_finetti_state(DeFinettiEnsemble(tuple(members)))
    if scenario == "pure-de-finetti":
        members = _members_from_params(parameters.get("members"), pure=True, problems=problems)
        return pure_de_finetti_state(PureEnsemble(tuple(members)))
    if scenario == "phase-averaged":
        points = parameters.get("points", "exact")
        if isinstance(points, bool) or not isinstance(points, (int, str)):
            raise ConfigError([f"parameters.points: must be an integer or 'exact', got {points!r}"])
        return phase_averaged_state(points)
    if scenario == "eve-antisym":
        return eve_state("antisymmetric")
    if scenario == "eve-sym":
        return eve_state("symmetric")
    if scenario == "custom":
        mat = _parse_matrix(parameters.get("rho"), 16, "rho", problems)
        if problems:
            raise ConfigError(problems)
        report = validate_density(mat)
        if not report.passed:
            raise ConfigError([f"rho: not a valid density operator ({report})"])
        return custom_state(DensityOperator(QubitLayout(COPY_MAJOR), mat))
    raise ConfigError([f"unknown scenario {scenario!r}"])


# ---------------------------------------------------------------------------
# Execution
# ---------------------------------------------------------------------------


def _metric_value(metric: str, verdict: EstimateVerdict, joint: OutcomeDistribution):
    if metric in ("p_aa", "p_as", "p_sa", "p_ss"):
        return getattr(joint, metric)
    return getattr(verdict, metric)


def run(config: ScenarioConfig) -> ScenarioReport:
    """Evaluate a scenario deterministically and check its expectations."""
    try:
        state = build_state(config.scenario, config.parameters)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError([f"scenario {config.scenario!r}: {exc}"]) from None

    decomposition = None
    if config.scenario == "phase-averaged":
        decomposition = phase_averaged_decomposition()
    verdict = evaluate_scenario(state, decomposition=decomposition)
    joint = joint_outcome_distribution(state)
    record = sample_outcomes(state, config.shots, config.seed) if config.shots else None

    checks = []
    for exp in config.expectations:
        actual = _metric_value(exp.metric, verdict, joint)
        if isinstance(exp.value, bool):
            passed = actual is exp.value
        elif actual is None:
            passed = False
        else:
            passed = abs(actual - exp.value) <= exp.tol
        checks.append(CheckResult(exp.metric, exp.value, actual, exp.tol, passed))
    return ScenarioReport(
        config=config.to_dict(),
        verdict=verdict,
        joint=joint,
        shot_record=record,
        checks=tuple(checks),
    )


# ---------------------------------------------------------------------------
# Emission
# ---------------------------------------------------------------------------


def report_to_dict(r: ScenarioReport) -> dict:
    doc: dict[str, Any] = {
        "config": r.config,
        "verdict": {
            "p_a_alice": r.verdict.p_a_alice,
            "p_a_bob": r.verdict.p_a_bob,
            "naive_concurrence": r.verdict.naive_concurrence,
            "estimator_valid": r.verdict.estimator_valid,
            "disagreement_prob": r.verdict.disagreement_prob,
            "truth_single_copy_concurrence": r.verdict.truth_single_copy_concurrence,
            "truth_decomposition_bound": r.verdict.truth_decomposition_bound,
        },
        "joint_distribution": {
            "p_aa": r.joint.p_aa,
            "p_as": r.joint.p_as,
            "p_sa": r.joint.p_sa,
            "p_ss": r.joint.p_ss,
        },
        "shot_record": None,
        "checks": [
            {
                "metric": c.metric,
                "expected": c.expected,
                "actual": c.actual,
                "tol": c.tol,
                "passed": c.passed,
            }
            for c in r.checks
        ],
        "all_passed": r.all_passed,
    }
    if r.shot_record is not None:
        doc["shot_record"] = {
            "shots": r.shot_record.shots,
            "seed": r.shot_record.seed,
            "counts": dict(zip(("aa", "as", "sa", "ss"), r.shot_record.counts)),
        }
    return doc


def report_from_dict(doc: dict) -> ScenarioReport:
    verdict = EstimateVerdict(**doc["verdict"])
    joint = OutcomeDistribution(**doc["joint_distribution"])
    record = None
    if doc.get("shot_record") is not None:
        sr = doc["shot_record"]
        record = ShotRecord(
            shots=sr["shots"],
            seed=sr["seed"],
            counts=tuple(sr["counts"][k] for k in ("aa", "as", "sa", "ss")),
        )
    checks = tuple(
        CheckResult(c["metric"], c["expected"], c["actual"], c["tol"], c["passed"])
        for c in doc.get("checks", [])
    )
    return ScenarioReport(
        config=doc["config"], verdict=verdict, joint=joint, shot_record=record, checks=checks
    )


def report_to_json(r: ScenarioReport) -> str:
    """Structured machine format; full precision, byte-stable across runs."""
    return json.dumps(report_to_dict(r), indent=2, sort_keys=True)


def report_from_json(text: str) -> ScenarioReport:
    return report_from_dict(json.loads(text))


def _sig(x: Optional[float]) -> str:
    if x is None:
        return "-"
    if isinstance(x, bool):
        return "yes" if x else "no"
    if x == 0:
        return "0"
    return f"{x:.6g}"


def render_table(r: ScenarioReport) -> str:
    """Human-readable aligned table; values shown to 6 significant digits."""
    rows: list[tuple[str, str]] = [
        ("scenario", str(r.config.get("scenario"))),
        ("seed", str(r.config.get("seed"))),
        ("p_a_alice", _sig(r.verdict.p_a_alice)),
        ("p_a_bob", _sig(r.verdict.p_a_bob)),
        ("naive_concurrence", _sig(r.verdict.naive_concurrence)),
        ("estimator_valid", "yes" if r.verdict.estimator_valid else "no"),
        ("disagreement_prob", _sig(r.verdict.disagreement_prob)),
        ("truth_single_copy_concurrence", _sig(r.verdict.truth_single_copy_concurrence)),
        ("truth_decomposition_bound", _sig(r.verdict.truth_decomposition_bound)),
        ("joint p_aa/p_as/p_sa/p_ss", "/".join(_sig(p) for p in r.joint.as_tuple())),
    ]
    if r.shot_record is not None:
        rows.append(("shots", str(r.shot_record.shots)))
        rows.append(("counts aa/as/sa/ss", "/".join(str(c) for c in r.shot_record.counts)))
        rows.append(("sampling seed", str(r.shot_record.seed)))
    width = max(len(k) for k, _ in rows)
    lines = [f"{k:<{width}}  {v}" for k, v in rows]
    if r.checks:
        lines.append("")
        lines.append("checks:")
        for c in r.checks:
            status = "PASS" if c.passed else "FAIL"
            lines.append(
                f"  [{status}] {c.metric}: expected {_sig(c.expected)}"
                + ("" if isinstance(c.expected, bool) else f" +- {c.tol:g}")
                + f", got {_sig(c.actual)}"
            )
        lines.append(f"result: {'all expectations met' if r.all_passed else 'EXPECTATION VIOLATED'}")
    return "\n".join(lines)


def emit_report(r: ScenarioReport, format: str = "table") -> str:
    """Render a report as 'json' (machine, lossless) or 'table' (human)."""
    if format == "json":
        return report_to_json(r)
    if format == "table":
        return render_table(r)
    raise ValueError(f"format must be 'json' or 'table', got {format!r}")
