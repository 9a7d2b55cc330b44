"""Constrained numerical search for question-order effects.

Maximises the order-effect magnitude over disturbance unitaries (and,
optionally, projectors) subject to a chosen subset of the repeatability
conditions.  Constraints enter through a quadratic penalty; each restart
runs Nelder-Mead from a seeded random start, escalates the penalty weight
once (x10) if the selected residuals are still loose, then drives them
onto the feasible set with a finite-difference least-squares polish.

Unitaries are parametrised as exponentials of skew-Hermitian generators,
packed into real vectors: for one dim x dim generator the first dim
entries are the imaginary diagonal, the next dim*(dim-1)/2 the real
antisymmetric upper triangle (row-major), the last dim*(dim-1)/2 the
imaginary symmetric upper triangle.  A parameter vector holds the two
disturbance generators in order (A then B), followed by two more
generators rotating the projector frames when projectors are free.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares, minimize

from . import criteria, kernels, linalg
from .exceptions import (
    BadParameterLengthError,
    DimensionMismatchError,
    NotProjectorError,
    RankOutOfRangeError,
)
from .linalg import DEFAULT_TOL, Tolerances
from .measurement import InstancePair, Measurement, pair_to_json

CONSTRAINT_TOKENS = ("aa-a", "aa-b", "aba", "bab")
_TOKEN_INDEX = {token: i for i, token in enumerate(CONSTRAINT_TOKENS)}

FEAS_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class SearchProblem:
    """What to optimise: geometry, constraint set, budgets, seed.

    projectors fixes both question subspaces; leave it None to search over
    them too, in which case rank_a and rank_b choose their ranks.
    """

    dim: int
    constraints: tuple[str, ...] = ()
    projectors: tuple[np.ndarray, np.ndarray] | None = None
    rank_a: int | None = None
    rank_b: int | None = None
    penalty_weight: float = 100.0
    restarts: int = 16
    max_iters: int = 2000
    seed: int = 0


def default_projectors(dim: int) -> tuple[np.ndarray, np.ndarray]:
    """Overlapping diagonal projectors of rank dim-1 sharing a (dim-2)-overlap."""
    if dim < 2:
        raise DimensionMismatchError("default projector geometry needs dimension at least 2")
    p1 = np.diag([1.0] * (dim - 1) + [0.0]).astype(complex)
    p2 = np.diag([1.0] * (dim - 2) + [0.0, 1.0]).astype(complex)
    return p1, p2


def _validate_problem(problem: SearchProblem) -> None:
    if problem.dim < 1:
        raise DimensionMismatchError("search dimension must be at least 1")
    seen = set()
    for token in problem.constraints:
        if token not in _TOKEN_INDEX:
            raise ValueError(f"unknown constraint token {token!r}")
        if token in seen:
            raise ValueError(f"duplicate constraint token {token!r}")
        seen.add(token)
    if problem.penalty_weight <= 0:
        raise ValueError("penalty weight must be positive")
    if problem.restarts < 1:
        raise ValueError("need at least one restart")
    if problem.max_iters < 10:
        raise ValueError("iteration budget is too small to move the simplex")
    if problem.seed < 0:
        raise ValueError("seed must be nonnegative")
    if problem.projectors is not None:
        for name, p in zip(("first", "second"), problem.projectors):
            p = np.asarray(p)
            if p.shape != (problem.dim, problem.dim):
                raise DimensionMismatchError(f"{name} fixed projector has shape {p.shape}")
            if not linalg.is_projector(p):
                raise NotProjectorError(f"{name} fixed projector fails the projector check")
    else:
        for name, rank in (("rank_a", problem.rank_a), ("rank_b", problem.rank_b)):
            if rank is None:
                raise ValueError(f"free-projector search needs {name}")
            if not 0 <= rank <= problem.dim:
                raise RankOutOfRangeError(f"{name}={rank} out of range for dimension {problem.dim}")


class _ParamLayout:
    """Index bookkeeping for packing real vectors into skew generators."""

    def __init__(self, dim: int):
        self.dim = dim
        self.rows, self.cols = np.triu_indices(dim, 1)
        self.per_matrix = dim * dim

    def skew(self, v: np.ndarray) -> np.ndarray:
        d = self.dim
        m = d * (d - 1) // 2
        k = np.zeros((d, d), dtype=complex)
        k[np.arange(d), np.arange(d)] = 1j * v[:d]
        re = v[d:d + m]
        im = v[d + m:]
        k[self.rows, self.cols] = re + 1j * im
        k[self.cols, self.rows] = -re + 1j * im
        return k


def parameter_count(problem: SearchProblem) -> int:
    per = problem.dim * problem.dim
    return 2 * per if problem.projectors is not None else 4 * per


class _Evaluator:
    """Shared state for objective evaluations of one problem."""

    def __init__(self, problem: SearchProblem):
        self.problem = problem
        self.layout = _ParamLayout(problem.dim)
        self.per = self.layout.per_matrix
        self.selected = tuple(sorted(_TOKEN_INDEX[t] for t in problem.constraints))
        if problem.projectors is not None:
            self.p1 = np.ascontiguousarray(problem.projectors[0], dtype=complex)
            self.p2 = np.ascontiguousarray(problem.projectors[1], dtype=complex)
            self.diag_a = self.diag_b = None
        else:
            self.p1 = self.p2 = None
            self.diag_a = np.diag(
                [1.0] * problem.rank_a + [0.0] * (problem.dim - problem.rank_a)
            ).astype(complex)
            self.diag_b = np.diag(
                [1.0] * problem.rank_b + [0.0] * (problem.dim - problem.rank_b)
            ).astype(complex)

    def matrices(self, x: np.ndarray):
        per = self.per
        u1 = kernels.expm_skew(self.layout.skew(x[0:per]))
        u2 = kernels.expm_skew(self.layout.skew(x[per:2 * per]))
        if self.p1 is not None:
            return self.p1, u1, self.p2, u2
        q1 = kernels.expm_skew(self.layout.skew(x[2 * per:3 * per]))
        q2 = kernels.expm_skew(self.layout.skew(x[3 * per:4 * per]))
        p1 = q1 @ self.diag_a @ q1.conj().T
        p2 = q2 @ self.diag_b @ q2.conj().T
        return np.ascontiguousarray(p1), u1, np.ascontiguousarray(p2), u2

    def stats(self, x: np.ndarray) -> tuple[float, np.ndarray]:
        p1, u1, p2, u2 = self.matrices(x)
        mag, r1, r2, r3, r4 = kernels.pair_stats(p1, u1, p2, u2)
        return mag, np.array([r1, r2, r3, r4])

    def penalized(self, x: np.ndarray, weight: float) -> tuple[float, float]:
        """(penalised objective, total penalty) at the given weight."""
        mag, residuals = self.stats(x)
        penalty = weight * float(np.sum(residuals[list(self.selected)] ** 2))
        return mag - penalty, penalty

    def worst_selected(self, residuals: np.ndarray) -> float:
        if not self.selected:
            return 0.0
        return float(np.max(residuals[list(self.selected)]))

    def defect_entries(self, x: np.ndarray) -> np.ndarray:
        """Stacked real entries of the selected defect matrices (polish target)."""
        p1, u1, p2, u2 = self.matrices(x)
        m1 = u1 @ p1
        m2 = u2 @ p2
        defects = {
            0: lambda: p1 @ m1 - m1,
            1: lambda: p2 @ m2 - m2,
            2: lambda: (lambda g: p1 @ g - g)(u2 @ (p2 @ m1)),
            3: lambda: (lambda g: p2 @ g - g)(u1 @ (p1 @ m2)),
        }
        parts = []
        for idx in self.selected:
            d = defects[idx]()
            parts.append(d.real.ravel())
            parts.append(d.imag.ravel())
        return np.concatenate(parts)


@dataclass(frozen=True, eq=False)
class TraceEntry:
    """One accepted improvement inside a restart's optimisation stage."""

    restart: int
    stage: str
    neval: int
    objective: float
    penalty: float

    def to_json(self) -> dict:
        return {
            "restart": self.restart,
            "stage": self.stage,
            "neval": self.neval,
            "objective": self.objective,
            "penalty": self.penalty,
        }


@dataclass(frozen=True, eq=False)
class SearchResult:
    problem: SearchProblem
    best_pair: InstancePair
    best_restart: int
    objective: float
    residuals: dict[str, float]
    feasible: bool
    trace: tuple[TraceEntry, ...]


def parametrize(x: np.ndarray, problem: SearchProblem) -> InstancePair:
    """Decode a parameter vector into a measurement pair."""
    _validate_problem(problem)
    v = np.asarray(x, dtype=float).reshape(-1)
    expected = parameter_count(problem)
    if v.shape[0] != expected:
        raise BadParameterLengthError(
            f"parameter vector has length {v.shape[0]}, expected {expected}"
        )
    p1, u1, p2, u2 = _Evaluator(problem).matrices(v)
    return InstancePair(
        a=Measurement(projector=p1, unitary=u1, label="A"),
        b=Measurement(projector=p2, unitary=u2, label="B"),
    )


def penalized_objective(x: np.ndarray, problem: SearchProblem) -> float:
    """Order-effect magnitude minus the weighted selected residual squares."""
    _validate_problem(problem)
    v = np.asarray(x, dtype=float).reshape(-1)
    expected = parameter_count(problem)
    if v.shape[0] != expected:
        raise BadParameterLengthError(
            f"parameter vector has length {v.shape[0]}, expected {expected}"
        )
    value, _ = _Evaluator(problem).penalized(v, problem.penalty_weight)
    return value


def _polish(ev: _Evaluator, x: np.ndarray, budget: int) -> np.ndarray:
    """Drive the selected residuals to the feasible set, staying local."""
    n = x.shape[0]
    m = ev.defect_entries(x).shape[0]
    method = "lm" if m >= n else "trf"
    try:
        res = least_squares(
            ev.defect_entries,
            x,
            method=method,
            xtol=1e-14,
            ftol=1e-14,
            gtol=1e-14,
            max_nfev=budget,
        )
    except Exception:
        return x
    return res.x


def optimize(problem: SearchProblem) -> SearchResult:
    """Run all restarts and return the best outcome.

    Restart r draws its start from default_rng([seed, r]); results rank by
    (feasible, objective) with ties going to the lower restart index, so
    the outcome is deterministic for a given problem on a given platform.
    """
    _validate_problem(problem)
    ev = _Evaluator(problem)
    nparams = parameter_count(problem)
    trace: list[TraceEntry] = []
    outcomes = []

    for restart in range(problem.restarts):
        rng = np.random.default_rng([problem.seed, restart])
        x = 0.7 * rng.standard_normal(nparams)
        neval = 0
        weight = problem.penalty_weight

        for stage_index in range(2):
            stage_label = f"penalty-{weight:g}"
            incumbent = -np.inf

            def fun(xx, _label=stage_label, _w=weight):
                nonlocal neval, incumbent
                neval += 1
                value, penalty = ev.penalized(xx, _w)
                if value > incumbent:
                    incumbent = value
                    trace.append(
                        TraceEntry(
                            restart=restart,
                            stage=_label,
                            neval=neval,
                            objective=value,
                            penalty=penalty,
                        )
                    )
                return -value

            budget = problem.max_iters if stage_index == 0 else max(problem.max_iters // 2, 100)
            res = minimize(
                fun,
                x,
                method="Nelder-Mead",
                options={"maxfev": budget, "xatol": 1e-10, "fatol": 1e-12, "adaptive": True},
            )
            x = res.x
            _, residuals = ev.stats(x)
            # escalate the weight once if the selected residuals are loose
            if not problem.constraints or ev.worst_selected(residuals) <= FEAS_TOL:
                break
            weight *= 10.0

        if problem.constraints:
            x = _polish(ev, x, budget=4000)
            value, penalty = ev.penalized(x, weight)
            neval += 1
            trace.append(
                TraceEntry(
                    restart=restart,
                    stage="polish",
                    neval=neval,
                    objective=value,
                    penalty=penalty,
                )
            )

        mag, residuals = ev.stats(x)
        feasible = ev.worst_selected(residuals) <= FEAS_TOL
        outcomes.append((feasible, mag, restart, x, residuals))

    best = None
    for feasible, mag, restart, x, residuals in outcomes:
        key = (feasible, mag)
        if best is None or key > (best[0], best[1]):
            best = (feasible, mag, restart, x, residuals)

    feasible, mag, restart, x, residuals = best
    pair = parametrize(x, problem)
    return SearchResult(
        problem=problem,
        best_pair=pair,
        best_restart=restart,
        objective=mag,
        residuals={token: float(residuals[i]) for token, i in _TOKEN_INDEX.items()},
        feasible=feasible,
        trace=tuple(trace),
    )


@dataclass(frozen=True, eq=False)
class FeasibilityReport:
    """Re-evaluation of a search result through the criteria module.

    The criteria layer recomputes every residual and the magnitude on the
    winning pair through its own code path; agreement bounds how far the
    search kernels drifted from the verification layer.  When all four
    conditions were requested and met, the full-repeatability certificate
    is attached with eq_tol widened to the feasibility tolerance.
    """

    criteria_residuals: dict[str, float]
    magnitude: float
    objective_agreement: float
    residual_agreement: float
    feasible: bool
    certificate: criteria.FullRepeatabilityCertificate | None

    def to_json(self) -> dict:
        return {
            "criteriaResiduals": dict(sorted(self.criteria_residuals.items())),
            "magnitude": self.magnitude,
            "objectiveAgreement": self.objective_agreement,
            "residualAgreement": self.residual_agreement,
            "feasible": self.feasible,
            "certificate": None if self.certificate is None else self.certificate.to_json(),
        }


def feasibility_report(result: SearchResult, tol: Tolerances = DEFAULT_TOL) -> FeasibilityReport:
    pair = result.best_pair
    crit = {
        "aa-a": criteria.adjacent_repeatability(pair.a, tol).residual,
        "aa-b": criteria.adjacent_repeatability(pair.b, tol).residual,
        "aba": criteria.aba_repeatability(pair, tol).residual,
        "bab": criteria.bab_repeatability(pair, tol).residual,
    }
    magnitude = criteria.order_effect_magnitude(pair)
    objective_agreement = abs(result.objective - magnitude)
    residual_agreement = max(
        abs(crit[token] - result.residuals[token]) for token in CONSTRAINT_TOKENS
    )
    feasible = all(crit[token] <= FEAS_TOL for token in result.problem.constraints)
    certificate = None
    if feasible and set(result.problem.constraints) == set(CONSTRAINT_TOKENS):
        widened = Tolerances(eq_tol=FEAS_TOL, rank_tol=tol.rank_tol, prob_tol=tol.prob_tol)
        certificate = criteria.full_repeatability_certificate(pair, widened)
    return FeasibilityReport(
        criteria_residuals=crit,
        magnitude=magnitude,
        objective_agreement=objective_agreement,
        residual_agreement=residual_agreement,
        feasible=feasible,
        certificate=certificate,
    )


def problem_to_json(problem: SearchProblem) -> dict:
    return {
        "dim": problem.dim,
        "constraints": sorted(problem.constraints),
        "projectors": None
        if problem.projectors is None
        else {
            "P1": linalg.encode_matrix(problem.projectors[0]),
            "P2": linalg.encode_matrix(problem.projectors[1]),
        },
        "rankA": problem.rank_a,
        "rankB": problem.rank_b,
        "penaltyWeight": problem.penalty_weight,
        "restarts": problem.restarts,
        "maxIters": problem.max_iters,
        "seed": problem.seed,
    }


def result_to_json(result: SearchResult) -> dict:
    return {
        "problem": problem_to_json(result.problem),
        "bestRestart": result.best_restart,
        "objective": result.objective,
        "residuals": dict(sorted(result.residuals.items())),
        "feasible": result.feasible,
        "bestPair": pair_to_json(result.best_pair),
        "trace": [entry.to_json() for entry in result.trace],
    }


def trace_to_csv(result: SearchResult) -> str:
    lines = ["iter,restart,objective,totalPenalty"]
    for entry in result.trace:
        lines.append(f"{entry.neval},{entry.restart},{entry.objective!r},{entry.penalty!r}")
    return "\n".join(lines) + "\n"
