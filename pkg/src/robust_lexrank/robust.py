"""Robust sentence ranking as linear programming.

The target is the minimizer over the simplex of

    ||P x - x||_1  +  (budgeted decomposition norm of x)

which bounds the worst-case eigenvector residual over every admissible
perturbation of the transition matrix, including matrices grown by new
sentences. The growth-aware model carries an extra block for the new
coordinates; its optimum provably zeroes that block, which the test suite
verifies rather than assumes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dualnorms import BudgetedBox, box_l1_support
from .errors import NumericError, ParameterError, SolverError
from .graph import TransitionMatrix
from .lpsolver import LinearProgram, LinearProgramSolution, solve
from .ranking import RankVector, ReportedRanks, normalize_max_one

OBJECTIVE_IDENTITY_TOL = 1e-7
SIMPLEX_INPUT_TOL = 1e-8


@dataclass(frozen=True)
class RobustBudget:
    """Combined perturbation budget: one total and one cap per existing column."""

    eps1: float
    eps_col: np.ndarray

    def __post_init__(self):
        col = np.asarray(self.eps_col, dtype=float)
        object.__setattr__(self, "eps_col", col)
        if not np.isfinite(self.eps1) or self.eps1 < 0:
            raise ParameterError("total budget must be finite and nonnegative")
        if col.ndim != 1 or not np.all(np.isfinite(col)) or np.any(col < 0):
            raise ParameterError("per-column budgets must be finite and nonnegative")

    @classmethod
    def broadcast(cls, n, eps1, eps_col_value):
        return cls(float(eps1), np.full(n, float(eps_col_value)))

    @property
    def size(self):
        return self.eps_col.size

    def box(self) -> BudgetedBox:
        return BudgetedBox(self.eps1, self.eps_col)

    def scaled(self, factor):
        return RobustBudget(self.eps1 * factor, self.eps_col * factor)


@dataclass(frozen=True)
class GrowthModel:
    """Budgets for the columns brought in by ``m`` future sentences.

    Each new column splits its unit mass between links into the existing
    sentences and links among the new ones, so the per-column budgets of
    the two blocks sum to one and the block totals sum to ``m``.
    """

    m: int
    to_existing_total: float
    among_new_total: float
    to_existing_col: np.ndarray
    among_new_col: np.ndarray

    def __post_init__(self):
        to_col = np.asarray(self.to_existing_col, dtype=float)
        among_col = np.asarray(self.among_new_col, dtype=float)
        object.__setattr__(self, "to_existing_col", to_col)
        object.__setattr__(self, "among_new_col", among_col)
        if self.m < 0:
            raise ParameterError("growth rate must be nonnegative")
        if to_col.shape != (self.m,) or among_col.shape != (self.m,):
            raise ParameterError("need one budget pair per new sentence")
        if np.any(to_col < 0) or np.any(among_col < 0):
            raise ParameterError("growth budgets must be nonnegative")
        if self.m and np.abs(to_col + among_col - 1.0).max() > 1e-9:
            raise ParameterError("per-column growth budgets must sum to one")
        if abs(self.to_existing_total + self.among_new_total - self.m) > 1e-9:
            raise ParameterError("growth block totals must sum to the growth rate")

    @classmethod
    def balanced(cls, m):
        """Even split of every new column between existing and new sentences."""
        half = np.full(m, 0.5)
        return cls(m, m / 2.0, m / 2.0, half, half)

    @property
    def ball_total(self):
        """l1 radius of the support set for the new block."""
        return self.to_existing_total + self.among_new_total + self.m

    @property
    def ball_col(self):
        """Per-coordinate caps of the support set for the new block."""
        return self.to_existing_col + self.among_new_col + 1.0

    def box(self) -> BudgetedBox:
        return BudgetedBox(self.ball_total, self.ball_col)


@dataclass(frozen=True)
class RobustRankResult:
    """Solution blocks, objective, and max-one report of a robust solve."""

    x1: RankVector
    x2: np.ndarray
    objective: float
    reported: ReportedRanks


@dataclass(frozen=True)
class ComparativeRankResult:
    """Comparative scores: verified sentences pinned at one, generated in [0, 1]."""

    reported: ReportedRanks
    simplex_point: np.ndarray
    objective: float


def _decomposition_block(rows, width, offset_x, offset_t, offset_r, offset_mu, n):
    """Rows tying a block ``x`` to its inf-norm bound ``t`` and magnitudes ``r``."""
    for j in range(n):
        row = np.zeros(width)
        row[offset_x + j] = 1.0
        row[offset_mu + j] = -1.0
        row[offset_t] = -1.0
        rows.append((row, "<=", 0.0))  # x_j - mu_j <= t
        row = np.zeros(width)
        row[offset_x + j] = -1.0
        row[offset_mu + j] = 1.0
        row[offset_t] = -1.0
        rows.append((row, "<=", 0.0))  # mu_j - x_j <= t
        row = np.zeros(width)
        row[offset_mu + j] = 1.0
        row[offset_r + j] = -1.0
        rows.append((row, "<=", 0.0))  # mu_j <= r_j
        row = np.zeros(width)
        row[offset_mu + j] = -1.0
        row[offset_r + j] = -1.0
        rows.append((row, "<=", 0.0))  # -mu_j <= r_j


def _check_dims(p: TransitionMatrix, budget: RobustBudget):
    if budget.size != p.size:
        raise ParameterError(
            f"budget for {budget.size} columns against a {p.size}-sentence matrix"
        )


def build_robust_program(p: TransitionMatrix, budget: RobustBudget) -> LinearProgram:
    """Model minimizing residual plus budget-weighted decomposition norm.

    Variable layout: ``x`` (n), ``s`` (n, bounds the residual), ``t``
    (inf-norm part), ``r`` (n, magnitudes of ``mu``), ``mu`` (n, free).
    Constraints: ``-s <= P x - x <= s``, the decomposition rows, ``x >= 0``
    and ``sum(x) = 1``.
    """
    _check_dims(p, budget)
    n = p.size
    width = 4 * n + 1
    off_x, off_s, off_t, off_r, off_mu = 0, n, 2 * n, 2 * n + 1, 3 * n + 1

    objective = np.zeros(width)
    objective[off_s : off_s + n] = 1.0
    objective[off_t] = budget.eps1
    objective[off_r : off_r + n] = budget.eps_col

    bounds = (
        [(0.0, None)] * n  # x
        + [(0.0, None)] * n  # s
        + [(0.0, None)]  # t
        + [(0.0, None)] * n  # r
        + [(None, None)] * n  # mu
    )

    rows = []
    shifted = p.values - np.eye(n)
    for i in range(n):
        row = np.zeros(width)
        row[off_x : off_x + n] = shifted[i]
        row[off_s + i] = -1.0
        rows.append((row, "<=", 0.0))  # (P x - x)_i <= s_i
        row = np.zeros(width)
        row[off_x : off_x + n] = -shifted[i]
        row[off_s + i] = -1.0
        rows.append((row, "<=", 0.0))  # -(P x - x)_i <= s_i
    _decomposition_block(rows, width, off_x, off_t, off_r, off_mu, n)
    simplex = np.zeros(width)
    simplex[off_x : off_x + n] = 1.0
    rows.append((simplex, "=", 1.0))
    return LinearProgram.build(objective, bounds, rows)


def build_growth_program(
    p: TransitionMatrix, budget: RobustBudget, growth: GrowthModel
) -> LinearProgram:
    """Growth-aware model over the enlarged simplex.

    The existing block keeps the layout of ``build_robust_program``; the
    new block contributes its own decomposition variables weighted by the
    support-set radii of the grown columns. With zero growth the model
    coincides with the fixed one.
    """
    _check_dims(p, budget)
    n, m = p.size, growth.m
    if m == 0:
        return build_robust_program(p, budget)
    width = 4 * n + 1 + m + 1 + 2 * m
    off_x1 = 0
    off_x2 = n
    off_s = n + m
    off_t = 2 * n + m
    off_r = off_t + 1
    off_mu = off_r + n
    off_t2 = off_mu + n
    off_r2 = off_t2 + 1
    off_mu2 = off_r2 + m

    objective = np.zeros(width)
    objective[off_s : off_s + n] = 1.0
    objective[off_t] = budget.eps1
    objective[off_r : off_r + n] = budget.eps_col
    objective[off_t2] = growth.ball_total
    objective[off_r2 : off_r2 + m] = growth.ball_col

    bounds = (
        [(0.0, None)] * n  # x1
        + [(0.0, None)] * m  # x2
        + [(0.0, None)] * n  # s
        + [(0.0, None)]  # t
        + [(0.0, None)] * n  # r
        + [(None, None)] * n  # mu
        + [(0.0, None)]  # t2
        + [(0.0, None)] * m  # r2
        + [(None, None)] * m  # mu2
    )

    rows = []
    shifted = p.values - np.eye(n)
    for i in range(n):
        row = np.zeros(width)
        row[off_x1 : off_x1 + n] = shifted[i]
        row[off_s + i] = -1.0
        rows.append((row, "<=", 0.0))
        row = np.zeros(width)
        row[off_x1 : off_x1 + n] = -shifted[i]
        row[off_s + i] = -1.0
        rows.append((row, "<=", 0.0))
    _decomposition_block(rows, width, off_x1, off_t, off_r, off_mu, n)
    _decomposition_block(rows, width, off_x2, off_t2, off_r2, off_mu2, m)
    simplex = np.zeros(width)
    simplex[off_x1 : off_x1 + n] = 1.0
    simplex[off_x2 : off_x2 + m] = 1.0
    rows.append((simplex, "=", 1.0))
    return LinearProgram.build(objective, bounds, rows)


def _expect_optimal(solution: LinearProgramSolution) -> LinearProgramSolution:
    if solution.status != "optimal":
        raise SolverError(f"rank program ended {solution.status}")
    return solution


def _objective_identity(p, x1, objective, norm_value, tol=OBJECTIVE_IDENTITY_TOL):
    residual = float(np.abs(p.values @ x1 - x1).sum())
    gap = abs(objective - (residual + norm_value))
    if gap > tol * max(1.0, abs(objective)):
        raise NumericError("objective does not decompose into residual plus norm", gap=gap)


def solve_robust(p: TransitionMatrix, budget: RobustBudget, ids=None) -> RobustRankResult:
    """Solve the fixed-size robust ranking model."""
    solution = _expect_optimal(solve(build_robust_program(p, budget)))
    x = solution.x[: p.size]
    total = x.sum()
    if abs(total - 1.0) > SIMPLEX_INPUT_TOL:
        raise SolverError("solution drifted off the simplex")
    x = x / total
    objective = float(solution.objective_value)
    _objective_identity(p, x, objective, box_l1_support(x, budget.box()).value)
    return RobustRankResult(
        x1=RankVector(x),
        x2=np.zeros(0),
        objective=objective,
        reported=normalize_max_one(x, ids),
    )


def solve_growth(
    p: TransitionMatrix, budget: RobustBudget, growth: GrowthModel, ids=None
) -> RobustRankResult:
    """Solve the growth-aware model; the new block of the optimum is returned raw."""
    solution = _expect_optimal(solve(build_growth_program(p, budget, growth)))
    n, m = p.size, growth.m
    x1 = solution.x[:n]
    x2 = solution.x[n : n + m]
    objective = float(solution.objective_value)
    norm_value = box_l1_support(x1, budget.box()).value
    if m:
        norm_value += box_l1_support(x2, growth.box()).value
    _objective_identity(p, x1, objective, norm_value)
    total = x1.sum()
    if total <= 0:
        raise SolverError("existing block carries no mass")
    return RobustRankResult(
        x1=RankVector(x1 / total),
        x2=x2,
        objective=objective,
        reported=normalize_max_one(x1 / total, ids),
    )


def comparative_rank(
    p: TransitionMatrix, n_verified: int, budget: RobustBudget, ids=None
) -> ComparativeRankResult:
    """Score generated sentences against verified ones pinned at rank one.

    Same objective as the robust model, but the simplex constraint is
    replaced by fixing the first ``n_verified`` coordinates to one and
    boxing the rest into [0, 1]. The raw scores are reported; dividing by
    their sum gives a feasible simplex point, also returned.
    """
    _check_dims(p, budget)
    if not 1 <= n_verified <= p.size:
        raise ParameterError(f"n_verified {n_verified} outside 1..{p.size}")
    program = build_robust_program(p, budget)
    n = p.size
    lower = program.lower.copy()
    upper = program.upper.copy()
    lower[:n_verified] = 1.0
    upper[:n] = 1.0
    keep = [
        (row, rel, rhs)
        for row, rel, rhs in zip(program.rows, program.relations, program.rhs)
        if rel != "="
    ]
    bounded = LinearProgram.build(
        program.objective, list(zip(lower, upper)), keep
    )
    solution = _expect_optimal(solve(bounded))
    x = solution.x[:n]
    reported = normalize_max_one(x, ids)
    return ComparativeRankResult(
        reported=reported,
        simplex_point=x / x.sum(),
        objective=float(solution.objective_value),
    )


def worst_case_upper_bound(
    x, p: TransitionMatrix, budget: RobustBudget, growth: GrowthModel | None = None
) -> float:
    """Certified bound on the worst-case residual at a candidate rank vector.

    Evaluates residual plus the support values of both blocks; by duality
    this equals the norm form of the growth-aware objective at ``x``.
    """
    _check_dims(p, budget)
    x = np.asarray(x, dtype=float)
    m = growth.m if growth is not None else 0
    if x.shape != (p.size + m,):
        raise ParameterError(f"candidate of length {x.size}, expected {p.size + m}")
    if np.any(x < -SIMPLEX_INPUT_TOL) or abs(x.sum() - 1.0) > SIMPLEX_INPUT_TOL:
        raise ParameterError("candidate must lie on the probability simplex")
    x1, x2 = x[: p.size], x[p.size :]
    value = float(np.abs(p.values @ x1 - x1).sum())
    value += box_l1_support(x1, budget.box()).value
    if m:
        value += box_l1_support(x2, growth.box()).value
    return value
