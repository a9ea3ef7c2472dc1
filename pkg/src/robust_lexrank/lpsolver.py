"""Dense linear programming via two-phase primal simplex.

Self-contained on purpose: the models solved here are desk-scale (at most
a few hundred variables), a dense tableau handles them instantly, and
exact vertex answers keep golden tests reproducible. Pivoting is
deterministic; Bland's rule takes over after ``2 * (rows + cols)``
iterations so degenerate models cannot cycle.

Equality constraints are expanded into opposing inequalities, variables
are shifted/split into the nonnegative standard form, and feasibility is
established with phase-one artificials.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ModelError, NumericError

RELATIONS = ("<=", "=", ">=")

PIVOT_TOL = 1e-9
CONSTRAINT_TOL = 1e-8
BOUND_TOL = 1e-9
PHASE1_TOL = 1e-7
RATIO_TIE_TOL = 1e-12
HARD_ITERATION_CAP = 200_000


@dataclass(frozen=True)
class LinearProgram:
    """Minimization model: ``min c @ x`` under row constraints and variable bounds.

    Fields:
        objective: cost vector ``c`` of length n.
        lower / upper: per-variable bounds, ``-inf`` / ``+inf`` allowed.
        rows: dense constraint matrix, one row per constraint.
        relations: per-row relation, each one of ``<=``, ``=``, ``>=``.
        rhs: finite right-hand sides.
    """

    objective: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    rows: np.ndarray
    relations: tuple[str, ...]
    rhs: np.ndarray

    @classmethod
    def build(cls, objective, var_bounds, constraints):
        """Assemble and validate a model.

        Args:
            objective: length-n cost vector.
            var_bounds: iterable of ``(low, high)`` pairs; ``None`` means unbounded
                on that side.
            constraints: iterable of ``(coefficients, relation, rhs)`` triples.
        """
        c = np.asarray(objective, dtype=float)
        if c.ndim != 1:
            raise ModelError("objective must be a vector")
        n = c.size
        lo = np.empty(n)
        hi = np.empty(n)
        bounds = list(var_bounds)
        if len(bounds) != n:
            raise ModelError(f"{len(bounds)} bounds for {n} variables")
        for j, (a, b) in enumerate(bounds):
            lo[j] = -np.inf if a is None else float(a)
            hi[j] = np.inf if b is None else float(b)
        rows, rels, rhs = [], [], []
        for coeffs, rel, b in constraints:
            row = np.asarray(coeffs, dtype=float)
            if row.shape != (n,):
                raise ModelError(f"constraint width {row.shape} does not match {n} variables")
            if rel not in RELATIONS:
                raise ModelError(f"unknown relation {rel!r}")
            if not np.isfinite(b):
                raise ModelError("constraint rhs must be finite")
            rows.append(row)
            rels.append(rel)
            rhs.append(float(b))
        m = len(rows)
        mat = np.vstack(rows) if m else np.zeros((0, n))
        return cls(c, lo, hi, mat, tuple(rels), np.asarray(rhs, dtype=float))

    @property
    def n_vars(self):
        return self.objective.size

    @property
    def n_rows(self):
        return self.rows.shape[0]

    def dump(self):
        """Plain-text rendering of the model, for eyeballing small instances."""

        def term(coef, j):
            return f"{coef:+g} x{j}"

        lines = ["min " + " ".join(term(c, j) for j, c in enumerate(self.objective) if c != 0)]
        lines.append("subject to")
        for row, rel, b in zip(self.rows, self.relations, self.rhs):
            body = " ".join(term(c, j) for j, c in enumerate(row) if c != 0) or "0"
            lines.append(f"  {body} {rel} {b:g}")
        for j, (a, b) in enumerate(zip(self.lower, self.upper)):
            lines.append(f"  {a:g} <= x{j} <= {b:g}")
        return "\n".join(lines)


@dataclass(frozen=True)
class LinearProgramSolution:
    """Outcome of a solve: ``status`` is optimal, infeasible, or unbounded."""

    status: str
    x: np.ndarray | None
    objective_value: float | None


def _pivot(tableau, basis, row, col):
    tableau[row] /= tableau[row, col]
    factors = tableau[:, col].copy()
    factors[row] = 0.0
    tableau -= np.outer(factors, tableau[row])
    tableau[:, col] = 0.0
    tableau[row, col] = 1.0
    basis[row] = col


def _run_simplex(tableau, basis, costs, bland_after):
    """Iterate to optimality on the current basic feasible tableau.

    Returns "optimal" or "unbounded". Dantzig entering rule with
    lowest-index ties until ``bland_after`` iterations, then Bland's rule.
    """
    iteration = 0
    while True:
        if iteration > HARD_ITERATION_CAP:
            raise NumericError("simplex iteration cap exceeded")
        reduced = costs - costs[basis] @ tableau[:, :-1]
        if iteration >= bland_after:
            negatives = np.nonzero(reduced < -PIVOT_TOL)[0]
            if negatives.size == 0:
                return "optimal"
            enter = int(negatives[0])
        else:
            enter = int(np.argmin(reduced))
            if reduced[enter] >= -PIVOT_TOL:
                return "optimal"
        column = tableau[:, enter]
        positive = column > PIVOT_TOL
        if not positive.any():
            return "unbounded"
        ratios = np.full(column.size, np.inf)
        ratios[positive] = tableau[positive, -1] / column[positive]
        best = ratios.min()
        ties = np.nonzero(ratios <= best + RATIO_TIE_TOL)[0]
        if iteration >= bland_after:
            leave = int(ties[np.argmin(basis[ties])])
        else:
            leave = int(ties[0])
        _pivot(tableau, basis, leave, enter)
        iteration += 1


class _StandardForm:
    """Rewrite of a general model as ``min c @ y, A y <= b, y >= 0``."""

    def __init__(self, lp: LinearProgram):
        self.lp = lp
        n = lp.n_vars
        self.shift = np.zeros(n)
        # per original variable: list of (y column, sign)
        self.pieces: list[list[tuple[int, float]]] = [[] for _ in range(n)]
        extra_rows = []
        k = 0
        for j in range(n):
            lo, hi = lp.lower[j], lp.upper[j]
            if lo == -np.inf and hi == np.inf:
                self.pieces[j] = [(k, 1.0), (k + 1, -1.0)]
                k += 2
            elif lo > -np.inf:
                self.shift[j] = lo
                self.pieces[j] = [(k, 1.0)]
                if hi < np.inf:
                    extra_rows.append((k, hi - lo))
                k += 1
            else:
                self.shift[j] = hi
                self.pieces[j] = [(k, -1.0)]
                k += 1
        self.n_y = k

        def to_y(row):
            out = np.zeros(self.n_y)
            for j in np.nonzero(row)[0]:
                for col, sign in self.pieces[j]:
                    out[col] = row[j] * sign
            return out

        rows, rhs = [], []
        for row, rel, b in zip(lp.rows, lp.relations, lp.rhs):
            yrow = to_y(row)
            shifted = b - row @ self.shift
            if rel in ("<=", "="):
                rows.append(yrow)
                rhs.append(shifted)
            if rel in (">=", "="):
                rows.append(-yrow)
                rhs.append(-shifted)
        for col, cap in extra_rows:
            row = np.zeros(self.n_y)
            row[col] = 1.0
            rows.append(row)
            rhs.append(cap)
        self.A = np.vstack(rows) if rows else np.zeros((0, self.n_y))
        self.b = np.asarray(rhs, dtype=float)
        self.c = to_y(lp.objective)
        self.constant = float(lp.objective @ self.shift)

    def recover(self, y):
        x = self.shift.copy()
        for j, parts in enumerate(self.pieces):
            for col, sign in parts:
                x[j] += sign * y[col]
        return x


def solve(lp: LinearProgram) -> LinearProgramSolution:
    """Solve a model, returning status rather than raising on infeasible/unbounded."""
    if np.any(lp.lower > lp.upper):
        return LinearProgramSolution("infeasible", None, None)
    form = _StandardForm(lp)
    m, ny = form.A.shape

    if m == 0:
        # only bounds; cost minimized coordinatewise
        y = np.zeros(ny)
        if np.any(form.c < -PIVOT_TOL):
            return LinearProgramSolution("unbounded", None, None)
        x = form.recover(y)
        return LinearProgramSolution("optimal", x, float(lp.objective @ x))

    A = np.hstack([form.A, np.eye(m)])
    b = form.b.copy()
    negative = b < 0
    A[negative] *= -1.0
    b[negative] *= -1.0

    n_art = int(negative.sum())
    columns = ny + m + n_art
    tableau = np.zeros((m, columns + 1))
    tableau[:, : ny + m] = A
    tableau[:, -1] = b
    basis = np.empty(m, dtype=int)
    art_index = ny + m
    art_cols = []
    for i in range(m):
        if negative[i]:
            tableau[i, art_index] = 1.0
            basis[i] = art_index
            art_cols.append(art_index)
            art_index += 1
        else:
            basis[i] = ny + i

    bland_after = 2 * (m + columns)

    if n_art:
        phase1 = np.zeros(columns)
        phase1[ny + m :] = 1.0
        status = _run_simplex(tableau, basis, phase1, bland_after)
        if status != "optimal":
            raise NumericError("phase one cannot be unbounded")
        infeasibility = phase1[basis] @ tableau[:, -1]
        if infeasibility > PHASE1_TOL:
            return LinearProgramSolution("infeasible", None, None)
        # drive leftover artificials out of the basis or drop their rows
        keep = np.ones(m, dtype=bool)
        for i in range(m):
            if basis[i] >= ny + m:
                pivots = np.nonzero(np.abs(tableau[i, : ny + m]) > PIVOT_TOL)[0]
                if pivots.size:
                    _pivot(tableau, basis, i, int(pivots[0]))
                else:
                    keep[i] = False
        tableau = tableau[keep]
        basis = basis[keep]
        m = tableau.shape[0]

    # drop artificial columns; slack columns stay sized to the original row count
    n_slack_cols = ny + form.A.shape[0]
    tableau = np.hstack([tableau[:, :n_slack_cols], tableau[:, -1:]])
    costs = np.zeros(tableau.shape[1] - 1)
    costs[:ny] = form.c
    status = _run_simplex(tableau, basis, costs, bland_after)
    if status == "unbounded":
        return LinearProgramSolution("unbounded", None, None)

    y = np.zeros(tableau.shape[1] - 1)
    y[basis] = tableau[:, -1]
    x = form.recover(y[:ny])
    x = np.clip(x, lp.lower, lp.upper)
    _check_solution(lp, x)
    return LinearProgramSolution("optimal", x, float(lp.objective @ x))


def _check_solution(lp, x):
    if np.any(x < lp.lower - BOUND_TOL) or np.any(x > lp.upper + BOUND_TOL):
        raise NumericError("solution violates variable bounds")
    if lp.n_rows == 0:
        return
    values = lp.rows @ x
    for value, rel, b in zip(values, lp.relations, lp.rhs):
        gap = value - b
        bad = (
            (rel == "<=" and gap > CONSTRAINT_TOL)
            or (rel == ">=" and gap < -CONSTRAINT_TOL)
            or (rel == "=" and abs(gap) > CONSTRAINT_TOL)
        )
        if bad:
            raise NumericError(f"constraint residual {gap:.3e} exceeds tolerance", gap=gap)
