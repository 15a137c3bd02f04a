"""Self-contained linear programming core.

Solves maximisation problems with equality constraints and box bounds:

    maximise c . x   subject to   A x = b,   l <= x <= u

using a two-phase primal simplex on a dense tableau with bounded variables
(nonbasic variables rest at either bound). Pricing is Dantzig's rule with a
permanent switch to Bland's rule after a run of degenerate pivots, which
guarantees termination. There is no external solver dependency; problem sizes
here are a few hundred variables at most.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TOL = 1e-9          # feasibility and optimality tolerance
PIVOT_TOL = 1e-11   # coefficients below this count as zero

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LinearProgram:
    """Equality-constrained LP in maximisation form.

    rows holds one sparse equality per entry, as ((var_index, coefficient),
    ...); rhs pairs with rows. lower must be nonnegative and upper may be
    math.inf. A zero-coefficient row with zero rhs is dropped in presolve;
    with nonzero rhs it makes the program infeasible.
    """

    objective: tuple[float, ...]
    rows: tuple[tuple[tuple[int, float], ...], ...]
    rhs: tuple[float, ...]
    lower: tuple[float, ...]
    upper: tuple[float, ...]

    @property
    def num_vars(self) -> int:
        return len(self.objective)


@dataclass(frozen=True)
class LpSolution:
    status: str
    objective_value: float | None
    x: tuple[float, ...] | None
    iterations: int


def check_structure(lp: LinearProgram) -> None:
    """Raise ValueError on malformed input; cheap and done before solving."""
    n = lp.num_vars
    if not (len(lp.lower) == len(lp.upper) == n):
        raise ValueError(
            f"bounds length mismatch: {len(lp.lower)}/{len(lp.upper)} vs {n} variables")
    if len(lp.rows) != len(lp.rhs):
        raise ValueError(f"{len(lp.rows)} rows but {len(lp.rhs)} rhs entries")
    for j, (lo, hi) in enumerate(zip(lp.lower, lp.upper)):
        if lo < 0:
            raise ValueError(f"variable {j}: lower bound {lo} is negative")
        if hi < lo:
            raise ValueError(f"variable {j}: upper bound {hi} below lower bound {lo}")
        if not math.isfinite(lo):
            raise ValueError(f"variable {j}: lower bound must be finite")
    for c in lp.objective:
        if not math.isfinite(c):
            raise ValueError("objective coefficients must be finite")
    for b in lp.rhs:
        if not math.isfinite(b):
            raise ValueError("rhs entries must be finite")
    for i, row in enumerate(lp.rows):
        for j, coef in row:
            if not 0 <= j < n:
                raise ValueError(f"row {i}: variable index {j} outside 0..{n - 1}")
            if not math.isfinite(coef):
                raise ValueError(f"row {i}: coefficient for variable {j} must be finite")


class _Tableau:
    """Dense bounded-variable simplex state.

    Column layout: structural variables 0..n-1 (shifted so lower bounds are
    0), then one artificial per surviving row. `values` holds the current
    value of each row's basic variable; nonbasic variables sit at 0 or at
    their width `width[j]` as recorded in `status`.
    """

    AT_LOWER, AT_UPPER, BASIC, RETIRED = 0, 1, 2, 3

    def __init__(self, lp: LinearProgram):
        n = lp.num_vars
        lower = np.array(lp.lower, dtype=float)
        dense_rows: list[np.ndarray] = []
        rhs: list[float] = []
        self.status_flag: str | None = None
        for row, b in zip(lp.rows, lp.rhs):
            a = np.zeros(n)
            for j, coef in row:
                a[j] += coef
            b_shift = b - float(a @ lower)
            if np.max(np.abs(a), initial=0.0) <= PIVOT_TOL:
                if abs(b_shift) > TOL:
                    self.status_flag = INFEASIBLE  # 0 = nonzero is unsatisfiable
                continue
            if b_shift < 0:
                a, b_shift = -a, -b_shift
            dense_rows.append(a)
            rhs.append(b_shift)

        m = len(dense_rows)
        self.m, self.n = m, n
        self.T = np.zeros((m, n + m))
        if m:
            self.T[:, :n] = np.vstack(dense_rows)
            self.T[:, n:] = np.eye(m)
        self.values = np.array(rhs, dtype=float)
        self.width = np.concatenate([
            np.array(lp.upper, dtype=float) - lower,
            np.full(m, math.inf),
        ])
        self.status = np.full(n + m, self.AT_LOWER, dtype=np.int8)
        self.basis = list(range(n, n + m))
        for col in self.basis:
            self.status[col] = self.BASIC
        # phase-1 prices: maximise -(sum of artificials) == sum of rows
        self.d1 = np.concatenate([self.T[:, :n].sum(axis=0), np.zeros(m)]) if m else np.zeros(n)
        self.d2 = np.concatenate([np.array(lp.objective, dtype=float), np.zeros(m)])
        self.iterations = 0
        self.degenerate_run = 0
        self.bland = False

    def entering(self, d: np.ndarray, allow_artificial: bool) -> int | None:
        up = (self.status == self.AT_LOWER) & (d > TOL) & (self.width > PIVOT_TOL)
        down = (self.status == self.AT_UPPER) & (d < -TOL)
        mask = up | down
        if not allow_artificial:
            mask[self.n:] = False
        idx = np.nonzero(mask)[0]
        if idx.size == 0:
            return None
        if self.bland:
            return int(idx[0])
        return int(idx[np.argmax(np.abs(d[idx]))])

    def step(self, j: int) -> str | None:
        """One pivot or bound flip with entering variable j."""
        sigma = 1.0 if self.status[j] == self.AT_LOWER else -1.0
        w = sigma * self.T[:, j]
        t, leave_row, leave_at_upper = self.width[j], -1, False
        for i in range(self.m):
            wi = w[i]
            if wi > PIVOT_TOL:
                ti = self.values[i] / wi
                if ti < t - PIVOT_TOL or (ti < t + PIVOT_TOL and leave_row >= 0
                                          and self.basis[i] < self.basis[leave_row]):
                    t, leave_row, leave_at_upper = max(ti, 0.0), i, False
            elif wi < -PIVOT_TOL:
                cap = self.width[self.basis[i]]
                if math.isinf(cap):
                    continue
                ti = (cap - self.values[i]) / -wi
                if ti < t - PIVOT_TOL or (ti < t + PIVOT_TOL and leave_row >= 0
                                          and self.basis[i] < self.basis[leave_row]):
                    t, leave_row, leave_at_upper = max(ti, 0.0), i, True

        if math.isinf(t):
            return UNBOUNDED
        self.iterations += 1
        if t <= TOL:
            self.degenerate_run += 1
            if self.degenerate_run > 3 * (self.n + self.m):
                self.bland = True  # stall guard, keeps termination certain
        else:
            self.degenerate_run = 0

        self.values -= t * w
        if leave_row < 0:
            # bound flip, basis unchanged
            self.status[j] = self.AT_UPPER if sigma > 0 else self.AT_LOWER
            return None

        old = self.basis[leave_row]
        piv = self.T[leave_row, j]
        self.T[leave_row] /= piv
        col = self.T[:, j].copy()
        col[leave_row] = 0.0
        self.T -= np.outer(col, self.T[leave_row])
        self.d1 -= self.d1[j] * self.T[leave_row]
        self.d2 -= self.d2[j] * self.T[leave_row]

        entering_value = (0.0 if sigma > 0 else self.width[j]) + sigma * t
        self.values[leave_row] = entering_value
        self.basis[leave_row] = j
        self.status[j] = self.BASIC
        if old >= self.n:
            self.status[old] = self.RETIRED
        else:
            self.status[old] = self.AT_UPPER if leave_at_upper else self.AT_LOWER
        return None

    def drive_out_artificials(self) -> None:
        """After phase 1: pivot basic artificials out or drop redundant rows."""
        keep = []
        for i in range(self.m):
            if self.basis[i] < self.n:
                keep.append(i)
                continue
            row = self.T[i, :self.n]
            j = int(np.argmax(np.abs(row)))
            if abs(row[j]) > PIVOT_TOL:
                old = self.basis[i]
                self.T[i] /= self.T[i, j]
                col = self.T[:, j].copy()
                col[i] = 0.0
                self.T -= np.outer(col, self.T[i])
                self.d1 -= self.d1[j] * self.T[i]
                self.d2 -= self.d2[j] * self.T[i]
                was_upper = self.status[j] == self.AT_UPPER
                self.values[i] = self.width[j] if was_upper else 0.0
                self.basis[i] = j
                self.status[j] = self.BASIC
                self.status[old] = self.RETIRED
                keep.append(i)
            # else: redundant constraint, row dropped below
        if len(keep) < self.m:
            self.T = self.T[keep]
            self.values = self.values[keep]
            self.basis = [self.basis[i] for i in keep]
            self.m = len(keep)


def solve_lp(lp: LinearProgram, max_iterations: int | None = None) -> LpSolution:
    """Solve an LP; returns status optimal, infeasible, or unbounded.

    Deterministic: identical inputs produce identical outputs bit for bit.
    """
    check_structure(lp)
    tab = _Tableau(lp)
    if tab.status_flag == INFEASIBLE:
        return LpSolution(INFEASIBLE, None, None, 0)
    cap = max_iterations or 2000 + 200 * (tab.n + tab.m)

    for phase, d, allow_art in ((1, tab.d1, True), (2, tab.d2, False)):
        if phase == 1 and tab.m == 0:
            continue
        while True:
            if tab.iterations > cap:
                raise RuntimeError(f"simplex failed to converge within {cap} iterations")
            j = tab.entering(d, allow_artificial=allow_art and phase == 1)
            if j is None:
                break
            verdict = tab.step(j)
            if verdict == UNBOUNDED:
                if phase == 1:  # phase-1 objective is bounded; cannot happen
                    raise RuntimeError("phase-1 step reported unbounded")
                return LpSolution(UNBOUNDED, None, None, tab.iterations)
        if phase == 1:
            residual = sum(tab.values[i] for i in range(tab.m) if tab.basis[i] >= tab.n)
            if residual > TOL * max(1.0, float(np.max(np.abs(tab.values), initial=0.0))):
                return LpSolution(INFEASIBLE, None, None, tab.iterations)
            tab.drive_out_artificials()

    x = np.zeros(tab.n)
    x[tab.status[:tab.n] == _Tableau.AT_UPPER] = \
        tab.width[:tab.n][tab.status[:tab.n] == _Tableau.AT_UPPER]
    for i, col in enumerate(tab.basis):
        if col < tab.n:
            x[col] = tab.values[i]
    x += np.array(lp.lower)
    objective = float(np.dot(np.array(lp.objective), x))
    return LpSolution(OPTIMAL, objective, tuple(float(v) for v in x), tab.iterations)
