"""Exact phase-one simplex over Fractions (Bland's rule, so no cycling).

Decides whether {x ≥ 0 : A_eq x = b_eq, A_ub x ≤ b_ub} is non-empty and returns a
point of it.
"""
import logging
from fractions import Fraction as Frac

logger = logging.getLogger(__name__)

Z = Frac(0)


class SimplexTableau:
    def __init__(self, rows: list[list[Frac]], rhs: list[Frac], n_structural: int):
        self.m = len(rows)
        self.n_structural = n_structural
        width = len(rows[0]) if rows else n_structural
        # one artificial column per row, basic at start
        self.n = width + self.m
        self.A = [row + [Frac(1) if k == i else Z for k in range(self.m)] for i, row in enumerate(rows)]
        self.b = list(rhs)
        self.b_vars = list(range(width, self.n))
        self.artificial = set(self.b_vars)
        self.first_phase_cost()

    def first_phase_cost(self):
        # reduced costs of min Σ artificials with the artificial basis
        self.c = [Z if j in self.artificial else -sum((self.A[i][j] for i in range(self.m)), Z) for j in range(self.n)]
        self.objective = sum(self.b, Z)

    def pivot(self, i, j):
        piv = self.A[i][j]
        self.A[i] = [value / piv for value in self.A[i]]
        self.b[i] /= piv
        for k in range(self.m):
            if k != i and self.A[k][j] != 0:
                f = self.A[k][j]
                self.A[k] = [value - f * pivot_value for value, pivot_value in zip(self.A[k], self.A[i])]
                self.b[k] -= f * self.b[i]
        f = self.c[j]
        self.c = [value - f * pivot_value for value, pivot_value in zip(self.c, self.A[i])]
        self.objective += f * self.b[i]
        self.b_vars[i] = j

    def bland_primal_step(self):
        try:
            j = min(j for j in range(self.n) if self.c[j] < 0)
        except ValueError:
            return "optimal"
        try:
            _, _, i = min((self.b[i] / self.A[i][j], self.b_vars[i], i) for i in range(self.m) if self.A[i][j] > 0)
        except ValueError:
            return "unbounded"
        self.pivot(i, j)
        return "go_on"

    def bland_primal(self):
        steps = 0
        while True:
            ret = self.bland_primal_step()
            steps += 1
            if ret in ["optimal", "unbounded"]:
                logger.debug("phase one finished after %d pivots: %s, objective %s", steps, ret, self.objective)
                return ret

    def solution(self) -> list[Frac]:
        x = [Z] * self.n_structural
        for i, var in enumerate(self.b_vars):
            if var < self.n_structural:
                x[var] = self.b[i]
        return x


def feasible_point(n_vars: int, equalities: list[tuple[dict[int, Frac], Frac]], inequalities: list[tuple[dict[int, Frac], Frac]]) -> list[Frac] | None:
    """A non-negative solution of the sparse system, or None when it is infeasible.

    Rows are (coefficients by variable index, right-hand side); inequalities read
    Σ a_j x_j ≤ rhs.
    """
    n_slack = len(inequalities)
    rows, rhs = [], []
    for number, (coefficients, bound) in enumerate(equalities + inequalities):
        row = [Z] * (n_vars + n_slack)
        for j, value in coefficients.items():
            row[j] = Frac(value)
        if number >= len(equalities):
            row[n_vars + number - len(equalities)] = Frac(1)
        bound = Frac(bound)
        if bound < 0:
            row = [-value for value in row]
            bound = -bound
        rows.append(row)
        rhs.append(bound)

    if not rows:
        return [Z] * n_vars
    tableau = SimplexTableau(rows, rhs, n_vars)
    tableau.bland_primal()
    if tableau.objective != 0:
        return None
    return tableau.solution()
