"""Tests for the exact simplex and the coin-assignment max flow."""
import random
from fractions import Fraction

import pytest

from tools import flow
from tools.simplex import feasible_point

F = Fraction


def satisfies(point, equalities, inequalities):
    value = lambda row: sum((coefficient * point[j] for j, coefficient in row.items()), F(0))  # noqa: E731
    return all(x >= 0 for x in point) and all(value(row) == rhs for row, rhs in equalities) and all(value(row) <= rhs for row, rhs in inequalities)


class TestFeasiblePoint:
    def test_simple_system(self):
        equalities = [({0: F(1), 1: F(1)}, F(1))]
        inequalities = [({0: F(1)}, F(1, 3))]
        point = feasible_point(2, equalities, inequalities)
        assert satisfies(point, equalities, inequalities)

    def test_negative_right_hand_side(self):
        equalities = [({0: F(1), 1: F(1)}, F(1))]
        inequalities = [({0: F(-1)}, F(-1, 2))]
        point = feasible_point(2, equalities, inequalities)
        assert point[0] >= F(1, 2)
        assert satisfies(point, equalities, inequalities)

    def test_infeasible(self):
        equalities = [({0: F(1), 1: F(1)}, F(1))]
        inequalities = [({0: F(1)}, F(1, 4)), ({1: F(1)}, F(1, 4))]
        assert feasible_point(2, equalities, inequalities) is None

    def test_no_constraints(self):
        assert feasible_point(3, [], []) == [0, 0, 0]

    @pytest.mark.parametrize("seed", range(100))
    def test_random_systems_with_a_known_point(self, seed):
        rng = random.Random(seed)
        n = rng.randint(1, 6)
        hidden = [F(rng.randint(0, 4), rng.randint(1, 3)) for _ in range(n)]
        equalities, inequalities = [], []
        for _ in range(rng.randint(0, 3)):
            row = {j: F(rng.randint(-3, 3)) for j in range(n) if rng.random() < 0.6}
            equalities.append((row, sum((c * hidden[j] for j, c in row.items()), F(0))))
        for _ in range(rng.randint(0, 4)):
            row = {j: F(rng.randint(-3, 3)) for j in range(n) if rng.random() < 0.6}
            slack = F(rng.randint(0, 2))
            inequalities.append((row, sum((c * hidden[j] for j, c in row.items()), F(0)) + slack))
        point = feasible_point(n, equalities, inequalities)
        assert point is not None
        assert satisfies(point, equalities, inequalities)


class TestCoinFlow:
    def test_full_assignment(self):
        demand = {"a": 3, "b": 2}
        supply = {1: 2, 2: 2, 3: 1}
        edges = {"a": [1, 2], "b": [2, 3]}
        value, assignment = flow.solve(demand, supply, edges)
        assert value == 5
        for c, coins in assignment.items():
            assert sum(coins.values()) == demand[c]
            assert set(coins) <= set(edges[c])
        for i in supply:
            assert sum(coins.get(i, 0) for coins in assignment.values()) <= supply[i]

    def test_short_supply(self):
        value, assignment = flow.solve({"a": 3}, {1: 2}, {"a": [1]})
        assert value == 2
        assert assignment == {"a": {1: 2}}

    def test_graph_shape(self):
        graph = flow.get_digraph({"a": 1}, {1: 1, 2: 1}, {"a": [1, 2]})
        assert graph.has_edge(flow.SOURCE, ("part", "a"))
        assert graph[("coin", 2)][flow.SINK]["capacity"] == 1
