"""Bipartite b-matching through maximum flow.

Each candidate contributes a bundle of parts, each voter a purse of coins.
Every part must be covered by a fixed number of coins, and a coin can only
go to a part of a candidate its owner likes. Parts of one candidate (and coins
of one voter) are interchangeable, so they are aggregated into a single node
with the combined capacity.
"""
import networkx as nx
import networkx.algorithms.flow as flow

SOURCE = ("source", None)
SINK = ("sink", None)


def get_digraph(demand: dict[str, int], supply: dict[int, int], edges: dict[str, list[int]]) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_node(SOURCE)
    graph.add_node(SINK)

    for c, needed in demand.items():
        graph.add_edge(SOURCE, ("part", c), capacity=needed)
    for i, coins in supply.items():
        graph.add_edge(("coin", i), SINK, capacity=coins)
    for c, voters in edges.items():
        for i in voters:
            graph.add_edge(("part", c), ("coin", i), capacity=supply[i])

    return graph


def solve(demand: dict[str, int], supply: dict[int, int], edges: dict[str, list[int]]) -> tuple[int, dict[str, dict[int, int]]]:
    """Maximum flow value and the number of coins each voter sends to each candidate."""
    graph = get_digraph(demand, supply, edges)
    value, flows = flow.maximum_flow(graph, SOURCE, SINK)
    assignment: dict[str, dict[int, int]] = {}
    for c in demand:
        sent = flows.get(("part", c), {})
        assignment[c] = {node[1]: amount for node, amount in sent.items() if amount > 0}
    return value, assignment
