"""Shared builders for test fixtures."""

from redukt.structures import (
    Structure,
    directed_graph_schema,
    undirected_graph_schema,
)

UG = undirected_graph_schema()
DG = directed_graph_schema()


def ugraph(nodes, edges):
    return Structure(UG, nodes, {"E": [tuple(e) for e in edges]})


def dgraph(nodes, edges):
    return Structure(DG, nodes, {"E": [tuple(e) for e in edges]})


def path(n, prefix="p"):
    nodes = [f"{prefix}{i}" for i in range(1, n + 1)]
    return ugraph(nodes, [(nodes[i], nodes[i + 1]) for i in range(n - 1)])


def clique(n, prefix="k"):
    nodes = [f"{prefix}{i}" for i in range(1, n + 1)]
    return ugraph(nodes, [(a, b) for i, a in enumerate(nodes) for b in nodes[i + 1:]])


def empty_graph(n=0, prefix="v"):
    return ugraph([f"{prefix}{i}" for i in range(1, n + 1)], [])


def dcycle(n, prefix="c"):
    nodes = [f"{prefix}{i}" for i in range(1, n + 1)]
    return dgraph(nodes, [(nodes[i], nodes[(i + 1) % n]) for i in range(n)])
