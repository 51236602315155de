"""Synthetic graphs with controllable metadata duplication.

Used by the scaling benchmarks and the CLI ``synth`` command.  Generation is
fully determined by the seed.
"""

from __future__ import annotations

import random

from .graph import PropertyGraph
from .tfd import TraitFamily


def synthetic_keys(n_keys: int):
    return tuple(f"meta{i}" for i in range(n_keys))


def make_synthetic(elements: int, n_keys: int = 6, distinct: int = 50,
                   seed: int = 0) -> PropertyGraph:
    """Graph with ``elements`` total elements (about half nodes, half edges).

    Every node carries ``n_keys`` metadata properties drawn from ``distinct``
    values per key, so duplication grows with size while the distinct pool
    stays fixed.
    """
    rng = random.Random(seed)
    graph = PropertyGraph()
    n_nodes = max(2, (elements + 1) // 2)
    n_edges = max(0, elements - n_nodes)
    keys = synthetic_keys(n_keys)
    for i in range(n_nodes):
        props = {"serial": i}
        for j, key in enumerate(keys):
            props[key] = f"v{(i * (j + 1) + rng.randrange(distinct)) % distinct}"
        graph.create_node({"Item"}, props)
    node_ids = graph.node_ids()
    for i in range(n_edges):
        src = node_ids[rng.randrange(n_nodes)]
        dst = node_ids[rng.randrange(n_nodes)]
        graph.create_edge(src, dst, "LINKS", {"weight": i % 7})
    return graph


def synthetic_family(n_keys: int = 6) -> TraitFamily:
    return TraitFamily("SyntheticTrait", synthetic_keys(n_keys),
                       scope=frozenset({"Item"}))


def make_duplication_graph(distinct: int, duplication: int) -> PropertyGraph:
    """``distinct`` tag values, each embedded on ``duplication`` nodes."""
    graph = PropertyGraph()
    for i in range(distinct * duplication):
        graph.create_node({"Item"}, {"serial": i, "tag": f"t{i % distinct}"})
    return graph
