"""Shared fixtures."""

from typing import List

import numpy as np
import pytest

from undirected_pagerank.core.config import ConfigManager, set_config_manager
from undirected_pagerank.core.generators import generate
from undirected_pagerank.core.graph import Graph, degrees, from_edge_list


def _without_isolated(g: Graph) -> Graph:
    keep = np.flatnonzero(degrees(g).d > 0)
    relabel = {int(old): new for new, old in enumerate(keep)}
    return from_edge_list([(relabel[u], relabel[w]) for u, w in g.sorted_edges()])


def _disjoint_union(g1: Graph, g2: Graph) -> Graph:
    shifted = [(u + g1.n, w + g1.n) for u, w in g2.sorted_edges()]
    return from_edge_list(g1.sorted_edges() + shifted, n_hint=g1.n + g2.n)


def build_corpus(count: int = 200, seed: int = 2024) -> List[Graph]:
    """Random graphs with n <= 200 and no isolated vertices.

    Cycles through sparse, denser, bipartite and two-component samples so the
    corpus always contains disconnected and bipartite graphs.
    """
    rng = np.random.default_rng(seed)
    graphs: List[Graph] = []
    kind = 0
    while len(graphs) < count:
        n = int(rng.integers(4, 201))
        draw_seed = int(rng.integers(0, 2**32))
        if kind == 0:
            g = generate("erdos_renyi", (n, min(1.0, rng.uniform(0.5, 3.0) / n)), draw_seed)
        elif kind == 1:
            g = generate("erdos_renyi", (n, min(1.0, rng.uniform(3.0, 10.0) / n)), draw_seed)
        elif kind == 2:
            half = n // 2
            dense = generate("erdos_renyi", (n, min(1.0, rng.uniform(4.0, 12.0) / n)), draw_seed)
            g = Graph(n, frozenset(e for e in dense.edges if (e[0] < half) != (e[1] < half)))
        else:
            n1 = max(2, n // 3)
            g1 = generate("erdos_renyi", (n1, min(1.0, 4.0 / n1)), draw_seed)
            g2 = generate("erdos_renyi", (n - n1, min(1.0, 4.0 / (n - n1))), draw_seed + 1)
            g = _disjoint_union(g1, g2)
        kind = (kind + 1) % 4
        if g.edge_count == 0:
            continue
        graphs.append(_without_isolated(g))
    return graphs


@pytest.fixture(scope="session")
def corpus() -> List[Graph]:
    return build_corpus()


@pytest.fixture
def path3() -> Graph:
    return generate("path", (3,))


@pytest.fixture
def k3() -> Graph:
    return generate("complete", (3,))


@pytest.fixture
def star4() -> Graph:
    return generate("star", (4,))


@pytest.fixture
def cycle4() -> Graph:
    return generate("cycle", (4,))


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    """Keep tests away from the user's config directory and environment."""
    for name in ("DAMPING", "TOL", "MAX_ITER", "SLACK", "WORKERS", "LOG_LEVEL"):
        monkeypatch.delenv(f"UNDIRECTED_PAGERANK_{name}", raising=False)
    manager = ConfigManager(tmp_path / "config")
    manager.load()
    set_config_manager(manager)
    yield manager
    set_config_manager(None)
