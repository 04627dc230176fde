"""Tests for graph generators and the generator spec grammar."""

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from undirected_pagerank.core.errors import AssumptionUnsatisfiableError, GeneratorError
from undirected_pagerank.core.generators import Family, GeneratorSpec, generate
from undirected_pagerank.core.graph import degrees, is_bipartite, is_connected


def test_cycle_degrees():
    g = generate("cycle", (5,), seed=123)

    assert g.n == 5
    assert g.edge_count == 5
    assert list(degrees(g).d) == [2] * 5


def test_star_degrees():
    g = generate("star", (4,), seed=9)

    assert list(degrees(g).d) == [3, 1, 1, 1]


def test_complete_bipartite_shape():
    g = generate(Family.COMPLETE_BIPARTITE, (2, 3))

    assert g.n == 5
    assert g.edge_count == 6
    assert list(degrees(g).d) == [3, 3, 2, 2, 2]


@pytest.mark.parametrize("n, k", [(5, 2), (6, 3), (10, 4), (20, 4), (9, 8), (12, 5)])
def test_circulant_is_k_regular(n, k):
    """Test circulants have every degree equal to k."""
    g = generate("k_regular_circulant", (n, k))

    assert list(degrees(g).d) == [k] * n
    assert g.edge_count == n * k // 2


@pytest.mark.parametrize(
    "family, params",
    [
        ("k_regular_circulant", (5, 3)),   # n*k odd
        ("k_regular_circulant", (5, 5)),   # k >= n
        ("k_regular_circulant", (5, 0)),
        ("erdos_renyi", (10, 1.5)),
        ("erdos_renyi", (10, -0.1)),
        ("cycle", (2,)),
        ("star", (1,)),
        ("path", (0,)),
        ("path", (3, 4)),
        ("hypercube", (3,)),
    ],
)
def test_generate_rejects_invalid_parameters(family, params):
    with pytest.raises(GeneratorError):
        generate(family, params)


def test_generate_rejects_negative_seed():
    with pytest.raises(GeneratorError):
        generate("erdos_renyi", (10, 0.5), seed=-1)


def test_erdos_renyi_reproducible():
    """Test identical (family, params, seed) give identical edge sets."""
    first = generate("erdos_renyi", (40, 0.1), seed=7)
    second = generate("erdos_renyi", (40, 0.1), seed=7)
    other = generate("erdos_renyi", (40, 0.1), seed=8)

    assert first.edges == second.edges
    assert first.edges != other.edges


def test_erdos_renyi_extremes():
    assert generate("erdos_renyi", (6, 0.0), seed=1).edge_count == 0
    assert generate("erdos_renyi", (6, 1.0), seed=1).edge_count == 15


def test_erdos_renyi_standing_assumption():
    """Test resampling yields a connected non-bipartite graph."""
    g = generate("erdos_renyi", (30, 0.2), seed=42, require_assumption=True)

    assert is_connected(g)
    assert not is_bipartite(g)
    assert g == generate("erdos_renyi", (30, 0.2), seed=42, require_assumption=True)


def test_erdos_renyi_assumption_unsatisfiable():
    """Test the retry budget surfaces as an explicit error."""
    with pytest.raises(AssumptionUnsatisfiableError):
        generate("erdos_renyi", (30, 0.0), seed=1, require_assumption=True, max_retries=5)


@settings(deadline=None, max_examples=40)
@given(
    n=st.integers(min_value=1, max_value=40),
    p=st.floats(min_value=0.0, max_value=1.0),
    seed=st.integers(min_value=0, max_value=2**64 - 1),
)
def test_erdos_renyi_simple_graph(n, p, seed):
    """Test generated graphs have no self-loops and a consistent degree total."""
    g = generate("erdos_renyi", (n, p), seed=seed)

    assert all(u < w < n for u, w in g.edges)
    assert degrees(g).m2 == 2 * g.edge_count


@pytest.mark.parametrize(
    "text, family, params, n",
    [
        ("path:3", Family.PATH, (3,), 3),
        ("complete:3", Family.COMPLETE, (3,), 3),
        ("k_regular_circulant:20,4", Family.K_REGULAR_CIRCULANT, (20, 4), 20),
        ("erdos_renyi:30,0.2", Family.ERDOS_RENYI, (30, 0.2), 30),
        ("complete_bipartite:2,3", Family.COMPLETE_BIPARTITE, (2, 3), 5),
    ],
)
def test_generator_spec_parse(text, family, params, n):
    spec = GeneratorSpec.parse(text)

    assert spec.family is family
    assert spec.params == params
    assert spec.n == n
    assert str(spec) == text


@pytest.mark.parametrize("text", ["path", "path:", "path:x", "erdos_renyi:10", "torus:3,3"])
def test_generator_spec_parse_rejects(text):
    with pytest.raises(GeneratorError):
        GeneratorSpec.parse(text)


def test_generator_spec_build():
    spec = GeneratorSpec.parse("star:4")
    assert spec.build() == generate("star", (4,))
