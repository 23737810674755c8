import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cfedge.graph import GraphError
from cfedge.io import ParseError, colouring_from_json, colouring_to_json, read_graph, sniff_format, write_graph
from cfedge.verify import Colouring

from conftest import random_graph


def test_edgelist_with_comments():
    G = read_graph("# header\n0 1\n\n1 2  # trailing\n")
    assert G.n == 3 and G.edges.tolist() == [[0, 1], [1, 2]]


def test_dimacs_is_one_based():
    G = read_graph("c tiny\np edge 3 2\ne 1 2\ne 2 3\n", "auto")
    assert G.n == 3 and G.edges.tolist() == [[0, 1], [1, 2]]
    assert sniff_format("p edge 1 0\n") == "dimacs"


@pytest.mark.parametrize("text, line", [
    ("0 1\n0 x\n", 2),
    ("0 1\n1 0\n", 2),
    ("0 1\n3 3\n", 2),
    ("0 1 2\n", 1),
])
def test_parse_errors_name_the_line(text, line):
    with pytest.raises(ParseError) as info:
        read_graph(text)
    assert info.value.lineno == line


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 20), st.floats(0, 1), st.integers(0, 2**31), st.sampled_from(["edgelist", "dimacs"]))
def test_graph_round_trip(n, p, seed, fmt):
    G = random_graph(np.random.default_rng(seed), n, p)
    H = read_graph(write_graph(G, fmt), fmt)
    assert H.edges.tolist() == G.edges.tolist()
    if fmt == "dimacs":
        assert H.n == G.n


def test_colouring_json_round_trip():
    G = read_graph("0 1\n1 2\n2 3\n")
    c = Colouring(G, [2, 0, 5])
    text = colouring_to_json(c, method="x")
    back = colouring_from_json(text)
    assert back.colour.tolist() == [2, 0, 5]
    assert back.graph.edges.tolist() == G.edges.tolist()
    assert '"colour": [2, null, 5]' in text


@pytest.mark.parametrize("text", ["{", "[]", '{"edges": [[0, 1]], "colour": [0]}', '{"edges": [[0, 1]], "colour": []}'])
def test_bad_colouring_json(text):
    with pytest.raises(GraphError):
        colouring_from_json(text)
