import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fixtures import a, b, c, d, e, f, g, matrix_7
from robinsonian.instances import SplitMix64, complete_graph, cycle_graph
from robinsonian.matrix import SimilarityMatrix
from robinsonian.oracle import (
    NotRobinsonianError,
    SizeLimitError,
    all_sfs_orderings,
    anchors_by_brute_force,
    are_opposite_anchors,
    avoid_graph,
    brute_force_robinsonian,
    has_path_avoiding,
    is_anchor,
    is_robinson_triple,
    is_valid_vertex,
    robinson_orderings,
    robinson_triple_scan,
    similarity_layers,
    valid_vertices,
)
from robinsonian.recognize import verify_robinson
from robinsonian.sfs import LinearOrder, sfs, sfs_plus
from strategies import matrices, robinsonian_matrices


def test_paths_avoiding_examples():
    A = matrix_7()
    assert has_path_avoiding(A, d, a, g)
    assert has_path_avoiding(A, d, g, a)
    assert d in avoid_graph(A, g)[b] and a in avoid_graph(A, g)[b]
    with pytest.raises(ValueError):
        has_path_avoiding(A, a, a, b)


def test_isolated_vertex_has_no_path():
    A = SimilarityMatrix.from_pairs(4, {(1, 2): 1, (2, 3): 1})
    assert not has_path_avoiding(A, 0, 3, 1)


def test_valid_vertex_examples():
    A = matrix_7()
    assert not is_valid_vertex(A, d)
    assert is_valid_vertex(A, g)
    two = SimilarityMatrix.from_pairs(2, {(0, 1): 3})
    assert is_valid_vertex(two, 0) and is_valid_vertex(two, 1)


def test_anchor_examples():
    A = matrix_7()
    assert is_anchor(A, g, cross_check=True)
    assert not is_anchor(A, d, cross_check=True)
    assert is_anchor(A, a, cross_check=True)
    with pytest.raises(NotRobinsonianError):
        is_anchor(cycle_graph(4), 0, cross_check=True)


def test_opposite_anchor_examples():
    A = matrix_7()
    assert are_opposite_anchors(A, a, g)
    assert not are_opposite_anchors(A, a, d)
    assert are_opposite_anchors(SimilarityMatrix.from_pairs(2, {(0, 1): 1}), 0, 1)
    with pytest.raises(ValueError):
        are_opposite_anchors(A, a, a)


def test_layer_examples():
    L = similarity_layers(matrix_7(), a)
    assert L.layers == [[a], [b], [c], [d], [e], [f], [g]] and L.covers
    L = similarity_layers(SimilarityMatrix.empty(4), 0)
    assert L.layers == [[0], [1, 2, 3]]
    L = similarity_layers(complete_graph(5), 0)
    assert L.layers == [[0], [1, 2, 3, 4]]
    assert L.layer_of()[3] == 1


def test_brute_force_examples():
    A = matrix_7()
    found = brute_force_robinsonian(A)
    assert found == tuple(range(7)) and verify_robinson(A, found)
    assert brute_force_robinsonian(cycle_graph(4)) is None
    assert brute_force_robinsonian(SimilarityMatrix.from_pairs(2, {(0, 1): 1})) == (0, 1)
    with pytest.raises(SizeLimitError):
        brute_force_robinsonian(SimilarityMatrix.empty(10))


def test_robinson_triple_examples():
    A = matrix_7()
    assert is_robinson_triple(A, a, b, c)
    assert not is_robinson_triple(A, b, g, d)
    assert is_robinson_triple(A, a, g, e)  # A_ae = 0


def test_cubic_scan_reports_first_triple():
    A = matrix_7()
    assert robinson_triple_scan(A, range(7)) is None
    assert robinson_triple_scan(A, [a, e, c, d, b, f, g]) == (a, e, c)


@settings(max_examples=150)
@given(matrices(min_n=2, max_n=7, max_weight=3))
def test_brute_force_is_lexicographic_and_complete(A):
    found = list(robinson_orderings(A))
    assert found == sorted(found)
    for order in found:
        assert robinson_triple_scan(A, order) is None
    first = brute_force_robinsonian(A)
    if first is not None:
        assert first.first() < first.last()


@settings(max_examples=30)
@given(matrices(min_n=2, max_n=6, max_weight=2))
def test_brute_force_equals_all_permutations(A):
    import itertools

    expect = [p for p in itertools.permutations(range(A.n)) if robinson_triple_scan(A, p) is None]
    assert list(robinson_orderings(A)) == expect


def walk_reach(A, x, y, max_len):
    """Endpoints of walks from x avoiding y, repeats allowed, up to max_len steps."""
    M = A.dense()
    n = A.n
    seen = set()

    def go(v, depth):
        seen.add(v)
        if depth == max_len:
            return
        for w in range(n):
            if w != y and w != v and M[v, w] > min(M[v, y], M[y, w]):
                go(w, depth + 1)

    go(x, 0)
    return seen


@settings(max_examples=80)
@given(matrices(min_n=3, max_n=5, max_weight=3), st.data())
def test_avoid_graph_reachability_matches_walks(A, data):
    x, y = data.draw(st.permutations(list(range(A.n))))[:2]
    reach = walk_reach(A, x, y, A.n + 1)
    for z in range(A.n):
        if z not in (x, y):
            assert has_path_avoiding(A, x, z, y) == (z in reach)


@settings(max_examples=120)
@given(robinsonian_matrices(min_n=2, max_n=7))
def test_valid_vertices_are_anchors(case):
    A, _ = case
    assert valid_vertices(A) == anchors_by_brute_force(A)


@settings(max_examples=60)
@given(robinsonian_matrices(min_n=2, max_n=6))
def test_opposite_anchors_are_ordering_ends(case):
    A, _ = case
    ends = {frozenset((o[0], o[-1])) for o in robinson_orderings(A)}
    for z1 in range(A.n):
        for z2 in range(z1 + 1, A.n):
            assert are_opposite_anchors(A, z1, z2) == (frozenset((z1, z2)) in ends)


def good_sweep(A, root, seed):
    """An SFS ordering starting at ``root``: seed with root first."""
    order = [root] + [v for v in seed if v != root]
    return sfs(A, order)


@settings(max_examples=100)
@given(robinsonian_matrices(min_n=2, max_n=7), st.integers(0, 2**32))
def test_layer_structure_on_anchor(case, s):
    A, _ = case
    M = A.dense()
    rng = SplitMix64(s)
    root = sfs(A, rng.permutation(A.n)).last()
    L = similarity_layers(A, root)
    assert L.covers
    assert sorted(v for layer in L.layers for v in layer) == list(range(A.n))
    lay = L.layer_of()
    for i, Li in enumerate(L.layers):
        for j in range(i + 1, len(L.layers)):
            beyond = [z for z in range(A.n) if lay[z] > j]
            for u in Li:
                for x in L.layers[j]:
                    for y in L.layers[j]:
                        if x != y:
                            assert M[x, y] >= M[u, x] == M[u, y]
                    for z in beyond:
                        assert M[u, x] >= M[u, z]
    # compatibility with Robinson orderings and with the good sweep from root
    for order in robinson_orderings(A):
        if order[0] == root:
            assert [lay[v] for v in order] == sorted(lay[v] for v in order)
    sigma = good_sweep(A, root, rng.permutation(A.n))
    assert [lay[v] for v in sigma] == sorted(lay[v] for v in sigma)
    # the next sweep visits the layers in reverse
    plus = sfs_plus(A, sigma)
    assert [lay[v] for v in plus] == sorted((lay[v] for v in plus), reverse=True)


def test_lex_first_orientation_fixed():
    A = complete_graph(3)
    assert brute_force_robinsonian(A) == (0, 1, 2)


def test_all_sfs_orderings_limit():
    with pytest.raises(SizeLimitError):
        all_sfs_orderings(SimilarityMatrix.empty(9))
    assert all_sfs_orderings(SimilarityMatrix.empty(0)) == {()}
