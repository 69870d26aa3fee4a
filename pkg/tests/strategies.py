"""Hypothesis strategies for small matrices and orders."""

from hypothesis import strategies as st

from robinsonian.instances import random_robinsonian
from robinsonian.matrix import SimilarityMatrix
from robinsonian.sfs import LinearOrder


@st.composite
def matrices(draw, min_n=0, max_n=7, max_weight=3, density=None):
    n = draw(st.integers(min_n, max_n))
    pairs = {}
    for x in range(n):
        for y in range(x + 1, n):
            if density is None:
                pairs[(x, y)] = draw(st.integers(0, max_weight))
            else:
                pairs[(x, y)] = max_weight if draw(st.floats(0, 1)) < density else 0
    return SimilarityMatrix.from_pairs(n, pairs)


@st.composite
def binary_matrices(draw, min_n=0, max_n=8):
    return draw(matrices(min_n=min_n, max_n=max_n, max_weight=1))


@st.composite
def orders(draw, n):
    return LinearOrder(draw(st.permutations(list(range(n)))))


@st.composite
def matrix_and_order(draw, min_n=0, max_n=7, max_weight=3):
    A = draw(matrices(min_n=min_n, max_n=max_n, max_weight=max_weight))
    return A, draw(orders(A.n))


@st.composite
def robinsonian_matrices(draw, min_n=1, max_n=8):
    n = draw(st.integers(min_n, max_n))
    k = draw(st.integers(1, max(1, 2 * n)))
    seed = draw(st.integers(0, 2**32))
    width = draw(st.integers(2, max(2, n)))
    A, order = random_robinsonian(n, k, seed, True, width, draw(st.integers(1, 4)))
    return A, order
