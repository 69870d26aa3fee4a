"""Matrices shared by several test modules."""

from robinsonian.matrix import SimilarityMatrix

# 7x7 example with vertices a..g = 0..6, Robinson in the given order
UPPER_7 = [
    [7, 6, 0, 0, 0, 0],
    [7, 3, 2, 1, 1],
    [7, 2, 2, 1],
    [3, 3, 3],
    [7, 5],
    [6],
]
a, b, c, d, e, f, g = range(7)

# 12x12 example; row i lists the entries right of the diagonal
LABELS_12 = [1, 2, 3, 5, 7, 8, 9, 11, 13, 14, 17, 19]
UPPER_12 = [
    [0, 7, 3, 3, 3, 0, 3, 3, 4, 0, 3],
    [0, 7, 6, 3, 8, 3, 3, 0, 8, 6],
    [3, 3, 3, 0, 3, 3, 8, 0, 3],
    [6, 5, 7, 5, 5, 3, 7, 8],
    [5, 6, 5, 5, 3, 6, 7],
    [4, 8, 6, 5, 4, 5],
    [4, 3, 0, 8, 6],
    [7, 5, 4, 5],
    [5, 3, 5],
    [0, 3],
    [6],
]

# worst-case family at n = 11 as printed, upper triangle
UPPER_W11 = [
    [1, 1, 1, 1, 1, 1, 1, 1, 1, 0],
    [2, 2, 2, 2, 2, 2, 2, 1, 1],
    [3, 3, 3, 3, 3, 2, 2, 2],
    [4, 4, 4, 3, 3, 3, 2],
    [5, 4, 4, 4, 3, 2],
    [5, 5, 4, 3, 2],
    [5, 4, 3, 2],
    [4, 3, 2],
    [3, 2],
    [2],
]


def dense_from_upper(upper):
    n = len(upper) + 1
    rows = [[0] * n for _ in range(n)]
    for i, row in enumerate(upper):
        for k, w in enumerate(row):
            j = i + 1 + k
            rows[i][j] = rows[j][i] = w
    return rows


def from_upper(upper) -> SimilarityMatrix:
    return SimilarityMatrix.from_dense(dense_from_upper(upper))


def matrix_7() -> SimilarityMatrix:
    return from_upper(UPPER_7)


def matrix_12() -> SimilarityMatrix:
    return from_upper(UPPER_12)
