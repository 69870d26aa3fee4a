"""Deterministic generators for golden, random and adversarial test matrices.

All randomness comes from :class:`SplitMix64`, a fixed 64-bit generator, so a
given :class:`GeneratorSpec` always yields the same matrix on any platform.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Sequence

from .matrix import DissimilarityMatrix, SimilarityMatrix, permute
from .sfs import LinearOrder

_MASK = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 (Steele, Lea and Flood): state += golden gamma, then two xor-shift-multiply rounds."""

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)`` by rejection."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            r = self.next_u64()
            if r < limit:
                return r % bound

    def between(self, lo: int, hi: int) -> int:
        """Uniform integer in ``[lo, hi]``."""
        return lo + self.below(hi - lo + 1)

    def random(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]

    def permutation(self, n: int) -> list[int]:
        p = list(range(n))
        self.shuffle(p)
        return p


# -- fixed families -----------------------------------------------------------


def worst_case(n: int) -> tuple[SimilarityMatrix, LinearOrder]:
    """Robinson matrix needing ``n - 1`` sweeps from ``sigma0 = (2, ..., n, 1)``.

    Entries (1-based): ``A[1,n] = 0``, ``A[1,i] = 1`` for ``2 <= i <= n-1``,
    ``A[2,n] = 1``, ``A[i,n] = 2`` for ``3 <= i <= n-1`` and the shift rule
    ``A[i,j] = A[i-1,j+1] + 1`` for ``2 <= i < j <= n-1``.
    """
    if n < 4:
        raise ValueError(f"worst_case needs n >= 4, got {n}")
    W = [[0] * (n + 2) for _ in range(n + 2)]
    for i in range(2, n):
        W[1][i] = 1
    W[2][n] = 1
    for i in range(3, n):
        W[i][n] = 2
    for i in range(2, n):
        for j in range(i + 1, n):
            W[i][j] = W[i - 1][j + 1] + 1
    pairs = {(i - 1, j - 1): W[i][j] for i in range(1, n + 1) for j in range(i + 1, n + 1)}
    sigma0 = LinearOrder(list(range(1, n)) + [0])
    return SimilarityMatrix.from_pairs(n, pairs), sigma0


def path_graph(n: int) -> SimilarityMatrix:
    return SimilarityMatrix.from_pairs(n, {(i, i + 1): 1 for i in range(n - 1)})


def cycle_graph(n: int) -> SimilarityMatrix:
    pairs = {(i, i + 1): 1 for i in range(n - 1)}
    pairs[(0, n - 1)] = 1
    return SimilarityMatrix.from_pairs(n, pairs)


def complete_graph(n: int, weight: int = 1) -> SimilarityMatrix:
    return SimilarityMatrix.from_pairs(n, {(i, j): weight for i in range(n) for j in range(i + 1, n)})


def claw() -> SimilarityMatrix:
    """``K_{1,3}`` with centre 0."""
    return SimilarityMatrix.from_pairs(4, {(0, 1): 1, (0, 2): 1, (0, 3): 1})


def block_diagonal(*blocks: SimilarityMatrix) -> SimilarityMatrix:
    pairs = {}
    off = 0
    for B in blocks:
        for x, y, w in B.edges():
            pairs[(x + off, y + off)] = w
        off += B.n
    return SimilarityMatrix.from_pairs(off, pairs)


# -- random families ----------------------------------------------------------


def interval_sum(n: int, blocks) -> SimilarityMatrix:
    """Sum of ``w`` over the pairs inside each block ``(start, end, w)`` (inclusive, 0-based)."""
    acc: dict[tuple[int, int], int] = {}
    for start, end, w in blocks:
        for x in range(start, end + 1):
            for y in range(x + 1, end + 1):
                acc[(x, y)] = acc.get((x, y), 0) + w
    return SimilarityMatrix.from_pairs(n, acc)


def random_robinsonian(
    n: int,
    k: int,
    seed: int,
    permute_rows: bool = True,
    max_width: int | None = None,
    max_weight: int = 5,
) -> tuple[SimilarityMatrix, LinearOrder]:
    """Sum of ``k`` weighted interval blocks, optionally relabelled at random.

    Each block adds a random weight in ``[1, max_weight]`` to every pair
    inside a random interval of length ``2 .. max_width``. Block matrices are
    Robinson and Robinson matrices are closed under sums, so the identity is
    a Robinson ordering before relabelling. The returned order is a Robinson
    ordering of the returned matrix.
    """
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    rng = SplitMix64(seed)
    width = n if max_width is None else max(2, min(max_width, n))
    blocks = []
    if n >= 2:
        for _ in range(k):
            length = rng.between(2, width)
            start = rng.between(0, n - length)
            blocks.append((start, start + length - 1, rng.between(1, max_weight)))
    A = interval_sum(n, blocks)
    if not permute_rows:
        return A, LinearOrder.identity(n)
    perm = rng.permutation(n)
    return permute(A, perm), LinearOrder(perm)


def random_unit_interval(
    n: int,
    density: float,
    seed: int,
    permute_rows: bool = True,
    connected: bool = False,
    resolution: int = 1000,
) -> SimilarityMatrix:
    """0/1 matrix of a random unit interval graph.

    Left endpoints are drawn on an integer grid (``resolution`` steps per
    unit) over a span of ``2 * (1/density - 1)`` units, so ``density = 1``
    puts every interval at the same place. ``connected`` caps the gap
    between consecutive endpoints so the graph is connected.
    """
    if not 0 < density <= 1:
        raise ValueError("density must be in (0, 1]")
    rng = SplitMix64(seed)
    span = int(round(2 * (1 / density - 1) * resolution))
    starts = sorted(rng.between(0, span) for _ in range(n))
    if connected:
        for i in range(1, n):
            if starts[i] - starts[i - 1] > resolution:
                starts[i] = starts[i - 1] + rng.between(0, resolution)
    pairs = {}
    for i in range(n):
        for j in range(i + 1, n):
            if starts[j] - starts[i] > resolution:
                break
            pairs[(i, j)] = 1
    A = SimilarityMatrix.from_pairs(n, pairs)
    if permute_rows:
        A = permute(A, rng.permutation(n))
    return A


def perturb(A: SimilarityMatrix, count: int, seed: int, max_weight: int | None = None) -> SimilarityMatrix:
    """Overwrite ``count`` random off-diagonal pairs with fresh values in ``[0, max_weight]``."""
    if count < 1:
        raise ValueError("count must be at least 1")
    if A.n < 2:
        raise ValueError("need at least two vertices to perturb")
    rng = SplitMix64(seed)
    top = max_weight if max_weight is not None else max(A.distinct_weights(), default=0) + 1
    pairs = {(x, y): w for x, y, w in A.edges()}
    for _ in range(count):
        x = rng.below(A.n)
        y = rng.below(A.n - 1)
        if y >= x:
            y += 1
        key = (min(x, y), max(x, y))
        pairs[key] = rng.between(0, top)
    return SimilarityMatrix.from_pairs(A.n, pairs, A.scale)


def random_matrix(n: int, seed: int, max_weight: int = 3, density: float = 0.7) -> SimilarityMatrix:
    """Unstructured symmetric matrix; mostly not Robinsonian for larger ``n``."""
    rng = SplitMix64(seed)
    pairs = {}
    for x in range(n):
        for y in range(x + 1, n):
            if rng.random() < density:
                pairs[(x, y)] = rng.between(1, max_weight)
    return SimilarityMatrix.from_pairs(n, pairs)


def random_dissimilarity(n: int, seed: int, robinsonian: bool = True, perturbations: int = 0) -> DissimilarityMatrix:
    """Dense dissimilarity ``c - S`` for a random Robinsonian similarity ``S``.

    ``c`` exceeds the largest entry of ``S`` by a random margin, so the
    dissimilarity is positive off the diagonal. With ``robinsonian=False``
    some entries are redrawn and the result may or may not stay Robinsonian.
    """
    rng = SplitMix64(seed)
    S, _ = random_robinsonian(n, max(1, n // 2), rng.next_u64(), max_width=max(2, n // 2))
    if not robinsonian or perturbations:
        S = perturb(S, max(1, perturbations), rng.next_u64())
    top = max(S.distinct_weights(), default=0) + rng.between(0, 2)
    M = S.dense()
    rows = [[0 if x == y else top - int(M[x, y]) for y in range(n)] for x in range(n)]
    return DissimilarityMatrix.from_dense(rows)


# -- specs --------------------------------------------------------------------


KINDS = ("worst_case", "random_robinsonian", "random_unit_interval", "perturbed")


@dataclass
class GeneratorSpec:
    """Everything needed to regenerate an instance bit-for-bit."""

    kind: str
    n: int
    seed: int = 0
    k: int | None = None
    density: float = 0.5
    perturbations: int = 1
    max_width: int | None = None
    max_weight: int = 5
    permute: bool = True
    params: dict = field(default_factory=dict)

    def build(self) -> tuple[SimilarityMatrix, dict]:
        """Return the matrix and a metadata dict (spec plus any hidden order)."""
        meta: dict = {"spec": asdict(self)}
        if self.kind == "worst_case":
            A, sigma0 = worst_case(self.n)
            meta["sigma0"] = [v + 1 for v in sigma0]
        elif self.kind == "random_robinsonian":
            A, order = random_robinsonian(
                self.n, self.k or self.n, self.seed, self.permute, self.max_width, self.max_weight
            )
            meta["hidden_order"] = [v + 1 for v in order]
        elif self.kind == "random_unit_interval":
            A = random_unit_interval(self.n, self.density, self.seed, self.permute, connected=True)
        elif self.kind == "perturbed":
            base, _ = random_robinsonian(
                self.n, self.k or self.n, self.seed, self.permute, self.max_width, self.max_weight
            )
            A = perturb(base, self.perturbations, self.seed ^ 0x5EED)
        else:
            raise ValueError(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        return A, meta


def relabel_order(order: Sequence[int], perm: Sequence[int]) -> LinearOrder:
    """Image of an order under the relabelling ``v -> perm[v]``."""
    return LinearOrder(perm[v] for v in order)
