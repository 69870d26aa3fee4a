"""Similarity-First Search sweeps and the three-point SFS-ordering check."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .matrix import DissimilarityMatrix, SimilarityMatrix
from .partition import OrderedPartition, group_by_weight

log = logging.getLogger(__name__)


class LinearOrder:
    """A permutation of ``range(n)`` with O(1) position lookup.

    ``seq[i]`` is the vertex at position ``i``; ``pos[v]`` its inverse.
    """

    __slots__ = ("seq", "pos")

    def __init__(self, seq: Iterable[int]):
        self.seq = tuple(seq)
        n = len(self.seq)
        pos = [-1] * n
        for i, v in enumerate(self.seq):
            if not 0 <= v < n or pos[v] != -1:
                raise ValueError(f"not a permutation of range({n}): {list(self.seq)}")
            pos[v] = i
        self.pos = pos

    @classmethod
    def identity(cls, n: int) -> "LinearOrder":
        return cls(range(n))

    @classmethod
    def parse(cls, text: str) -> "LinearOrder":
        """Parse 1-based ids separated by whitespace or commas, e.g. ``"(2,3,1)"``."""
        cleaned = text.replace(",", " ").replace("(", " ").replace(")", " ")
        try:
            ids = [int(t) - 1 for t in cleaned.split()]
        except ValueError:
            raise ValueError(f"malformed order: {text.strip()!r}") from None
        return cls(ids)

    def reversed(self) -> "LinearOrder":
        return LinearOrder(self.seq[::-1])

    def restrict(self, vertices: Iterable[int], relabel: dict[int, int] | None = None) -> "LinearOrder":
        """Induced order on ``vertices``, optionally relabelled to new ids."""
        keep = set(vertices)
        sub = [v for v in self.seq if v in keep]
        if relabel is not None:
            sub = [relabel[v] for v in sub]
        return LinearOrder(sub)

    def before(self, x: int, y: int) -> bool:
        return self.pos[x] < self.pos[y]

    def first(self) -> int:
        return self.seq[0]

    def last(self) -> int:
        return self.seq[-1]

    def to_line(self, labels: Sequence[int] | None = None) -> str:
        """Whitespace-separated 1-based ids."""
        seq = self.seq if labels is None else [labels[v] for v in self.seq]
        return " ".join(str(v + 1) for v in seq)

    def __len__(self) -> int:
        return len(self.seq)

    def __iter__(self):
        return iter(self.seq)

    def __getitem__(self, i):
        return self.seq[i]

    def __eq__(self, other) -> bool:
        if isinstance(other, LinearOrder):
            return self.seq == other.seq
        if isinstance(other, (tuple, list)):
            return self.seq == tuple(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.seq)

    def __repr__(self) -> str:
        return f"LinearOrder({list(self.seq)})"


@dataclass
class SweepStep:
    pivot: int
    slice_size: int
    num_classes: int


@dataclass
class SweepTrace:
    """Per-iteration record of one sweep: pivot, slice size, classes left after refining."""

    steps: list[SweepStep] = field(default_factory=list)
    slices: list[list[int]] = field(default_factory=list)
    keep_slices: bool = False

    def lines(self, labels: Sequence[int] | None = None) -> list[str]:
        lab = (lambda v: v + 1) if labels is None else (lambda v: labels[v] + 1)
        return [
            f"{i + 1:>6}  pivot={lab(s.pivot)}  slice={s.slice_size}  classes={s.num_classes}"
            for i, s in enumerate(self.steps)
        ]


def _as_order(n: int, seed) -> LinearOrder:
    if seed is None:
        return LinearOrder.identity(n)
    if not isinstance(seed, LinearOrder):
        seed = LinearOrder(seed)
    if len(seed) != n:
        raise ValueError(f"seed order has {len(seed)} vertices, matrix has {n}")
    return seed


def _sweep(n: int, nbrs, wts, seed: LinearOrder, descending: bool, trace: SweepTrace | None) -> LinearOrder:
    # Runs on positions in the seed: vertex seed[i] is i here, and nbrs/wts
    # are already relabelled that way. Every class of the queue then stays
    # sorted, the slice head is the seed-earliest vertex, and when the seed
    # is close to the final order the row accesses stay local.
    seq = seed.seq
    queue = OrderedPartition.single(range(n), n)
    visited = [False] * n
    out = []
    for _ in range(n):
        if trace is not None:
            slice_size = queue.first_class_size()
            if trace.keep_slices:
                trace.slices.append([seq[i] for i in queue.classes()[0]])
        p = queue.pop_first()
        visited[p] = True
        out.append(seq[p])
        groups, _ = group_by_weight(nbrs[p], wts[p], visited, descending)
        if groups:
            queue.refine(groups)
        if trace is not None:
            trace.steps.append(SweepStep(seq[p], slice_size, queue.num_classes))
    return LinearOrder(out)


def sfs(A: SimilarityMatrix, seed=None, trace: SweepTrace | None = None) -> LinearOrder:
    """One Similarity-First Search sweep.

    Ties inside a slice go to the vertex that comes first in ``seed``
    (identity by default). Runs in O(n + m log n).
    """
    seed = _as_order(A.n, seed)
    nbrs, wts = A.positional_adjacency(seed.pos)
    return _sweep(A.n, nbrs, wts, seed, True, trace)


def sfs_plus(A: SimilarityMatrix, sigma, trace: SweepTrace | None = None) -> LinearOrder:
    """SFS breaking every tie in favour of the vertex appearing last in ``sigma``.

    Seeding plain SFS with the reversal of ``sigma`` does exactly that,
    because classes preserve seed order.
    """
    sigma = _as_order(A.n, sigma)
    return sfs(A, sigma.reversed(), trace)


def disfs(D: DissimilarityMatrix, seed=None, trace: SweepTrace | None = None) -> LinearOrder:
    """Dissimilarity sweep: lowest dissimilarity to the pivot is explored first.

    Pairs at the maximum dissimilarity are not stored and behave like the
    zero entries of a similarity, so the result equals
    ``sfs(from_dissimilarity(D), seed)``.
    """
    seed = _as_order(D.n, seed)
    nbrs, vals = D.positional_adjacency(seed.pos)
    return _sweep(D.n, nbrs, vals, seed, False, trace)


def disfs_plus(D: DissimilarityMatrix, sigma, trace: SweepTrace | None = None) -> LinearOrder:
    sigma = _as_order(D.n, sigma)
    return disfs(D, sigma.reversed(), trace)


# -- characterization check ---------------------------------------------------


def find_sfs_violation(A: SimilarityMatrix, sigma) -> tuple[int, int, int] | None:
    """First triple breaking the three-point SFS condition, or ``None``.

    ``sigma`` is an SFS ordering iff for every ``x < y < z`` (in ``sigma``)
    with ``A[x,z] > A[x,y]`` some ``u`` before ``x`` has ``A[u,y] > A[u,z]``.
    This is the direct O(n^3)-memory reference check, not a fast path. The
    returned triple is lexicographically first by positions.
    """
    sigma = _as_order(A.n, sigma)
    n = A.n
    if n < 3:
        return None
    idx = np.array(sigma.seq)
    M = A.dense()[np.ix_(idx, idx)]
    # sep[u, y, z]: row u separates y ahead of z
    sep = M[:, :, None] > M[:, None, :]
    has = sep.any(axis=0)
    first_u = np.where(has, sep.argmax(axis=0), n)
    i, j, k = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
    ordered = (i < j) & (j < k)
    bad = ordered & (M[i, k] > M[i, j]) & (first_u[j, k] >= i)
    hits = np.argwhere(bad)
    if len(hits) == 0:
        return None
    a, b, c = hits[0]
    return sigma.seq[a], sigma.seq[b], sigma.seq[c]


def is_sfs_ordering(A: SimilarityMatrix, sigma) -> bool:
    return find_sfs_violation(A, sigma) is None
