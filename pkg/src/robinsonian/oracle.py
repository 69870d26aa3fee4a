"""Slow, definition-level oracles used to test the fast recognition path.

Everything here works on a dense copy of the matrix and is meant for small
instances: brute-force Robinson orderings, paths avoiding a vertex, valid
vertices and anchors, similarity layers, exhaustive SFS tie-breaking and a
label-based Lex-BFS.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import Iterator, Sequence

import numpy as np

from .matrix import SimilarityMatrix
from .sfs import LinearOrder

BRUTE_FORCE_LIMIT = 9


class SizeLimitError(ValueError):
    pass


class NotRobinsonianError(ValueError):
    pass


def _dense(A) -> list[list[int]]:
    return A.dense().tolist() if isinstance(A, SimilarityMatrix) else [list(r) for r in A]


def is_robinson_triple(A, x: int, y: int, z: int) -> bool:
    """``A[x,z] <= min(A[x,y], A[y,z])`` for the triple taken in the given order."""
    w = A.weight if isinstance(A, SimilarityMatrix) else (lambda a, b: A[a][b])
    return w(x, z) <= min(w(x, y), w(y, z))


def robinson_triple_scan(A, pi) -> tuple[int, int, int] | None:
    """Cubic scan for the first (by position) triple breaking the Robinson inequalities."""
    seq = list(pi)
    n = len(seq)
    if n < 3:
        return None
    M = A.dense() if isinstance(A, SimilarityMatrix) else np.asarray(A)
    P = M[np.ix_(seq, seq)]
    i, j, k = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
    bad = (i < j) & (j < k) & (P[i, k] > np.minimum(P[i, j], P[j, k]))
    hits = np.argwhere(bad)
    if len(hits) == 0:
        return None
    a, b, c = hits[0]
    return seq[a], seq[b], seq[c]


# -- brute force --------------------------------------------------------------


def robinson_orderings(A, limit: int = BRUTE_FORCE_LIMIT) -> Iterator[tuple[int, ...]]:
    """Every Robinson ordering of ``A`` in lexicographic order.

    Prefixes are extended only while they contain no violating triple.
    """
    M = _dense(A)
    n = len(M)
    if n > limit:
        raise SizeLimitError(f"brute force limited to n <= {limit}, got {n}")
    prefix: list[int] = []
    used = [False] * n

    def ok(v: int) -> bool:
        for a in range(len(prefix)):
            x = prefix[a]
            xv = M[x][v]
            if xv == 0:
                continue
            for b in range(a + 1, len(prefix)):
                y = prefix[b]
                if xv > M[x][y] or xv > M[y][v]:
                    return False
        return True

    def extend():
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for v in range(n):
            if not used[v] and ok(v):
                used[v] = True
                prefix.append(v)
                yield from extend()
                prefix.pop()
                used[v] = False

    yield from extend()


def brute_force_robinsonian(A, limit: int = BRUTE_FORCE_LIMIT) -> LinearOrder | None:
    """Lexicographically first Robinson ordering, or ``None`` if there is none.

    The first one found always has its first vertex smaller than its last,
    since its reversal is also Robinson.
    """
    for order in robinson_orderings(A, limit):
        return LinearOrder(order)
    return None


def anchors_by_brute_force(A, limit: int = BRUTE_FORCE_LIMIT) -> set[int]:
    """Vertices ending at least one Robinson ordering."""
    return {order[-1] for order in robinson_orderings(A, limit)}


# -- paths avoiding a vertex --------------------------------------------------


def avoid_graph(A, y: int) -> list[list[int]]:
    """Adjacency of the graph on ``V - {y}`` with ``u ~ v`` iff ``A[u,v] > min(A[y,u], A[y,v])``."""
    M = _dense(A)
    n = len(M)
    adj: list[list[int]] = [[] for _ in range(n)]
    for u in range(n):
        if u == y:
            continue
        for v in range(u + 1, n):
            if v != y and M[u][v] > min(M[y][u], M[y][v]):
                adj[u].append(v)
                adj[v].append(u)
    return adj


def _reach(adj: list[list[int]], start: int) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def has_path_avoiding(A, x: int, z: int, y: int) -> bool:
    """Is there a path from ``x`` to ``z`` avoiding ``y``?

    A path may repeat vertices, which never helps reachability, so a plain
    traversal of :func:`avoid_graph` decides it.
    """
    if len({x, y, z}) < 3:
        raise ValueError("x, y, z must be distinct")
    return z in _reach(avoid_graph(A, y), x)


def _reach_to(A, z: int) -> dict[int, set[int]]:
    """For each ``v != z``: the vertices with a path to ``z`` avoiding ``v``."""
    M = _dense(A)
    n = len(M)
    out = {}
    for v in range(n):
        if v != z:
            out[v] = _reach(avoid_graph(M, v), z) - {z}
    return out


def is_valid_vertex(A, z: int) -> bool:
    """No pair ``u != v`` has both a ``u -> z`` path avoiding ``v`` and a ``v -> z`` path avoiding ``u``."""
    reach = _reach_to(A, z)
    for v, from_v in reach.items():
        for u in from_v:
            if u != v and v in reach[u]:
                return False
    return True


def valid_vertices(A) -> set[int]:
    n = len(_dense(A))
    return {z for z in range(n) if is_valid_vertex(A, z)}


def is_anchor(A, z: int, cross_check: bool = False) -> bool:
    """Anchor test for a Robinsonian ``A`` via vertex validity.

    With ``cross_check`` the answer is compared against brute force, which
    also confirms ``A`` is Robinsonian.
    """
    valid = is_valid_vertex(A, z)
    if cross_check:
        anchors = anchors_by_brute_force(A)
        if not anchors:
            raise NotRobinsonianError("matrix has no Robinson ordering")
        if (z in anchors) != valid:  # pragma: no cover - would contradict the characterization
            raise AssertionError(f"validity of {z} disagrees with brute force")
    return valid


def are_opposite_anchors(A, z1: int, z2: int) -> bool:
    """Both valid, and no path from ``z1`` to ``z2`` avoids any third vertex."""
    if z1 == z2:
        raise ValueError("z1 and z2 must differ")
    if not (is_valid_vertex(A, z1) and is_valid_vertex(A, z2)):
        return False
    n = len(_dense(A))
    return not any(has_path_avoiding(A, z1, z2, x) for x in range(n) if x not in (z1, z2))


# -- similarity layers --------------------------------------------------------


@dataclass
class LayerStructure:
    root: int
    layers: list[list[int]]
    leftover: list[int] = field(default_factory=list)

    def layer_of(self) -> dict[int, int]:
        return {v: i for i, layer in enumerate(self.layers) for v in layer}

    @property
    def covers(self) -> bool:
        return not self.leftover


def similarity_layers(A, a: int) -> LayerStructure:
    """Layers rooted at ``a``, evaluated straight from their definition.

    ``L_i`` holds the unplaced ``y`` with ``A[x,y] >= A[x,z]`` for every
    placed ``x`` and unplaced ``z``. Construction stops at the first empty
    layer; anything still unplaced is reported as ``leftover``.
    """
    M = _dense(A)
    n = len(M)
    placed = [a]
    rest = [v for v in range(n) if v != a]
    layers = [[a]]
    while rest:
        best = {x: max(M[x][z] for z in rest) for x in placed}
        layer = [y for y in rest if all(M[x][y] >= best[x] for x in placed)]
        if not layer:
            break
        layers.append(layer)
        placed.extend(layer)
        chosen = set(layer)
        rest = [v for v in rest if v not in chosen]
    return LayerStructure(a, layers, rest)


# -- exhaustive SFS -----------------------------------------------------------


def all_sfs_orderings(A, limit: int = 8) -> set[tuple[int, ...]]:
    """Every ordering Algorithm-style SFS can output, over all tie-breaks.

    Uses plain Python sets for the queue so it shares nothing with
    :mod:`robinsonian.partition`.
    """
    M = _dense(A)
    n = len(M)
    if n > limit:
        raise SizeLimitError(f"exhaustive SFS limited to n <= {limit}, got {n}")
    out: set[tuple[int, ...]] = set()

    def refine(queue: list[frozenset], p: int) -> list[frozenset]:
        values = sorted({M[p][v] for cls in queue for v in cls if M[p][v] > 0}, reverse=True)
        new = []
        for cls in queue:
            for a in values:
                part = frozenset(v for v in cls if M[p][v] == a)
                if part:
                    new.append(part)
            rest = frozenset(v for v in cls if M[p][v] == 0)
            if rest:
                new.append(rest)
        return new

    def run(queue: list[frozenset], prefix: tuple[int, ...]):
        if not queue:
            out.add(prefix)
            return
        for p in sorted(queue[0]):
            head = queue[0] - {p}
            q = ([head] if head else []) + queue[1:]
            run(refine(q, p), prefix + (p,))

    run([frozenset(range(n))] if n else [], ())
    return out


def lex_bfs(A, seed: Sequence[int] | None = None) -> list[int]:
    """Label-based Lex-BFS on the support graph of ``A``.

    Each step takes the unvisited vertex with the lexicographically largest
    label, ties going to the earliest vertex in ``seed``.
    """
    M = _dense(A)
    n = len(M)
    seed = list(range(n)) if seed is None else list(seed)
    rank = {v: i for i, v in enumerate(seed)}
    labels: dict[int, list[int]] = {v: [] for v in range(n)}
    out = []
    unvisited = set(range(n))
    for step in range(n, 0, -1):
        p = max(unvisited, key=lambda v: (labels[v], -rank[v]))
        unvisited.remove(p)
        out.append(p)
        for v in unvisited:
            if M[p][v] > 0:
                labels[v].append(step)
    return out


def all_permutations_passing(A, predicate) -> set[tuple[int, ...]]:
    n = len(_dense(A))
    return {p for p in permutations(range(n)) if predicate(A, list(p))}
