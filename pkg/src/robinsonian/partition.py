"""Ordered partition queue and the multi-class refinement used by the searches.

The queue is a doubly linked list of classes, each class a doubly linked list
of vertices, with per-vertex pointers to both. Removing a vertex, moving it
into a neighbouring class and dropping an emptied class are all O(1), so
refining by a partition of ``k`` vertices costs O(k).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

_NIL = -1


class EmptyQueueError(IndexError):
    pass


class OrderedPartition:
    """Queue of unvisited vertices, grouped into ordered classes.

    Vertices keep, inside every class, the relative order they had in the
    sequence the queue was created from; :meth:`refine` never reorders a
    class, it only splits it.
    """

    def __init__(self, n: int, classes: Iterable[Sequence[int]] = ()):
        self.n = n
        self.vnext = [_NIL] * n
        self.vprev = [_NIL] * n
        self.vcls = [_NIL] * n
        # per-class arrays, indexed by class id; ids are never reused
        self.head: list[int] = []
        self.tail: list[int] = []
        self.size: list[int] = []
        self.cnext: list[int] = []
        self.cprev: list[int] = []
        self.first = _NIL
        self.last = _NIL
        self.num_classes = 0
        self.num_vertices = 0
        for cls in classes:
            if len(cls):
                c = self._new_class(before=_NIL)
                for v in cls:
                    if self.vcls[v] != _NIL:
                        raise ValueError(f"vertex {v} appears twice")
                    self._append(c, v)

    @classmethod
    def single(cls, seq: Sequence[int], n: int | None = None) -> "OrderedPartition":
        """Queue with one class holding ``seq`` in that order."""
        return cls(len(seq) if n is None else n, [seq])

    # -- low-level list surgery ------------------------------------------

    def _new_class(self, before: int) -> int:
        """Create an empty class placed right before class ``before`` (or at the end)."""
        c = len(self.head)
        self.head.append(_NIL)
        self.tail.append(_NIL)
        self.size.append(0)
        if before == _NIL:
            prev = self.last
            self.cnext.append(_NIL)
            self.cprev.append(prev)
            if prev == _NIL:
                self.first = c
            else:
                self.cnext[prev] = c
            self.last = c
        else:
            prev = self.cprev[before]
            self.cnext.append(before)
            self.cprev.append(prev)
            self.cprev[before] = c
            if prev == _NIL:
                self.first = c
            else:
                self.cnext[prev] = c
        self.num_classes += 1
        return c

    def _drop_class(self, c: int) -> None:
        prev, nxt = self.cprev[c], self.cnext[c]
        if prev == _NIL:
            self.first = nxt
        else:
            self.cnext[prev] = nxt
        if nxt == _NIL:
            self.last = prev
        else:
            self.cprev[nxt] = prev
        self.num_classes -= 1

    def _append(self, c: int, v: int) -> None:
        t = self.tail[c]
        self.vprev[v] = t
        self.vnext[v] = _NIL
        if t == _NIL:
            self.head[c] = v
        else:
            self.vnext[t] = v
        self.tail[c] = v
        self.vcls[v] = c
        self.size[c] += 1
        self.num_vertices += 1

    def _unlink(self, v: int) -> int:
        """Detach ``v`` from its class, dropping the class if it empties."""
        c = self.vcls[v]
        p, q = self.vprev[v], self.vnext[v]
        if p == _NIL:
            self.head[c] = q
        else:
            self.vnext[p] = q
        if q == _NIL:
            self.tail[c] = p
        else:
            self.vprev[q] = p
        self.vcls[v] = _NIL
        self.size[c] -= 1
        self.num_vertices -= 1
        if self.size[c] == 0:
            self._drop_class(c)
        return c

    # -- public operations ------------------------------------------------

    def __len__(self) -> int:
        return self.num_vertices

    def __contains__(self, v: int) -> bool:
        return self.vcls[v] != _NIL

    def remove(self, v: int) -> None:
        if self.vcls[v] == _NIL:
            raise KeyError(v)
        self._unlink(v)

    def first_class_size(self) -> int:
        return self.size[self.first] if self.first != _NIL else 0

    def pop_first(self) -> int:
        """Remove and return the head vertex of the first class."""
        c = self.first
        if c == _NIL:
            raise EmptyQueueError("pop from an empty queue")
        v = self.head[c]
        self._unlink(v)
        return v

    def refine(self, groups: Iterable[Sequence[int]]) -> None:
        """Split every class ``B`` into ``B & C1, ..., B & Cs, B - (C1 | ... | Cs)``.

        ``groups`` are the classes ``C1, ..., Cs`` in priority order; each must
        list its vertices in the queue's internal order, and all of them must
        still be queued. Empty pieces are dropped.
        """
        vcls, vnext, vprev = self.vcls, self.vnext, self.vprev
        head, tail, size = self.head, self.tail, self.size
        cnext, cprev = self.cnext, self.cprev
        for group in groups:
            split: dict[int, int] = {}
            for v in group:
                c = vcls[v]
                nc = split.get(c)
                if nc is None:
                    # new class right before c
                    nc = split[c] = len(head)
                    head.append(_NIL)
                    tail.append(_NIL)
                    size.append(0)
                    prev = cprev[c]
                    cnext.append(c)
                    cprev.append(prev)
                    cprev[c] = nc
                    if prev == _NIL:
                        self.first = nc
                    else:
                        cnext[prev] = nc
                    self.num_classes += 1
                # unlink v from c
                p, q = vprev[v], vnext[v]
                if p == _NIL:
                    head[c] = q
                else:
                    vnext[p] = q
                if q == _NIL:
                    tail[c] = p
                else:
                    vprev[q] = p
                size[c] -= 1
                if size[c] == 0:
                    self._drop_class(c)
                # append v to nc
                t = tail[nc]
                vprev[v] = t
                vnext[v] = _NIL
                if t == _NIL:
                    head[nc] = v
                else:
                    vnext[t] = v
                tail[nc] = v
                vcls[v] = nc
                size[nc] += 1

    def classes(self) -> list[list[int]]:
        out = []
        c = self.first
        while c != _NIL:
            cls = []
            v = self.head[c]
            while v != _NIL:
                cls.append(v)
                v = self.vnext[v]
            out.append(cls)
            c = self.cnext[c]
        return out

    def dump(self, label: Callable[[int], object] = lambda v: v + 1) -> str:
        """Debug form ``(B1 | B2 | ...)`` with 1-based ids by default."""
        return "(" + " | ".join(" ".join(str(label(v)) for v in cls) for cls in self.classes()) + ")"

    def __repr__(self) -> str:
        return f"OrderedPartition{self.dump()}"


@dataclass
class SimilarityPartition:
    """Neighbours of a pivot grouped by equal weight, heaviest group first.

    ``weights[i]`` is the common weight of ``classes[i]``; it is strictly
    decreasing for similarities and strictly increasing for dissimilarities.
    """

    pivot: int
    classes: list[list[int]] = field(default_factory=list)
    weights: list[int] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.classes)

    def vertices(self) -> list[int]:
        return [v for cls in self.classes for v in cls]


def group_by_weight(nbrs: Sequence[int], wts: Sequence[int], skip, descending: bool = True):
    """Group the entries of one adjacency row by weight.

    ``nbrs`` must already be in the queue's internal order; the sort is
    stable, so every group keeps that order. Vertices with ``skip[v]`` true
    are left out.
    """
    items = [(w, v) for v, w in zip(nbrs, wts) if not skip[v]]
    if not items:
        return [], []
    items.sort(key=_first, reverse=descending)
    classes: list[list[int]] = []
    weights: list[int] = []
    cur_w = None
    cur: list[int] = []
    for w, v in items:
        if w != cur_w:
            if cur:
                classes.append(cur)
                weights.append(cur_w)
            cur = [v]
            cur_w = w
        else:
            cur.append(v)
    classes.append(cur)
    weights.append(cur_w)
    return classes, weights


def _first(item):
    return item[0]


def similarity_partition(A, p: int, unvisited, seed_pos: Sequence[int] | None = None) -> SimilarityPartition:
    """Partition the unvisited neighbours of ``p`` by strictly decreasing weight.

    ``unvisited`` is anything supporting ``v in unvisited``. Inside each class
    vertices are sorted by ``seed_pos`` (vertex id when omitted).
    """
    if seed_pos is None:
        order = list(range(A.n))
    else:
        order = seed_pos
    row = sorted(
        ((v, w) for v, w in zip(A.nbrs[p], A.wts[p]) if v != p and v in unvisited),
        key=lambda vw: order[vw[0]],
    )
    skip = [False] * A.n
    classes, weights = group_by_weight([v for v, _ in row], [w for _, w in row], skip)
    return SimilarityPartition(p, classes, weights)


def refine(phi: OrderedPartition, psi: SimilarityPartition) -> None:
    """Refine ``phi`` in place by ``psi`` (see :meth:`OrderedPartition.refine`)."""
    phi.refine(psi.classes)


def pop_pivot(phi: OrderedPartition) -> int:
    """Next pivot: the first vertex of the first class."""
    return phi.pop_first()
