"""Multisweep Robinsonian recognition and linear-time Robinson verification."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .matrix import DissimilarityMatrix, SimilarityMatrix, connected_components, format_weight, restrict
from .sfs import LinearOrder, _as_order, disfs, disfs_plus, sfs, sfs_plus

ROBINSONIAN = "Robinsonian"
NOT_ROBINSONIAN = "NotRobinsonian"


class NotBinaryError(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    """A triple ``x < y < z`` (in the checked order) with ``A[x,z] > min(A[x,y], A[y,z])``."""

    x: int
    y: int
    z: int
    xy: int
    yz: int
    xz: int

    def relabel(self, labels: Sequence[int]) -> "Violation":
        return Violation(labels[self.x], labels[self.y], labels[self.z], self.xy, self.yz, self.xz)

    def to_dict(self, scale: int = 1) -> dict:
        return {
            "triple": [self.x + 1, self.y + 1, self.z + 1],
            "weights": {
                "xy": format_weight(self.xy, scale),
                "yz": format_weight(self.yz, scale),
                "xz": format_weight(self.xz, scale),
            },
        }


# -- verification -------------------------------------------------------------


def robinson_violation(A: SimilarityMatrix, pi) -> Violation | None:
    """Lexicographically first (by position) Robinson violation of ``pi``, or ``None``.

    With zero entries for absent pairs, ``A`` is Robinson under ``pi`` iff in
    every row the nonzero entries to the right of the diagonal occupy the
    positions immediately after it with nonincreasing weights, and likewise
    to the left. That test is O(n + m) after a bucket sort of the rows.
    """
    pi = _as_order(A.n, pi)
    n = A.n
    pos, seq = pi.pos, pi.seq
    nb, wt = A.sorted_adjacency(pos)
    first_bad = n
    for i in range(n):
        x = seq[i]
        row, ws = nb[x], wt[x]
        # split the position-sorted row at the diagonal
        lo, hi = 0, len(row)
        while lo < hi:
            mid = (lo + hi) // 2
            if pos[row[mid]] < i:
                lo = mid + 1
            else:
                hi = mid
        split = lo
        # right side: must be i+1, i+2, ... with nonincreasing weights
        expect, prev = i + 1, None
        for t in range(split, len(row)):
            w = ws[t]
            if pos[row[t]] != expect or (prev is not None and w > prev):
                if i < first_bad:
                    first_bad = i
                break
            expect += 1
            prev = w
        # left side, walking away from the diagonal; a violation here is a
        # triple (l, j, i) whose first element l is the leftmost position
        # with A[x, l] > min over the entries strictly between l and i
        run_min = None
        expect = i - 1
        gap = False
        for t in range(split - 1, -1, -1):
            p, w = pos[row[t]], ws[t]
            if p != expect:
                gap = True
            between = 0 if gap else run_min
            if between is not None and w > between and p < first_bad:
                first_bad = p
            run_min = w if run_min is None else min(run_min, w)
            expect = p - 1
    if first_bad == n:
        return None
    return _first_triple_from(A, pi, first_bad, nb, wt)


def _first_triple_from(A: SimilarityMatrix, pi: LinearOrder, i: int, nb, wt) -> Violation:
    """Smallest (j, k) completing a violation whose first position is ``i``."""
    pos, seq = pi.pos, pi.seq
    x = seq[i]
    right = [(pos[v], v, w) for v, w in zip(nb[x], wt[x]) if pos[v] > i]
    far = right[-1][0]
    row_x = {p: w for p, _, w in right}
    for j in range(i + 1, far):
        y = seq[j]
        a_xy = row_x.get(j, 0)
        for p, z, a_xz in right:
            if p <= j:
                continue
            if a_xz > a_xy:
                return Violation(x, y, z, a_xy, A.weight(y, z), a_xz)
            a_yz = A.weight(y, z)
            if a_xz > a_yz:
                return Violation(x, y, z, a_xy, a_yz, a_xz)
    raise AssertionError("no violation found from the flagged position")  # pragma: no cover


def verify_robinson(A: SimilarityMatrix, pi) -> bool:
    """True iff reordering ``A`` by ``pi`` gives a Robinson matrix."""
    return robinson_violation(A, pi) is None


# -- reports ------------------------------------------------------------------


@dataclass
class ComponentReport:
    """Outcome for one connected component, in original vertex ids."""

    vertices: list[int]
    status: str
    ordering: tuple[int, ...] | None
    sweeps_used: int
    certificate: Violation | None = None
    exit_rule: str = "final"
    sweeps: list[LinearOrder] = field(default_factory=list)
    seconds: float = 0.0


@dataclass
class RecognitionReport:
    status: str
    ordering: LinearOrder | None
    sweeps_used: int
    certificate: Violation | None
    components: list[ComponentReport]
    scale: int = 1
    timings: dict = field(default_factory=dict)
    seed: int | None = None

    @property
    def robinsonian(self) -> bool:
        return self.status == ROBINSONIAN

    def to_dict(self) -> dict:
        out = {
            "status": self.status,
            "order": None if self.ordering is None else [v + 1 for v in self.ordering],
            "sweeps_used": self.sweeps_used,
            "certificate": None if self.certificate is None else self.certificate.to_dict(self.scale),
            "components": [
                {
                    "vertices": [v + 1 for v in c.vertices],
                    "status": c.status,
                    "order": None if c.ordering is None else [v + 1 for v in c.ordering],
                    "sweeps_used": c.sweeps_used,
                    "exit_rule": c.exit_rule,
                    "certificate": None if c.certificate is None else c.certificate.to_dict(self.scale),
                }
                for c in self.components
            ],
            "timings": self.timings,
        }
        if self.seed is not None:
            out["seed"] = self.seed
        return out


# -- multisweep ---------------------------------------------------------------


def multisweep(A: SimilarityMatrix, sigma0, count: int, plus=sfs_plus) -> Iterator[LinearOrder]:
    """Yield ``sigma_1 .. sigma_count``, each the plus-sweep of its predecessor."""
    sigma = _as_order(A.n, sigma0)
    for _ in range(count):
        sigma = plus(A, sigma)
        yield sigma


def _recognize_component(
    sub,
    sigma0: LinearOrder,
    plus,
    early_exit: bool,
    record: bool,
    max_sweeps: int | None = None,
) -> tuple[LinearOrder, int, str, list[LinearOrder]]:
    """Run the sweep loop on one component; return (final sweep, sweeps used, exit rule, history)."""
    size = sub.n
    last_index = size - 2 if max_sweeps is None else max_sweeps - 1
    history = [sigma0]
    final, rule = sigma0, "final"
    i = 0
    for i in range(1, last_index + 1):
        prev = history[-1]
        cur = plus(sub, prev)
        before_prev = history[-2] if len(history) >= 2 else None
        history.append(cur)
        if not record and len(history) > 3:
            del history[0]
        final = cur
        if not early_exit:
            continue
        if cur.seq == prev.seq[::-1]:
            # once a sweep reverses its predecessor, it decides the matrix
            rule = "reversal"
            break
        if before_prev is not None and cur.seq == before_prev.seq:
            # the sweeps now alternate; pick the one the full loop would end on
            rule = "cycle"
            if (last_index - i) % 2:
                final = prev
            break
    used = i + 1 if size >= 3 else 1
    return final, used, rule, history if record else []


def _decide(components, A, seed, initial, plus, first, check, early_exit, record, max_sweeps=None):
    reports = []
    t_all = time.perf_counter()
    for comp in components:
        t0 = time.perf_counter()
        verts = comp.members
        if len(verts) <= 2:
            order = tuple(verts)
            reports.append(
                ComponentReport(verts, ROBINSONIAN, order, 0, exit_rule="trivial",
                                sweeps=[LinearOrder(range(len(verts)))] if record else [],
                                seconds=time.perf_counter() - t0)
            )
            continue
        sub = restrict(A, comp)
        relabel = {v: i for i, v in enumerate(verts)}
        if initial is not None:
            sigma0 = initial.restrict(verts, relabel)
        else:
            sigma0 = first(sub, seed.restrict(verts, relabel))
        final, used, rule, hist = _recognize_component(sub, sigma0, plus, early_exit, record, max_sweeps)
        bad = check(sub, final)
        status = NOT_ROBINSONIAN if bad is not None else ROBINSONIAN
        reports.append(
            ComponentReport(
                verts,
                status,
                tuple(verts[v] for v in final) if bad is None else None,
                used,
                None if bad is None else bad.relabel(verts),
                rule,
                hist,
                time.perf_counter() - t0,
            )
        )
    return reports, time.perf_counter() - t_all


def _assemble(n: int, reports: list[ComponentReport], scale: int, total: float) -> RecognitionReport:
    ok = all(r.status == ROBINSONIAN for r in reports)
    ordering = None
    certificate = None
    if ok:
        ordering = LinearOrder(v for r in reports for v in r.ordering)
    else:
        certificate = next(r.certificate for r in reports if r.status != ROBINSONIAN)
    return RecognitionReport(
        ROBINSONIAN if ok else NOT_ROBINSONIAN,
        ordering if n else LinearOrder([]),
        max((r.sweeps_used for r in reports), default=0),
        certificate,
        reports,
        scale,
        {"total_seconds": total, "component_seconds": [r.seconds for r in reports]},
    )


def recognize(
    A: SimilarityMatrix,
    seed=None,
    *,
    initial=None,
    early_exit: bool = True,
    record_sweeps: bool = False,
) -> RecognitionReport:
    """Decide whether ``A`` is Robinsonian.

    Each connected component ``C`` is handled on its own: a first SFS sweep
    seeded by ``seed`` (or the order ``initial`` used as the first sweep
    directly), then up to ``|C| - 2`` plus-sweeps. The last of those is a
    Robinson ordering iff ``A[C]`` is Robinsonian. With ``early_exit`` the loop
    stops as soon as a sweep reverses its predecessor, or the sweeps start
    alternating, neither of which can change the outcome.
    """
    seed = _as_order(A.n, seed)
    if initial is not None:
        initial = _as_order(A.n, initial)
    reports, total = _decide(
        connected_components(A), A, seed, initial, sfs_plus, sfs, robinson_violation, early_exit, record_sweeps
    )
    return _assemble(A.n, reports, A.scale, total)


def recognize_binary_3sweep(A: SimilarityMatrix, seed=None, *, record_sweeps: bool = False) -> RecognitionReport:
    """Three-sweep decision for 0/1 matrices (unit interval graphs).

    Exactly ``sigma_0``, ``sigma_1``, ``sigma_2`` are computed per component
    and ``sigma_2`` is checked.
    """
    weights = A.distinct_weights()
    if len(weights) > 1:
        raise NotBinaryError(f"matrix takes {len(weights)} distinct positive values")
    seed = _as_order(A.n, seed)
    reports, total = _decide(
        connected_components(A), A, seed, None, sfs_plus, sfs, robinson_violation,
        False, record_sweeps, max_sweeps=3,
    )
    return _assemble(A.n, reports, A.scale, total)


# -- dissimilarities ----------------------------------------------------------


def dissimilarity_violation(D: DissimilarityMatrix, pi) -> Violation | None:
    """First triple with ``D[x,z] < max(D[x,y], D[y,z])`` under ``pi``, or ``None``.

    Entries must not decrease moving away from the diagonal; this is the
    similarity check applied to ``D_max - D``, reported in dissimilarities.
    """
    bad = robinson_violation(D.to_similarity(), pi)
    if bad is None:
        return None
    d = D.dmax
    return Violation(bad.x, bad.y, bad.z, d - bad.xy, d - bad.yz, d - bad.xz)


def _dissim_components(D: DissimilarityMatrix):
    # pairs below the maximum dissimilarity are the edges here
    return connected_components(D.to_similarity())


def _restrict_dissim(D: DissimilarityMatrix, comp) -> DissimilarityMatrix:
    verts = comp.members
    new_id = {v: i for i, v in enumerate(verts)}
    nbrs, vals = [], []
    for v in verts:
        nb, vl = [], []
        for u, d in zip(D.nbrs[v], D.vals[v]):
            j = new_id.get(u)
            if j is not None:
                nb.append(j)
                vl.append(d)
        nbrs.append(nb)
        vals.append(vl)
    return DissimilarityMatrix(len(verts), D.dmax, nbrs, vals, D.scale)


def recognize_dissimilarity(D: DissimilarityMatrix, seed=None, *, early_exit: bool = True) -> RecognitionReport:
    """Multisweep recognition of a Robinsonian dissimilarity using DiSFS sweeps.

    A Robinson ordering here has entries nondecreasing away from the diagonal.
    """
    seed = _as_order(D.n, seed)
    reports = []
    t_all = time.perf_counter()
    for comp in _dissim_components(D):
        t0 = time.perf_counter()
        verts = comp.members
        if len(verts) <= 2:
            reports.append(ComponentReport(verts, ROBINSONIAN, tuple(verts), 0, exit_rule="trivial"))
            continue
        sub = _restrict_dissim(D, comp)
        relabel = {v: i for i, v in enumerate(verts)}
        sigma0 = disfs(sub, seed.restrict(verts, relabel))
        final, used, rule, _ = _recognize_component(sub, sigma0, disfs_plus, early_exit, False)
        bad = dissimilarity_violation(sub, final)
        reports.append(
            ComponentReport(
                verts,
                NOT_ROBINSONIAN if bad is not None else ROBINSONIAN,
                tuple(verts[v] for v in final) if bad is None else None,
                used,
                None if bad is None else bad.relabel(verts),
                rule,
                seconds=time.perf_counter() - t0,
            )
        )
    return _assemble(D.n, reports, D.scale, time.perf_counter() - t_all)
