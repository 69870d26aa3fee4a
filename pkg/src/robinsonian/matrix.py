"""Symmetric nonnegative matrices stored as weighted adjacency lists.

Weights are quantized to integers when a matrix is built, so every comparison
made by the search and verification code is exact.
"""

from __future__ import annotations

import csv
import io
import os
from bisect import bisect_left
from decimal import ROUND_HALF_EVEN, Decimal, InvalidOperation
from itertools import chain
from typing import Iterable, Iterator, Sequence

import numpy as np

DEFAULT_SCALE = 10**6
_INT64_MAX = 2**63 - 1


class MatrixError(ValueError):
    """Base class for errors raised while building a matrix."""


class MatrixFormatError(MatrixError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateEntryError(MatrixFormatError):
    pass


class AsymmetryError(MatrixError):
    pass


class NegativeEntryError(MatrixError):
    pass


def resolve_scale(scale: int | None = None) -> int:
    """Return ``scale`` if given, else ``$SFS_SCALE``, else the default."""
    if scale is None:
        env = os.environ.get("SFS_SCALE")
        scale = int(env) if env else DEFAULT_SCALE
    if scale < 1:
        raise ValueError(f"scale must be a positive integer, got {scale}")
    return scale


def quantize(value, scale: int = 1) -> int:
    """Map a number to the integer ``round(value * scale)`` exactly.

    Strings and floats go through :class:`~decimal.Decimal` so that decimal
    input such as ``"0.1"`` is not distorted by binary floating point.
    """
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        q = int(value) * scale
    else:
        try:
            d = Decimal(value.strip()) if isinstance(value, str) else Decimal(str(value))
        except InvalidOperation:
            raise MatrixFormatError(f"not a number: {value!r}") from None
        if not d.is_finite():
            raise MatrixFormatError(f"not a finite number: {value!r}")
        q = int((d * scale).to_integral_value(rounding=ROUND_HALF_EVEN))
    if abs(q) > _INT64_MAX:
        raise MatrixFormatError(f"value {value!r} overflows 64 bits at scale {scale}")
    return q


def format_weight(q: int, scale: int) -> str:
    """Inverse of :func:`quantize` as a decimal string."""
    if scale == 1:
        return str(q)
    s = format(Decimal(q) / Decimal(scale), "f")
    if "." in s:
        s = s.rstrip("0").rstrip(".")
    return s


class VertexSet:
    """A subset of ``range(n)`` with O(1) membership and sorted iteration."""

    __slots__ = ("n", "members", "mask")

    def __init__(self, n: int, members: Iterable[int]):
        self.n = n
        self.mask = bytearray(n)
        for v in members:
            if not 0 <= v < n:
                raise ValueError(f"vertex {v} out of range for n={n}")
            self.mask[v] = 1
        self.members = [v for v in range(n) if self.mask[v]]

    def __contains__(self, v: int) -> bool:
        return 0 <= v < self.n and bool(self.mask[v])

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __eq__(self, other) -> bool:
        return isinstance(other, VertexSet) and self.n == other.n and self.members == other.members

    def __repr__(self) -> str:
        return f"VertexSet(n={self.n}, {self.members})"


class _Csr:
    """Flat copy of adjacency lists, used to re-sort every row at once."""

    __slots__ = ("n", "deg", "bounds", "idx", "val", "rows")

    def __init__(self, nbrs, vals):
        n = len(nbrs)
        deg = np.fromiter(map(len, nbrs), dtype=np.int64, count=n)
        total = int(deg.sum())
        self.n = n
        self.deg = deg
        self.bounds = [0] + np.cumsum(deg).tolist()
        self.idx = np.fromiter(chain.from_iterable(nbrs), dtype=np.int64, count=total)
        self.val = np.fromiter(chain.from_iterable(vals), dtype=np.int64, count=total)
        self.rows = np.repeat(np.arange(n, dtype=np.int64), deg)

    @staticmethod
    def _split(flat: list, b: list[int]) -> list[list]:
        return [flat[b[i]:b[i + 1]] for i in range(len(b) - 1)]

    def resort(self, pos) -> tuple[list[list[int]], list[list[int]]]:
        """Rows keep vertex ids; entries are sorted by ``pos``."""
        p = np.asarray(pos, dtype=np.int64)
        order = np.argsort(self.rows * self.n + p[self.idx], kind="quicksort")  # keys are unique
        b = self.bounds
        return self._split(self.idx[order].tolist(), b), self._split(self.val[order].tolist(), b)

    def positional(self, pos) -> tuple[list[list[int]], list[list[int]]]:
        """Same matrix relabelled ``v -> pos[v]``, rows sorted."""
        p = np.asarray(pos, dtype=np.int64)
        cols = p[self.idx]
        order = np.argsort(p[self.rows] * self.n + cols, kind="quicksort")  # keys are unique
        deg = np.empty_like(self.deg)
        deg[p] = self.deg
        b = [0] + np.cumsum(deg).tolist()
        return self._split(cols[order].tolist(), b), self._split(self.val[order].tolist(), b)


class SimilarityMatrix:
    """Immutable symmetric matrix with positive integer off-diagonal weights.

    ``nbrs[x]`` lists the neighbours of ``x`` in increasing id order and
    ``wts[x]`` the matching weights. Absent pairs have weight 0. ``origin[x]``
    is the id of ``x`` in the matrix this one was restricted from (the
    identity for matrices built directly).
    """

    __slots__ = ("n", "m", "nbrs", "wts", "scale", "origin", "_csr")

    def __init__(self, n: int, nbrs, wts, scale: int = 1, origin: Sequence[int] | None = None):
        self.n = n
        self.nbrs = nbrs
        self.wts = wts
        self.m = sum(len(row) for row in nbrs) // 2
        self.scale = scale
        self.origin = tuple(range(n)) if origin is None else tuple(origin)
        self._csr = None

    # -- construction -----------------------------------------------------

    @classmethod
    def from_pairs(cls, n: int, pairs: dict, scale: int = 1, origin=None) -> "SimilarityMatrix":
        """Build from ``{(x, y): q}`` with already-quantized integer weights.

        Each unordered pair may appear once, in either orientation. Zero
        weights are dropped; negative weights raise :class:`NegativeEntryError`.
        """
        rows: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for (x, y), q in pairs.items():
            if x == y:
                continue
            if q < 0:
                raise NegativeEntryError(f"negative entry {q} at ({x + 1}, {y + 1})")
            if q == 0:
                continue
            rows[x].append((y, q))
            rows[y].append((x, q))
        for row in rows:
            row.sort()
        nbrs = [[v for v, _ in row] for row in rows]
        wts = [[w for _, w in row] for row in rows]
        for x in range(n):
            r = nbrs[x]
            for i in range(1, len(r)):
                if r[i] == r[i - 1]:
                    raise DuplicateEntryError(f"duplicate entry for pair ({x + 1}, {r[i] + 1})")
        return cls(n, nbrs, wts, scale, origin)

    @classmethod
    def from_dense(cls, rows, scale: int = 1) -> "SimilarityMatrix":
        """Build from a square array-like; the diagonal is ignored.

        Raises :class:`AsymmetryError` if the quantized matrix is not symmetric.
        """
        q = _quantize_square(rows, scale)
        return cls.from_pairs(len(q), _pairs_from_square(q), scale)

    @classmethod
    def empty(cls, n: int) -> "SimilarityMatrix":
        return cls(n, [[] for _ in range(n)], [[] for _ in range(n)])

    # -- access -----------------------------------------------------------

    def weight(self, x: int, y: int) -> int:
        row = self.nbrs[x]
        i = bisect_left(row, y)
        if i < len(row) and row[i] == y:
            return self.wts[x][i]
        return 0

    def neighbors(self, x: int) -> list[tuple[int, int]]:
        return list(zip(self.nbrs[x], self.wts[x]))

    def edges(self) -> Iterator[tuple[int, int, int]]:
        """Yield ``(x, y, w)`` with ``x < y`` for every stored pair."""
        for x in range(self.n):
            for y, w in zip(self.nbrs[x], self.wts[x]):
                if x < y:
                    yield x, y, w

    def dense(self) -> np.ndarray:
        """Dense int64 copy with a zero diagonal."""
        out = np.zeros((self.n, self.n), dtype=np.int64)
        for x in range(self.n):
            if self.nbrs[x]:
                out[x, self.nbrs[x]] = self.wts[x]
        return out

    def distinct_weights(self) -> set[int]:
        return {w for row in self.wts for w in row}

    def sorted_adjacency(self, pos: Sequence[int]) -> tuple[list[list[int]], list[list[int]]]:
        """Adjacency lists re-ordered by increasing ``pos``.

        ``pos[v]`` is the position of ``v`` in some linear order. Done as one
        vectorized sort over all stored entries.
        """
        return self._flat().resort(pos)

    def positional_adjacency(self, pos: Sequence[int]) -> tuple[list[list[int]], list[list[int]]]:
        """Adjacency of the copy relabelled ``v -> pos[v]``, rows in increasing order."""
        return self._flat().positional(pos)

    def _flat(self) -> _Csr:
        if self._csr is None:
            self._csr = _Csr(self.nbrs, self.wts)
        return self._csr

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SimilarityMatrix)
            and self.n == other.n
            and self.nbrs == other.nbrs
            and self.wts == other.wts
        )

    def __repr__(self) -> str:
        return f"SimilarityMatrix(n={self.n}, m={self.m})"


def _quantize_square(rows, scale: int) -> list[list[int]]:
    if isinstance(rows, np.ndarray):
        if rows.ndim != 2 or rows.shape[0] != rows.shape[1]:
            raise MatrixFormatError(f"expected a square matrix, got shape {rows.shape}")
        rows = rows.tolist()
    rows = [list(r) for r in rows]
    n = len(rows)
    for i, r in enumerate(rows):
        if len(r) != n:
            raise MatrixFormatError(f"row {i + 1} has {len(r)} entries, expected {n}", line=i + 1)
    return [
        [0 if x == y else quantize(v, scale) for y, v in enumerate(r)] for x, r in enumerate(rows)
    ]


# -- normalization ------------------------------------------------------------


def _pairs_from_square(q: list[list[int]]) -> dict:
    n = len(q)
    pairs = {}
    for x in range(n):
        for y in range(x + 1, n):
            if q[x][y] != q[y][x]:
                raise AsymmetryError(
                    f"entries ({x + 1}, {y + 1}) and ({y + 1}, {x + 1}) differ: {q[x][y]} != {q[y][x]}"
                )
            pairs[(x, y)] = q[x][y]
    return pairs


def shift_nonnegative(rows, scale: int = 1) -> SimilarityMatrix:
    """Shift all off-diagonal entries so that the smallest one becomes 0.

    Adding a constant to every entry preserves the Robinson property, so the
    recognition outcome does not change.
    """
    pairs = _pairs_from_square(_quantize_square(rows, scale))
    lam = -min(pairs.values()) if pairs else 0
    return SimilarityMatrix.from_pairs(len(rows), {k: q + lam for k, q in pairs.items()}, scale)


def from_dissimilarity(rows, scale: int = 1) -> SimilarityMatrix:
    """Similarity ``D_max - D`` of a symmetric dissimilarity ``D``.

    ``D`` is a Robinsonian dissimilarity exactly when the result is a
    Robinsonian similarity. Accepts a dense array-like or a
    :class:`DissimilarityMatrix`.
    """
    if isinstance(rows, DissimilarityMatrix):
        return rows.to_similarity()
    pairs = _pairs_from_square(_quantize_square(rows, scale))
    dmax = max(pairs.values()) if pairs else 0
    return SimilarityMatrix.from_pairs(len(rows), {k: dmax - q for k, q in pairs.items()}, scale)


class DissimilarityMatrix:
    """Symmetric nonnegative dissimilarity keeping only entries below the maximum.

    Pairs whose dissimilarity equals ``dmax`` carry no ordering information
    for the search and are not stored, mirroring how zero similarities are
    left out of :class:`SimilarityMatrix`. Stored entries may be 0.
    """

    __slots__ = ("n", "dmax", "nbrs", "vals", "scale", "_csr")

    def __init__(self, n: int, dmax: int, nbrs, vals, scale: int = 1):
        self.n = n
        self.dmax = dmax
        self.nbrs = nbrs
        self.vals = vals
        self.scale = scale
        self._csr = None

    @classmethod
    def from_dense(cls, rows, scale: int = 1) -> "DissimilarityMatrix":
        return cls._from_quantized(_quantize_square(rows, scale), scale)

    @classmethod
    def _from_quantized(cls, q: list[list[int]], scale: int) -> "DissimilarityMatrix":
        n = len(q)
        dmax = 0
        for x in range(n):
            for y in range(x + 1, n):
                if q[x][y] != q[y][x]:
                    raise AsymmetryError(f"entries ({x + 1}, {y + 1}) and ({y + 1}, {x + 1}) differ")
                if q[x][y] < 0:
                    raise NegativeEntryError(f"negative entry {q[x][y]} at ({x + 1}, {y + 1})")
                dmax = max(dmax, q[x][y])
        nbrs: list[list[int]] = [[] for _ in range(n)]
        vals: list[list[int]] = [[] for _ in range(n)]
        for x in range(n):
            for y in range(n):
                if x != y and q[x][y] < dmax:
                    nbrs[x].append(y)
                    vals[x].append(q[x][y])
        return cls(n, dmax, nbrs, vals, scale)

    def value(self, x: int, y: int) -> int:
        if x == y:
            return 0
        row = self.nbrs[x]
        i = bisect_left(row, y)
        if i < len(row) and row[i] == y:
            return self.vals[x][i]
        return self.dmax

    def dense(self) -> np.ndarray:
        out = np.full((self.n, self.n), self.dmax, dtype=np.int64)
        for x in range(self.n):
            if self.nbrs[x]:
                out[x, self.nbrs[x]] = self.vals[x]
            out[x, x] = 0
        return out

    def sorted_adjacency(self, pos: Sequence[int]):
        return self._flat().resort(pos)

    def positional_adjacency(self, pos: Sequence[int]):
        return self._flat().positional(pos)

    def _flat(self) -> _Csr:
        if self._csr is None:
            self._csr = _Csr(self.nbrs, self.vals)
        return self._csr

    def to_similarity(self) -> SimilarityMatrix:
        pairs = {}
        for x in range(self.n):
            for y, d in zip(self.nbrs[x], self.vals[x]):
                if x < y:
                    pairs[(x, y)] = self.dmax - d
        return SimilarityMatrix.from_pairs(self.n, pairs, self.scale)

    def __repr__(self) -> str:
        return f"DissimilarityMatrix(n={self.n}, dmax={self.dmax})"


# -- structure ------------------------------------------------------------------


def connected_components(A: SimilarityMatrix) -> list[VertexSet]:
    """Components of the positive-weight support graph, by smallest vertex."""
    n = A.n
    comp = [-1] * n
    out = []
    for s in range(n):
        if comp[s] >= 0:
            continue
        cid = len(out)
        comp[s] = cid
        stack = [s]
        members = [s]
        while stack:
            u = stack.pop()
            for v in A.nbrs[u]:
                if comp[v] < 0:
                    comp[v] = cid
                    stack.append(v)
                    members.append(v)
        out.append(VertexSet(n, members))
    return out


def restrict(A: SimilarityMatrix, S) -> SimilarityMatrix:
    """Principal submatrix on ``S``, with vertices renumbered in id order.

    The result's ``origin`` maps each new vertex to the id it had in the
    matrix ``A`` was itself built from, so restrictions compose.
    """
    if not isinstance(S, VertexSet):
        S = VertexSet(A.n, S)
    members = S.members
    new_id = {v: i for i, v in enumerate(members)}
    nbrs, wts = [], []
    for v in members:
        nb, wt = [], []
        for u, w in zip(A.nbrs[v], A.wts[v]):
            j = new_id.get(u)
            if j is not None:
                nb.append(j)
                wt.append(w)
        nbrs.append(nb)
        wts.append(wt)
    origin = [A.origin[v] for v in members]
    return SimilarityMatrix(len(members), nbrs, wts, A.scale, origin)


def permute(A: SimilarityMatrix, perm: Sequence[int]) -> SimilarityMatrix:
    """Relabel vertex ``v`` as ``perm[v]``."""
    pairs = {(perm[x], perm[y]): w for x, y, w in A.edges()}
    return SimilarityMatrix.from_pairs(A.n, pairs, A.scale)


# -- file formats ---------------------------------------------------------------


def _text(data) -> str:
    if isinstance(data, (bytes, bytearray)):
        return data.decode("utf-8")
    return data


def _read_matrix_market(data, scale: int) -> tuple[int, dict, bool]:
    """Parse coordinate Matrix Market into ``(n, {(i, j): q}, complete)``.

    Keys have ``i < j``. ``complete`` tells whether every off-diagonal pair
    was given explicitly (only relevant when shifting).
    """
    lines = _text(data).splitlines()
    if not lines or not lines[0].lower().startswith("%%matrixmarket"):
        raise MatrixFormatError("missing %%MatrixMarket header", line=1)
    header = lines[0].split()
    if len(header) != 5:
        raise MatrixFormatError("malformed header", line=1)
    _, obj, fmt, field, symmetry = (h.lower() for h in header)
    if obj != "matrix" or fmt != "coordinate":
        raise MatrixFormatError(f"unsupported object/format {obj} {fmt}", line=1)
    if field not in ("real", "integer"):
        raise MatrixFormatError(f"unsupported field {field!r}", line=1)
    if symmetry not in ("symmetric", "general"):
        raise MatrixFormatError(f"unsupported symmetry {symmetry!r}", line=1)

    idx = 1
    while idx < len(lines) and (not lines[idx].strip() or lines[idx].lstrip().startswith("%")):
        idx += 1
    if idx >= len(lines):
        raise MatrixFormatError("missing size line", line=idx + 1)
    size = lines[idx].split()
    try:
        nrows, ncols, nnz = (int(t) for t in size)
    except ValueError:
        raise MatrixFormatError("malformed size line", line=idx + 1) from None
    if nrows != ncols:
        raise MatrixFormatError(f"matrix is {nrows}x{ncols}, not square", line=idx + 1)
    n = nrows

    seen: dict[tuple[int, int], tuple[int, int]] = {}
    count = 0
    for lineno in range(idx + 2, len(lines) + 1):
        raw = lines[lineno - 1].strip()
        if not raw or raw.startswith("%"):
            continue
        parts = raw.split()
        if len(parts) != 3:
            raise MatrixFormatError(f"expected 'row col value', got {raw!r}", line=lineno)
        try:
            i, j = int(parts[0]) - 1, int(parts[1]) - 1
        except ValueError:
            raise MatrixFormatError(f"bad index in {raw!r}", line=lineno) from None
        if not (0 <= i < n and 0 <= j < n):
            raise MatrixFormatError(f"index ({i + 1}, {j + 1}) out of range", line=lineno)
        try:
            q = quantize(parts[2], scale)
        except MatrixFormatError as exc:
            raise MatrixFormatError(str(exc), line=lineno) from None
        count += 1
        if i == j:
            continue
        if (i, j) in seen:
            raise DuplicateEntryError(f"duplicate entry ({i + 1}, {j + 1})", line=lineno)
        seen[(i, j)] = (q, lineno)
        if symmetry == "symmetric" and (j, i) in seen:
            raise DuplicateEntryError(
                f"entry ({i + 1}, {j + 1}) repeats ({j + 1}, {i + 1}) under a symmetric header",
                line=lineno,
            )
    if count != nnz:
        raise MatrixFormatError(f"size line announces {nnz} entries, found {count}", line=idx + 1)

    pairs: dict[tuple[int, int], int] = {}
    for (i, j), (q, lineno) in seen.items():
        key = (i, j) if i < j else (j, i)
        if symmetry == "general":
            other = seen.get((j, i))
            if other is None:
                if q != 0:
                    raise AsymmetryError(f"line {lineno}: ({i + 1}, {j + 1}) has no mirror entry")
                continue
            if other[0] != q:
                raise AsymmetryError(
                    f"line {lineno}: ({i + 1}, {j + 1}) = {q} but ({j + 1}, {i + 1}) = {other[0]}"
                )
        pairs[key] = q
    complete = len(pairs) == n * (n - 1) // 2
    return n, pairs, complete


def _build(n: int, pairs: dict, complete: bool, scale: int, shift: bool) -> SimilarityMatrix:
    negatives = [(k, q) for k, q in pairs.items() if q < 0]
    if negatives and not shift:
        (i, j), q = min(negatives)
        raise NegativeEntryError(
            f"negative entry {format_weight(q, scale)} at ({i + 1}, {j + 1}); pass --shift to normalize"
        )
    if shift:
        values = list(pairs.values())
        if not complete:
            values.append(0)
        lam = -min(values) if values else 0
        if lam:
            full = {}
            for x in range(n):
                for y in range(x + 1, n):
                    full[(x, y)] = pairs.get((x, y), 0) + lam
            pairs = full
    return SimilarityMatrix.from_pairs(n, pairs, scale)


def load_matrix_market(data, scale: int | None = None, shift: bool = False) -> SimilarityMatrix:
    """Load a coordinate Matrix Market document (``bytes`` or ``str``)."""
    scale = resolve_scale(scale)
    n, pairs, complete = _read_matrix_market(data, scale)
    return _build(n, pairs, complete, scale, shift)


def _read_csv(data, scale: int) -> list[list[int]]:
    rows = []
    for lineno, rec in enumerate(csv.reader(io.StringIO(_text(data))), start=1):
        if not rec or all(not c.strip() for c in rec):
            continue
        try:
            rows.append([quantize(c, scale) for c in rec])
        except MatrixFormatError as exc:
            raise MatrixFormatError(str(exc), line=lineno) from None
    n = len(rows)
    for i, r in enumerate(rows):
        if len(r) != n:
            raise MatrixFormatError(f"row has {len(r)} entries, expected {n}", line=i + 1)
    return rows


def load_dense_csv(data, scale: int | None = None, shift: bool = False) -> SimilarityMatrix:
    """Load ``n`` lines of ``n`` comma-separated numbers; the diagonal is ignored."""
    scale = resolve_scale(scale)
    q = _read_csv(data, scale)
    n = len(q)
    pairs = {}
    for x in range(n):
        for y in range(x + 1, n):
            if q[x][y] != q[y][x]:
                raise AsymmetryError(
                    f"entries ({x + 1}, {y + 1}) and ({y + 1}, {x + 1}) differ after quantization"
                )
            pairs[(x, y)] = q[x][y]
    return _build(n, pairs, True, scale, shift)


def load_dissimilarity(data, scale: int | None = None) -> DissimilarityMatrix:
    """Load a dense CSV or Matrix Market dissimilarity; absent entries are 0."""
    scale = resolve_scale(scale)
    text = _text(data)
    if text.lstrip().lower().startswith("%%matrixmarket"):
        n, pairs, _ = _read_matrix_market(text, scale)
        dense = [[0] * n for _ in range(n)]
        for (i, j), q in pairs.items():
            dense[i][j] = dense[j][i] = q
    else:
        dense = _read_csv(text, scale)
    return DissimilarityMatrix._from_quantized(dense, scale)


def load(path: str, scale: int | None = None, shift: bool = False) -> SimilarityMatrix:
    """Load a file, choosing the format by content (Matrix Market header) or extension."""
    with open(path, "rb") as fh:
        data = fh.read()
    if data.lstrip().lower().startswith(b"%%matrixmarket"):
        return load_matrix_market(data, scale, shift)
    return load_dense_csv(data, scale, shift)


def dumps_matrix_market(A: SimilarityMatrix) -> str:
    """Serialize as ``coordinate real symmetric`` (lower triangle, 1-based)."""
    field = "integer" if A.scale == 1 else "real"
    entries = sorted((y, x, w) for x, y, w in A.edges())
    out = [f"%%MatrixMarket matrix coordinate {field} symmetric", f"{A.n} {A.n} {len(entries)}"]
    out.extend(f"{i + 1} {j + 1} {format_weight(w, A.scale)}" for i, j, w in entries)
    return "\n".join(out) + "\n"


def write_matrix_market(A: SimilarityMatrix, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_matrix_market(A))
