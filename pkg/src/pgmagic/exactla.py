"""Dense exact linear algebra over F_q and over the integers.

Matrices over F_q hold element indices (see :mod:`pgmagic.gf`) in a numpy
int64 array.  Elimination is deterministic: leftmost pivot column, topmost
nonzero row, no pivoting heuristics, so kernel bases are reproducible.
"""

from __future__ import annotations

import csv
import io
from typing import Iterable, Sequence

import numpy as np

from .bounds import DEFAULT_SNF_BITS, DEFAULT_SNF_SHAPE, BoundExceededError
from .gf import FieldSpec, field_build, prime_power


class MatrixFq:
    """A dense matrix over F_q.  Treat as immutable."""

    __slots__ = ("field", "data")

    def __init__(self, field: FieldSpec, data):
        arr = np.array(data, dtype=np.int64, copy=True)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1) if arr.size else arr.reshape(0, 0)
        if arr.ndim != 2:
            raise ValueError("matrix data must be two-dimensional")
        if arr.size and (arr.min() < 0 or arr.max() >= field.q):
            raise ValueError(f"entries must be element indices of F_{field.q}")
        arr.setflags(write=False)
        self.field = field
        self.data = arr

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "MatrixFq":
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "MatrixFq":
        return cls(field, np.eye(n, dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def entries(self) -> list[int]:
        return self.data.ravel().tolist()

    def __eq__(self, other):
        return (
            isinstance(other, MatrixFq)
            and self.field == other.field
            and self.data.shape == other.data.shape
            and bool(np.array_equal(self.data, other.data))
        )

    def __hash__(self):
        return hash((self.field, self.data.shape, self.data.tobytes()))

    def __repr__(self):
        return f"MatrixFq(F_{self.field.q}, {self.data.tolist()})"

    def transpose(self) -> "MatrixFq":
        return MatrixFq(self.field, self.data.T)

    def matvec(self, v) -> np.ndarray:
        """M @ v for a vector (or a cols x k block of column vectors)."""
        F = self.field
        v = np.asarray(v, dtype=np.int64)
        if v.shape[0] != self.cols:
            raise ValueError(f"vector length {v.shape[0]} does not match {self.cols} columns")
        if v.ndim == 1:
            return F.sum(F.mul(self.data, v[None, :]), axis=1)
        return F.sum(F.mul(self.data[:, :, None], v[None, :, :]), axis=1)

    def matmul(self, other: "MatrixFq") -> "MatrixFq":
        if self.field != other.field:
            raise ValueError("matrices over different fields")
        return MatrixFq(self.field, self.matvec(other.data).reshape(self.rows, other.cols))


class IntMatrix:
    """A dense matrix of arbitrary-precision integers."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: Sequence[Sequence[int]]):
        self.entries = [[int(x) for x in row] for row in rows]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.entries else 0
        if any(len(row) != self.cols for row in self.entries):
            raise ValueError("ragged rows")

    @classmethod
    def from_array(cls, arr) -> "IntMatrix":
        return cls(np.asarray(arr).tolist())

    def hstack(self, column: Sequence[int]) -> "IntMatrix":
        return IntMatrix([row + [int(c)] for row, c in zip(self.entries, column)])

    def __repr__(self):
        return f"IntMatrix({self.entries})"


# -- elimination over F_q ---------------------------------------------------

def _rref_dense(M: MatrixFq) -> tuple[MatrixFq, list[int]]:
    F = M.field
    A = M.data.copy()
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            A[[r, k]] = A[[k, r]]
        if A[r, c] != 1:
            A[r] = F.mul(F.inv(int(A[r, c])), A[r])
        col = A[:, c].copy()
        col[r] = 0
        mask = col != 0
        if mask.any():
            A[mask] = F.sub(A[mask], F.mul(col[mask][:, None], A[r][None, :]))
        pivots.append(c)
        r += 1
    return MatrixFq(F, A), pivots


def _rref_packed(M: MatrixFq) -> tuple[MatrixFq, list[int]]:
    """GF(2) elimination on rows packed into Python ints (bit j = column j)."""
    rows, cols = M.shape
    weights = 1 << np.arange(cols, dtype=object) if cols else np.zeros(0, dtype=object)
    packed = [int((row.astype(object) * weights).sum()) if cols else 0 for row in M.data]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        bit = 1 << c
        k = next((i for i in range(r, rows) if packed[i] & bit), None)
        if k is None:
            continue
        packed[r], packed[k] = packed[k], packed[r]
        pr = packed[r]
        for i in range(rows):
            if i != r and packed[i] & bit:
                packed[i] ^= pr
        pivots.append(c)
        r += 1
    out = np.array([[(x >> j) & 1 for j in range(cols)] for x in packed], dtype=np.int64)
    return MatrixFq(M.field, out.reshape(rows, cols)), pivots


def rref(M: MatrixFq, backend: str = "auto") -> tuple[MatrixFq, list[int]]:
    """Gauss-Jordan reduced row echelon form and its pivot columns.

    ``backend`` is ``"dense"``, ``"packed"`` (F_2 only) or ``"auto"``, which
    picks the packed backend for F_2.  Both give identical results.
    """
    if backend == "auto":
        backend = "packed" if M.field.q == 2 else "dense"
    if backend == "packed":
        if M.field.q != 2:
            raise ValueError("the packed backend only handles F_2")
        return _rref_packed(M)
    if backend != "dense":
        raise ValueError(f"unknown backend {backend!r}")
    return _rref_dense(M)


def rank(M: MatrixFq, backend: str = "auto") -> int:
    return len(rref(M, backend)[1])


def kernel_basis(M: MatrixFq, backend: str = "auto") -> list[np.ndarray]:
    """Standard free-variable basis of the right kernel {v : M v = 0}.

    The vector for free column j has a 1 in slot j, zeros in the other free
    slots, and minus the RREF column entries in the pivot slots.
    """
    R, pivots = rref(M, backend)
    F = M.field
    free = [j for j in range(M.cols) if j not in set(pivots)]
    basis = []
    for j in free:
        v = np.zeros(M.cols, dtype=np.int64)
        v[j] = 1
        for i, c in enumerate(pivots):
            v[c] = F.neg(int(R.data[i, j]))
        basis.append(v)
    return basis


def nullity(M: MatrixFq) -> int:
    return M.cols - rank(M)


def in_row_space(M: MatrixFq, v) -> bool:
    """True iff v is a linear combination of the rows of M (rank test)."""
    stacked = MatrixFq(M.field, np.vstack([M.data, np.asarray(v, dtype=np.int64)[None, :]]))
    return rank(stacked) == rank(M)


# -- Smith normal form -----------------------------------------------------

def _check_bits(row: list[int], max_bits: int) -> None:
    for x in row:
        if x.bit_length() > max_bits:
            raise BoundExceededError(
                f"intermediate entry exceeded {max_bits} bits during Smith reduction"
            )


def smith_normal_form(
    M: IntMatrix,
    max_shape: tuple[int, int] = DEFAULT_SNF_SHAPE,
    max_bits: int = DEFAULT_SNF_BITS,
) -> list[int]:
    """Nonzero invariant factors d_1 | d_2 | ... of an integer matrix."""
    if max(M.rows, M.cols) > max(max_shape) or min(M.rows, M.cols) > min(max_shape):
        raise BoundExceededError(f"{M.rows}x{M.cols} exceeds the SNF bound {max_shape}")
    A = [row[:] for row in M.entries]
    m, n = M.rows, M.cols
    invariants: list[int] = []

    def swap_cols(a, b):
        for row in A:
            row[a], row[b] = row[b], row[a]

    def move_smallest(t, cand):
        i, j = min(cand, key=lambda ij: abs(A[ij[0]][ij[1]]))
        A[t], A[i] = A[i], A[t]
        swap_cols(t, j)

    for t in range(min(m, n)):
        cand = [(i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not cand:
            break
        move_smallest(t, cand)
        while True:
            piv = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    f = A[i][t] // piv
                    A[i] = [a - f * b for a, b in zip(A[i], A[t])]
                    _check_bits(A[i], max_bits)
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, n):
                if A[t][j]:
                    f = A[t][j] // piv
                    for row in A:
                        row[j] -= f * row[t]
                    clean = clean and A[t][j] == 0
            if not clean:
                cand = [(i, t) for i in range(t, m) if A[i][t]]
                cand += [(t, j) for j in range(t + 1, n) if A[t][j]]
                move_smallest(t, cand)
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % piv),
                None,
            )
            if bad is None:
                break
            A[t] = [a + b for a, b in zip(A[t], A[bad])]
        invariants.append(abs(A[t][t]))
    return invariants


def kernel_count_mod_m(M: IntMatrix, m: int, **snf_kw) -> int:
    """Number of x in (Z/m)^cols with M x = 0 (mod m), read off the SNF."""
    if m < 2:
        raise ValueError("modulus must be at least 2")
    from math import gcd

    inv = smith_normal_form(M, **snf_kw)
    count = m ** (M.cols - len(inv))
    for d in inv:
        count *= gcd(d, m)
    return count


# -- import / export ---------------------------------------------------------

def dumps_text(M: MatrixFq) -> str:
    """Text format: a ``rows cols q`` header, then row-major entries."""
    lines = [f"{M.rows} {M.cols} {M.field.q}"]
    lines += [" ".join(str(x) for x in row) for row in M.data.tolist()]
    return "\n".join(lines) + "\n"


def loads_text(text: str, field: FieldSpec | None = None) -> MatrixFq:
    tokens = text.split()
    rows, cols, q = (int(x) for x in tokens[:3])
    if field is None:
        field = field_build(*prime_power(q))
    elif field.q != q:
        raise ValueError(f"header says q={q} but field has q={field.q}")
    body = [int(x) for x in tokens[3:]]
    if len(body) != rows * cols:
        raise ValueError(f"expected {rows * cols} entries, found {len(body)}")
    return MatrixFq(field, np.array(body, dtype=np.int64).reshape(rows, cols))


def dumps_csv(M: MatrixFq, row_labels: Iterable[str] | None = None,
              col_labels: Iterable[str] | None = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    labels = list(row_labels) if row_labels is not None else None
    if col_labels is not None:
        w.writerow(([""] if labels is not None else []) + list(col_labels))
    for i, row in enumerate(M.data.tolist()):
        w.writerow(([labels[i]] if labels is not None else []) + row)
    return buf.getvalue()


def loads_csv(text: str, field: FieldSpec, labelled: bool | None = None) -> MatrixFq:
    """Read CSV written by :func:`dumps_csv`.

    With ``labelled=None`` a leading legend row and column are detected by
    the empty top-left cell that :func:`dumps_csv` writes.
    """
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    if labelled is None:
        labelled = bool(rows) and rows[0][0] == ""
    if labelled:
        rows = [r[1:] for r in rows[1:]]
    data = [[int(x) for x in r] for r in rows]
    return MatrixFq(field, np.array(data, dtype=np.int64).reshape(len(data), -1))
