"""Dense quaternion matrices, the symplectic split and the companion matrix."""

from dataclasses import dataclass
import math

import numpy as np

from .errors import NonSquareError, ShapeMismatchError
from .quaternion import Quaternion, qconj_arrays, qmul_arrays


class QMatrix:
    """Immutable dense ``rows x cols`` quaternion matrix.

    ``data`` is a read-only float array of shape ``(rows, cols, 4)``; the
    last axis holds ``(w, x, y, z)`` of each entry.
    """

    __slots__ = ("data",)

    def __init__(self, data):
        arr = np.array(data, dtype=float, copy=True)
        if arr.ndim != 3 or arr.shape[2] != 4:
            raise ShapeMismatchError(f"QMatrix data must have shape (rows, cols, 4), got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("QMatrix entries must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    def __setattr__(self, name, value):
        raise AttributeError("QMatrix is immutable")

    @property
    def rows(self):
        return self.data.shape[0]

    @property
    def cols(self):
        return self.data.shape[1]

    @property
    def shape(self):
        return self.data.shape[:2]

    @property
    def is_square(self):
        return self.rows == self.cols

    def __getitem__(self, idx):
        r, c = idx
        return Quaternion.from_array(self.data[r, c])

    def __eq__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.data, other.data)

    def __hash__(self):
        return hash((self.shape, self.data.tobytes()))

    def __repr__(self):
        return f"QMatrix(rows={self.rows}, cols={self.cols})"

    def __add__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        if self.shape != other.shape:
            raise ShapeMismatchError(f"cannot add {self.shape} and {other.shape}")
        return QMatrix(self.data + other.data)

    def __sub__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        if self.shape != other.shape:
            raise ShapeMismatchError(f"cannot subtract {self.shape} and {other.shape}")
        return QMatrix(self.data - other.data)

    def __neg__(self):
        return QMatrix(-self.data)

    def __matmul__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        return q_matmul(self, other)

    def scale(self, r):
        """Multiply every entry by the real number ``r``."""
        return QMatrix(self.data * float(r))

    def frobenius(self):
        a = np.abs(self.data).ravel()
        top = float(np.max(a)) if a.size else 0.0
        if top == 0.0:
            return 0.0
        return top * float(math.sqrt(np.sum((a / top) ** 2)))

    def is_diagonal(self):
        if not self.is_square:
            return False
        off = self.data.copy()
        idx = np.arange(self.rows)
        off[idx, idx] = 0.0
        return not np.any(off)

    # constructors -----------------------------------------------------

    @classmethod
    def from_entries(cls, rows):
        """Build from a nested list of Quaternion / number / 4-sequence."""
        def conv(e):
            if isinstance(e, Quaternion):
                return e.to_array()
            if isinstance(e, (int, float)):
                return np.array([float(e), 0.0, 0.0, 0.0])
            if isinstance(e, complex):
                return np.array([e.real, e.imag, 0.0, 0.0])
            return np.asarray(e, dtype=float).reshape(4)

        rows = list(rows)
        if not rows:
            return cls(np.zeros((0, 0, 4)))
        return cls(np.array([[conv(e) for e in row] for row in rows], dtype=float))

    @classmethod
    def diag(cls, entries):
        entries = list(entries)
        n = len(entries)
        data = np.zeros((n, n, 4))
        for k, e in enumerate(entries):
            data[k, k] = QMatrix.from_entries([[e]]).data[0, 0]
        return cls(data)

    @classmethod
    def from_complex_pair(cls, a1, a2):
        """Merge ``A1 + A2 j`` back into a quaternion matrix."""
        a1 = np.asarray(a1, dtype=complex)
        a2 = np.asarray(a2, dtype=complex)
        if a1.shape != a2.shape or a1.ndim != 2:
            raise ShapeMismatchError(f"split parts have shapes {a1.shape} and {a2.shape}")
        return cls(np.stack([a1.real, a1.imag, a2.real, a2.imag], axis=-1))

    @classmethod
    def zeros(cls, rows, cols=None):
        return cls(np.zeros((rows, rows if cols is None else cols, 4)))

    # JSON ---------------------------------------------------------------

    def to_json(self):
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[[float(v) for v in self.data[r, c]] for c in range(self.cols)] for r in range(self.rows)],
        }

    @classmethod
    def from_json(cls, obj):
        if not isinstance(obj, dict):
            raise ValueError("QMatrix JSON must be an object with rows, cols, entries")
        try:
            rows, cols, entries = obj["rows"], obj["cols"], obj["entries"]
        except KeyError as exc:
            raise ValueError(f"QMatrix JSON is missing key {exc}") from None
        if not (isinstance(rows, int) and isinstance(cols, int)) or rows < 0 or cols < 0:
            raise ValueError("rows and cols must be nonnegative integers")
        if not isinstance(entries, list) or len(entries) != rows:
            raise ValueError(f"expected {rows} rows of entries")
        data = np.zeros((rows, cols, 4))
        for r, row in enumerate(entries):
            if not isinstance(row, list) or len(row) != cols:
                raise ValueError(f"row {r} must hold {cols} entries")
            for c, e in enumerate(row):
                data[r, c] = Quaternion.from_json(e).to_array()
        return cls(data)


@dataclass(frozen=True)
class SymplecticSplit:
    """``A = a1 + a2 j`` with complex ``a1``, ``a2``."""

    a1: np.ndarray
    a2: np.ndarray

    def merge(self):
        return QMatrix.from_complex_pair(self.a1, self.a2)


def _require_square(A):
    if not A.is_square:
        raise NonSquareError(f"expected a square matrix, got {A.rows}x{A.cols}")


def symplectic_split(A):
    """Split each entry ``w + x i + y j + z ij`` as ``(w + x i) + (y + z i) j``."""
    _require_square(A)
    d = A.data
    return SymplecticSplit(d[..., 0] + 1j * d[..., 1], d[..., 2] + 1j * d[..., 3])


def companion(A):
    """The ``2n x 2n`` complex matrix ``[[A1, A2], [-conj(A2), conj(A1)]]``."""
    s = symplectic_split(A)
    top = np.hstack([s.a1, s.a2])
    bottom = np.hstack([-np.conj(s.a2), np.conj(s.a1)])
    return np.vstack([top, bottom])


def q_matmul(A, B):
    """Matrix product with entry products taken as (row entry)(column entry)."""
    if A.cols != B.rows:
        raise ShapeMismatchError(f"cannot multiply {A.rows}x{A.cols} by {B.rows}x{B.cols}")
    a = [A.data[..., c] for c in range(4)]
    b = [B.data[..., c] for c in range(4)]
    w = a[0] @ b[0] - a[1] @ b[1] - a[2] @ b[2] - a[3] @ b[3]
    x = a[0] @ b[1] + a[1] @ b[0] + a[2] @ b[3] - a[3] @ b[2]
    y = a[0] @ b[2] - a[1] @ b[3] + a[2] @ b[0] + a[3] @ b[1]
    z = a[0] @ b[3] + a[1] @ b[2] - a[2] @ b[1] + a[3] @ b[0]
    return QMatrix(np.stack([w, x, y, z], axis=-1))


def q_adjoint(A):
    """Conjugate transpose."""
    return QMatrix(qconj_arrays(np.transpose(A.data, (1, 0, 2))))


def q_identity(n):
    data = np.zeros((n, n, 4))
    data[np.arange(n), np.arange(n), 0] = 1.0
    return QMatrix(data)


def q_power(A, k):
    _require_square(A)
    if k < 0:
        raise ValueError("negative matrix powers are not supported")
    result = q_identity(A.rows)
    for _ in range(k):
        result = q_matmul(result, A)
    return result


def q_matvec(A, v):
    """Apply ``A`` to a column vector ``v`` given as a ``(cols, 4)`` array."""
    v = np.asarray(v, dtype=float)
    if v.shape != (A.cols, 4):
        raise ShapeMismatchError(f"vector of shape {v.shape} does not fit {A.rows}x{A.cols}")
    return np.sum(qmul_arrays(A.data, v[np.newaxis, :, :]), axis=1)


def gram_from_rank_one_sum(xs, xps):
    """Matrix of ``sum_k x_k (x) x'_k`` with entries ``G[k, m] = <x'_k, x_m>``."""
    xs = np.asarray(xs, dtype=float)
    xps = np.asarray(xps, dtype=float)
    if xs.ndim != 3 or xs.shape[2] != 4 or xs.shape != xps.shape:
        raise ShapeMismatchError(f"vector lists have shapes {xs.shape} and {xps.shape}")
    # G[k, m] = sum_l conj(xp[k, l]) x[m, l]
    left = qconj_arrays(xps)[:, np.newaxis, :, :]
    right = xs[np.newaxis, :, :, :]
    return QMatrix(np.sum(qmul_arrays(left, right), axis=2))
