"""Complex dense linear algebra on ``numpy`` complex128 arrays."""

from dataclasses import dataclass
import math

import numpy as np

from ..errors import KOutOfRangeError, NoConvergenceError, NonFiniteResultError, NonSquareError
from . import _kernels

# Faddeev-LeVerrier is used up to this size; larger inputs expand the
# product over computed eigenvalues.
FADDEEV_LEVERRIER_MAX_N = 64


def as_cmatrix(M):
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim != 2:
        raise NonSquareError(f"expected a 2-D matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix entries must be finite")
    return M


def _square(M):
    M = as_cmatrix(M)
    if M.shape[0] != M.shape[1]:
        raise NonSquareError(f"expected a square matrix, got {M.shape[0]}x{M.shape[1]}")
    return M


@dataclass(frozen=True, eq=False)
class Polynomial:
    """Polynomial with ascending coefficients ``coeffs[k]`` of ``z**k``.

    Trailing exact zeros are dropped, so the leading coefficient is nonzero
    unless the polynomial is zero (``coeffs == [0]``).
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, copy=True)
        if c.dtype.kind not in "fc":
            c = c.astype(float)
        c = np.atleast_1d(c)
        if c.size == 0:
            c = np.zeros(1, dtype=c.dtype)
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else c[:1]
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __call__(self, z):
        acc = 0.0 * z
        for c in self.coeffs[::-1]:
            acc = acc * z + c
        return acc

    def __len__(self):
        return len(self.coeffs)

    def padded(self, length):
        out = np.zeros(max(length, len(self.coeffs)), dtype=self.coeffs.dtype)
        out[: len(self.coeffs)] = self.coeffs
        return out

    def to_json(self):
        c = self.coeffs.astype(complex)
        return {"coeffs": [[float(v.real), float(v.imag)] for v in c]}

    @classmethod
    def from_json(cls, obj):
        try:
            pairs = obj["coeffs"]
            coeffs = np.array([complex(float(re), float(im)) for re, im in pairs])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed Polynomial JSON: {exc}") from None
        if coeffs.size and not np.any(coeffs.imag):
            coeffs = coeffs.real
        return cls(coeffs)


def _order_spectrum(vals):
    vals = np.asarray(vals, dtype=np.complex128)
    idx = np.lexsort((np.angle(vals), -np.abs(vals)))
    return vals[idx]


def eigenvalues(M, tol=1e-12, max_iter=None, balance=True):
    """Eigenvalues of a complex square matrix, with multiplicity.

    Balancing, Householder reduction to Hessenberg form, then single-shift
    complex QR with Wilkinson shifts.  A subdiagonal entry is deflated when
    ``|h[k, k-1]| <= tol * (|h[k-1, k-1]| + |h[k, k]|)``.  ``max_iter``
    (default ``40 n``) bounds the total number of QR sweeps.

    The result is ordered by descending modulus, then ascending argument.
    """
    M = _square(M)
    n = M.shape[0]
    if n == 0:
        return np.zeros(0, dtype=np.complex128)
    if max_iter is None:
        max_iter = 40 * n
    h = np.array(M, dtype=np.complex128, order="C", copy=True)
    # power-of-two prescaling is exact and keeps the shift arithmetic in range
    top = float(np.max(np.abs(h)))
    shift = math.frexp(top)[1] if top > 0 and math.isfinite(top) else 0
    if shift:
        h = np.ldexp(h.real, -shift) + 1j * np.ldexp(h.imag, -shift)
    if balance:
        _kernels.balance(h)
    _kernels.hessenberg(h)
    w, hi = _kernels.hqr(h, float(tol), int(max_iter))
    if hi >= 0:
        raise NoConvergenceError(
            f"QR iteration did not converge within {max_iter} sweeps",
            found=list(w[hi + 1 :]),
            unresolved=(0, hi),
        )
    if shift:
        w = np.ldexp(w.real, shift) + 1j * np.ldexp(w.imag, shift)
    if not np.all(np.isfinite(w)):
        raise NonFiniteResultError("eigenvalues overflowed; rescale the input")
    return _order_spectrum(w)


def det(M):
    """Determinant by LU factorization with partial pivoting."""
    M = _square(M)
    if M.shape[0] == 0:
        return 1.0 + 0.0j
    return complex(_kernels.lu_det(np.array(M, dtype=np.complex128, copy=True)))


def power_sums(M, kmax):
    """``[trace(M), trace(M^2), ..., trace(M^kmax)]``."""
    M = _square(M)
    out = np.zeros(kmax, dtype=np.complex128)
    P = np.eye(M.shape[0], dtype=np.complex128)
    for m in range(kmax):
        P = P @ M
        out[m] = np.trace(P)
    return out


def newton_elementary(p):
    """Elementary symmetric values ``e_0..e_K`` from power sums ``p_1..p_K``.

    ``e_k = (1/k) sum_{m=1..k} (-1)^(m-1) e_{k-m} p_m``.
    """
    p = np.asarray(p)
    K = len(p)
    dtype = np.result_type(p.dtype, float)
    e = np.zeros(K + 1, dtype=dtype)
    e[0] = 1.0
    for k in range(1, K + 1):
        acc = 0.0
        sign = 1.0
        for m in range(1, k + 1):
            acc += sign * e[k - m] * p[m - 1]
            sign = -sign
        e[k] = acc / k
    return e


def exterior_traces(M, kmax=None):
    """``[tr ^0 M, ..., tr ^kmax M]`` via Newton's identities (``kmax <= n``)."""
    M = _square(M)
    n = M.shape[0]
    if kmax is None:
        kmax = n
    if not 0 <= kmax <= n:
        raise KOutOfRangeError(f"k must lie in [0, {n}], got {kmax}")
    return newton_elementary(power_sums(M, kmax))


def exterior_trace(M, k):
    """Trace of the ``k``-th exterior power, i.e. ``e_k`` of the spectrum."""
    M = _square(M)
    n = M.shape[0]
    if not isinstance(k, (int, np.integer)) or not 0 <= k <= n:
        raise KOutOfRangeError(f"k must be an integer in [0, {n}], got {k!r}")
    return complex(exterior_traces(M, int(k))[int(k)])


def expand_linear_factors(values):
    """Ascending coefficients of ``prod_k (1 - values[k] z)``."""
    coeffs = np.zeros(len(values) + 1, dtype=np.complex128)
    coeffs[0] = 1.0
    for j, v in enumerate(values):
        coeffs[1 : j + 2] = coeffs[1 : j + 2] - v * coeffs[0 : j + 1]
    return coeffs


def _faddeev_leverrier(M):
    n = M.shape[0]
    c = np.zeros(n + 1, dtype=np.complex128)
    c[n] = 1.0
    Mk = np.zeros_like(M)
    eye = np.eye(n, dtype=np.complex128)
    for k in range(1, n + 1):
        Mk = M @ Mk + c[n - k + 1] * eye
        c[n - k] = -np.trace(M @ Mk) / k
    return c


def char_poly(M, method=None):
    """Monic ``det(z I - M)`` as an ascending :class:`Polynomial`.

    ``method`` is ``"faddeev"`` or ``"eigen"``; by default Faddeev-LeVerrier
    is used for ``n <= 64`` and the eigenvalue product above that.
    """
    M = _square(M)
    n = M.shape[0]
    if method is None:
        method = "faddeev" if n <= FADDEEV_LEVERRIER_MAX_N else "eigen"
    if method == "faddeev":
        return Polynomial(_faddeev_leverrier(M))
    if method == "eigen":
        # det(zI - M) = z^n prod(1 - lambda/z): reverse of prod(1 - lambda z)
        return Polynomial(expand_linear_factors(eigenvalues(M))[::-1])
    raise ValueError(f"unknown char_poly method {method!r}")


def frobenius_norm(M):
    """Euclidean norm of all entries, scaled first so that squares cannot overflow."""
    a = np.abs(np.asarray(M)).ravel()
    top = float(np.max(a)) if a.size else 0.0
    if top == 0.0 or not math.isfinite(top):
        return top
    return top * float(math.sqrt(np.sum((a / top) ** 2)))


def scale_of(M):
    """``max(1, ||M||_F)``, the magnitude used by relative tolerances."""
    return max(1.0, frobenius_norm(M))
