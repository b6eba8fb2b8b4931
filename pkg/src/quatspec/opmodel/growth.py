"""Order of an entire function read off its Taylor coefficients."""

import math

import numpy as np

from ..errors import AllCoefficientsZeroError, EmptyWindowError, InvalidExponentError
from ..invariants import eigen_form_poly, fredholm_poly
from .models import DiagonalModel

# fewer usable coefficients than this and the log-decay fit is not attempted
MIN_FIT_POINTS = 3
MIN_DECAY_POINTS = 4


def _window(coeffs, n_min):
    a = np.abs(np.asarray(coeffs, dtype=complex))
    if a.size <= 1 or not np.any(a[1:]):
        raise AllCoefficientsZeroError("all coefficients beyond the constant term vanish")
    if a.size <= n_min:
        raise EmptyWindowError(f"need more than n_min = {n_min} coefficients, got {a.size}")
    n = np.arange(n_min, a.size)
    return n, a[n_min:]


def order_estimate(coeffs, n_min=2, method="regression"):
    """Estimate the order from ``log(1/|a_n|)`` over ``n_min <= n < len``.

    ``method="regression"`` fits ``log(1/|a_n|) = alpha n log n + beta n + c``
    by least squares and returns ``1/alpha``; the linear term absorbs the
    type of the function, which otherwise biases short windows upward.
    ``method="envelope"`` returns ``max n log n / log(1/|a_n|)``.

    Only coefficients with ``0 < |a_n| < 1`` are used.  When fewer than
    three are left the envelope is used; with none left (a polynomial whose
    tail vanishes) the order is 0.
    """
    if n_min < 2:
        raise ValueError("n_min must be at least 2")
    n, a = _window(coeffs, n_min)
    if not np.any(a):
        raise AllCoefficientsZeroError(f"no nonzero coefficient with index >= {n_min}")
    keep = (a > 0) & (a < 1)
    n, y = n[keep].astype(float), -np.log(a[keep])
    if n.size == 0:
        return 0.0
    nlogn = n * np.log(n)
    if method == "envelope" or n.size < MIN_FIT_POINTS:
        return float(np.max(nlogn / y))
    if method != "regression":
        raise ValueError(f"unknown method {method!r}")
    design = np.column_stack([nlogn, n, np.ones_like(n)])
    alpha = np.linalg.lstsq(design, y, rcond=None)[0][0]
    # a slope lost in rounding counts as no super-exponential decay at all
    if alpha <= 1e-12 * np.max(np.abs(y)) / nlogn[-1]:
        return math.inf
    return float(1.0 / alpha)


def coefficient_decay_check(coeffs, p, q):
    """Whether ``|a_n| n^(n/q)`` stays bounded over the window.

    With ``b_n = log|a_n| + (n/q) log n`` over the nonzero coefficients
    ``n >= 1``, the check passes when the largest ``b_n`` in the second half
    of the window does not exceed the largest in the first half.
    """
    if not (q > p > 0):
        raise InvalidExponentError(f"need q > p > 0, got p = {p}, q = {q}")
    a = np.abs(np.asarray(coeffs, dtype=complex))
    n = np.arange(a.size)
    keep = (n >= 1) & (a > 0)
    n, a = n[keep].astype(float), a[keep]
    if n.size < MIN_DECAY_POINTS:
        raise EmptyWindowError(f"need at least {MIN_DECAY_POINTS} nonzero coefficients, got {n.size}")
    b = np.log(a) + (n / q) * np.log(n)
    half = n.size // 2
    return bool(np.max(b[half:]) <= np.max(b[:half]))


def det_coefficients(model, N=32):
    """Coefficients of ``det_H(I + z T_N)``, a polynomial of degree ``2N``."""
    if isinstance(model, DiagonalModel):
        lam = model.diagonal(N)
        return eigen_form_poly(-lam)
    return fredholm_poly(model.truncation(N), sign="plus_zA", method="eigen").padded(2 * N + 1)


def order_bound(model):
    """Order predicted for the determinant: ``p`` for diagonal models,
    ``(1/p - 1/2)^-1`` (with ``p`` the harmonic combination of the kernel
    exponents) for kernel models."""
    if isinstance(model, DiagonalModel):
        return model.p
    inv = 0.5 * (1.0 / model.p + 1.0 / model.q)
    return 1.0 / (inv - 0.5) if inv > 0.5 else math.inf
