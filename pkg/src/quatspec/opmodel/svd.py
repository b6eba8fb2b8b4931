"""Singular values, Schatten norms and the Weyl inequality for quaternion matrices."""

from typing import NamedTuple
import math

import numpy as np

from ..clinalg import eigenvalues, scale_of
from ..errors import InvalidExponentError, NegativeEigenvalueError, PairingFailureError
from ..invariants import DEFAULT_PAIR_TOL, standard_eigenvalues
from ..qmatrix import _require_square, companion, q_adjoint, q_matmul

# slack used by weyl_check and trace_norm_submultiplicative
INEQUALITY_SLACK = 1e-8


def singular_values(A, tol=DEFAULT_PAIR_TOL):
    """Square roots of the paired eigenvalues of the companion of ``A* A``.

    The companion of a Gram matrix is Hermitian positive semidefinite, and
    every eigenvalue appears twice; consecutive values of the sorted
    spectrum are paired and the pair mean is used.
    """
    _require_square(A)
    n = A.rows
    if n == 0:
        return np.zeros(0)
    chi = companion(q_matmul(q_adjoint(A), A))
    scale = scale_of(chi)
    mu = eigenvalues(chi)
    if np.max(np.abs(mu.imag)) > tol * scale:
        raise PairingFailureError(
            f"Gram companion has eigenvalue with imaginary part {np.max(np.abs(mu.imag)):.3e}"
        )
    vals = np.sort(mu.real)[::-1]
    out = np.empty(n)
    for k in range(n):
        a, b = vals[2 * k], vals[2 * k + 1]
        if abs(a - b) > tol * scale:
            raise PairingFailureError(f"Gram eigenvalues {a} and {b} do not form a pair")
        mean = 0.5 * (a + b)
        if mean < -tol * scale:
            raise NegativeEigenvalueError(f"Gram eigenvalue {mean} is negative")
        out[k] = math.sqrt(max(mean, 0.0))
    return out


def lp_norm(values, p):
    """``(sum |v|^p)^(1/p)``; ``p = inf`` gives the maximum."""
    a = np.abs(np.asarray(values, dtype=complex))
    if a.size == 0:
        return 0.0
    if math.isinf(p):
        return float(a.max())
    top = a.max()
    if top == 0.0:
        return 0.0
    return float(top * np.sum((a / top) ** p) ** (1.0 / p))


def schatten_norm(A, p, tol=DEFAULT_PAIR_TOL):
    if not (p > 0):
        raise InvalidExponentError(f"Schatten exponent must be positive, got {p}")
    return lp_norm(singular_values(A, tol), p)


class WeylCheck(NamedTuple):
    lhs: float
    rhs: float
    ok: bool


def weyl_check(A, p):
    """Compare the l^p norm of the standard eigenvalues with the Schatten-p norm."""
    if not (p >= 1):
        raise InvalidExponentError(f"Weyl inequality needs p >= 1, got {p}")
    lhs = lp_norm(standard_eigenvalues(A), p)
    rhs = schatten_norm(A, p)
    scale = max(1.0, A.frobenius())
    return WeylCheck(lhs, rhs, bool(lhs <= rhs + INEQUALITY_SLACK * scale))


def trace_norm(A):
    return schatten_norm(A, 1)


def trace_norm_submultiplicative(A, B):
    """``(||AB||_1, ||A||_1 ||B||_1, ok)`` with relative slack ``1e-8``."""
    lhs = trace_norm(q_matmul(A, B))
    rhs = trace_norm(A) * trace_norm(B)
    return WeylCheck(lhs, rhs, bool(lhs <= rhs * (1.0 + INEQUALITY_SLACK)))
