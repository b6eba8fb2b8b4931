"""Quaternionic k-th order traces, Fredholm polynomials and standard eigenvalues.

Everything is computed on the complex companion matrix of ``A``: its
spectrum is closed under conjugation, and the k-th order trace is the k-th
elementary symmetric function of that spectrum.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .clinalg import Polynomial, eigenvalues, expand_linear_factors, newton_elementary, power_sums, scale_of
from .errors import (
    ImaginaryResidueTooLargeError,
    KOutOfRangeError,
    NonFiniteResultError,
    PairingFailureError,
)
from .qmatrix import _require_square, companion
from .quaternion import Quaternion, qmul_arrays, standard_representative

# Residual of a k-th order trace is accepted when below
# IMAG_RESIDUE_RTOL * C(2n, k) * scale**k.
IMAG_RESIDUE_RTOL = 1e-10
DEFAULT_PAIR_TOL = 1e-8


def trace1(A):
    """``2 Re sum(a_ll)``, which is also the trace of the companion matrix."""
    _require_square(A)
    return 2.0 * float(np.sum(np.diagonal(A.data[..., 0])))


def _complex_traces(A, kmax):
    chi = companion(A)
    # overflow shows up as inf/nan and is rejected by _realify
    with np.errstate(over="ignore", invalid="ignore"):
        return newton_elementary(power_sums(chi, kmax)), scale_of(chi)


def _realify(values, n, scale):
    out = np.empty(len(values))
    if not np.all(np.isfinite(values)):
        raise NonFiniteResultError("a higher-order trace overflowed the floating-point range")
    for k, v in enumerate(values):
        allowed = IMAG_RESIDUE_RTOL * max(1.0, math.comb(2 * n, min(k, 2 * n)) * scale ** k)
        if abs(v.imag) > allowed:
            raise ImaginaryResidueTooLargeError(
                f"k = {k}: imaginary residue {abs(v.imag):.3e} exceeds {allowed:.3e}"
            )
        out[k] = v.real
    return out


def trace_all(A, kmax=None):
    """``[T_0, ..., T_kmax]`` (default ``kmax = 2n``) as real numbers.

    Entries beyond ``2n`` are computed by continuing the same recurrence, so
    they vanish only up to rounding.
    """
    _require_square(A)
    n = A.rows
    if kmax is None:
        kmax = 2 * n
    if kmax < 0:
        raise KOutOfRangeError(f"k must be nonnegative, got {kmax}")
    e, scale = _complex_traces(A, kmax)
    return _realify(e, n, scale)


def trace_k(A, k):
    """The k-th order quaternionic trace of ``A``."""
    if not isinstance(k, (int, np.integer)) or k < 0:
        raise KOutOfRangeError(f"k must be a nonnegative integer, got {k!r}")
    return float(trace_all(A, int(k))[int(k)])


def fredholm_poly(A, sign="minus_zA", method="newton"):
    """``det_H(I - zA)`` (or ``I + zA``) as a real polynomial of degree <= 2n.

    ``method="newton"`` assembles the coefficients ``(-1)^k T_k`` from the
    traces.  ``method="eigen"`` multiplies out the linear factors over the
    companion spectrum instead, which keeps relative accuracy in tiny
    high-order coefficients.
    """
    _require_square(A)
    if sign not in ("minus_zA", "plus_zA"):
        raise ValueError(f"sign must be 'minus_zA' or 'plus_zA', got {sign!r}")
    s = -1.0 if sign == "minus_zA" else 1.0
    n = A.rows
    if method == "newton":
        tk = trace_all(A)
        return Polynomial(tk * s ** np.arange(2 * n + 1) + 0.0)
    if method == "eigen":
        mu = eigenvalues(companion(A)) if n else np.zeros(0)
        return Polynomial(expand_linear_factors(-s * mu).real + 0.0)
    raise ValueError(f"unknown method {method!r}")


def pair_conjugates(values, tol, scale):
    """Greedy conjugate matching of a conjugation-closed multiset.

    Returns one ``(upper, lower)`` pair per match.  Values with the largest
    imaginary part are matched first, each with the unused value nearest
    to its conjugate.
    """
    values = np.asarray(values, dtype=np.complex128)
    order = np.argsort(-np.abs(values.imag), kind="stable")
    used = np.zeros(len(values), dtype=bool)
    pairs = []
    for i in order:
        if used[i]:
            continue
        used[i] = True
        free = np.flatnonzero(~used)
        if free.size == 0:
            raise PairingFailureError(f"eigenvalue {values[i]} has no conjugate partner")
        dist = np.abs(values[free] - np.conj(values[i]))
        j = free[int(np.argmin(dist))]
        if dist.min() > tol * scale:
            raise PairingFailureError(
                f"eigenvalue {values[i]} has no conjugate partner within {tol * scale:.3e}"
                f" (nearest {values[j]})"
            )
        used[j] = True
        a, b = values[i], values[j]
        pairs.append((a, b) if a.imag >= b.imag else (b, a))
    return pairs


def _canonical(c):
    # same snapping rule as for quaternion standard representatives
    return standard_representative(Quaternion(c.real, abs(c.imag)))


def _sort_standard(vals):
    return sorted(vals, key=lambda c: (-math.hypot(c.real, c.imag), -c.real))


def standard_eigenvalues(A, tol=DEFAULT_PAIR_TOL):
    """One representative ``Re + i|Im|`` per conjugate pair of the companion spectrum.

    Sorted by descending modulus, then descending real part.
    """
    _require_square(A)
    if A.rows == 0:
        return []
    chi = companion(A)
    mu = eigenvalues(chi)
    reps = [_canonical(0.5 * u + 0.5 * np.conj(l)) for u, l in pair_conjugates(mu, tol, scale_of(chi))]
    return _sort_standard(reps)


def trace2_entrywise(A):
    """Second-order trace from the entries directly.

    ``sum |a_ll|^2 + 4 sum_{l<m} Re a_ll Re a_mm - 2 sum_{l<m} Re(a_ml a_lm)``
    """
    _require_square(A)
    d = A.data
    n = A.rows
    diag = d[np.arange(n), np.arange(n)]
    re = diag[:, 0]
    total = float(np.sum(diag * diag))
    prods = qmul_arrays(d, np.transpose(d, (1, 0, 2)))[..., 0]  # Re(a_lm a_ml)
    upper = np.triu_indices(n, 1)
    total += 4.0 * float(np.sum(np.outer(re, re)[upper]))
    total -= 2.0 * float(np.sum(prods[upper]))
    return total


def eigen_form_t2(lams):
    """``sum |l_k|^2 + 4 sum_{k<m} Re l_k Re l_m``."""
    lams = np.asarray(lams, dtype=complex)
    re = lams.real
    return float(np.sum(np.abs(lams) ** 2) + 2.0 * (np.sum(re) ** 2 - np.sum(re * re)))


def eigen_form_poly(lams):
    """Coefficients of ``prod_k (1 - 2 Re(l_k) z + |l_k|^2 z^2)``."""
    coeffs = np.ones(1)
    for lam in lams:
        coeffs = np.convolve(coeffs, [1.0, -2.0 * lam.real, abs(lam) ** 2])
    return coeffs


@dataclass(frozen=True)
class InvariantReport:
    """Traces, determinant polynomial, standard eigenvalues and residuals.

    Residuals are normalised by powers of ``scale = max(1, ||A||_F)``
    matching the homogeneity of each identity: ``r1`` by ``scale``, ``r2``
    and ``r4`` by ``scale**2`` and coefficient ``k`` of ``r3`` by
    ``scale**k``.
    """

    t1: float
    t2: float
    tk: np.ndarray
    det_poly: Polynomial
    std_eigenvalues: list
    residuals: dict
    scale: float = 1.0
    tol: float = field(default=1e-10, compare=False)

    @property
    def ok(self):
        return all(v < self.tol for v in self.residuals.values())

    def to_json(self):
        return {
            "t1": float(self.t1),
            "t2": float(self.t2),
            "tk": [float(v) for v in self.tk],
            "det_poly": self.det_poly.to_json(),
            "eigenvalues": [[float(c.real), float(c.imag)] for c in self.std_eigenvalues],
            "residuals": {k: float(v) for k, v in self.residuals.items()},
        }


def verify_identities(A, tol=1e-10, pair_tol=DEFAULT_PAIR_TOL):
    """Cross-check traces and the determinant against the standard eigenvalues."""
    _require_square(A)
    n = A.rows
    s = max(1.0, A.frobenius())
    tk = trace_all(A)
    t1 = trace1(A)
    t2 = float(tk[2]) if n else 0.0
    poly = Polynomial(tk * (-1.0) ** np.arange(2 * n + 1) + 0.0)
    lams = standard_eigenvalues(A, pair_tol)

    r1 = abs(t1 - 2.0 * sum(l.real for l in lams)) / s
    r2 = abs(t2 - eigen_form_t2(lams)) / s ** 2
    expected = eigen_form_poly(lams)
    got = poly.padded(len(expected))
    r3 = max((abs(got[k] - expected[k]) / s ** k for k in range(len(expected))), default=0.0)
    r4 = abs(trace2_entrywise(A) - t2) / s ** 2 if n else 0.0
    return InvariantReport(
        t1=t1,
        t2=t2,
        tk=tk,
        det_poly=poly,
        std_eigenvalues=lams,
        residuals={"r1": float(r1), "r2": float(r2), "r3": float(r3), "r4": float(r4)},
        scale=s,
        tol=tol,
    )
