"""Exact characteristic polynomials over Gaussian rationals.

This is the reference the floating-point paths are checked against.  Every
finite float is a dyadic rational, so ``Fraction(x)`` captures it exactly;
the cofactor expansion then runs without rounding.
"""

from fractions import Fraction
from functools import lru_cache
import math

import numpy as np

from ..errors import NonRepresentableEntryError, NonSquareError, TooLargeError
from .dense import Polynomial

ORACLE_MAX_N = 8


class GaussianRational:
    """Exact ``re + im*i`` with Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=Fraction(0)):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def __add__(self, other):
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other):
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"


ZERO = GaussianRational(0)
ONE = GaussianRational(1)


def _exact_entry(v):
    if isinstance(v, GaussianRational):
        return v
    if isinstance(v, Fraction):
        return GaussianRational(v)
    if isinstance(v, tuple) and len(v) == 2:
        return GaussianRational(Fraction(v[0]), Fraction(v[1]))
    c = complex(v)
    if not (math.isfinite(c.real) and math.isfinite(c.imag)):
        raise NonRepresentableEntryError(f"entry {v!r} is not a finite number")
    return GaussianRational(Fraction(c.real), Fraction(c.imag))


def _poly_add(a, b):
    n = max(len(a), len(b))
    return [
        (a[k] if k < len(a) else ZERO) + (b[k] if k < len(b) else ZERO) for k in range(n)
    ]


def _poly_mul(a, b):
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == ZERO:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def exact_char_poly(entries):
    """Exact ascending coefficients of ``det(z I - M)`` as GaussianRationals.

    Laplace expansion along rows, memoised over the set of remaining columns.
    """
    rows = [list(r) for r in entries]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise NonSquareError("char_poly_oracle needs a square matrix")
    if n > ORACLE_MAX_N:
        raise TooLargeError(f"exact oracle is limited to n <= {ORACLE_MAX_N}, got {n}")
    m = [[_exact_entry(v) for v in r] for r in rows]

    def entry_poly(r, c):
        # entry (r, c) of zI - M, as an ascending polynomial in z
        if r == c:
            return [-m[r][c], ONE]
        return [-m[r][c]]

    @lru_cache(maxsize=None)
    def minor(row, cols):
        if row == n:
            return (ONE,)
        total = [ZERO]
        sign = 1
        for c in cols:
            sub = minor(row + 1, tuple(x for x in cols if x != c))
            term = _poly_mul(entry_poly(row, c), list(sub))
            if sign < 0:
                term = [-t for t in term]
            total = _poly_add(total, term)
            sign = -sign
        return tuple(total)

    coeffs = list(minor(0, tuple(range(n))))
    return coeffs + [ZERO] * (n + 1 - len(coeffs))


def char_poly_oracle(M):
    """Exact characteristic polynomial, rounded once to complex at the end."""
    if isinstance(M, np.ndarray):
        if M.ndim != 2:
            raise NonSquareError(f"expected a 2-D matrix, got shape {M.shape}")
        entries = M.tolist()
    else:
        entries = M
    exact = exact_char_poly(entries)
    return Polynomial(np.array([complex(c) for c in exact], dtype=np.complex128))
