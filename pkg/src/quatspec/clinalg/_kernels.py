"""Compiled inner loops for the complex dense solvers.

Everything here works in place on complex128 arrays and reports failure
through return codes; the Python wrappers in ``dense`` raise.
"""

import math

import numba
import numpy as np

_SAFE_MIN = 1e-300


@numba.njit(cache=True)
def balance(a):
    """Diagonal similarity scaling by powers of two (no permutations)."""
    n = a.shape[0]
    radix = 2.0
    sqrdx = radix * radix
    done = False
    sweeps = 0
    while not done and sweeps < 200:
        done = True
        sweeps += 1
        for i in range(n):
            r = 0.0
            c = 0.0
            for j in range(n):
                if j != i:
                    c += abs(a[j, i])
                    r += abs(a[i, j])
            if c != 0.0 and r != 0.0:
                g = r / radix
                f = 1.0
                s = c + r
                while c < g:
                    f *= radix
                    c *= sqrdx
                g = r * radix
                while c > g:
                    f /= radix
                    c /= sqrdx
                if (c + r) / f < 0.95 * s:
                    done = False
                    g = 1.0 / f
                    for j in range(n):
                        a[i, j] *= g
                    for j in range(n):
                        a[j, i] *= f


@numba.njit(cache=True)
def hessenberg(a):
    """Reduce ``a`` to upper Hessenberg form by Householder reflections."""
    n = a.shape[0]
    v = np.zeros(n, dtype=np.complex128)
    for k in range(n - 2):
        alpha = 0.0
        for i in range(k + 1, n):
            alpha += a[i, k].real ** 2 + a[i, k].imag ** 2
        alpha = math.sqrt(alpha)
        if alpha == 0.0:
            continue
        x0 = a[k + 1, k]
        ax0 = abs(x0)
        phase = x0 / ax0 if ax0 != 0.0 else 1.0 + 0.0j
        m = n - (k + 1)
        for i in range(m):
            v[i] = a[k + 1 + i, k]
        v[0] += phase * alpha
        vn2 = 0.0
        for i in range(m):
            vn2 += v[i].real ** 2 + v[i].imag ** 2
        if vn2 == 0.0:
            continue
        beta = 2.0 / vn2
        # left: rows k+1.., columns k..
        for j in range(k, n):
            dot = 0.0j
            for i in range(m):
                dot += np.conj(v[i]) * a[k + 1 + i, j]
            dot *= beta
            for i in range(m):
                a[k + 1 + i, j] -= v[i] * dot
        # right: all rows, columns k+1..
        for i in range(n):
            dot = 0.0j
            for jj in range(m):
                dot += a[i, k + 1 + jj] * v[jj]
            dot *= beta
            for jj in range(m):
                a[i, k + 1 + jj] -= dot * np.conj(v[jj])
        for i in range(k + 2, n):
            a[i, k] = 0.0


@numba.njit(cache=True)
def _givens(x, y):
    ax = abs(x)
    ay = abs(y)
    if ay == 0.0:
        return 1.0, 0.0j
    if ax == 0.0:
        return 0.0, np.conj(y) / ay
    r = math.hypot(ax, ay)
    return ax / r, (x / ax) * np.conj(y) / r


@numba.njit(cache=True)
def hqr(h, tol, max_iter):
    """Single-shift complex QR on an upper Hessenberg matrix.

    Returns ``(eigenvalues, hi)``; ``hi == -1`` on success, otherwise the
    upper index of the window left undeflated when the budget ran out
    (entries above ``hi`` in ``eigenvalues`` are final).
    """
    n = h.shape[0]
    w = np.zeros(n, dtype=np.complex128)
    hi = n - 1
    total = 0
    window_its = 0
    while hi >= 0:
        lo = hi
        while lo > 0:
            sub = abs(h[lo, lo - 1])
            tst = abs(h[lo - 1, lo - 1]) + abs(h[lo, lo])
            if tst == 0.0:
                if lo - 2 >= 0:
                    tst += abs(h[lo - 1, lo - 2])
                if lo + 1 <= n - 1:
                    tst += abs(h[lo + 1, lo])
            if sub <= _SAFE_MIN or sub <= tol * tst:
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            w[hi] = h[hi, hi]
            hi -= 1
            window_its = 0
            continue
        if total >= max_iter:
            return w, hi
        total += 1
        window_its += 1

        d = h[hi, hi]
        if window_its % 10 == 0:
            mu = d + 0.75 * abs(h[hi, hi - 1])
        else:
            a = h[hi - 1, hi - 1]
            b = h[hi - 1, hi]
            c = h[hi, hi - 1]
            half = 0.5 * (a - d)
            disc = np.sqrt(half * half + b * c)
            den = half + disc
            if abs(half - disc) > abs(den):
                den = half - disc
            if den == 0.0:
                mu = d
            else:
                mu = d - b * c / den

        x = h[lo, lo] - mu
        y = h[lo + 1, lo]
        for k in range(lo, hi):
            if k > lo:
                x = h[k, k - 1]
                y = h[k + 1, k - 1]
            cs, sn = _givens(x, y)
            start = k - 1 if k > lo else k
            for j in range(start, hi + 1):
                t1 = h[k, j]
                t2 = h[k + 1, j]
                h[k, j] = cs * t1 + sn * t2
                h[k + 1, j] = -np.conj(sn) * t1 + cs * t2
            if k > lo:
                h[k + 1, k - 1] = 0.0
            stop = k + 2 if k + 2 < hi else hi
            for i in range(lo, stop + 1):
                u = h[i, k]
                v = h[i, k + 1]
                h[i, k] = u * cs + v * np.conj(sn)
                h[i, k + 1] = -u * sn + v * cs
    return w, -1


@numba.njit(cache=True)
def lu_det(a):
    """Determinant by LU with partial pivoting; destroys ``a``."""
    n = a.shape[0]
    det = 1.0 + 0.0j
    for k in range(n):
        p = k
        best = abs(a[k, k])
        for i in range(k + 1, n):
            val = abs(a[i, k])
            if val > best:
                best = val
                p = i
        if best == 0.0:
            return 0.0j
        if p != k:
            for j in range(n):
                tmp = a[k, j]
                a[k, j] = a[p, j]
                a[p, j] = tmp
            det = -det
        piv = a[k, k]
        det *= piv
        for i in range(k + 1, n):
            f = a[i, k] / piv
            if f != 0.0:
                for j in range(k + 1, n):
                    a[i, j] -= f * a[k, j]
    return det
