"""Seeded random inputs for sweeps and tests.

Each trial gets its own Philox stream keyed by ``(seed, trial)``, so a
sweep gives the same matrices no matter how trials are scheduled.
"""

import numpy as np

from .qmatrix import QMatrix, q_adjoint, q_matmul
from .quaternion import qconj_arrays, qmul_arrays


def trial_rng(seed, trial=0, *extra):
    """Independent generator for ``(seed, trial, *extra)``."""
    key = [int(seed) & 0xFFFFFFFFFFFFFFFF, int(trial), *(int(e) for e in extra)]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(key)))


def random_qmatrix(rng, n, m=None, normalize=False):
    """Components i.i.d. uniform on [-1, 1]; ``normalize`` divides by ``2n``."""
    m = n if m is None else m
    data = rng.uniform(-1.0, 1.0, size=(n, m, 4))
    if normalize:
        data = data / (2.0 * n)
    return QMatrix(data)


def random_qvectors(rng, count, dim, scale=1.0):
    return scale * rng.uniform(-1.0, 1.0, size=(count, dim, 4))


def dyadic_qmatrix(rng, n, bits=4):
    """Random matrix whose components are multiples of ``2**-bits`` in [-1, 1]."""
    k = 2 ** bits
    return QMatrix(rng.integers(-k, k + 1, size=(n, n, 4)) / k)


def _column_pairing(u, v):
    # <u, v> for column vectors stored as (n, 4)
    return np.sum(qmul_arrays(qconj_arrays(u), v), axis=0)


def random_unitary(rng, n):
    """Quaternionic unitary from Gram-Schmidt on a random square matrix.

    Columns are orthonormalised with right scalars, ``u_k -= u_j <u_j, u_k>``.
    """
    cols = rng.standard_normal(size=(n, n, 4))
    q = np.zeros_like(cols)
    for k in range(n):
        v = cols[:, k, :].copy()
        for _ in range(2):
            for j in range(k):
                c = _column_pairing(q[:, j, :], v)
                v = v - qmul_arrays(q[:, j, :], c)
        v = v / np.sqrt(np.sum(v * v))
        q[:, k, :] = v
    return QMatrix(q)


def well_conditioned_pair(rng, n, max_cond=10.0):
    """``(S, S_inv)`` with singular values in ``[1, max_cond]``.

    ``S = U diag(s) V*`` for unitaries ``U, V``, so the inverse is exact up
    to rounding: ``V diag(1/s) U*``.
    """
    u = random_unitary(rng, n)
    v = random_unitary(rng, n)
    s = rng.uniform(1.0, max_cond, size=n)
    d = np.zeros((n, n, 4))
    d_inv = np.zeros((n, n, 4))
    d[np.arange(n), np.arange(n), 0] = s
    d_inv[np.arange(n), np.arange(n), 0] = 1.0 / s
    S = q_matmul(q_matmul(u, QMatrix(d)), q_adjoint(v))
    S_inv = q_matmul(q_matmul(v, QMatrix(d_inv)), q_adjoint(u))
    return S, S_inv
