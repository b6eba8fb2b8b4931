"""Finite-rank operators ``sum_k x_k (x) x'_k`` on H^d."""

import cmath
import math

import numpy as np

from ..errors import OutsideConvergenceDiskError, ShapeMismatchError
from ..invariants import trace1
from ..qmatrix import QMatrix, gram_from_rank_one_sum, q_matmul
from ..quaternion import qconj_arrays, qmul_arrays

# exp_sum_det stops adding power-sum terms once they fall below this
EXP_SUM_TERM_FLOOR = 1e-16


class FiniteRankOp:
    """The operator ``v -> sum_k x_k <x'_k, v>`` on column vectors in H^d.

    ``xs`` and ``xps`` are ``(n, d, 4)`` arrays: ``n`` vectors of ``H^d``.
    The functionals ``x'_k`` act through ``<w, v> = sum conj(w_l) v_l``.
    """

    __slots__ = ("xs", "xps")

    def __init__(self, xs, xps):
        xs = np.array(xs, dtype=float, copy=True)
        xps = np.array(xps, dtype=float, copy=True)
        if xs.ndim != 3 or xs.shape[2] != 4 or xs.shape != xps.shape:
            raise ShapeMismatchError(f"vector lists have shapes {xs.shape} and {xps.shape}")
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(xps))):
            raise ValueError("FiniteRankOp vectors must be finite")
        xs.setflags(write=False)
        xps.setflags(write=False)
        self.xs = xs
        self.xps = xps

    @property
    def rank(self):
        return self.xs.shape[0]

    @property
    def dim(self):
        return self.xs.shape[1]

    @classmethod
    def identity(cls, d):
        basis = np.zeros((d, d, 4))
        basis[np.arange(d), np.arange(d), 0] = 1.0
        return cls(basis, basis)

    def __repr__(self):
        return f"FiniteRankOp(rank={self.rank}, dim={self.dim})"

    def pairings(self, v):
        """``[<x'_k, v>]_k`` as an ``(n, 4)`` array."""
        v = np.asarray(v, dtype=float)
        if v.shape != (self.dim, 4):
            raise ShapeMismatchError(f"vector of shape {v.shape} does not lie in H^{self.dim}")
        return np.sum(qmul_arrays(qconj_arrays(self.xps), v[np.newaxis]), axis=1)

    def apply(self, v):
        c = self.pairings(v)
        return np.sum(qmul_arrays(self.xs, c[:, np.newaxis, :]), axis=0)

    def gram(self):
        """``G[k, m] = <x'_k, x_m>``: the action in the coordinates of the ``x_m``."""
        return gram_from_rank_one_sum(self.xs, self.xps)

    def to_matrix(self):
        """The ``d x d`` matrix with entries ``sum_k x_k[a] conj(x'_k[b])``."""
        left = self.xs[:, :, np.newaxis, :]
        right = qconj_arrays(self.xps)[:, np.newaxis, :, :]
        return QMatrix(np.sum(qmul_arrays(left, right), axis=0))

    def t1_power(self, k):
        """First-order trace of the ``k``-th power.

        The cyclic sum over ``m_1..m_k`` of ``<x'_m1, x_m2> ... <x'_mk, x_m1>``
        is the trace of ``G^k``, evaluated here by chained products.
        """
        if not isinstance(k, (int, np.integer)) or k < 1:
            raise ValueError(f"power must be a positive integer, got {k!r}")
        G = self.gram()
        if k == 1:
            return trace1(G)
        P = G
        for _ in range(k - 1):
            P = q_matmul(P, G)
        return trace1(P)

    def compose(self, other):
        """``self o other`` (``other`` acts first): ``sum_l (self x^o_l) (x) x'^o_l``."""
        if self.dim != other.dim:
            raise ShapeMismatchError(f"cannot compose operators on H^{self.dim} and H^{other.dim}")
        ys = np.stack([self.apply(x) for x in other.xs]) if other.rank else other.xs
        return FiniteRankOp(ys, other.xps)

    def exp_sum_det(self, z, m_max=200):
        """``det_H(I - zF)`` as ``exp(-sum_m t1(F^m) z^m / m)``.

        Needs ``|z| ||G||_F < 1`` where ``G`` is the Gram matrix; the Frobenius
        norm bounds the spectral radius.  Terms are added until one falls
        below ``1e-16`` or ``m_max`` is reached.
        """
        G = self.gram()
        radius = abs(z) * G.frobenius()
        if radius >= 1.0:
            raise OutsideConvergenceDiskError(
                f"|z| * ||G||_F = {radius:.6g} >= 1; the power series need not converge"
            )
        total = 0.0
        P = G
        zm = 1.0
        for m in range(1, m_max + 1):
            if m > 1:
                P = q_matmul(P, G)
            zm = zm * z
            term = trace1(P) * zm / m
            total = total + term
            if abs(term) < EXP_SUM_TERM_FLOOR:
                break
        if isinstance(z, complex):
            return cmath.exp(-total)
        return math.exp(-total)
