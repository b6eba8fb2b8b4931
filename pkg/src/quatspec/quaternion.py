"""Quaternion scalars and componentwise quaternion arithmetic on arrays.

A quaternion ``w + x i + y j + z ij`` is stored as the four floats
``(w, x, y, z)``.  Arrays of quaternions carry the components on their last
axis, so an ``H^d`` vector is a ``(d, 4)`` array and a matrix is
``(rows, cols, 4)``.

Vector spaces are right H-modules: scalars act on vectors from the right.
The dual of ``H^d`` is represented by vectors ``w`` paired through
``<w, v> = sum(conj(w_l) v_l)``; its (left) scalar action is
:func:`dual_left_mul`.
"""

from dataclasses import dataclass
import math

import numpy as np


def qmul_arrays(a, b):
    """Hamilton product of broadcastable arrays with a trailing axis of 4."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a0, a1, a2, a3 = np.moveaxis(a, -1, 0)
    b0, b1, b2, b3 = np.moveaxis(b, -1, 0)
    return np.stack(
        [
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ],
        axis=-1,
    )


def qconj_arrays(a):
    out = np.array(a, dtype=float, copy=True)
    out[..., 1:] *= -1.0
    return out


def qabs2_arrays(a):
    a = np.asarray(a, dtype=float)
    return np.sum(a * a, axis=-1)


@dataclass(frozen=True)
class Quaternion:
    """Immutable quaternion ``w + x i + y j + z ij``."""

    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __post_init__(self):
        for name in ("w", "x", "y", "z"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"quaternion component {name} is not finite: {value}")
            object.__setattr__(self, name, value)

    @classmethod
    def from_array(cls, arr):
        w, x, y, z = (float(v) for v in np.asarray(arr, dtype=float).reshape(4))
        return cls(w, x, y, z)

    @classmethod
    def from_complex(cls, c):
        """Embed a complex number ``a + bi`` as the quaternion ``a + b i``."""
        c = complex(c)
        return cls(c.real, c.imag, 0.0, 0.0)

    def to_array(self):
        return np.array([self.w, self.x, self.y, self.z])

    def to_json(self):
        return [self.w, self.x, self.y, self.z]

    @classmethod
    def from_json(cls, obj):
        if not isinstance(obj, (list, tuple)) or len(obj) != 4:
            raise ValueError(f"quaternion must be a 4-array [w, x, y, z], got {obj!r}")
        if any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in obj):
            raise ValueError(f"quaternion components must be numbers, got {obj!r}")
        return cls(*obj)

    # arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Quaternion):
            return other
        if isinstance(other, (int, float)):
            return Quaternion(float(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Quaternion(self.w + other.w, self.x + other.x, self.y + other.y, self.z + other.z)

    __radd__ = __add__

    def __neg__(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return q_mul(self, other)

    def __rmul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return q_mul(other, self)

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(self.w / other, self.x / other, self.y / other, self.z / other)
        return NotImplemented

    def __abs__(self):
        return q_abs(self)

    def conj(self):
        return q_conj(self)

    def inverse(self):
        n2 = self.w ** 2 + self.x ** 2 + self.y ** 2 + self.z ** 2
        if n2 == 0.0:
            raise ZeroDivisionError("zero quaternion has no inverse")
        return q_conj(self) / n2

    @property
    def real(self):
        return self.w

    def __repr__(self):
        return f"Quaternion({self.w!r}, {self.x!r}, {self.y!r}, {self.z!r})"


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
IJ = Quaternion(0.0, 0.0, 0.0, 1.0)
UNITS = (ONE, I, J, IJ)


def q_mul(a, b):
    """Hamilton product ``a b`` with ``i^2 = j^2 = (ij)^2 = -1``."""
    return Quaternion(
        a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
        a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
    )


def q_conj(a):
    return Quaternion(a.w, -a.x, -a.y, -a.z)


def q_re(a):
    return a.w


def q_im(a):
    return Quaternion(0.0, a.x, a.y, a.z)


def q_abs(a):
    return math.hypot(a.w, a.x, a.y, a.z)


def similarity_class(a):
    """The similarity invariants ``(Re a, |Im a|)`` of ``a``."""
    return a.w, math.hypot(a.x, a.y, a.z)


def standard_representative(a):
    """Complex representative ``Re a + i|Im a|`` of the class of ``a``.

    The imaginary part is snapped to exactly zero when it is below
    ``1e-14 * max(1, |a|)`` so that real eigenvalues come out real.
    """
    re, im = similarity_class(a)
    # 1e-14 * max(1, |a|), scaled first so that |a| cannot overflow
    if im < max(1e-14, math.hypot(1e-14 * re, 1e-14 * im)):
        im = 0.0
    return complex(re, im)


def dual_left_mul(q, w):
    """Left scalar action on a dual vector: ``<q.w, v> = q <w, v>``."""
    return qmul_arrays(np.asarray(w, dtype=float), q_conj(q).to_array())


def pairing(w, v):
    """``<w, v> = sum_l conj(w_l) v_l`` for H^d vectors as ``(d, 4)`` arrays."""
    w = np.asarray(w, dtype=float)
    v = np.asarray(v, dtype=float)
    if w.shape != v.shape:
        raise ValueError(f"pairing of vectors with shapes {w.shape} and {v.shape}")
    return Quaternion.from_array(np.sum(qmul_arrays(qconj_arrays(w), v), axis=0))


def lift_balanced_form(phi):
    """Lift a balanced real bilinear form to a two-sided H-linear form.

    ``phi(x, xp)`` takes an ``H^d`` vector and a dual vector and returns a
    float.  The returned ``psi(xp, x)`` is the quaternion-valued form whose
    real part is ``phi``::

        psi(xp, x) = phi(x, xp) - phi(x i, xp) i - phi(x j, xp) j - phi(x ij, xp) ij
    """

    def psi(xp, x):
        x = np.asarray(x, dtype=float)
        coeffs = [float(phi(x, xp))]
        for unit in UNITS[1:]:
            coeffs.append(-float(phi(qmul_arrays(x, unit.to_array()), xp)))
        return Quaternion(*coeffs)

    return psi
