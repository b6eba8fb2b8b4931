"""Infinite quaternionic operators given by generators, and their truncations.

Two kinds of model are supported:

* ``DiagonalModel``: ``T = diag(lambda_1, lambda_2, ...)`` with complex
  ``lambda_k`` embedded as quaternions ``Re + Im i``.
* ``KernelModel``: ``T_mn = mu_m d_mn nu_n`` with real sequences ``mu``,
  ``nu`` and a bounded quaternion entry generator ``d``.

Indices are 1-based throughout.  Truncations take the principal block on
the first ``N`` indices of an enumeration of the basis.
"""

from dataclasses import dataclass
from typing import NamedTuple
import math

import numpy as np

from ..clinalg import det, eigenvalues
from ..errors import InvalidExponentError, NotConvergedError
from ..qmatrix import QMatrix, companion, q_matmul
from ..quaternion import Quaternion
from .svd import lp_norm, schatten_norm

DEFAULT_TOL = 1e-10
DEFAULT_N_MAX = 4096
# dense kernel truncations beyond this size are not attempted
KERNEL_N_CAP = 1024
# closed-form products stop after this many factors
CLOSED_FORM_MAX_TERMS = 2 ** 20

ENUMERATIONS = ("natural", "offset_swap")


def enumeration_indices(N, enumeration="natural"):
    """The first ``N`` basis indices (1-based) of an enumeration.

    ``"offset_swap"`` visits ``1, 3, 2, 5, 4, 7, 6, ...``.
    """
    if enumeration == "natural":
        return np.arange(1, N + 1)
    if enumeration == "offset_swap":
        pos = np.arange(N)
        idx = np.where(pos % 2 == 1, pos + 2, pos)
        idx[0] = 1
        return idx
    raise ValueError(f"unknown enumeration {enumeration!r}; expected one of {ENUMERATIONS}")


# ---------------------------------------------------------------------------
# sequence generators


def _number_from_json(v):
    if isinstance(v, bool):
        raise ValueError(f"expected a number, got {v!r}")
    if isinstance(v, (int, float)):
        return complex(float(v), 0.0)
    if isinstance(v, list) and len(v) == 2 and all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in v):
        return complex(float(v[0]), float(v[1]))
    raise ValueError(f"expected a number or [re, im], got {v!r}")


@dataclass(frozen=True)
class SequenceSpec:
    """Sequence ``s_1, s_2, ...``.

    ``geometric``: ``param**k``; ``power``: ``k**-param``; ``finite``: the
    listed ``values`` followed by zeros; ``zero``: all zeros.
    """

    type: str
    param: float = 0.0
    values: tuple = ()

    def __post_init__(self):
        if self.type not in ("geometric", "power", "finite", "zero"):
            raise ValueError(f"unknown sequence type {self.type!r}")
        if self.type in ("geometric", "power") and not math.isfinite(self.param):
            raise ValueError("sequence parameter must be finite")
        object.__setattr__(self, "values", tuple(complex(v) for v in self.values))

    @classmethod
    def geometric(cls, r):
        return cls("geometric", float(r))

    @classmethod
    def power(cls, s):
        return cls("power", float(s))

    @classmethod
    def finite(cls, values):
        return cls("finite", 0.0, tuple(values))

    @classmethod
    def zero(cls):
        return cls("zero")

    @property
    def support(self):
        """Number of possibly nonzero terms (``None`` when infinite)."""
        if self.type == "zero":
            return 0
        if self.type == "finite":
            return len(self.values)
        if self.type == "geometric" and self.param == 0.0:
            return 0
        return None

    @property
    def is_real(self):
        return all(v.imag == 0.0 for v in self.values)

    def at(self, idx):
        """Terms at the 1-based indices ``idx`` as a complex array."""
        idx = np.asarray(idx, dtype=np.int64)
        if self.type == "geometric":
            return np.asarray(float(self.param) ** idx.astype(float), dtype=complex)
        if self.type == "power":
            return np.asarray(idx.astype(float) ** (-float(self.param)), dtype=complex)
        if self.type == "finite":
            vals = np.array(self.values + (0j,), dtype=complex)
            return vals[np.where(idx <= len(self.values), idx - 1, len(self.values))]
        return np.zeros(idx.shape, dtype=complex)

    def head(self, N):
        return self.at(np.arange(1, N + 1))

    def lp_norm(self, p, N):
        """l^p norm of the first ``N`` terms."""
        return lp_norm(self.head(N), p)

    def to_json(self):
        if self.type in ("geometric", "power"):
            return {"type": self.type, "param": self.param}
        if self.type == "finite":
            vals = [v.real if v.imag == 0.0 else [v.real, v.imag] for v in self.values]
            return {"type": "finite", "values": vals}
        return {"type": "zero"}

    @classmethod
    def from_json(cls, obj):
        if not isinstance(obj, dict) or "type" not in obj:
            raise ValueError(f"sequence must be an object with a 'type', got {obj!r}")
        kind = obj["type"]
        if kind in ("geometric", "power"):
            param = obj.get("param")
            if isinstance(param, bool) or not isinstance(param, (int, float)):
                raise ValueError(f"{kind} sequence needs a numeric 'param'")
            return cls(kind, float(param))
        if kind == "finite":
            vals = obj.get("values")
            if not isinstance(vals, list):
                raise ValueError("finite sequence needs a 'values' list")
            return cls.finite([_number_from_json(v) for v in vals])
        if kind == "zero":
            return cls.zero()
        raise ValueError(f"unknown sequence type {kind!r}")


# ---------------------------------------------------------------------------
# bounded kernel entries

_MASK = np.uint64(0xFFFFFFFFFFFFFFFF)


def _splitmix64(x):
    with np.errstate(over="ignore"):
        x = (x + np.uint64(0x9E3779B97F4A7C15)) & _MASK
        x = ((x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)) & _MASK
        x = ((x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)) & _MASK
        return x ^ (x >> np.uint64(31))


def hashed_uniform(seed, *keys):
    """Counter-based uniform [0, 1) values keyed by ``seed`` and broadcast integer arrays."""
    h = _splitmix64(np.uint64(int(seed) & 0xFFFFFFFFFFFFFFFF))
    for k in keys:
        h = _splitmix64(h ^ np.asarray(k, dtype=np.uint64))
    return (h >> np.uint64(11)).astype(float) * 2.0 ** -53


@dataclass(frozen=True)
class EntrySpec:
    """Bounded entries ``d_mn``.

    ``seeded_bounded`` draws each component uniformly from
    ``[-bound/2, bound/2]`` by hashing ``(seed, m, n, component)``, so
    ``|d_mn| <= bound`` and every entry is fixed independently of the
    truncation it appears in.  ``constant`` repeats one quaternion and
    ``zero`` is identically zero.
    """

    type: str
    seed: int = 0
    bound_value: float = 1.0
    value: Quaternion = Quaternion(0.0)

    def __post_init__(self):
        if self.type not in ("seeded_bounded", "constant", "zero"):
            raise ValueError(f"unknown entry generator {self.type!r}")
        if self.type == "seeded_bounded" and not (self.bound_value >= 0 and math.isfinite(self.bound_value)):
            raise ValueError("entry bound must be a finite nonnegative number")

    @property
    def bound(self):
        if self.type == "seeded_bounded":
            return float(self.bound_value)
        if self.type == "constant":
            return abs(self.value)
        return 0.0

    def block(self, rows, cols):
        """Entries for 1-based index arrays, shape ``(len(rows), len(cols), 4)``."""
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        shape = (len(rows), len(cols), 4)
        if self.type == "zero":
            return np.zeros(shape)
        if self.type == "constant":
            return np.broadcast_to(self.value.to_array(), shape).copy()
        u = hashed_uniform(
            self.seed,
            rows[:, None, None],
            cols[None, :, None],
            np.arange(4)[None, None, :],
        )
        return self.bound_value * (u - 0.5)

    def to_json(self):
        if self.type == "seeded_bounded":
            return {"type": "seeded_bounded", "seed": self.seed, "bound": self.bound_value}
        if self.type == "constant":
            return {"type": "constant", "value": self.value.to_json()}
        return {"type": "zero"}

    @classmethod
    def from_json(cls, obj):
        if not isinstance(obj, dict) or "type" not in obj:
            raise ValueError(f"entry generator must be an object with a 'type', got {obj!r}")
        kind = obj["type"]
        if kind == "seeded_bounded":
            seed, bound = obj.get("seed", 0), obj.get("bound")
            if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
                raise ValueError("seed must be a nonnegative integer")
            if isinstance(bound, bool) or not isinstance(bound, (int, float)):
                raise ValueError("seeded_bounded entries need a numeric 'bound'")
            return cls("seeded_bounded", seed=seed, bound_value=float(bound))
        if kind == "constant":
            v = obj.get("value", 1.0)
            q = Quaternion(float(v)) if isinstance(v, (int, float)) and not isinstance(v, bool) else Quaternion.from_json(v)
            return cls("constant", value=q)
        if kind == "zero":
            return cls("zero")
        raise ValueError(f"unknown entry generator {kind!r}")


# ---------------------------------------------------------------------------
# models


@dataclass(frozen=True)
class DiagonalModel:
    """``diag(lambda_k)`` with declared summability exponent ``p``."""

    lam: SequenceSpec
    p: float = 1.0

    kind = "diagonal"

    def diagonal(self, N, enumeration="natural"):
        return self.lam.at(enumeration_indices(N, enumeration))

    def truncation(self, N, enumeration="natural"):
        vals = self.diagonal(N, enumeration)
        data = np.zeros((N, N, 4))
        data[np.arange(N), np.arange(N), 0] = vals.real
        data[np.arange(N), np.arange(N), 1] = vals.imag
        return QMatrix(data)

    def det_truncation(self, N, z, enumeration="natural"):
        """``det(I + z chi(T_N))`` from the 2x2 diagonal blocks of the companion."""
        vals = self.diagonal(N, enumeration)
        # each 1x1 block lambda has companion diag(lambda, conj(lambda))
        return complex(np.prod((1.0 + z * vals) * (1.0 + z * np.conj(vals))))

    def trace1_truncation(self, N, enumeration="natural"):
        return 2.0 * float(np.sum(self.diagonal(N, enumeration).real))

    def trace1_of_square_truncation(self, N, enumeration="natural"):
        vals = self.diagonal(N, enumeration)
        return 2.0 * float(np.sum((vals * vals).real))

    def closed_form_det(self, z):
        """``prod_k (1 + 2 Re(lambda_k) z + |lambda_k|^2 z^2)`` from the sequence."""
        return _closed_form_product(self.lam, lambda v: 1.0 + 2.0 * v.real * z + abs(v) ** 2 * z * z)

    def closed_form_traces(self):
        """``(2 Re sum lambda_k, sum |l_k|^2 + 4 sum_{k<m} Re l_k Re l_m)`` from the sequence."""
        vals = _closed_form_terms(self.lam)
        re = vals.real
        t1 = 2.0 * float(np.sum(re))
        # the double sum over k < m, accumulated in index order
        t2 = float(np.sum(np.abs(vals) ** 2)) + 4.0 * float(np.sum(re[1:] * np.cumsum(re)[:-1]))
        return t1, t2

    def to_json(self):
        return {"kind": "diagonal", "lambda": self.lam.to_json(), "p": self.p}


@dataclass(frozen=True)
class KernelModel:
    """``T_mn = mu_m d_mn nu_n``; ``p`` and ``q`` are the exponents of ``mu`` and ``nu``."""

    mu: SequenceSpec
    nu: SequenceSpec
    d: EntrySpec
    p: float = 1.0
    q: float = None

    kind = "kernel"

    def __post_init__(self):
        if not (self.mu.is_real and self.nu.is_real):
            raise ValueError("kernel sequences mu and nu must be real")
        if self.q is None:
            object.__setattr__(self, "q", self.p)

    @property
    def bound(self):
        return self.d.bound

    def truncation(self, N, enumeration="natural"):
        idx = enumeration_indices(N, enumeration)
        mu = self.mu.at(idx).real
        nu = self.nu.at(idx).real
        block = self.d.block(idx, idx)
        return QMatrix(mu[:, None, None] * block * nu[None, :, None])

    def det_truncation(self, N, z, enumeration="natural"):
        T = self.truncation(N, enumeration)
        return det(np.eye(2 * N) + z * companion(T))

    def trace1_truncation(self, N, enumeration="natural"):
        idx = enumeration_indices(N, enumeration)
        diag = self.d.block(idx, idx)[np.arange(N), np.arange(N), 0]
        return 2.0 * float(np.sum(self.mu.at(idx).real * diag * self.nu.at(idx).real))

    def trace1_of_square_truncation(self, N, enumeration="natural"):
        T = self.truncation(N, enumeration)
        return 2.0 * float(np.sum(np.diagonal(q_matmul(T, T).data[..., 0])))

    def to_json(self):
        out = {"kind": "kernel", "mu": self.mu.to_json(), "nu": self.nu.to_json(), "d": self.d.to_json(), "p": self.p}
        if self.q != self.p:
            out["q"] = self.q
        return out


def _exponent_from_json(obj, key, default):
    v = obj.get(key, default)
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not v > 0:
        raise ValueError(f"'{key}' must be a positive number")
    return float(v)


def model_from_json(obj):
    """Parse a diagonal or kernel model description."""
    if not isinstance(obj, dict):
        raise ValueError("model JSON must be an object")
    kind = obj.get("kind")
    if kind == "diagonal":
        if "lambda" not in obj:
            raise ValueError("diagonal model needs a 'lambda' sequence")
        return DiagonalModel(SequenceSpec.from_json(obj["lambda"]), _exponent_from_json(obj, "p", 1.0))
    if kind == "kernel":
        for key in ("mu", "nu", "d"):
            if key not in obj:
                raise ValueError(f"kernel model needs '{key}'")
        p = _exponent_from_json(obj, "p", 1.0)
        return KernelModel(
            SequenceSpec.from_json(obj["mu"]),
            SequenceSpec.from_json(obj["nu"]),
            EntrySpec.from_json(obj["d"]),
            p,
            _exponent_from_json(obj, "q", p),
        )
    raise ValueError(f"unknown model kind {kind!r}")


def _closed_form_terms(seq):
    support = seq.support
    if support is not None:
        return seq.head(support)
    if seq.type == "geometric":
        r = abs(seq.param)
        if r < 1.0:
            # stop once the terms are below 1e-18
            count = min(CLOSED_FORM_MAX_TERMS, int(math.ceil(math.log(1e-18) / math.log(r))) + 1)
            return seq.head(max(count, 1))
    return seq.head(CLOSED_FORM_MAX_TERMS)


def _closed_form_product(seq, factor):
    vals = _closed_form_terms(seq)
    return complex(np.prod(factor(vals)))


# ---------------------------------------------------------------------------
# convergence tables


def _format_value(v):
    if isinstance(v, complex):
        return f"{v.real!r}{v.imag:+.17g}j"
    return repr(float(v))


@dataclass(frozen=True)
class ConvergenceTable:
    """Rows ``(N, value, abs_delta)``, ``N`` strictly increasing."""

    rows: tuple

    def __post_init__(self):
        rows = tuple((int(N), v, float(d)) for N, v, d in self.rows)
        Ns = [r[0] for r in rows]
        if any(b <= a for a, b in zip(Ns, Ns[1:])):
            raise ValueError("convergence table sizes must be strictly increasing")
        object.__setattr__(self, "rows", rows)

    def __len__(self):
        return len(self.rows)

    @property
    def final(self):
        return self.rows[-1]

    def value_at(self, N):
        for n, v, _ in self.rows:
            if n == N:
                return v
        raise KeyError(N)

    def to_csv(self):
        lines = ["N,value,abs_delta"]
        lines += [f"{N},{_format_value(v)},{d!r}" for N, v, d in self.rows]
        return "\n".join(lines) + "\n"

    def to_json(self):
        def enc(v):
            return [v.real, v.imag] if isinstance(v, complex) else float(v)

        return {"rows": [{"N": N, "value": enc(v), "abs_delta": d} for N, v, d in self.rows]}


class Limit(NamedTuple):
    value: object
    table: ConvergenceTable
    closed_form: object = None


def _dyadic_limit(level, tol, n_max, cap=None, what="value"):
    """Evaluate ``level(N)`` for ``N = 2, 4, ...`` until successive values agree.

    The first row is compared with the value ``1`` of the empty truncation
    for determinants, ``0`` for traces (passed in as ``level(0)``).
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    limit = n_max if cap is None else min(n_max, cap)
    rows = []
    prev = level(0)
    N = 2
    while N <= limit:
        v = level(N)
        delta = abs(v - prev)
        rows.append((N, v, delta))
        if delta < tol:
            return ConvergenceTable(tuple(rows))
        prev = v
        N *= 2
    table = ConvergenceTable(tuple(rows))
    last = f"{rows[-1][2]:.3e}" if rows else "n/a"
    raise NotConvergedError(
        f"{what} did not settle below {tol:g} by N = {limit} (last |delta| = {last})", table=table
    )


def _as_output(v, z):
    return v if isinstance(z, complex) else float(v.real)


def _cap_for(model):
    return KERNEL_N_CAP if isinstance(model, KernelModel) else None


def fredholm_det_limit(model, z=1.0, tol=DEFAULT_TOL, n_max=DEFAULT_N_MAX, enumeration="natural"):
    """``lim det_H(I + z T_N)`` over the dyadic schedule ``N = 2, 4, 8, ...``.

    Stops at the first ``N`` with ``|v_N - v_{N/2}| < tol`` and raises
    :class:`NotConvergedError` (carrying the table) otherwise.  Dense kernel
    truncations are limited to ``N <= 1024``.  Diagonal models also report
    the closed-form product over the whole sequence.
    """

    def level(N):
        if N == 0:
            return _as_output(1.0 + 0j, z)
        return _as_output(model.det_truncation(N, z, enumeration), z)

    table = _dyadic_limit(level, tol, n_max, _cap_for(model), "determinant")
    closed = _as_output(model.closed_form_det(z), z) if isinstance(model, DiagonalModel) else None
    return Limit(table.final[1], table, closed)


def trace_limit(model, k=1, tol=DEFAULT_TOL, n_max=DEFAULT_N_MAX, enumeration="natural"):
    """Limit of the first (``k = 1``) or second (``k = 2``) order trace of ``T_N``.

    The second-order trace uses ``(t1^2 - t1(T^2)) / 2``, which does not
    depend on how the double sum is ordered.  Diagonal models also report
    the closed-form value from the sequence.
    """
    if k not in (1, 2):
        raise ValueError("trace limits are available for k = 1 and k = 2")

    def level(N):
        if N == 0:
            return 0.0
        t1 = model.trace1_truncation(N, enumeration)
        if k == 1:
            return t1
        return 0.5 * (t1 * t1 - model.trace1_of_square_truncation(N, enumeration))

    table = _dyadic_limit(level, tol, n_max, _cap_for(model), f"order-{k} trace")
    closed = model.closed_form_traces()[k - 1] if isinstance(model, DiagonalModel) else None
    return Limit(table.final[1], table, closed)


# ---------------------------------------------------------------------------
# Schatten bounds for kernel truncations


class ComposeBound(NamedTuple):
    norm_r: float
    bound: float
    r: float
    bound_without_m: float


def composition_exponent(p, q, shift=0.5):
    """``r`` with ``1/r = 1/p + 1/q - shift``."""
    inv = 1.0 / p + 1.0 / q - shift
    if not inv > 0:
        raise InvalidExponentError(f"1/p + 1/q - {shift} must be positive, got {inv}")
    return 1.0 / inv


def compose_schatten_bound(model, N, p, q):
    """Schatten-r norm of the ``N x N`` kernel truncation against ``M ||mu||_p ||nu||_q``.

    ``1/r = 1/p + 1/q - 1/2``.  The sequence norms are taken over the same
    ``N`` terms as the truncation.
    """
    if not (0 < p <= 2 and 0 < q <= 2):
        raise InvalidExponentError(f"need 0 < p, q <= 2, got p = {p}, q = {q}")
    if N < 1:
        raise ValueError("N must be at least 1")
    r = composition_exponent(p, q)
    T = model.truncation(N)
    norm_r = schatten_norm(T, r)
    product = model.mu.lp_norm(p, N) * model.nu.lp_norm(q, N)
    return ComposeBound(norm_r, model.bound * product, r, product)


def eigenvalue_lr_norm(A, r):
    """``(sum |lambda_k|^r)^(1/r)`` over the standard eigenvalues of ``A``.

    Each standard eigenvalue stands for a conjugate pair of the companion
    spectrum, so the companion eigenvalues are used directly and the
    ``r``-th power sum is halved.
    """
    mu = eigenvalues(companion(A))
    return lp_norm(mu, r) * 0.5 ** (1.0 / r)


def composition_norms(first, second, N, r):
    """l^r norm of the eigenvalues of ``first_N @ second_N``."""
    return eigenvalue_lr_norm(q_matmul(first.truncation(N), second.truncation(N)), r)
