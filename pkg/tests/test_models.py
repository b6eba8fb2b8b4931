import json
import math

import numpy as np
import pytest

from oracles import partial_product
from quatspec.errors import InvalidExponentError, NotConvergedError
from quatspec.invariants import trace1
from quatspec.opmodel import (
    ConvergenceTable,
    DiagonalModel,
    EntrySpec,
    KernelModel,
    SequenceSpec,
    compose_schatten_bound,
    composition_exponent,
    eigenvalue_lr_norm,
    enumeration_indices,
    fredholm_det_limit,
    model_from_json,
    trace_limit,
)
from quatspec.quaternion import Quaternion
from quatspec.qmatrix import q_adjoint, q_matmul
from quatspec.sampling import random_unitary, trial_rng

GEOMETRIC = DiagonalModel(SequenceSpec.geometric(0.5))


def kernel(seed, s=2.0, bound=1.0, p=0.75):
    return KernelModel(SequenceSpec.power(s), SequenceSpec.power(s), EntrySpec("seeded_bounded", seed=seed, bound_value=bound), p)


def test_enumerations():
    assert enumeration_indices(5).tolist() == [1, 2, 3, 4, 5]
    assert enumeration_indices(7, "offset_swap").tolist() == [1, 3, 2, 5, 4, 7, 6]
    with pytest.raises(ValueError):
        enumeration_indices(3, "random")


def test_sequences():
    assert SequenceSpec.geometric(0.5).head(3).real.tolist() == [0.5, 0.25, 0.125]
    assert SequenceSpec.power(2).head(3).real.tolist() == [1.0, 0.25, 1 / 9]
    assert SequenceSpec.finite([1, 2j]).head(4).tolist() == [1, 2j, 0, 0]
    assert not np.any(SequenceSpec.zero().head(5))
    assert SequenceSpec.finite([3, 4]).lp_norm(2, 10) == pytest.approx(5.0)


def test_kernel_entries_are_bounded_and_nested():
    d = EntrySpec("seeded_bounded", seed=9, bound_value=2.5)
    block = d.block(np.arange(1, 65), np.arange(1, 65))
    assert np.max(np.sqrt(np.sum(block ** 2, axis=-1))) <= 2.5
    K = kernel(9)
    T8, T16 = K.truncation(8), K.truncation(16)
    assert np.array_equal(T16.data[:8, :8], T8.data)
    perm = K.truncation(8, "offset_swap")
    # entry (m, n) of the swapped order is the kernel at the enumerated indices
    idx = enumeration_indices(8, "offset_swap")
    assert np.array_equal(perm.data[2, 3], K.truncation(16).data[idx[2] - 1, idx[3] - 1])
    assert EntrySpec("constant", value=Quaternion(0, 3, 4)).bound == 5.0


def test_geometric_diagonal_limit():
    limit = fredholm_det_limit(GEOMETRIC, 1.0, tol=1e-12)
    oracle = partial_product(lambda k: (1 + 2.0 ** -k) ** 2, 64)
    assert abs(limit.table.value_at(64) - oracle) < 1e-12
    assert abs(limit.value - oracle) < 1e-12
    assert limit.table.final[2] < 1e-12
    assert abs(limit.closed_form - oracle) < 1e-12
    Ns = [r[0] for r in limit.table.rows]
    assert Ns == [2 ** k for k in range(1, len(Ns) + 1)]


def test_simple_limits():
    single = DiagonalModel(SequenceSpec.finite([1.0]))
    assert fredholm_det_limit(single, 1.0).value == pytest.approx(4.0, abs=1e-15)
    zero = fredholm_det_limit(DiagonalModel(SequenceSpec.zero()), 1.0)
    assert len(zero.table) == 1 and zero.value == 1.0
    zk = fredholm_det_limit(kernel(0, bound=0.0), 1.0)
    assert len(zk.table) == 1 and zk.value == 1.0


def test_complex_argument():
    z = 0.5 + 0.25j
    limit = fredholm_det_limit(GEOMETRIC, z, tol=1e-13)
    oracle = partial_product(lambda k: 1 + 2 * 2.0 ** -k * z + 4.0 ** -k * z * z, 80)
    assert isinstance(limit.value, complex)
    assert abs(limit.value - oracle) < 1e-12


def test_harmonic_model_does_not_converge():
    harmonic = DiagonalModel(SequenceSpec.power(1.0))
    with pytest.raises(NotConvergedError) as info:
        fredholm_det_limit(harmonic, 1.0, n_max=256)
    table = info.value.table
    assert [r[0] for r in table.rows] == [2, 4, 8, 16, 32, 64, 128, 256]
    # prod (1 + 1/k)^2 = (N + 1)^2
    assert table.final[1] == pytest.approx(257.0 ** 2, rel=1e-12)


def test_trace_limits_of_diagonal_model():
    t1 = trace_limit(GEOMETRIC, 1, tol=1e-13)
    assert abs(t1.value - 2.0) < 1e-12 and abs(t1.closed_form - 2.0) < 1e-12
    t2 = trace_limit(GEOMETRIC, 2, tol=1e-13)
    # sum 4^-k + 4 sum_{k<m} 2^-k 2^-m = 1/3 + 4 * (1/3)
    assert abs(t2.value - 5.0 / 3.0) < 1e-12
    assert abs(t2.closed_form - 5.0 / 3.0) < 1e-12


def test_lidskii_at_truncation_level():
    model = DiagonalModel(SequenceSpec.finite([0.5 + 0.5j, -0.25j, 0.1, 1j]))
    power = DiagonalModel(SequenceSpec.power(2.0))
    for m in (model, power):
        for N in (4, 16, 64):
            T = m.truncation(N)
            assert abs(trace1(T) - 2.0 * np.sum(m.diagonal(N).real)) < 1e-12
            assert m.det_truncation(N, 0.7) == pytest.approx(
                np.prod([1 + 1.4 * v.real + 0.49 * abs(v) ** 2 for v in m.diagonal(N)]), rel=1e-13
            )


def test_kernel_route_independence():
    K = kernel(5, s=2.5)
    tol = 1e-9
    a = fredholm_det_limit(K, 1.0, tol=tol)
    b = fredholm_det_limit(K, 1.0, tol=tol, enumeration="offset_swap")
    assert abs(a.value - b.value) < 10 * tol
    ta = trace_limit(K, 1, tol=tol)
    tb = trace_limit(K, 1, tol=tol, enumeration="offset_swap")
    assert abs(ta.value - tb.value) < 10 * tol


def test_trace_basis_independence_at_truncation():
    K = kernel(6)
    for N in (8, 16):
        T = K.truncation(N)
        U = random_unitary(trial_rng(90, N), N)
        conj = q_matmul(q_matmul(q_adjoint(U), T), U)
        assert abs(trace1(conj) - trace1(T)) < 1e-9


def test_compose_schatten_bound_examples():
    zero = KernelModel(SequenceSpec.power(2), SequenceSpec.power(2), EntrySpec("zero"), 0.75)
    b = compose_schatten_bound(zero, 16, 0.75, 0.75)
    assert b.norm_r == 0.0 and b.bound == 0.0
    one = KernelModel(SequenceSpec.finite([1.0]), SequenceSpec.finite([1.0]), EntrySpec("constant", value=Quaternion(1.0)), 1.0)
    b = compose_schatten_bound(one, 8, 1.0, 1.0)
    assert b.norm_r == pytest.approx(1.0, abs=1e-12) and b.bound == 1.0
    for seed in range(10):
        b = compose_schatten_bound(kernel(seed), 64, 0.75, 0.75)
        assert b.r == pytest.approx(1.0 / (4 / 3 + 4 / 3 - 0.5))
        assert b.norm_r <= b.bound
    with pytest.raises(InvalidExponentError):
        compose_schatten_bound(kernel(0), 8, 2.5, 1.0)


def test_bound_carries_the_entry_bound():
    small = compose_schatten_bound(kernel(3, bound=1.0), 32, 1.0, 1.0)
    big = compose_schatten_bound(kernel(3, bound=4.0), 32, 1.0, 1.0)
    assert big.norm_r == pytest.approx(4 * small.norm_r, rel=1e-9)
    assert big.bound == pytest.approx(4 * small.bound) and big.bound_without_m == small.bound_without_m


def test_eigenvalue_norms_of_kernel_truncations_stay_bounded():
    p = q = 0.75
    r = composition_exponent(p, q)
    for seed in range(5):
        K = kernel(seed)
        norms = [eigenvalue_lr_norm(K.truncation(N), r) for N in (16, 32, 64, 128)]
        bound = K.bound * K.mu.lp_norm(p, 128) * K.nu.lp_norm(q, 128)
        assert max(norms) <= bound
        # r sits close to the critical exponent, so growth slows but does not stop by N = 128
        steps = np.diff(norms)
        assert np.all(steps > 0) and np.all(steps[1:] < 0.8 * steps[:-1])


def test_convergence_table():
    t = ConvergenceTable(((2, 1.5, 0.5), (4, 1.25, 0.25)))
    assert t.to_csv() == "N,value,abs_delta\n2,1.5,0.5\n4,1.25,0.25\n"
    assert json.loads(json.dumps(t.to_json()))["rows"][1] == {"N": 4, "value": 1.25, "abs_delta": 0.25}
    with pytest.raises(ValueError):
        ConvergenceTable(((4, 1.0, 0.0), (2, 1.0, 0.0)))
    c = ConvergenceTable(((2, 1 + 2j, 0.5),))
    assert c.to_csv().splitlines()[1] == "2,1.0+2j,0.5"


def test_model_json_round_trip():
    models = [
        GEOMETRIC,
        DiagonalModel(SequenceSpec.power(2.0), p=0.6),
        DiagonalModel(SequenceSpec.finite([1.0, 0.5j]), p=1.0),
        DiagonalModel(SequenceSpec.zero()),
        kernel(7),
        KernelModel(SequenceSpec.power(2), SequenceSpec.geometric(0.5), EntrySpec("zero"), 0.75, 0.5),
    ]
    for m in models:
        assert model_from_json(json.loads(json.dumps(m.to_json()))) == m
    spec = {"kind": "kernel", "mu": {"type": "power", "param": 2}, "nu": {"type": "power", "param": 2},
            "d": {"type": "seeded_bounded", "seed": 4, "bound": 1}, "p": 0.75}
    assert model_from_json(spec) == kernel(4)


@pytest.mark.parametrize(
    "bad",
    [
        [],
        {"kind": "triangle"},
        {"kind": "diagonal"},
        {"kind": "diagonal", "lambda": {"type": "cubic"}},
        {"kind": "diagonal", "lambda": {"type": "power"}},
        {"kind": "diagonal", "lambda": {"type": "power", "param": 1}, "p": -1},
        {"kind": "kernel", "mu": {"type": "zero"}, "nu": {"type": "zero"}},
        {"kind": "kernel", "mu": {"type": "zero"}, "nu": {"type": "zero"}, "d": {"type": "seeded_bounded"}},
        {"kind": "kernel", "mu": {"type": "finite", "values": [[1, 1]]}, "nu": {"type": "zero"}, "d": {"type": "zero"}},
    ],
)
def test_model_json_errors(bad):
    with pytest.raises(ValueError):
        model_from_json(bad)


def test_dense_kernel_levels_are_capped():
    slow = KernelModel(SequenceSpec.power(0.6), SequenceSpec.power(0.6), EntrySpec("constant", value=Quaternion(1.0)), 2.0)
    with pytest.raises(NotConvergedError) as info:
        fredholm_det_limit(slow, 0.01, tol=1e-14, n_max=64)
    assert info.value.table.final[0] == 64
    assert math.isfinite(info.value.table.final[1])
