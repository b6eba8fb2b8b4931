import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import abs_elementary, determinant_form_trace, exact_poly_roots, multiset_distance
from quatspec.clinalg import char_poly, char_poly_oracle, det, scale_of
from quatspec.errors import KOutOfRangeError, NonSquareError, PairingFailureError
from quatspec.invariants import (
    fredholm_poly,
    pair_conjugates,
    standard_eigenvalues,
    trace1,
    trace2_entrywise,
    trace_all,
    trace_k,
    verify_identities,
)
from quatspec.qmatrix import QMatrix, companion, q_identity, q_matmul, q_power
from quatspec.quaternion import IJ, J, Quaternion
from quatspec.sampling import dyadic_qmatrix, random_qmatrix, trial_rng, well_conditioned_pair

EXAMPLE = QMatrix.diag([Quaternion(3, 1), IJ])


def test_trace1_examples():
    assert trace1(EXAMPLE) == 6.0
    assert trace1(q_identity(5)) == 10.0
    assert trace1(QMatrix.from_entries([[J]])) == 0.0
    with pytest.raises(NonSquareError):
        trace1(QMatrix.zeros(2, 3))


def test_trace1_is_companion_trace():
    for t in range(20):
        A = random_qmatrix(trial_rng(40, t), 1 + t % 6)
        assert trace1(A) == pytest.approx(np.trace(companion(A)).real, abs=1e-14)


def test_trace_k_examples():
    assert trace_k(EXAMPLE, 2) == pytest.approx(11.0, abs=1e-12)
    assert trace_k(q_identity(2), 2) == pytest.approx(6.0, abs=1e-12)
    assert trace_k(random_qmatrix(trial_rng(41), 3), 0) == 1.0
    with pytest.raises(KOutOfRangeError):
        trace_k(EXAMPLE, -1)


def test_trace_k_vanishes_beyond_2n():
    for t in range(20):
        A = random_qmatrix(trial_rng(42, t), 1 + t % 4)
        n = A.rows
        scale = scale_of(companion(A))
        tk = trace_all(A, 2 * n + 4)
        assert np.all(np.abs(tk[2 * n + 1 :]) < 1e-10 * scale ** (2 * n + 4))


def test_trace_k_from_quaternionic_power_sums():
    # independent route: p_m = trace1(A^m) on quaternion matrices, then the
    # displayed determinant form
    for t in range(30):
        A = random_qmatrix(trial_rng(43, t), 1 + t % 4)
        n = A.rows
        p = [trace1(q_power(A, m)) for m in range(1, 2 * n + 1)]
        for k in range(2 * n + 1):
            ref = determinant_form_trace(p, k).real
            assert abs(trace_k(A, k) - ref) <= 1e-9 * max(1.0, abs(ref))


def test_fredholm_poly_examples():
    assert np.allclose(fredholm_poly(EXAMPLE).coeffs, [1, -6, 11, -6, 10], atol=1e-12)
    assert fredholm_poly(QMatrix.from_entries([[J]])).coeffs.tolist() == [1.0, 0.0, 1.0]
    assert fredholm_poly(QMatrix.zeros(3)).coeffs.tolist() == [1.0]
    assert np.allclose(fredholm_poly(EXAMPLE, "plus_zA").coeffs, [1, 6, 11, 6, 10], atol=1e-12)
    with pytest.raises(ValueError):
        fredholm_poly(EXAMPLE, "sideways")


def test_fredholm_poly_is_det_of_i_minus_z_chi():
    # det(I - z X) = z^2n det(z^-1 I - X): the exact characteristic
    # polynomial read backwards
    for t in range(20):
        A = dyadic_qmatrix(trial_rng(44, t), 1 + t % 3)
        exact = char_poly_oracle(companion(A)).coeffs[::-1]
        for method in ("newton", "eigen"):
            got = fredholm_poly(A, method=method).padded(len(exact))
            assert np.max(np.abs(got - exact.real) / np.maximum(1.0, np.abs(exact))) < 1e-9
        assert np.max(np.abs(exact.imag)) == 0.0


def test_standard_eigenvalue_examples():
    ev = standard_eigenvalues(EXAMPLE)
    assert len(ev) == 2
    assert abs(ev[0] - (3 + 1j)) < 1e-12 and abs(ev[1] - 1j) < 1e-12
    assert standard_eigenvalues(q_identity(3)) == [1.0, 1.0, 1.0]


def test_standard_eigenvalues_match_exact_roots():
    for t in range(10):
        A = dyadic_qmatrix(trial_rng(45, t), 4)
        roots = exact_poly_roots(char_poly_oracle(companion(A)).coeffs)
        upper = [complex(r.real, abs(r.imag)) for r in roots]
        # every class appears twice among the folded roots
        folded = sorted(upper, key=lambda c: (c.real, c.imag))
        ev = standard_eigenvalues(A)
        assert all(c.imag >= 0 for c in ev)
        assert multiset_distance(list(ev) * 2, folded) < 1e-7


def test_standard_eigenvalue_ordering():
    A = QMatrix.diag([Quaternion(-2), Quaternion(2), Quaternion(0, 0, 3), Quaternion(1, 1)])
    ev = standard_eigenvalues(A)
    assert np.allclose(ev, [3j, 2, -2, 1 + 1j], atol=1e-12)


def test_pairing_failure():
    with pytest.raises(PairingFailureError):
        pair_conjugates(np.array([1j, 2j]), 1e-8, 1.0)
    with pytest.raises(PairingFailureError):
        pair_conjugates(np.array([1j, -1j, 3.0]), 1e-8, 1.0)
    pairs = pair_conjugates(np.array([2.0, 1j, 2.0, -1j]), 1e-8, 1.0)
    assert sorted(pairs, key=lambda p: p[0].imag) == [(2.0, 2.0), (1j, -1j)]


def test_trace2_entrywise_examples():
    assert trace2_entrywise(EXAMPLE) == 11.0
    q = Quaternion(0.5, -1, 2, 0.25)
    assert trace2_entrywise(QMatrix.from_entries([[q]])) == pytest.approx(abs(q) ** 2, rel=1e-15)
    for t in range(20):
        A = random_qmatrix(trial_rng(46, t), 5)
        ref = trace_k(A, 2)
        assert abs(trace2_entrywise(A) - ref) <= 1e-9 * max(1.0, abs(ref))


def test_verify_identities_examples():
    report = verify_identities(EXAMPLE)
    assert all(v < 1e-12 for v in report.residuals.values())
    assert report.ok
    zero = verify_identities(QMatrix.zeros(3))
    assert all(v == 0.0 for v in zero.residuals.values())
    assert zero.t1 == 0.0 and zero.det_poly.coeffs.tolist() == [1.0]


def test_verify_identities_suite():
    for t in range(100):
        A = dyadic_qmatrix(trial_rng(47, t), 1 + t % 6)
        report = verify_identities(A)
        assert max(report.residuals.values()) < 1e-8
        assert report.tk[0] == 1.0 and len(report.tk) == 2 * A.rows + 1
        assert report.det_poly.degree <= 2 * A.rows
        assert all(c.imag >= 0 for c in report.std_eigenvalues)


def test_report_json_shape():
    obj = json.loads(json.dumps(verify_identities(EXAMPLE).to_json()))
    assert set(obj) == {"t1", "t2", "tk", "det_poly", "eigenvalues", "residuals"}
    assert set(obj["residuals"]) == {"r1", "r2", "r3", "r4"}
    assert obj["det_poly"]["coeffs"][2] == [11.0, 0.0]


def test_companion_char_poly_is_real_and_det_nonnegative():
    for t in range(50):
        A = random_qmatrix(trial_rng(48, t), 1 + t % 6)
        chi = companion(A)
        s = scale_of(chi)
        coeffs = char_poly(chi).coeffs
        assert np.max(np.abs(coeffs.imag) / s ** np.arange(len(coeffs))[::-1]) < 1e-10
        assert det(chi).real >= -1e-10 * s


def test_degree_is_2n_for_invertible():
    for t in range(20):
        A = random_qmatrix(trial_rng(49, t), 1 + t % 5)
        p = fredholm_poly(A)
        n = A.rows
        assert p.degree == 2 * n
        assert p.coeffs[-1] == pytest.approx(det(companion(A)).real, rel=1e-8)


@given(st.integers(min_value=0, max_value=2 ** 32), st.integers(min_value=1, max_value=4))
def test_similarity_invariance(seed, n):
    rng = trial_rng(seed)
    A = random_qmatrix(rng, n)
    S, S_inv = well_conditioned_pair(rng, n, 5.0)
    B = q_matmul(q_matmul(S_inv, A), S)
    ta, tb = trace_all(A), trace_all(B)
    ref = np.maximum(np.abs(ta), abs_elementary(A))
    assert np.all(np.abs(ta - tb) <= 1e-7 * ref)
    assert multiset_distance(standard_eigenvalues(A), standard_eigenvalues(B)) < 1e-7 * scale_of(companion(A))
