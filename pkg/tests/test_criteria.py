import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from qsep import channels as ch
from qsep import criteria as cr
from qsep import linalg as la
from qsep import states
from qsep.criteria import BraunsteinCoefficients, EBStatus, Outcome
from qsep.errors import BadDimension, DimensionMismatch, NotOrthonormal
from qsep.oracle import certified_verdict, oracle_separable
from qsep.states import BipartiteState

from helpers import SX, SY, SZ, random_psd

seeds = st.integers(0, 2**32 - 1)
ALL_QUARTER = BipartiteState(2, 2, np.full((4, 4), 0.25))
PAULIS = [SX, SY, SZ]


def test_blocks_of_examples(rng):
    ra, rb = states.random_density(2, rng), states.random_density(3, rng)
    bv = cr.blocks_of(BipartiteState(2, 3, np.kron(ra, rb)))
    for i in range(2):
        for j in range(2):
            np.testing.assert_allclose(bv.block(i, j), ra[i, j] * rb, atol=1e-15)
    bv = cr.blocks_of(ALL_QUARTER)
    for i in range(2):
        for j in range(2):
            np.testing.assert_array_equal(bv.block(i, j), np.full((2, 2), 0.25))
    bv = cr.blocks_of(states.bell_state())
    np.testing.assert_allclose(bv.block(0, 1), [[0, 0.5], [0, 0]])


@given(seeds, st.integers(1, 3), st.integers(1, 3))
@settings(max_examples=25, deadline=None)
def test_block_view_hermitian_and_lossless(seed, dA, dB):
    rho = states.random_state(dA, dB, seed)
    bv = cr.blocks_of(rho)
    np.testing.assert_array_equal(bv.reassemble(), rho.matrix)
    for i in range(dA):
        for j in range(dA):
            np.testing.assert_allclose(bv.block(j, i), la.dagger(bv.block(i, j)), atol=1e-15)


def _pattern_matrix(rng):
    """PSD trace-1 matrix with the zero pattern of the two-qubit example, built by hand."""
    m0, m1 = random_psd(rng, 2), random_psd(rng, 2)
    out = np.zeros((4, 4), dtype=complex)
    idx0, idx1 = [0, 2], [1, 3]  # |i 0> and |i 1> rows
    out[np.ix_(idx0, idx0)] = m0
    out[np.ix_(idx1, idx1)] = m1
    return out / np.trace(out)


def test_zero_pattern_examples(rng):
    m = _pattern_matrix(rng)
    nonzero = np.abs(m) > 0
    allowed = np.array([[1, 0, 1, 0], [0, 1, 0, 1], [1, 0, 1, 0], [0, 1, 0, 1]], dtype=bool)
    assert not np.any(nonzero & ~allowed)
    rho = BipartiteState(2, 2, m)
    v = cr.corollary1_zero_pattern(rho)
    assert v.outcome is Outcome.SEPARABLE
    certified_verdict(rho, v.certificate)

    v = cr.corollary1_zero_pattern(states.bell_state())
    assert v.outcome is Outcome.INCONCLUSIVE
    assert v.details["max_pattern_violation"] == pytest.approx(0.5)


def test_zero_pattern_on_pinched_states(rng):
    pi = ch.wavepacket_reduction(ch.computational_basis(3))
    for _ in range(10):
        rho = states.random_state(2, 3, rng)
        out = BipartiteState(2, 3, ch.apply_id_tensor(pi, rho.matrix, 2))
        assert cr.corollary1_zero_pattern(out).separable
        assert cr.ppt_check(out).outcome is not Outcome.ENTANGLED


def test_basis_reduction_examples(rng):
    pattern = states.random_pattern_state(2, 2, rng)
    out, v = cr.basis_reduction(pattern)
    np.testing.assert_allclose(out.matrix, pattern.matrix, atol=1e-15)
    assert v.separable

    out, v = cr.basis_reduction(states.bell_state())
    np.testing.assert_allclose(out.matrix, np.diag([0.5, 0, 0, 0.5]), atol=1e-15)
    assert v.outcome is Outcome.INCONCLUSIVE
    certified_verdict(out, v.details["reduced_certificate"])

    rho = states.random_state(3, 3, rng)
    out, _ = cr.basis_reduction(rho, ch.paper_qutrit_basis())
    assert la.is_psd(out.matrix)
    assert out.trace == pytest.approx(1, abs=1e-12)
    assert la.is_psd(la.partial_transpose(out.matrix, 3, 3))

    with pytest.raises(NotOrthonormal):
        cr.basis_reduction(rho, [np.ones(3), np.eye(3)[1], np.eye(3)[2]])


@given(seeds, st.integers(1, 3), st.integers(2, 3))
@settings(max_examples=25, deadline=None)
def test_basis_reduction_properties(seed, dA, dB):
    rng = np.random.default_rng(seed)
    rho = states.random_state(dA, dB, rng)
    q, _ = np.linalg.qr(rng.standard_normal((dB, dB)) + 1j * rng.standard_normal((dB, dB)))
    basis = list(q.T)
    out, _ = cr.basis_reduction(rho, basis)
    assert la.is_psd(out.matrix)
    assert la.is_psd(la.partial_transpose(out.matrix, dA, dB))
    again, v = cr.basis_reduction(out, basis)
    np.testing.assert_allclose(again.matrix, out.matrix, atol=1e-12)
    assert v.separable
    certified_verdict(out, v.certificate)


def test_zero_pattern_implies_fixed_point_and_ppt(rng):
    for _ in range(10):
        rho = states.random_pattern_state(3, 2, rng)
        assert cr.corollary1_zero_pattern(rho).separable
        out, _ = cr.basis_reduction(rho)
        np.testing.assert_allclose(out.matrix, rho.matrix, atol=1e-14)
        assert cr.ppt_check(rho).outcome is not Outcome.ENTANGLED


def _symbolic_reduced_block():
    """Symbolic sum_n <e_n|B|e_n> |e_n><e_n| for the qutrit basis."""
    r = sp.Matrix(3, 3, lambda a, b: sp.Symbol(f"r{a}{b}"))
    s2 = sp.sqrt(2)
    basis = [sp.Matrix([s2, -1, 1]) / 2, sp.Matrix([s2, 1, -1]) / 2, sp.Matrix([0, 1, 1]) / s2]
    out = sp.zeros(3, 3)
    for e in basis:
        out += (e.T * r * e)[0] * e * e.T
    return r, out.applyfunc(sp.expand)


def test_qutrit_closed_form_against_symbolic_expansion(rng):
    r, sym = _symbolic_reduced_block()
    r_ = lambda a, b: r[a, b]  # noqa: E731
    # entries as printed
    assert sp.expand(sym[0, 0] - (2 * r_(0, 0) + r_(1, 1) - r_(1, 2) - r_(2, 1) + r_(2, 2)) / 4) == 0
    assert sp.expand(sym[1, 1] - (2 * r_(0, 0) + 3 * r_(1, 1) + r_(1, 2) + r_(2, 1) + 3 * r_(2, 2)) / 8) == 0
    printed_12 = (-2 * r_(0, 0) + r_(1, 1) + 3 * r_(1, 2) + 3 * r_(2, 1)) / 8
    assert sp.expand(sym[1, 2] - printed_12) == r_(2, 2) / 8
    assert sp.expand(sym[2, 1] - printed_12) == r_(2, 2) / 8

    rho = states.random_state(3, 3, rng)
    red = cr.qutrit_closed_form(rho)
    b = la.blocks(rho.matrix, 3, 3)
    fn = sp.lambdify(list(r), sym, "numpy")
    direct = la.blocks(red.direct.matrix, 3, 3)
    printed = la.blocks(red.printed, 3, 3)
    for i in range(3):
        for j in range(3):
            np.testing.assert_allclose(direct[i, j], np.array(fn(*b[i, j].reshape(-1)), dtype=complex), atol=1e-12)
            x = b[i, j]
            assert printed[i, j][0, 0] == pytest.approx((2 * x[0, 0] + x[1, 1] - x[1, 2] - x[2, 1] + x[2, 2]) / 4)
            assert printed[i, j][1, 1] == pytest.approx((2 * x[0, 0] + 3 * x[1, 1] + x[1, 2] + x[2, 1] + 3 * x[2, 2]) / 8)
            assert direct[i, j][1, 2] - printed[i, j][1, 2] == pytest.approx(x[2, 2] / 8, abs=1e-12)
    assert red.max_corrected_delta <= 1e-12


def test_qutrit_closed_form_rejects_other_dims(rng):
    with pytest.raises(DimensionMismatch):
        cr.qutrit_closed_form(states.random_state(2, 3, rng))


def test_block_psd_examples(rng):
    assert cr.theorem3_block_psd(ALL_QUARTER).separable
    assert oracle_separable(ALL_QUARTER).separable
    v = cr.theorem3_block_psd(states.bell_state())
    assert v.outcome is Outcome.INCONCLUSIVE
    assert v.details["max_block_asymmetry"] == pytest.approx(0.5)
    for dA, dB in [(2, 2), (2, 3), (3, 3), (3, 2)]:
        dec, rho = states.random_nonnegative_separable(dA, dB, 3, rng)
        assert cr.theorem3_block_psd(rho).separable
        assert cr.ppt_check(rho, exact=False).outcome is Outcome.INCONCLUSIVE


def test_psd_blocks_make_state_invariant_under_a_transpose(rng):
    # Hermitian blocks with B_ij = B_ji imply rho^{T_A} = rho
    _, rho = states.random_nonnegative_separable(3, 3, 4, rng)
    full_t = la.partial_transpose(rho.matrix, 3, 3).T  # transpose on A only
    np.testing.assert_allclose(full_t, rho.matrix, atol=1e-15)


def test_sampled_block_check_examples():
    assert not cr.corollary2_sampled(ALL_QUARTER, 500, 1).details["violated"]
    bell = states.bell_state()
    plus = np.outer([1, 1], [1, 1]) / 2
    s = cr.corollary2_sums(bell, plus[None])
    assert s[0, 0, 1] == pytest.approx(0.25)
    i_plus = np.array([1, 1j]) / np.sqrt(2)
    s = cr.corollary2_sums(bell, np.outer(i_plus, i_plus.conj())[None])
    # block (0,1) = |0><1|/2 picks sigma_01 = -i/2
    assert s[0, 0, 1] == pytest.approx(-0.25j)
    v = cr.corollary2_sampled(bell, 50, 2)
    assert v.outcome is Outcome.INCONCLUSIVE and v.details["violated"]


def test_sampled_block_check_sum_is_trace_against_transpose(rng):
    rho = states.random_state(2, 3, rng)
    sig = states.random_density(3, rng)
    s = cr.corollary2_sums(rho, sig[None])[0]
    bv = la.blocks(rho.matrix, 2, 3)
    for i in range(2):
        for j in range(2):
            assert s[i, j] == pytest.approx(np.trace(bv[i, j] @ sig.T))


def test_sampled_block_check_passes_on_block_psd_states(rng):
    for dA, dB in [(2, 2), (3, 3)]:
        _, rho = states.random_nonnegative_separable(dA, dB, 3, rng)
        assert cr.corollary2_sampled(rho, 10_000, rng).separable


def test_ppt_examples(rng):
    v = cr.ppt_check(states.bell_state())
    assert v.outcome is Outcome.ENTANGLED
    assert v.details["pt_min_eigenvalue"] == pytest.approx(-0.5)
    for _ in range(10):
        _, rho = states.random_separable(3, 3, 3, rng)
        assert cr.ppt_check(rho).outcome is not Outcome.ENTANGLED
    prod = states.product_state([1, 0], [1, 0])
    assert cr.ppt_check(prod, exact=False).outcome is Outcome.INCONCLUSIVE
    assert cr.ppt_check(prod).outcome is Outcome.SEPARABLE
    prod33 = states.product_state([1, 0, 0], [1, 0, 0])
    assert cr.ppt_check(prod33).outcome is Outcome.INCONCLUSIVE


def _pauli_expansion(co):
    """rho = (I + sum a_i s_i x I + sum b_j I x s_j + sum c_ij s_i x s_j) / 4."""
    eye = np.eye(2)
    m = np.kron(eye, eye).astype(complex)
    for i in range(3):
        m += co.a[i] * np.kron(PAULIS[i], eye) + co.b[i] * np.kron(eye, PAULIS[i])
        for j in range(3):
            m += co.corr[i, j] * np.kron(PAULIS[i], PAULIS[j])
    return m / 4


def test_braunstein_examples(rng):
    co = cr.braunstein_coefficients(BipartiteState(2, 2, np.eye(4) / 4))
    assert np.allclose(co.a, 0) and np.allclose(co.b, 0) and np.allclose(co.corr, 0)
    co = cr.braunstein_coefficients(states.bell_state())
    np.testing.assert_allclose(co.corr, np.diag([1, -1, 1]), atol=1e-15)
    np.testing.assert_allclose(co.a, 0, atol=1e-15)
    np.testing.assert_allclose(co.b, 0, atol=1e-15)
    rho = states.random_state(2, 2, rng)
    co = cr.braunstein_coefficients(rho)
    assert la.frobenius_distance(_pauli_expansion(co), rho.matrix) <= 1e-12
    assert la.frobenius_distance(cr.braunstein_reconstruct(co), rho.matrix) <= 1e-10
    with pytest.raises(DimensionMismatch):
        cr.braunstein_coefficients(states.random_state(2, 3, rng))


def test_projector_pairs_are_pauli_eigenprojectors():
    for i, s in enumerate(PAULIS):
        for n in range(4):
            u, v = cr._projector_pair_vectors(n, i, i)
            sign_u = 1 if n in (0, 2) else -1
            sign_v = 1 if n in (0, 1) else -1
            np.testing.assert_allclose(la.projector(u), (np.eye(2) + sign_u * s) / 2, atol=1e-15)
            np.testing.assert_allclose(la.projector(v), (np.eye(2) + sign_v * s) / 2, atol=1e-15)


def test_q_coefficients_examples(rng):
    co = cr.braunstein_coefficients(states.random_state(2, 2, rng))
    np.testing.assert_allclose(cr.depolarizing_q_coefficients(co, 0), 1 / 36)
    worst = BraunsteinCoefficients.worst_case()
    q = cr.depolarizing_q_coefficients(worst, 1 / 15)
    assert q.min() == pytest.approx(0, abs=1e-15)
    for eps in (0.0, 0.01, 0.05, 0.1):
        # worst-case entry: (1/9 - 5 eps / 3) / 4
        assert cr.depolarizing_q_coefficients(worst, eps).min() == pytest.approx((1 - 15 * eps) / 36, abs=1e-15)


@given(seeds, st.floats(0, 1))
@settings(max_examples=50, deadline=None)
def test_q_coefficients_sum(seed, eps):
    rng = np.random.default_rng(seed)
    co = BraunsteinCoefficients(rng.uniform(-1, 1, 3), rng.uniform(-1, 1, 3), rng.uniform(-1, 1, (3, 3)))
    q = cr.depolarizing_q_coefficients(co, eps)
    assert q.shape == (4, 3, 3)
    assert abs(q.sum() - 1) <= 1e-12
    np.testing.assert_allclose(q.sum(axis=0), 1 / 9, atol=1e-15)


def test_q_coefficients_expand_the_depolarized_state(rng):
    rho = states.random_state(2, 2, rng)
    eps = 0.37
    q = cr.depolarizing_q_coefficients(cr.braunstein_coefficients(rho), eps)
    target = (1 - eps) * np.eye(4) / 4 + eps * rho.matrix
    assert la.frobenius_distance(cr.projector_sum(q), target) <= 1e-12


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_two_qubit_check_at_one_fifteenth(seed):
    rho = states.random_state(2, 2, seed)
    v = cr.depolarizing_two_qubit_check(rho, 1 / 15)
    assert v.separable
    certified_verdict(cr.depolarized(rho, 1 / 15), v.certificate)


def test_two_qubit_check_examples():
    bell = states.bell_state()
    v = cr.depolarizing_two_qubit_check(bell, 1 / 15 + 1e-3)
    assert v.separable
    # Bell per-state threshold is 1/9 (c_ii = +-1, no local terms)
    assert cr.depolarizing_two_qubit_check(bell, 1 / 9).separable
    assert cr.depolarizing_two_qubit_check(bell, 1 / 9 + 1e-3).outcome is Outcome.INCONCLUSIVE
    v = cr.depolarizing_two_qubit_check(BipartiteState(2, 2, np.eye(4) / 4), 1.0)
    assert v.separable and v.details["min_q"] == pytest.approx(1 / 36)


def test_isotropic_threshold_examples():
    assert cr.depolarizing_isotropic_threshold(2, 1 / 3) is EBStatus.EB
    assert cr.depolarizing_isotropic_threshold(2, 0.34) is EBStatus.NOT_EB
    assert cr.isotropic_pt_min_eigenvalue(3, 0.25) == pytest.approx(0, abs=1e-10)
    with pytest.raises(BadDimension):
        cr.depolarizing_isotropic_threshold(1, 0.1)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_isotropic_pt_eigenvalue_closed_form(d):
    # PT of eps|beta><beta| + (1-eps) I/d^2 has min eigenvalue (1-eps)/d^2 - eps/d
    for eps in np.linspace(0, 1, 7):
        assert cr.isotropic_pt_min_eigenvalue(d, eps) == pytest.approx((1 - eps) / d**2 - eps / d, abs=1e-12)


def test_isotropic_check_agrees_with_ppt():
    for d in (2, 3, 4):
        for eps in np.linspace(0, 1, 21):
            v = cr.isotropic_check(d, eps)
            assert v.separable == (v.details["pt_min_eigenvalue"] >= -1e-10)
