"""Sufficient separability criteria derived from entanglement-breaking channels.

Every criterion returns a :class:`Verdict`. Sufficient criteria only ever
answer ``SEPARABLE`` or ``INCONCLUSIVE``; the single source of ``ENTANGLED``
is a violated PPT condition.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np
import numpy.typing as npt

from . import linalg as la
from .channels import (
    DepolarizingChannel,
    apply_id_tensor,
    check_orthonormal_basis,
    computational_basis,
    depolarize,
    isotropic_state,
    paper_qutrit_basis,
    wavepacket_reduction,
)
from .errors import BadDimension, DimensionMismatch
from .oracle import EXACT_DIMS, pt_spectrum
from .states import BipartiteState, PureState, SeedLike, SeparableDecomposition, random_density, rng_from

PATTERN_TOL = 1e-10
FIXED_POINT_TOL = 1e-10
SAMPLING_TOL = 1e-9
Q_TOL = 1e-12
EIG_DROP = 1e-13

OMEGA = 1 / 3
PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=np.complex128,
)
# +1 / -1 eigenvectors of each Pauli matrix; P_i and its complement project on them
_BLOCH_PLUS = np.array([[1, 1], [1, 1j], [1, 0]], dtype=np.complex128)
_BLOCH_PLUS /= np.linalg.norm(_BLOCH_PLUS, axis=1, keepdims=True)
_BLOCH_MINUS = np.array([[1, -1], [1, -1j], [0, 1]], dtype=np.complex128)
_BLOCH_MINUS /= np.linalg.norm(_BLOCH_MINUS, axis=1, keepdims=True)


class Outcome(enum.Enum):
    SEPARABLE = "separable"
    ENTANGLED = "entangled"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True, eq=False)
class Verdict:
    """Outcome of one criterion.

    ``certificate`` is a :class:`SeparableDecomposition` when one was built,
    or a short string naming the argument behind the outcome.
    """

    criterion: str
    outcome: Outcome
    certificate: SeparableDecomposition | str | None = None
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def separable(self) -> bool:
        return self.outcome is Outcome.SEPARABLE


@dataclass(frozen=True, eq=False)
class BlockView:
    dA: int
    dB: int
    blocks: np.ndarray  # (dA, dA, dB, dB)

    def block(self, i: int, j: int) -> la.ComplexMatrix:
        return self.blocks[i, j]

    def reassemble(self) -> la.ComplexMatrix:
        return la.from_blocks(self.blocks)


def blocks_of(rho: BipartiteState) -> BlockView:
    return BlockView(rho.dA, rho.dB, la.blocks(rho.matrix, rho.dA, rho.dB).copy())


def pinching_decomposition(
    rho: BipartiteState, basis_rows: np.ndarray
) -> SeparableDecomposition | None:
    """Decompose sum_n M_n (x) |e_n><e_n| with M_n = <e_n|_B rho |e_n>_B.

    Each PSD M_n is split into its eigenvectors. Only meaningful when ``rho``
    is a fixed point of the pinching onto ``basis_rows``; returns None for
    states without unit trace.
    """
    if abs(rho.trace - 1) > 1e-9:
        return None
    t = rho.matrix.reshape(rho.dA, rho.dB, rho.dA, rho.dB)
    terms = []
    for e in basis_rows:
        m = np.einsum("m,imjn,n->ij", e.conj(), t, e)
        evals, evecs = np.linalg.eigh((m + m.conj().T) / 2)
        phi = PureState(rho.dB, e)
        for lam, v in zip(evals, evecs.T):
            if lam > EIG_DROP:
                terms.append((lam, PureState(rho.dA, v), phi))
    total = sum(p for p, _, _ in terms)
    terms = [(p / total, a, b) for p, a, b in terms]
    return SeparableDecomposition(rho.dA, rho.dB, tuple(terms))


def pattern_violation(rho: BipartiteState) -> float:
    """Largest |<i j|rho|k l>| over entries with j != l."""
    b = la.blocks(rho.matrix, rho.dA, rho.dB)
    off = b * (1 - np.eye(rho.dB))
    return float(np.max(np.abs(off))) if rho.dB > 1 else 0.0


def corollary1_zero_pattern(rho: BipartiteState) -> Verdict:
    viol = pattern_violation(rho)
    details = {"max_pattern_violation": viol}
    if viol > PATTERN_TOL:
        return Verdict("corollary1", Outcome.INCONCLUSIVE, None, details)
    rows = np.eye(rho.dB, dtype=np.complex128)
    cert = pinching_decomposition(rho, rows) or "fixed point of the computational pinching on B"
    return Verdict("corollary1", Outcome.SEPARABLE, cert, details)


def basis_reduction(
    rho: BipartiteState, basis: Sequence[npt.ArrayLike] | None = None
) -> tuple[BipartiteState, Verdict]:
    """Reduce ``rho`` through the pinching channel on B.

    The returned state is always separable (output of an entanglement-breaking
    trace-preserving channel). The verdict concerns ``rho`` itself: separable
    when it is left unchanged by the reduction.
    """
    if basis is None:
        basis = computational_basis(rho.dB)
    rows = check_orthonormal_basis(basis, rho.dB)
    ch = wavepacket_reduction(rows)
    reduced = BipartiteState(
        rho.dA, rho.dB, apply_id_tensor(ch, rho.matrix, rho.dA), normalized=rho.normalized
    )
    dist = la.frobenius_distance(reduced.matrix, rho.matrix)
    cert = pinching_decomposition(reduced, rows)
    details = {"distance_to_reduced": dist, "reduced_certificate_terms": len(cert) if cert else 0}
    if dist <= FIXED_POINT_TOL:
        return reduced, Verdict("basis-reduction", Outcome.SEPARABLE, cert, details)
    details["reduced_certificate"] = cert
    return reduced, Verdict("basis-reduction", Outcome.INCONCLUSIVE, None, details)


def _qutrit_block_formula(b: np.ndarray, corrected: bool) -> np.ndarray:
    """Closed-form reduced block from the input block entries b[a, c]."""
    r = b
    out = np.empty((3, 3), dtype=np.complex128)
    out[0, 0] = (2 * r[0, 0] + r[1, 1] - r[1, 2] - r[2, 1] + r[2, 2]) / 4
    out[0, 1] = (r[0, 1] - r[0, 2] + r[1, 0] - r[2, 0]) / 4
    out[0, 2] = (-r[0, 1] + r[0, 2] - r[1, 0] + r[2, 0]) / 4
    out[1, 0] = (r[0, 1] - r[0, 2] + r[1, 0] - r[2, 0]) / 4
    out[1, 1] = (2 * r[0, 0] + 3 * r[1, 1] + r[1, 2] + r[2, 1] + 3 * r[2, 2]) / 8
    out[1, 2] = (-2 * r[0, 0] + r[1, 1] + 3 * r[1, 2] + 3 * r[2, 1]) / 8
    out[2, 0] = (-r[0, 1] + r[0, 2] - r[1, 0] + r[2, 0]) / 4
    out[2, 1] = (-2 * r[0, 0] + r[1, 1] + 3 * r[1, 2] + 3 * r[2, 1]) / 8
    out[2, 2] = (2 * r[0, 0] + 3 * r[1, 1] + r[1, 2] + r[2, 1] + 3 * r[2, 2]) / 8
    if corrected:
        # the printed (1,2)/(2,1) entries drop this term
        out[1, 2] += r[2, 2] / 8
        out[2, 1] += r[2, 2] / 8
    return out


def qutrit_closed_form_matrix(rho: npt.ArrayLike, corrected: bool = False) -> la.ComplexMatrix:
    rho = la.as_matrix(rho)
    b = la.blocks(rho, 3, 3)
    out = np.empty_like(b)
    for i in range(3):
        for j in range(3):
            out[i, j] = _qutrit_block_formula(b[i, j], corrected)
    return la.from_blocks(out)


@dataclass(frozen=True, eq=False)
class QutritReduction:
    printed: la.ComplexMatrix
    corrected: la.ComplexMatrix
    direct: BipartiteState
    delta: la.ComplexMatrix  # direct - printed

    @property
    def max_printed_delta(self) -> float:
        return float(np.max(np.abs(self.delta)))

    @property
    def max_corrected_delta(self) -> float:
        return float(np.max(np.abs(self.direct.matrix - self.corrected)))


def qutrit_closed_form(rho: BipartiteState) -> QutritReduction:
    """Closed-form qutrit reduction next to the direct channel computation.

    The direct pinching with the fixed qutrit basis is authoritative; the
    printed formulas differ from it in the (1,2)/(2,1) entries of every block.
    """
    if (rho.dA, rho.dB) != (3, 3):
        raise DimensionMismatch(f"qutrit closed form needs a 3x3 system, got {rho.dA}x{rho.dB}")
    direct, _ = basis_reduction(rho, paper_qutrit_basis())
    printed = qutrit_closed_form_matrix(rho.matrix)
    corrected = qutrit_closed_form_matrix(rho.matrix, corrected=True)
    return QutritReduction(printed, corrected, direct, direct.matrix - printed)


def theorem3_block_psd(rho: BipartiteState) -> Verdict:
    """Separable if every dB x dB block is Hermitian positive semidefinite."""
    bv = la.blocks(rho.matrix, rho.dA, rho.dB)
    worst_asym = 0.0
    worst_eig = np.inf
    ok = True
    for i in range(rho.dA):
        for j in range(rho.dA):
            asym = la.hermiticity_residual(bv[i, j])
            worst_asym = max(worst_asym, asym)
            if asym > la.TOL_HERM:
                ok = False
                continue
            lo = la.min_eigenvalue(bv[i, j])
            worst_eig = min(worst_eig, lo)
            if lo < -la.TOL_PSD:
                ok = False
    details = {"max_block_asymmetry": worst_asym, "min_block_eigenvalue": float(worst_eig)}
    if ok:
        return Verdict("blocks-psd", Outcome.SEPARABLE, "every block Hermitian PSD", details)
    return Verdict("blocks-psd", Outcome.INCONCLUSIVE, None, details)


def corollary2_sums(rho: BipartiteState, sigmas: np.ndarray) -> np.ndarray:
    """s[t, i, j] = sum_{a,b} rho^{ij}_{ab} sigma_t[a, b] (no conjugation)."""
    bv = la.blocks(rho.matrix, rho.dA, rho.dB)
    return np.einsum("ijab,tab->tij", bv, sigmas)


def corollary2_sampled(rho: BipartiteState, trials: int = 1000, seed: SeedLike = None) -> Verdict:
    """Randomized falsifier for the block-sum positivity condition.

    Never a proof: a pass means no violating density operator was found in
    ``trials`` Hilbert-Schmidt samples.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    rng = rng_from(seed)
    sigmas = np.stack([random_density(rho.dB, rng) for _ in range(trials)])
    s = corollary2_sums(rho, sigmas)
    min_re = float(s.real.min())
    max_im = float(np.abs(s.imag).max())
    details = {"trials": trials, "min_real": min_re, "max_abs_imag": max_im}
    if min_re < -SAMPLING_TOL or max_im > SAMPLING_TOL:
        bad = (s.real < -SAMPLING_TOL) | (np.abs(s.imag) > SAMPLING_TOL)
        t, i, j = (int(x) for x in np.argwhere(bad)[0])
        details.update(violated=True, first_violation={"trial": t, "block": [i, j]})
        return Verdict("corollary2", Outcome.INCONCLUSIVE, None, details)
    details["violated"] = False
    return Verdict(
        "corollary2", Outcome.SEPARABLE, f"no violation in {trials} sampled density operators", details
    )


def ppt_check(rho: BipartiteState, exact: bool = True) -> Verdict:
    """NPT means entangled. With ``exact`` PPT also certifies at 2x2/2x3/3x2."""
    spec = pt_spectrum(rho)
    details = {"pt_min_eigenvalue": float(spec[0]), "pt_spectrum": spec.tolist()}
    if spec[0] < -la.TOL_PSD:
        return Verdict("ppt", Outcome.ENTANGLED, "negative partial-transpose eigenvalue", details)
    if exact and (rho.dA, rho.dB) in EXACT_DIMS:
        return Verdict("ppt", Outcome.SEPARABLE, "PPT is exact at this dimension", details)
    return Verdict("ppt", Outcome.INCONCLUSIVE, None, details)


@dataclass(frozen=True, eq=False)
class BraunsteinCoefficients:
    """Pauli-basis coefficients of a two-qubit operator.

    ``a[i] = Tr(rho sigma_i (x) I)``, ``b[j] = Tr(rho I (x) sigma_j)`` and
    ``corr[i, j] = Tr(rho sigma_i (x) sigma_j)``.
    """

    a: np.ndarray
    b: np.ndarray
    corr: np.ndarray

    def __post_init__(self) -> None:
        for name, shape in (("a", (3,)), ("b", (3,)), ("corr", (3, 3))):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != shape:
                raise DimensionMismatch(f"{name} must have shape {shape}, got {arr.shape}")
            object.__setattr__(self, name, arr)

    @classmethod
    def worst_case(cls) -> BraunsteinCoefficients:
        """All components -1: drives q_0 to its minimum for every (i, j)."""
        return cls(-np.ones(3), -np.ones(3), -np.ones((3, 3)))


def braunstein_coefficients(rho: BipartiteState) -> BraunsteinCoefficients:
    if (rho.dA, rho.dB) != (2, 2):
        raise DimensionMismatch(f"two-qubit state required, got {rho.dA}x{rho.dB}")
    m = rho.matrix
    eye = np.eye(2)
    a = [np.trace(m @ np.kron(s, eye)).real for s in PAULI]
    b = [np.trace(m @ np.kron(eye, s)).real for s in PAULI]
    corr = [[np.trace(m @ np.kron(s, t)).real for t in PAULI] for s in PAULI]
    return BraunsteinCoefficients(np.array(a), np.array(b), np.array(corr))


def depolarizing_q_coefficients(co: BraunsteinCoefficients, epsilon: float) -> np.ndarray:
    """Weights q[n, i, j] of the four product projectors for pair (i, j).

    n = 0: P_i P_j, 1: Pbar_i P_j, 2: P_i Pbar_j, 3: Pbar_i Pbar_j. Summed
    over all (n, i, j) the weights add to 1; each (i, j) group adds to 1/9.
    """
    ca = co.a[:, None] * OMEGA
    cb = OMEGA * co.b[None, :]
    c = co.corr
    base = OMEGA * OMEGA
    return np.stack(
        [
            base + epsilon * (ca + cb + c),
            base + epsilon * (-ca + cb - c),
            base + epsilon * (ca - cb - c),
            base + epsilon * (-ca - cb + c),
        ]
    ) / 4


def _projector_pair_vectors(n: int, i: int, j: int) -> tuple[np.ndarray, np.ndarray]:
    left = _BLOCH_PLUS[i] if n in (0, 2) else _BLOCH_MINUS[i]
    right = _BLOCH_PLUS[j] if n in (0, 1) else _BLOCH_MINUS[j]
    return left, right


def projector_sum(q: np.ndarray) -> la.ComplexMatrix:
    """sum_{n,i,j} q[n,i,j] (product projector n for Pauli pair (i,j))."""
    out = np.zeros((4, 4), dtype=np.complex128)
    for n, i, j in np.ndindex(4, 3, 3):
        u, v = _projector_pair_vectors(n, i, j)
        out += q[n, i, j] * np.kron(la.projector(u), la.projector(v))
    return out


def braunstein_reconstruct(co: BraunsteinCoefficients) -> la.ComplexMatrix:
    """Rebuild the operator from the 36-term projector expansion."""
    return projector_sum(depolarizing_q_coefficients(co, 1.0))


def q_decomposition(q: np.ndarray) -> SeparableDecomposition:
    terms = []
    for n, i, j in np.ndindex(4, 3, 3):
        w = q[n, i, j]
        if w > EIG_DROP:
            u, v = _projector_pair_vectors(n, i, j)
            terms.append((w, PureState(2, u), PureState(2, v)))
    total = sum(p for p, _, _ in terms)
    return SeparableDecomposition(2, 2, tuple((p / total, u, v) for p, u, v in terms))


def depolarizing_two_qubit_check(rho: BipartiteState, epsilon: float) -> Verdict:
    """Verdict on D_eps(rho), the globally depolarized two-qubit state."""
    co = braunstein_coefficients(rho)
    q = depolarizing_q_coefficients(co, epsilon)
    qmin = float(q.min())
    details = {"epsilon": epsilon, "min_q": qmin}
    if qmin >= -Q_TOL:
        cert = q_decomposition(np.clip(q, 0, None))
        return Verdict("depolarizing-2q", Outcome.SEPARABLE, cert, details)
    return Verdict("depolarizing-2q", Outcome.INCONCLUSIVE, None, details)


def depolarized(rho: BipartiteState, epsilon: float) -> BipartiteState:
    ch = DepolarizingChannel(rho.dim, epsilon)
    return BipartiteState(rho.dA, rho.dB, depolarize(ch, rho.matrix))


class EBStatus(enum.Enum):
    EB = "entanglement-breaking"
    NOT_EB = "not-entanglement-breaking"


def depolarizing_isotropic_threshold(d: int, epsilon: float) -> EBStatus:
    if d < 2:
        raise BadDimension(f"d must be >= 2, got {d}")
    return EBStatus.EB if epsilon <= 1 / (d + 1) + 1e-12 else EBStatus.NOT_EB


def isotropic_pt_min_eigenvalue(d: int, epsilon: float) -> float:
    iso = isotropic_state(d, epsilon)
    return la.min_eigenvalue(la.partial_transpose(iso, d, d))


def isotropic_check(d: int, epsilon: float) -> Verdict:
    status = depolarizing_isotropic_threshold(d, epsilon)
    details = {
        "d": d,
        "epsilon": epsilon,
        "threshold": 1 / (d + 1),
        "pt_min_eigenvalue": isotropic_pt_min_eigenvalue(d, epsilon),
    }
    if status is EBStatus.EB:
        return Verdict("isotropic", Outcome.SEPARABLE, "local depolarizing channel is entanglement-breaking", details)
    return Verdict("isotropic", Outcome.INCONCLUSIVE, None, details)
