"""Channel representations and the EBC constructions.

Three channel types are supported and applied directly, without conversion
between representations:

* :class:`HolevoChannel` -- measure-and-prepare form ``sum_k R_k Tr(F_k s)``.
* :class:`KrausChannel` -- ``sum_k E_k s E_k^dagger``.
* :class:`DepolarizingChannel` -- ``(1 - eps) Tr(s) I/d + eps s``.

Channels may be sub-trace-preserving; :func:`is_trace_preserving` reports
which regime a channel is in.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
import numpy.typing as npt

from . import linalg as la
from .errors import DimensionMismatch, Incomplete, InvariantViolation, NotOrthonormal
from .states import SeparableDecomposition

COMPLETENESS_TOL = 1e-9
ORTHO_TOL = 1e-9


class TracePreservation(enum.Enum):
    PRESERVING = "preserving"
    SUB_PRESERVING = "sub-preserving"
    INVALID = "invalid"


@dataclass(frozen=True, eq=False)
class HolevoChannel:
    din: int
    dout: int
    pairs: tuple[tuple[la.ComplexMatrix, la.ComplexMatrix], ...]

    def __post_init__(self) -> None:
        pairs = []
        for r, f in self.pairs:
            r, f = la.as_matrix(r), la.as_matrix(f)
            if r.shape[0] != self.dout or f.shape[0] != self.din:
                raise DimensionMismatch(
                    f"pair shapes {r.shape}/{f.shape} vs dout={self.dout}, din={self.din}"
                )
            lo = la.min_eigenvalue(r)
            if lo < -la.TOL_PSD:
                raise InvariantViolation("R-positivity", -lo)
            tr_err = abs(np.trace(r) - 1)
            if tr_err > 1e-9:
                raise InvariantViolation("R-trace", tr_err)
            lo = la.min_eigenvalue(f)
            if lo < -la.TOL_PSD:
                raise InvariantViolation("F-positivity", -lo)
            pairs.append((r, f))
        if not pairs:
            raise ValueError("channel needs at least one (R, F) pair")
        object.__setattr__(self, "pairs", tuple(pairs))

    @property
    def preparations(self) -> np.ndarray:
        return np.stack([r for r, _ in self.pairs])

    @property
    def effects(self) -> np.ndarray:
        return np.stack([f for _, f in self.pairs])


@dataclass(frozen=True, eq=False)
class KrausChannel:
    din: int
    dout: int
    operators: tuple[la.ComplexMatrix, ...]

    def __post_init__(self) -> None:
        ops = tuple(np.asarray(e, dtype=np.complex128) for e in self.operators)
        if not ops:
            raise ValueError("channel needs at least one Kraus operator")
        for e in ops:
            if e.shape != (self.dout, self.din):
                raise DimensionMismatch(f"Kraus operator shape {e.shape} != {(self.dout, self.din)}")
        object.__setattr__(self, "operators", ops)


@dataclass(frozen=True)
class DepolarizingChannel:
    d: int
    epsilon: float

    def __post_init__(self) -> None:
        if not 0 <= self.epsilon <= 1:
            raise ValueError(f"epsilon must lie in [0, 1], got {self.epsilon}")
        if self.d < 1:
            raise ValueError(f"d must be >= 1, got {self.d}")

    @property
    def din(self) -> int:
        return self.d

    @property
    def dout(self) -> int:
        return self.d


Channel = Union[HolevoChannel, KrausChannel, DepolarizingChannel]


def _check_input(ch: Channel, sigma: npt.ArrayLike) -> la.ComplexMatrix:
    sigma = la.as_matrix(sigma)
    if sigma.shape[0] != ch.din:
        raise DimensionMismatch(f"input dim {sigma.shape[0]} != channel din {ch.din}")
    return sigma


def holevo_apply(ch: HolevoChannel, sigma: npt.ArrayLike) -> la.ComplexMatrix:
    sigma = _check_input(ch, sigma)
    # Tr(F_k sigma) for every k in one contraction
    weights = np.einsum("kab,ba->k", ch.effects, sigma)
    return np.einsum("k,kmn->mn", weights, ch.preparations)


def kraus_apply(ch: KrausChannel, sigma: npt.ArrayLike) -> la.ComplexMatrix:
    sigma = _check_input(ch, sigma)
    out = np.zeros((ch.dout, ch.dout), dtype=np.complex128)
    for e in ch.operators:
        out += e @ sigma @ e.conj().T
    return out


def depolarize(ch: DepolarizingChannel, rho: npt.ArrayLike) -> la.ComplexMatrix:
    """Mix with the maximally mixed state.

    Extended linearly to arbitrary inputs as ``(1 - eps) Tr(rho) I/d + eps rho``
    so the map can act on off-diagonal blocks inside :func:`apply_id_tensor`.
    """
    rho = _check_input(ch, rho)
    eye = np.eye(ch.d, dtype=np.complex128)
    return (1 - ch.epsilon) * np.trace(rho) * eye / ch.d + ch.epsilon * rho


def apply(ch: Channel, sigma: npt.ArrayLike) -> la.ComplexMatrix:
    if isinstance(ch, HolevoChannel):
        return holevo_apply(ch, sigma)
    if isinstance(ch, KrausChannel):
        return kraus_apply(ch, sigma)
    if isinstance(ch, DepolarizingChannel):
        return depolarize(ch, sigma)
    raise TypeError(f"unsupported channel type {type(ch).__name__}")


def completeness_operator(ch: HolevoChannel | KrausChannel) -> la.ComplexMatrix:
    """The operator C with Tr(Phi(s)) = Tr(C s)."""
    if isinstance(ch, HolevoChannel):
        return np.einsum("k,kab->ab", np.trace(ch.preparations, axis1=1, axis2=2), ch.effects)
    return sum(e.conj().T @ e for e in ch.operators)


def is_trace_preserving(ch: HolevoChannel | KrausChannel) -> TracePreservation:
    c = completeness_operator(ch)
    eye = np.eye(ch.din)
    if np.max(np.abs(c - eye)) <= COMPLETENESS_TOL:
        return TracePreservation.PRESERVING
    if la.is_hermitian(c) and la.is_psd(eye - c):
        return TracePreservation.SUB_PRESERVING
    return TracePreservation.INVALID


def apply_id_tensor(ch: Channel, rho: npt.ArrayLike, dA: int) -> la.ComplexMatrix:
    """(I (x) Phi)(rho), with Phi acting on the second factor.

    Block (i, j) of the output is Phi applied to block (i, j) of ``rho``.
    """
    rho = la.as_matrix(rho)
    if rho.shape[0] != dA * ch.din:
        raise DimensionMismatch(f"matrix dim {rho.shape[0]} != dA*din = {dA}*{ch.din}")
    t = rho.reshape(dA, ch.din, dA, ch.din)
    if isinstance(ch, HolevoChannel):
        w = np.einsum("kba,iajb->kij", ch.effects, t)
        out = np.einsum("kij,kmn->imjn", w, ch.preparations)
    elif isinstance(ch, KrausChannel):
        out = sum(np.einsum("ma,iajb,nb->imjn", e, t, e.conj()) for e in ch.operators)
    elif isinstance(ch, DepolarizingChannel):
        traced = np.einsum("imjm->ij", t)
        eye = np.eye(ch.d)
        out = ch.epsilon * t + (1 - ch.epsilon) / ch.d * np.einsum("ij,mn->imjn", traced, eye)
    else:
        raise TypeError(f"unsupported channel type {type(ch).__name__}")
    n = dA * ch.dout
    return np.asarray(out).reshape(n, n)


def ebc_from_decomposition(dec: SeparableDecomposition) -> HolevoChannel:
    """Entanglement-breaking channel whose output on |I><I| is the assembled state.

    ``(I (x) Phi)(|I><I|) = sum_k F_k^T (x) R_k``, so the effects carry the
    complex conjugate of each A-factor: ``F_k = p_k conj(|psi_k><psi_k|)``.
    The channel maps C^dA to C^dB and is sub-trace-preserving in general.
    """
    pairs = tuple(
        (phi.projector(), p * np.conj(psi.projector())) for p, psi, phi in dec.terms
    )
    return HolevoChannel(dec.dA, dec.dB, pairs)


def normalized_ebc_from_decomposition(dec: SeparableDecomposition) -> HolevoChannel:
    """Variant reproducing the state from the normalized maximally entangled input.

    Effects are scaled by dA; the channel is trace-preserving exactly when the
    A-side reduced state is maximally mixed, otherwise typically invalid as a
    trace-preserving map.
    """
    pairs = tuple(
        (phi.projector(), dec.dA * p * np.conj(psi.projector())) for p, psi, phi in dec.terms
    )
    return HolevoChannel(dec.dA, dec.dB, pairs)


def check_orthonormal_basis(basis: Sequence[npt.ArrayLike], d: int | None = None) -> np.ndarray:
    """Stack ``basis`` as rows after checking it is an orthonormal basis."""
    vecs = np.array([la.as_vector(v) for v in basis])
    n, dim = vecs.shape
    if d is not None and dim != d:
        raise DimensionMismatch(f"basis vectors have length {dim}, expected {d}")
    gram = vecs.conj() @ vecs.T
    err = float(np.max(np.abs(gram - np.eye(n))))
    if err > ORTHO_TOL:
        raise NotOrthonormal(f"Gram matrix deviates from identity by {err:.3g}")
    if n < dim:
        raise Incomplete(f"{n} vectors cannot span dimension {dim}")
    return vecs


def wavepacket_reduction(basis: Sequence[npt.ArrayLike]) -> HolevoChannel:
    """Pinching sum_n |e_n><e_n| s |e_n><e_n| onto an orthonormal basis."""
    vecs = check_orthonormal_basis(basis)
    d = vecs.shape[1]
    projs = [la.projector(v) for v in vecs]
    return HolevoChannel(d, d, tuple((p, p) for p in projs))


def computational_basis(d: int) -> list[la.ComplexVector]:
    return list(np.eye(d, dtype=np.complex128))


def paper_qutrit_basis() -> list[la.ComplexVector]:
    """Real orthonormal qutrit basis used for the closed-form reduction."""
    s = np.sqrt(2)
    return [
        np.array([s, -1, 1], dtype=np.complex128) / 2,
        np.array([s, 1, -1], dtype=np.complex128) / 2,
        np.array([0, 1, 1], dtype=np.complex128) / s,
    ]


def unnormalized_maxent_projector(d: int) -> la.ComplexMatrix:
    """|I><I| with |I> = sum_i |i>|i>."""
    v = np.eye(d, dtype=np.complex128).reshape(-1)
    return np.outer(v, v)


def isotropic_state(d: int, epsilon: float) -> la.ComplexMatrix:
    """(I (x) D_eps)(|beta><beta|) for the normalized maximally entangled |beta>."""
    beta = unnormalized_maxent_projector(d) / d
    return apply_id_tensor(DepolarizingChannel(d, epsilon), beta, d)
