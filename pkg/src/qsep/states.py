"""Contract-tagged states and random generators.

All generators take ``seed``, which may be an int, ``None`` or an existing
``numpy.random.Generator``; passing a Generator lets the caller own the
PRNG stream across calls.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import numpy.typing as npt

from . import linalg as la
from .errors import BadDimension, DimensionMismatch, InvariantViolation, NotNormalized

TRACE_TOL = 1e-9
NORM_TOL = 1e-9
ENTROPY_FLOOR = 1e-12

SeedLike = int | np.random.Generator | None


def rng_from(seed: SeedLike) -> np.random.Generator:
    return np.random.default_rng(seed)


@dataclass(frozen=True, eq=False)
class BipartiteState:
    """Density operator on C^dA (x) C^dB, validated at construction."""

    dA: int
    dB: int
    matrix: la.ComplexMatrix
    normalized: bool = True

    def __post_init__(self) -> None:
        if self.dA < 1 or self.dB < 1:
            raise BadDimension(f"dimensions must be positive, got ({self.dA}, {self.dB})")
        m = la.as_matrix(self.matrix)
        if m.shape[0] != self.dA * self.dB:
            raise DimensionMismatch(f"matrix dim {m.shape[0]} != {self.dA}*{self.dB}")
        res = la.hermiticity_residual(m)
        if res > la.TOL_HERM:
            raise InvariantViolation("hermiticity", res)
        lo = la.min_eigenvalue(m)
        if lo < -la.TOL_PSD:
            raise InvariantViolation("positivity", -lo)
        if self.normalized:
            tr_err = abs(np.trace(m) - 1)
            if tr_err > TRACE_TOL:
                raise InvariantViolation("trace", tr_err)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.dA * self.dB

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)


@dataclass(frozen=True, eq=False)
class PureState:
    dim: int
    vector: la.ComplexVector
    normalized: bool = True

    def __post_init__(self) -> None:
        v = la.as_vector(self.vector)
        if v.size != self.dim:
            raise DimensionMismatch(f"vector length {v.size} != dim {self.dim}")
        if self.normalized:
            err = abs(np.linalg.norm(v) - 1)
            if err > NORM_TOL:
                raise NotNormalized(f"norm deviates from 1 by {err:.3g}")
        v.setflags(write=False)
        object.__setattr__(self, "vector", v)

    @classmethod
    def of(cls, v: npt.ArrayLike, normalize: bool = False) -> PureState:
        v = la.as_vector(v)
        if normalize:
            v = v / np.linalg.norm(v)
        return cls(v.size, v)

    def projector(self) -> la.ComplexMatrix:
        return la.projector(self.vector)


@dataclass(frozen=True, eq=False)
class SeparableDecomposition:
    """Convex mixture sum_k p_k |psi_k><psi_k| (x) |phi_k><phi_k|."""

    dA: int
    dB: int
    terms: tuple[tuple[float, PureState, PureState], ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        terms = tuple((float(p), psi, phi) for p, psi, phi in self.terms)
        if not terms:
            raise ValueError("decomposition needs at least one term")
        for p, psi, phi in terms:
            if not p > 0:
                raise InvariantViolation("weight-positivity", -p)
            if psi.dim != self.dA or phi.dim != self.dB:
                raise DimensionMismatch(
                    f"term dims ({psi.dim}, {phi.dim}) != ({self.dA}, {self.dB})"
                )
            if not (psi.normalized and phi.normalized):
                raise NotNormalized("decomposition factors must be normalized")
        err = abs(sum(p for p, _, _ in terms) - 1)
        if err > TRACE_TOL:
            raise InvariantViolation("weight-sum", err)
        object.__setattr__(self, "terms", terms)

    @classmethod
    def from_arrays(
        cls,
        weights: Sequence[float],
        psis: Iterable[npt.ArrayLike],
        phis: Iterable[npt.ArrayLike],
    ) -> SeparableDecomposition:
        psis = [la.as_vector(v) for v in psis]
        phis = [la.as_vector(v) for v in phis]
        terms = tuple(
            (p, PureState(a.size, a), PureState(b.size, b))
            for p, a, b in zip(weights, psis, phis, strict=True)
        )
        return cls(psis[0].size, phis[0].size, terms)

    def __len__(self) -> int:
        return len(self.terms)


def assemble_matrix(dec: SeparableDecomposition) -> la.ComplexMatrix:
    out = np.zeros((dec.dA * dec.dB,) * 2, dtype=np.complex128)
    for p, psi, phi in dec.terms:
        out += p * la.kron(psi.projector(), phi.projector())
    return out


def assemble(dec: SeparableDecomposition) -> BipartiteState:
    return BipartiteState(dec.dA, dec.dB, assemble_matrix(dec))


def product_state(psi: npt.ArrayLike, phi: npt.ArrayLike) -> BipartiteState:
    a, b = PureState.of(psi, normalize=True), PureState.of(phi, normalize=True)
    return BipartiteState(a.dim, b.dim, la.kron(a.projector(), b.projector()))


def basis_vector(d: int, i: int) -> la.ComplexVector:
    v = np.zeros(d, dtype=np.complex128)
    v[i] = 1
    return v


def maximally_entangled(d: int, normalized: bool = True) -> PureState:
    """sum_i |i>|i>, divided by sqrt(d) when ``normalized``."""
    if d < 2:
        raise BadDimension(f"maximally entangled state needs d >= 2, got {d}")
    v = np.eye(d, dtype=np.complex128).reshape(-1)
    if normalized:
        v = v / np.sqrt(d)
    return PureState(d * d, v, normalized=normalized)


def bell_state() -> BipartiteState:
    """Projector onto (|00> + |11>)/sqrt(2)."""
    return BipartiteState(2, 2, maximally_entangled(2).projector())


def von_neumann_entropy(rho: npt.ArrayLike) -> float:
    evals = la.hermitian_eigenvalues(rho)
    evals = evals[evals > ENTROPY_FLOOR]
    return float(-np.sum(evals * np.log2(evals)))


def entanglement_entropy(psi: PureState, dA: int, dB: int) -> float:
    """Base-2 entropy of the A-side reduced state of a normalized pure state."""
    if psi.dim != dA * dB:
        raise DimensionMismatch(f"state dim {psi.dim} != {dA}*{dB}")
    if not psi.normalized:
        raise NotNormalized("entanglement entropy needs a normalized state")
    rho_a = la.partial_trace(psi.projector(), dA, dB, "B")
    return von_neumann_entropy(rho_a)


def is_maximally_entangled(psi: PureState, dA: int, dB: int, tol: float = 1e-8) -> bool:
    if dB < dA:
        raise BadDimension(f"maximal entanglement test assumes dB >= dA, got ({dA}, {dB})")
    return abs(entanglement_entropy(psi, dA, dB) - np.log2(dA)) <= tol


def random_pure(d: int, seed: SeedLike = None) -> PureState:
    if d < 1:
        raise BadDimension(f"d must be >= 1, got {d}")
    rng = rng_from(seed)
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState(d, v / np.linalg.norm(v))


def random_simplex(k: int, seed: SeedLike = None) -> np.ndarray:
    """Flat-Dirichlet weights via normalized exponentials."""
    w = rng_from(seed).exponential(size=k)
    return w / w.sum()


def random_separable(
    dA: int, dB: int, k_terms: int, seed: SeedLike = None
) -> tuple[SeparableDecomposition, BipartiteState]:
    if k_terms < 1:
        raise ValueError(f"k_terms must be >= 1, got {k_terms}")
    rng = rng_from(seed)
    weights = random_simplex(k_terms, rng)
    terms = tuple(
        (float(p), random_pure(dA, rng), random_pure(dB, rng)) for p in weights
    )
    dec = SeparableDecomposition(dA, dB, terms)
    return dec, assemble(dec)


def random_density(d: int, seed: SeedLike = None) -> la.ComplexMatrix:
    """Hilbert-Schmidt random density matrix G G^dagger / Tr(G G^dagger)."""
    if d < 1:
        raise BadDimension(f"d must be >= 1, got {d}")
    rng = rng_from(seed)
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    m = g @ g.conj().T
    m = (m + m.conj().T) / 2
    return m / np.trace(m).real


def random_state(dA: int, dB: int, seed: SeedLike = None) -> BipartiteState:
    return BipartiteState(dA, dB, random_density(dA * dB, seed))


def werner_state(p: float) -> BipartiteState:
    """p |Phi+><Phi+| + (1 - p) I/4."""
    m = p * maximally_entangled(2).projector() + (1 - p) * np.eye(4) / 4
    return BipartiteState(2, 2, m)


def random_pattern_state(dA: int, dB: int, seed: SeedLike = None) -> BipartiteState:
    """Random state with <ij|rho|kl> = 0 whenever j != l.

    Built as sum_l w_l M_l (x) |l><l| with Hilbert-Schmidt random M_l.
    """
    rng = rng_from(seed)
    w = random_simplex(dB, rng)
    m = sum(w[l] * la.kron(random_density(dA, rng), la.projector(basis_vector(dB, l))) for l in range(dB))
    return BipartiteState(dA, dB, m)


def random_nonnegative_separable(
    dA: int, dB: int, k_terms: int, seed: SeedLike = None
) -> tuple[SeparableDecomposition, BipartiteState]:
    """Separable state whose A-factors have entrywise nonnegative real amplitudes.

    Every dB x dB block of such a state is a nonnegative combination of PSD
    matrices, so all blocks are Hermitian PSD.
    """
    rng = rng_from(seed)
    weights = random_simplex(k_terms, rng)
    terms = []
    for p in weights:
        x = np.abs(rng.standard_normal(dA))
        terms.append((float(p), PureState.of(x, normalize=True), random_pure(dB, rng)))
    dec = SeparableDecomposition(dA, dB, tuple(terms))
    return dec, assemble(dec)
