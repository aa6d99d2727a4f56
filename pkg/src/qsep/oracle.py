"""Exact separability decisions at low dimension.

For 2x2, 2x3 and 3x2 systems the PPT condition is necessary and sufficient
(Horodecki 1996). Elsewhere a state is only ever called separable on the
strength of an explicit decomposition.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Any

import numpy as np

from . import linalg as la
from .errors import CertificateMismatch, UnsupportedDimensions
from .states import BipartiteState, SeparableDecomposition, assemble_matrix

EXACT_DIMS = frozenset({(2, 2), (2, 3), (3, 2)})
CERTIFICATE_TOL = 1e-9


class OracleOutcome(enum.Enum):
    SEPARABLE = "separable"
    ENTANGLED = "entangled"


class OracleMethod(enum.Enum):
    PPT_EXACT = "ppt-exact"
    CERTIFICATE = "certificate"


@dataclass(frozen=True)
class OracleVerdict:
    outcome: OracleOutcome
    method: OracleMethod
    evidence: Any

    @property
    def separable(self) -> bool:
        return self.outcome is OracleOutcome.SEPARABLE


def pt_spectrum(rho: BipartiteState) -> np.ndarray:
    return la.hermitian_eigenvalues(la.partial_transpose(rho.matrix, rho.dA, rho.dB))


def oracle_separable(rho: BipartiteState) -> OracleVerdict:
    if (rho.dA, rho.dB) not in EXACT_DIMS:
        raise UnsupportedDimensions(
            f"PPT is only exact for 2x2, 2x3, 3x2; got {rho.dA}x{rho.dB}"
        )
    spec = pt_spectrum(rho)
    outcome = OracleOutcome.SEPARABLE if spec[0] >= -la.TOL_PSD else OracleOutcome.ENTANGLED
    return OracleVerdict(outcome, OracleMethod.PPT_EXACT, spec)


def certified_verdict(rho: BipartiteState, cert: SeparableDecomposition) -> OracleVerdict:
    """Separable iff ``cert`` reassembles to ``rho``; raises otherwise."""
    if (cert.dA, cert.dB) != (rho.dA, rho.dB):
        raise CertificateMismatch(
            f"certificate dims {cert.dA}x{cert.dB} vs state {rho.dA}x{rho.dB}"
        )
    dist = la.frobenius_distance(assemble_matrix(cert), rho.matrix)
    if dist > CERTIFICATE_TOL:
        raise CertificateMismatch(f"certificate misses the state by {dist:.3g} (Frobenius)")
    return OracleVerdict(OracleOutcome.SEPARABLE, OracleMethod.CERTIFICATE, dist)
