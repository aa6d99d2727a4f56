"""Seeded reproduction suites behind ``qsep verify``.

Each suite returns a :class:`SuiteResult` listing named properties with
their worst measured residual and the bound it was checked against.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import linalg as la
from .channels import (
    apply_id_tensor,
    ebc_from_decomposition,
    normalized_ebc_from_decomposition,
    unnormalized_maxent_projector,
    wavepacket_reduction,
)
from .criteria import (
    BraunsteinCoefficients,
    basis_reduction,
    braunstein_coefficients,
    braunstein_reconstruct,
    corollary1_zero_pattern,
    corollary2_sampled,
    depolarized,
    depolarizing_q_coefficients,
    depolarizing_two_qubit_check,
    isotropic_pt_min_eigenvalue,
    qutrit_closed_form,
    theorem3_block_psd,
)
from .errors import CertificateMismatch
from .oracle import certified_verdict, oracle_separable
from .states import (
    BipartiteState,
    SeparableDecomposition,
    random_density,
    random_nonnegative_separable,
    random_pattern_state,
    random_pure,
    random_separable,
    random_state,
    rng_from,
)


@dataclass
class PropertyResult:
    name: str
    value: float
    bound: float
    # "le": value <= bound passes; "ge": value >= bound passes
    mode: str = "le"

    @property
    def passed(self) -> bool:
        if self.mode == "ge":
            return self.value >= self.bound
        return self.value <= self.bound


@dataclass
class SuiteResult:
    suite: str
    seed: int
    trials: int | None
    properties: list[PropertyResult] = field(default_factory=list)
    report: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.properties)

    def add(self, name: str, value: float, bound: float, mode: str = "le") -> None:
        self.properties.append(PropertyResult(name, float(value), float(bound), mode))

    def to_dict(self) -> dict[str, Any]:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "trials": self.trials,
            "passed": self.passed,
            "properties": [
                {"name": p.name, "value": p.value, "bound": p.bound, "mode": p.mode, "passed": p.passed}
                for p in self.properties
            ],
            "report": self.report,
        }


def theorem1(trials: int = 200, seed: int = 0) -> SuiteResult:
    """Rebuild random separable states through their EBC, both input normalizations."""
    rng = rng_from(seed)
    dims = list(itertools.product((2, 3, 4), repeat=2))
    worst = worst_norm = 0.0
    for t in range(trials):
        dA, dB = dims[t % len(dims)]
        dec, rho = random_separable(dA, dB, int(rng.integers(1, 7)), rng)
        big_i = unnormalized_maxent_projector(dA)
        out = apply_id_tensor(ebc_from_decomposition(dec), big_i, dA)
        worst = max(worst, la.frobenius_distance(out, rho.matrix))
        out = apply_id_tensor(normalized_ebc_from_decomposition(dec), big_i / dA, dA)
        worst_norm = max(worst_norm, la.frobenius_distance(out, rho.matrix))
    res = SuiteResult("theorem1", seed, trials)
    res.add("round-trip residual (unnormalized |I>)", worst, 1e-10)
    res.add("round-trip residual (normalized |beta>)", worst_norm, 1e-10)
    return res


def _entry_masks() -> tuple[np.ndarray, np.ndarray]:
    """Masks over a 9x9 matrix: entries with printed formulas right vs. the typo'd pair."""
    block_bad = np.zeros((3, 3), dtype=bool)
    block_bad[1, 2] = block_bad[2, 1] = True
    bad = np.tile(block_bad, (3, 3))
    return ~bad, bad


def qutrit_closed_form_suite(trials: int = 50, seed: int = 0) -> SuiteResult:
    rng = rng_from(seed)
    good, bad = _entry_masks()
    worst_good = worst_corrected = worst_term = 0.0
    worst_trace = 0.0
    min_eig = min_pt_eig = np.inf
    max_delta = 0.0
    for _ in range(trials):
        rho = random_state(3, 3, rng)
        red = qutrit_closed_form(rho)
        worst_good = max(worst_good, np.max(np.abs(red.delta[good])))
        worst_corrected = max(worst_corrected, red.max_corrected_delta)
        # the printed (1,2)/(2,1) entries fall short by exactly rho_{iA 2, jA 2}/8
        b = la.blocks(rho.matrix, 3, 3)
        term = la.from_blocks(np.einsum("ij,ab->ijab", b[:, :, 2, 2], np.ones((3, 3))) / 8)
        expected = np.where(bad, term, 0)
        worst_term = max(worst_term, np.max(np.abs(red.delta - expected)))
        max_delta = max(max_delta, red.max_printed_delta)
        d = red.direct
        worst_trace = max(worst_trace, abs(d.trace - 1))
        min_eig = min(min_eig, la.min_eigenvalue(d.matrix))
        min_pt_eig = min(min_pt_eig, la.min_eigenvalue(la.partial_transpose(d.matrix, 3, 3)))
    res = SuiteResult("qutrit-closed-form", seed, trials)
    res.add("printed formulas vs direct, unaffected entries", worst_good, 1e-10)
    res.add("corrected formulas vs direct, all entries", worst_corrected, 1e-10)
    res.add("(1,2)/(2,1) delta minus rho_{iA2,jA2}/8", worst_term, 1e-10)
    res.add("direct output |trace - 1|", worst_trace, 1e-10)
    res.add("direct output min eigenvalue", min_eig, -la.TOL_PSD, "ge")
    res.add("direct output min PT eigenvalue", min_pt_eig, -la.TOL_PSD, "ge")
    res.report["max_printed_delta"] = max_delta
    res.report["delta_term"] = "+rho_{iA 2, jA 2}/8 in entries (1,2) and (2,1) of every block"
    return res


def braunstein(trials: int = 100, seed: int = 0) -> SuiteResult:
    rng = rng_from(seed)
    worst_rec = worst_sum = worst_group = 0.0
    for _ in range(trials):
        rho = random_state(2, 2, rng)
        co = braunstein_coefficients(rho)
        worst_rec = max(worst_rec, la.frobenius_distance(braunstein_reconstruct(co), rho.matrix))
        q = depolarizing_q_coefficients(co, float(rng.uniform()))
        worst_sum = max(worst_sum, abs(q.sum() - 1))
        worst_group = max(worst_group, np.max(np.abs(q.sum(axis=0) - 1 / 9)))
    res = SuiteResult("braunstein", seed, trials)
    res.add("36-term reconstruction residual", worst_rec, 1e-10)
    res.add("|sum_{n,i,j} q - 1|", worst_sum, 1e-12)
    res.add("|sum_n q^{ij} - 1/9|", worst_group, 1e-12)
    return res


def thresholds(seed: int = 0) -> SuiteResult:
    res = SuiteResult("thresholds", seed, None)
    for d in (2, 3, 4):
        eps = 1 / (d + 1)
        res.add(f"d={d}: PT min eigenvalue at eps=1/(d+1)", isotropic_pt_min_eigenvalue(d, eps), -1e-10, "ge")
        res.add(f"d={d}: PT min eigenvalue at eps=1/(d+1)+1e-3", isotropic_pt_min_eigenvalue(d, eps + 1e-3), -1e-6)
    worst = BraunsteinCoefficients.worst_case()
    res.add("2q worst case: |min q| at eps=1/15", abs(depolarizing_q_coefficients(worst, 1 / 15).min()), 1e-12)
    # strictly negative, well clear of rounding
    res.add("2q worst case: min q at eps=1/15+1e-3", depolarizing_q_coefficients(worst, 1 / 15 + 1e-3).min(), -1e-12)
    return res


def _sweep_pool(trials: int, rng: np.random.Generator) -> list[tuple[str, BipartiteState]]:
    dims = [(2, 2), (2, 3), (3, 2)]
    makers: list[tuple[str, Callable[[int, int], BipartiteState]]] = [
        ("hs-random", lambda a, b: random_state(a, b, rng)),
        ("separable", lambda a, b: random_separable(a, b, int(rng.integers(1, 5)), rng)[1]),
        ("pattern", lambda a, b: random_pattern_state(a, b, rng)),
        ("nonneg-generator", lambda a, b: random_nonnegative_separable(a, b, int(rng.integers(1, 5)), rng)[1]),
        ("noisy-pure", lambda a, b: _noisy_pure(a, b, rng)),
        ("random-pinched", lambda a, b: _random_pinched(a, b, rng)),
    ]
    pool = []
    for t in range(trials):
        a, b = dims[t % len(dims)]
        name, make = makers[(t // len(dims)) % len(makers)]
        pool.append((name, make(a, b)))
    return pool


def _noisy_pure(dA: int, dB: int, rng: np.random.Generator) -> BipartiteState:
    psi = random_pure(dA * dB, rng).projector()
    p = float(rng.uniform())
    return BipartiteState(dA, dB, p * psi + (1 - p) * np.eye(dA * dB) / (dA * dB))


def _random_pinched(dA: int, dB: int, rng: np.random.Generator) -> BipartiteState:
    u, _ = np.linalg.qr(random_density(dB, rng) + 1j * np.eye(dB))
    ch = wavepacket_reduction(list(u.T))
    m = apply_id_tensor(ch, random_state(dA, dB, rng).matrix, dA)
    return BipartiteState(dA, dB, m)


def soundness_sweep(trials: int = 1000, seed: int = 0, corollary2_trials: int = 200) -> SuiteResult:
    """Every Separable claim of a sufficient criterion must agree with the oracle."""
    rng = rng_from(seed)
    pool = _sweep_pool(trials, rng)
    names = ["corollary1", "basis-reduction", "blocks-psd", "corollary2", "depolarizing-2q"]
    claims = dict.fromkeys(names, 0)
    violations = dict.fromkeys(names, 0)
    missed = dict.fromkeys(names, 0)
    oracle_sep = dict.fromkeys(names, 0)
    bad_certificates = 0
    for _, rho in pool:
        checks = [
            (corollary1_zero_pattern(rho), rho),
            (basis_reduction(rho)[1], rho),
            (theorem3_block_psd(rho), rho),
            (corollary2_sampled(rho, corollary2_trials, rng), rho),
        ]
        if (rho.dA, rho.dB) == (2, 2):
            eps = float(rng.uniform(0, 0.2))
            checks.append((depolarizing_two_qubit_check(rho, eps), depolarized(rho, eps)))
        for verdict, target in checks:
            sep = oracle_separable(target).separable
            name = verdict.criterion
            oracle_sep[name] += sep
            if verdict.separable:
                claims[name] += 1
                violations[name] += not sep
                if isinstance(verdict.certificate, SeparableDecomposition):
                    try:
                        certified_verdict(target, verdict.certificate)
                    except CertificateMismatch:
                        bad_certificates += 1
            elif sep:
                missed[name] += 1
    res = SuiteResult("soundness-sweep", seed, trials)
    res.add("soundness violations (all criteria)", sum(violations.values()), 0)
    res.add("certificates failing to reassemble", bad_certificates, 0)
    res.report["states"] = len(pool)
    res.report["separable_claims"] = claims
    res.report["violations"] = violations
    res.report["incompleteness"] = {
        n: (missed[n] / oracle_sep[n] if oracle_sep[n] else None) for n in names
    }
    return res


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "theorem1": theorem1,
    "qutrit-closed-form": qutrit_closed_form_suite,
    "braunstein": braunstein,
    "thresholds": thresholds,
    "soundness-sweep": soundness_sweep,
}
