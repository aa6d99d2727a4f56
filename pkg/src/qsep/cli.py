"""``qsep`` command-line front end.

Exit codes: 0 when a verdict or suite result was computed (and, for
``verify``, every property held), 1 when a verify property failed, 2 on
input errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__
from . import io as qio
from . import linalg as la
from .channels import (
    DepolarizingChannel,
    apply_id_tensor,
    computational_basis,
    depolarize,
    ebc_from_decomposition,
    isotropic_state,
    normalized_ebc_from_decomposition,
    paper_qutrit_basis,
    unnormalized_maxent_projector,
    wavepacket_reduction,
)
from .criteria import (
    Outcome,
    Verdict,
    basis_reduction,
    corollary1_zero_pattern,
    corollary2_sampled,
    depolarizing_two_qubit_check,
    isotropic_check,
    ppt_check,
    theorem3_block_psd,
)
from .errors import BadSpec, QsepError
from .oracle import oracle_separable
from .states import (
    BipartiteState,
    SeparableDecomposition,
    assemble_matrix,
    bell_state,
    maximally_entangled,
    random_pattern_state,
    random_separable,
    random_state,
)
from .verify import SUITES

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

GEN_SPECS = {
    "bell": "",
    "maxent": "d",
    "maxent-unnormalized": "d",
    "random-separable": "dA dB k",
    "random-density": "d | dA dB",
    "depolarized-maxent": "d eps",
    "eq22-random": "",
    "eq55": "",
}


class InputError(Exception):
    pass


def default_seed() -> int:
    raw = os.environ.get("QSEP_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"QSEP_SEED must be an integer, got {raw!r}") from None


def _ints(args: Sequence[str], n: int, spec: str) -> list[int]:
    if len(args) != n:
        raise BadSpec(f"'{spec}' takes {n} argument(s) ({GEN_SPECS[spec]}), got {len(args)}")
    try:
        return [int(a) for a in args]
    except ValueError:
        raise BadSpec(f"'{spec}' arguments must be integers, got {list(args)}") from None


def generate(spec: str, args: Sequence[str], seed: int):
    """Build the object named by a ``gen`` spec. Returns (object, certificate or None)."""
    if spec not in GEN_SPECS:
        raise BadSpec(f"unknown spec {spec!r}; choose from {', '.join(GEN_SPECS)}")
    if spec == "bell":
        _ints(args, 0, spec)
        return bell_state(), None
    if spec in ("maxent", "maxent-unnormalized"):
        (d,) = _ints(args, 1, spec)
        return maximally_entangled(d, normalized=spec == "maxent"), None
    if spec == "random-separable":
        dA, dB, k = _ints(args, 3, spec)
        dec, rho = random_separable(dA, dB, k, seed)
        return rho, dec
    if spec == "random-density":
        if len(args) == 1:
            dA = dB = _ints(args, 1, spec)[0]
        else:
            dA, dB = _ints(args, 2, spec)
        return random_state(dA, dB, seed), None
    if spec == "depolarized-maxent":
        if len(args) != 2:
            raise BadSpec(f"'{spec}' takes 2 arguments (d eps), got {len(args)}")
        try:
            d, eps = int(args[0]), float(args[1])
        except ValueError:
            raise BadSpec(f"bad arguments for '{spec}': {list(args)}") from None
        if d < 2:
            raise BadSpec(f"d must be >= 2, got {d}")
        if not 0 <= eps <= 1:
            raise BadSpec(f"eps must lie in [0, 1], got {eps}")
        return BipartiteState(d, d, isotropic_state(d, eps)), None
    if spec == "eq22-random":
        _ints(args, 0, spec)
        return random_pattern_state(2, 2, seed), None
    _ints(args, 0, spec)
    return BipartiteState(2, 2, np.full((4, 4), 0.25)), None


def _file_digest(path: str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _jsonable(x: Any) -> Any:
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, SeparableDecomposition):
        return f"decomposition with {len(x)} product terms"
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    return x


def verdict_report(verdict: Verdict, digest: str | None, seed: int | None) -> dict[str, Any]:
    cert = verdict.certificate
    if isinstance(cert, SeparableDecomposition):
        summary = f"separable decomposition, {len(cert)} product terms"
    else:
        summary = cert
    return {
        "input_digest": digest,
        "criterion": verdict.criterion,
        "outcome": verdict.outcome.value,
        "certificate": summary,
        "diagnostics": _jsonable(verdict.details),
        "seed": seed,
        "version": __version__,
    }


def _load_state(path: str) -> BipartiteState:
    obj = qio.load_matrix(path)
    if not isinstance(obj, BipartiteState):
        raise InputError(f"{path}: expected a density file")
    return obj


def _load_basis(arg: str, d: int):
    if arg == "computational":
        return computational_basis(d)
    if arg == "paper-qutrit":
        return paper_qutrit_basis()
    obj = qio.load_matrix(arg)
    if not isinstance(obj, list):
        raise InputError(f"{arg}: expected a basis file")
    return obj


def _print_table(rows: list[tuple[str, Any]]) -> None:
    width = max(len(k) for k, _ in rows)
    for k, v in rows:
        print(f"{k:<{width}}  {v}")


def cmd_gen(ns: argparse.Namespace) -> int:
    obj, cert = generate(ns.spec, ns.args, ns.seed)
    text = qio.dumps(obj) + "\n"
    if ns.out:
        Path(ns.out).write_text(text)
    else:
        sys.stdout.write(text)
    if ns.certificate:
        if cert is None:
            raise InputError(f"spec {ns.spec!r} has no certificate to write")
        qio.save(cert, ns.certificate)
    return EXIT_OK


CRITERIA = (
    "corollary1",
    "blocks-psd",
    "corollary2",
    "ppt",
    "oracle",
    "basis-reduction",
    "depolarizing-2q",
    "isotropic",
)


def run_check(ns: argparse.Namespace) -> Verdict:
    if ns.criterion == "isotropic":
        if ns.d is None or ns.epsilon is None:
            raise InputError("isotropic needs --d and --epsilon")
        return isotropic_check(ns.d, ns.epsilon)
    if ns.input is None:
        raise InputError(f"criterion {ns.criterion!r} needs an input file")
    rho = _load_state(ns.input)
    if ns.criterion == "corollary1":
        return corollary1_zero_pattern(rho)
    if ns.criterion == "blocks-psd":
        return theorem3_block_psd(rho)
    if ns.criterion == "corollary2":
        return corollary2_sampled(rho, ns.trials or 1000, ns.seed)
    if ns.criterion == "ppt":
        return ppt_check(rho)
    if ns.criterion == "oracle":
        ov = oracle_separable(rho)
        return Verdict(
            "oracle",
            Outcome(ov.outcome.value),
            ov.method.value,
            {"pt_spectrum": ov.evidence.tolist()},
        )
    if ns.criterion == "basis-reduction":
        basis = _load_basis(ns.basis or "computational", rho.dB)
        return basis_reduction(rho, basis)[1]
    if ns.epsilon is None:
        raise InputError("depolarizing-2q needs --epsilon")
    return depolarizing_two_qubit_check(rho, ns.epsilon)


def cmd_check(ns: argparse.Namespace) -> int:
    verdict = run_check(ns)
    digest = _file_digest(ns.input) if ns.input else None
    report = verdict_report(verdict, digest, ns.seed)
    rows = [("criterion", report["criterion"]), ("outcome", report["outcome"])]
    if report["certificate"] is not None:
        rows.append(("certificate", report["certificate"]))
    for k, v in report["diagnostics"].items():
        if k not in ("pt_spectrum", "reduced_certificate"):
            rows.append((k, v))
    _print_table(rows)
    if ns.report:
        Path(ns.report).write_text(json.dumps(report, indent=1) + "\n")
    return EXIT_OK


def cmd_channel(ns: argparse.Namespace) -> int:
    rows: list[tuple[str, Any]] = []
    if ns.kind == "from-decomposition":
        dec = qio.load_matrix(ns.input)
        if not isinstance(dec, SeparableDecomposition):
            raise InputError(f"{ns.input}: expected a decomposition file")
        if ns.normalized:
            ch, inp = normalized_ebc_from_decomposition(dec), unnormalized_maxent_projector(dec.dA) / dec.dA
        else:
            ch, inp = ebc_from_decomposition(dec), unnormalized_maxent_projector(dec.dA)
        m = apply_id_tensor(ch, inp, dec.dA)
        out = BipartiteState(dec.dA, dec.dB, m, normalized=False)
        rows.append(("round-trip residual", la.frobenius_distance(m, assemble_matrix(dec))))
    else:
        rho = _load_state(ns.input)
        if ns.kind == "depolarize":
            if ns.epsilon is None:
                raise InputError("depolarize needs --epsilon")
            if ns.local:
                m = apply_id_tensor(DepolarizingChannel(rho.dB, ns.epsilon), rho.matrix, rho.dA)
            else:
                m = depolarize(DepolarizingChannel(rho.dim, ns.epsilon), rho.matrix)
        else:
            basis = _load_basis(ns.basis or "computational", rho.dB)
            m = apply_id_tensor(wavepacket_reduction(basis), rho.matrix, rho.dA)
        out = BipartiteState(rho.dA, rho.dB, m, normalized=rho.normalized)
    rows.append(("output trace", out.trace))
    text = qio.dumps(out) + "\n"
    if ns.out:
        Path(ns.out).write_text(text)
        _print_table(rows)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(ns: argparse.Namespace) -> int:
    fn = SUITES[ns.suite]
    kwargs: dict[str, Any] = {"seed": ns.seed}
    if ns.trials is not None:
        if ns.suite == "thresholds":
            raise InputError("the thresholds suite takes no --trials")
        kwargs["trials"] = ns.trials
    res = fn(**kwargs)
    print(f"suite {res.suite}  seed {res.seed}  trials {res.trials}")
    for p in res.properties:
        rel = "<=" if p.mode == "le" else ">="
        print(f"  [{'PASS' if p.passed else 'FAIL'}] {p.name}: {p.value:.3e} ({rel} {p.bound:.1e})")
    for k, v in res.report.items():
        print(f"  {k}: {v}")
    if ns.report:
        Path(ns.report).write_text(json.dumps(_jsonable(res.to_dict()), indent=1) + "\n")
    return EXIT_OK if res.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qsep", description="Separability analysis via entanglement-breaking channels.")
    parser.add_argument("--version", action="version", version=f"qsep {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a state file")
    g.add_argument("spec", help=f"one of: {', '.join(GEN_SPECS)}")
    g.add_argument("args", nargs="*")
    g.add_argument("--out")
    g.add_argument("--seed", type=int)
    g.add_argument("--certificate", help="write the separable decomposition (random-separable only)")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("check", help="run a separability criterion")
    c.add_argument("criterion", choices=CRITERIA)
    c.add_argument("input", nargs="?")
    c.add_argument("--epsilon", type=float)
    c.add_argument("--d", type=int)
    c.add_argument("--basis", help="computational, paper-qutrit, or a basis file")
    c.add_argument("--trials", type=int)
    c.add_argument("--seed", type=int)
    c.add_argument("--report")
    c.set_defaults(func=cmd_check)

    ch = sub.add_parser("channel", help="apply a channel to a state or decomposition")
    ch.add_argument("kind", choices=("depolarize", "wavepacket", "from-decomposition"))
    ch.add_argument("input")
    ch.add_argument("--epsilon", type=float)
    ch.add_argument("--local", action="store_true", help="depolarize only the B factor")
    ch.add_argument("--basis")
    ch.add_argument("--normalized", action="store_true", help="use the normalized maximally entangled input")
    ch.add_argument("--out")
    ch.set_defaults(func=cmd_channel)

    v = sub.add_parser("verify", help="run a reproduction suite")
    v.add_argument("suite", choices=tuple(SUITES))
    v.add_argument("--trials", type=int)
    v.add_argument("--seed", type=int)
    v.add_argument("--report")
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    try:
        if getattr(ns, "seed", None) is None:
            ns.seed = default_seed()
        return ns.func(ns)
    except (InputError, QsepError, ValueError) as exc:
        print(f"qsep: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
