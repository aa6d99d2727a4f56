"""JSON file formats for states, vectors, bases and decompositions.

Every file is a JSON object with a ``kind`` field. Complex arrays are stored
as parallel ``re``/``im`` arrays of decimal floats; Python's float repr is the
shortest string that round-trips, so save -> load is bit-exact.

    {"kind": "density", "dims": [dA, dB], "re": [[...]], "im": [[...]]}
    {"kind": "vector", "dims": [d], "re": [...], "im": [...]}
    {"kind": "basis", "dims": [d], "vectors": [{"re": [...], "im": [...]}, ...]}
    {"kind": "decomposition", "dims": [dA, dB],
     "terms": [{"p": w, "psi": {"re", "im"}, "phi": {"re", "im"}}, ...]}
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from . import linalg as la
from .channels import check_orthonormal_basis
from .errors import InvariantViolation, ParseError, QsepError
from .states import BipartiteState, PureState, SeparableDecomposition

KINDS = ("density", "vector", "basis", "decomposition")


def _complex_to_json(a: np.ndarray) -> dict[str, Any]:
    a = np.asarray(a, dtype=np.complex128)
    return {"re": a.real.tolist(), "im": a.imag.tolist()}


def _complex_from_json(obj: Any, ndim: int, where: str) -> np.ndarray:
    try:
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{where}: expected numeric 're'/'im' arrays ({exc})") from exc
    if re.shape != im.shape:
        raise ParseError(f"{where}: re shape {re.shape} != im shape {im.shape}")
    if re.ndim != ndim:
        raise ParseError(f"{where}: expected {ndim}-D arrays, got {re.ndim}-D")
    if not (np.all(np.isfinite(re)) and np.all(np.isfinite(im))):
        raise ParseError(f"{where}: non-finite entries")
    return re + 1j * im


def state_to_json(rho: BipartiteState) -> dict[str, Any]:
    out = {"kind": "density", "dims": [rho.dA, rho.dB], **_complex_to_json(rho.matrix)}
    if not rho.normalized:
        out["normalized"] = False
    return out


def vector_to_json(psi: PureState) -> dict[str, Any]:
    out = {"kind": "vector", "dims": [psi.dim], **_complex_to_json(psi.vector)}
    if not psi.normalized:
        out["normalized"] = False
    return out


def basis_to_json(basis) -> dict[str, Any]:
    vecs = [la.as_vector(v) for v in basis]
    return {"kind": "basis", "dims": [vecs[0].size], "vectors": [_complex_to_json(v) for v in vecs]}


def decomposition_to_json(dec: SeparableDecomposition) -> dict[str, Any]:
    return {
        "kind": "decomposition",
        "dims": [dec.dA, dec.dB],
        "terms": [
            {"p": p, "psi": _complex_to_json(a.vector), "phi": _complex_to_json(b.vector)}
            for p, a, b in dec.terms
        ],
    }


def to_json(obj) -> dict[str, Any]:
    if isinstance(obj, BipartiteState):
        return state_to_json(obj)
    if isinstance(obj, PureState):
        return vector_to_json(obj)
    if isinstance(obj, SeparableDecomposition):
        return decomposition_to_json(obj)
    if isinstance(obj, (list, tuple)):
        return basis_to_json(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _dims(doc: dict, n: int) -> list[int]:
    dims = doc.get("dims")
    if not (isinstance(dims, list) and len(dims) == n and all(isinstance(d, int) and d >= 1 for d in dims)):
        raise ParseError(f"'dims' must be a list of {n} positive integers, got {dims!r}")
    return dims


def from_json(doc: Any):
    """Build the object described by a parsed MatrixFile document."""
    if not isinstance(doc, dict):
        raise ParseError("top-level JSON value must be an object")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise ParseError(f"unknown kind {kind!r}; expected one of {KINDS}")
    normalized = bool(doc.get("normalized", True))

    if kind == "density":
        dA, dB = _dims(doc, 2)
        m = _complex_from_json(doc, 2, "density")
        n = dA * dB
        if m.shape != (n, n):
            raise ParseError(f"density: array shape {m.shape} does not match dims product {n}")
        return BipartiteState(dA, dB, m, normalized=normalized)

    if kind == "vector":
        (d,) = _dims(doc, 1)
        v = _complex_from_json(doc, 1, "vector")
        if v.shape != (d,):
            raise ParseError(f"vector: length {v.shape[0]} != dims {d}")
        if normalized:
            err = abs(np.linalg.norm(v) - 1)
            if err > 1e-9:
                raise InvariantViolation("normalization", err)
        return PureState(d, v, normalized=normalized)

    if kind == "basis":
        (d,) = _dims(doc, 1)
        raw = doc.get("vectors")
        if not isinstance(raw, list) or not raw:
            raise ParseError("basis: 'vectors' must be a non-empty list")
        vecs = [_complex_from_json(v, 1, f"basis vector {k}") for k, v in enumerate(raw)]
        if any(v.shape != (d,) for v in vecs):
            raise ParseError(f"basis: every vector must have length {d}")
        return list(check_orthonormal_basis(vecs, d))

    dA, dB = _dims(doc, 2)
    raw = doc.get("terms")
    if not isinstance(raw, list) or not raw:
        raise ParseError("decomposition: 'terms' must be a non-empty list")
    terms = []
    for k, t in enumerate(raw):
        try:
            p = float(t["p"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"decomposition term {k}: missing weight 'p'") from exc
        psi = _complex_from_json(t.get("psi"), 1, f"term {k} psi")
        phi = _complex_from_json(t.get("phi"), 1, f"term {k} phi")
        terms.append((p, PureState(dA, psi), PureState(dB, phi)))
    return SeparableDecomposition(dA, dB, tuple(terms))


def dumps(obj) -> str:
    return json.dumps(to_json(obj), indent=1)


def save(obj, path: str | Path) -> None:
    Path(path).write_text(dumps(obj) + "\n")


def load_matrix(path: str | Path):
    """Load and validate a MatrixFile.

    Raises ParseError for malformed files and InvariantViolation (naming the
    invariant and its residual) for well-formed files holding invalid states.
    """
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from exc
    try:
        return from_json(doc)
    except (ParseError, InvariantViolation):
        raise
    except QsepError as exc:
        raise InvariantViolation(type(exc).__name__, float("nan"), str(exc)) from exc
