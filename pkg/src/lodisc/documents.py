"""JSON documents for state sets, unitaries and analysis reports.

State-set document::

    {"modes": 4,
     "states": [{"label": "Psi+", "terms": [{"occ": [1,0,0,1], "amp": [0.707, 0.0]}, ...]}],
     "aux": {"terms": [...]},           # optional, modes given by its occupations
     "comment": "...", "expected": {}}  # optional metadata

Unitary document::

    {"dim": 4, "matrix": [[[re, im], ...], ...], "comment": "..."}

Complex numbers are always ``[re, im]`` pairs.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .fock import FockError, FockState, make_state
from .optics import NotUnitaryError, PassiveUnitary

META_KEYS = ("comment", "expected")


class DocumentError(ValueError):
    """Malformed input document."""


@dataclass
class StateSet:
    modes: int
    labels: list[str]
    states: list[FockState]
    aux: FockState | None = None
    meta: dict = field(default_factory=dict)

    def as_dict(self) -> dict[str, FockState]:
        return dict(zip(self.labels, self.states))


def _complex(value, where: str) -> complex:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    ):
        raise DocumentError(f"{where}: complex numbers must be [re, im] pairs")
    return complex(value[0], value[1])


def _parse_terms(block: Any, where: str, modes: int | None = None) -> FockState:
    if not isinstance(block, dict) or not isinstance(block.get("terms"), list):
        raise DocumentError(f"{where}: expected an object with a 'terms' list")
    terms = []
    for t, term in enumerate(block["terms"]):
        if not isinstance(term, dict) or "occ" not in term or "amp" not in term:
            raise DocumentError(f"{where}.terms[{t}]: expected 'occ' and 'amp'")
        occ = term["occ"]
        if not isinstance(occ, list) or not all(isinstance(n, int) and not isinstance(n, bool) and n >= 0 for n in occ):
            raise DocumentError(f"{where}.terms[{t}]: 'occ' must be a list of non-negative integers")
        if modes is not None and len(occ) != modes:
            raise DocumentError(f"{where}.terms[{t}]: occupation has {len(occ)} entries, expected {modes}")
        terms.append((occ, _complex(term["amp"], f"{where}.terms[{t}].amp")))
    if not terms:
        raise DocumentError(f"{where}: no terms")
    n = len(terms[0][0]) if modes is None else modes
    try:
        return make_state(n, terms)
    except FockError as exc:
        raise DocumentError(f"{where}: {exc}") from exc


def parse_state_document(doc: Any) -> StateSet:
    if not isinstance(doc, dict):
        raise DocumentError("state document must be a JSON object")
    modes = doc.get("modes")
    if not isinstance(modes, int) or isinstance(modes, bool) or modes < 1:
        raise DocumentError("'modes' must be a positive integer")
    blocks = doc.get("states")
    if not isinstance(blocks, list) or not blocks:
        raise DocumentError("'states' must be a nonempty list")
    labels, states = [], []
    for k, block in enumerate(blocks):
        label = block.get("label") if isinstance(block, dict) else None
        if not isinstance(label, str):
            raise DocumentError(f"states[{k}]: missing string 'label'")
        labels.append(label)
        states.append(_parse_terms(block, f"states[{k}]", modes))
    if len(set(labels)) != len(labels):
        raise DocumentError("state labels must be unique")
    aux = _parse_terms(doc["aux"], "aux") if doc.get("aux") is not None else None
    meta = {k: doc[k] for k in META_KEYS if k in doc}
    return StateSet(modes, labels, states, aux, meta)


def _terms(state: FockState) -> list[dict]:
    return [{"occ": list(o), "amp": [a.real, a.imag]} for o, a in state]


def serialize_state_set(ss: StateSet) -> dict:
    doc: dict = {"modes": ss.modes}
    doc["states"] = [{"label": lab, "terms": _terms(s)} for lab, s in zip(ss.labels, ss.states)]
    if ss.aux is not None:
        doc["aux"] = {"terms": _terms(ss.aux)}
    for k in META_KEYS:
        if k in ss.meta:
            doc[k] = ss.meta[k]
    return doc


def canonical_state_document(doc: dict) -> dict:
    """Canonical form of a raw document, computed without building states.

    Terms are merged by occupation, sorted, and exact zeros dropped; numbers
    become floats.
    """
    def canon_terms(terms):
        acc: dict[tuple, list[float]] = {}
        for t in terms:
            key = tuple(t["occ"])
            re, im = acc.get(key, [0.0, 0.0])
            acc[key] = [re + float(t["amp"][0]), im + float(t["amp"][1])]
        return [{"occ": list(k), "amp": v} for k, v in sorted(acc.items()) if v != [0.0, 0.0]]

    out: dict = {"modes": doc["modes"]}
    out["states"] = [{"label": b["label"], "terms": canon_terms(b["terms"])} for b in doc["states"]]
    if doc.get("aux") is not None:
        out["aux"] = {"terms": canon_terms(doc["aux"]["terms"])}
    for k in META_KEYS:
        if k in doc:
            out[k] = doc[k]
    return out


def parse_unitary_document(doc: Any) -> PassiveUnitary:
    if not isinstance(doc, dict):
        raise DocumentError("unitary document must be a JSON object")
    dim = doc.get("dim")
    rows = doc.get("matrix")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise DocumentError("'dim' must be a positive integer")
    if not isinstance(rows, list) or len(rows) != dim or any(not isinstance(r, list) or len(r) != dim for r in rows):
        raise DocumentError(f"'matrix' must be {dim} rows of {dim} entries")
    m = np.array([[_complex(v, f"matrix[{i}][{j}]") for j, v in enumerate(r)] for i, r in enumerate(rows)])
    try:
        return PassiveUnitary(m)
    except NotUnitaryError as exc:
        raise DocumentError(str(exc)) from exc


def serialize_unitary(U: PassiveUnitary, comment: str | None = None) -> dict:
    doc: dict = {"dim": U.dim, "matrix": [[[float(z.real), float(z.imag)] for z in row] for row in U.matrix]}
    if comment:
        doc["comment"] = comment
    return doc


def jsonable(obj):
    """Recursively convert numpy scalars/arrays, complex numbers and tuples."""
    if isinstance(obj, dict):
        return {str(k) if not isinstance(k, str) else k: jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps(doc) -> str:
    return json.dumps(jsonable(doc), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def read_json(path: str | os.PathLike) -> tuple[Any, bytes]:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(raw.decode("utf-8")), raw
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise DocumentError(f"{path}: invalid JSON ({exc})") from exc


def digest(raw: bytes) -> str:
    return "sha256:" + hashlib.sha256(raw).hexdigest()


def write_atomic(path: str | os.PathLike, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
