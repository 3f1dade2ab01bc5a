"""JSON documents for metric Lie algebras and analysis reports.

Input layout::

    {
      "schema_version": 1,
      "dim": 3,
      "basis_labels": ["e1", "e2", "e3"],
      "structure_constants": [{"i": 1, "j": 2, "k": 3, "value": 1.0}],
      "gram": "identity",
      "tolerances": {"rtol": 1e-9},
      "expected": {},
      "family": {"tag": "Heisenberg", "dim": 3, "params": {}}
    }

Entries are 1-based with ``i < j``; ``[e_j, e_i]`` is implied.  ``gram`` is
either ``"identity"`` or a dense row-major list of rows.  Floats are written
with Python's shortest round-trip representation, so parse and serialize
are exact inverses.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import MetricLieAlgebra, MetricLieError

SCHEMA_VERSION = 1
INPUT_KEYS = {"schema_version", "dim", "basis_labels", "structure_constants", "gram", "tolerances", "expected",
              "family"}


class ParseError(MetricLieError, ValueError):
    """Malformed document; ``location`` names the line or field."""

    def __init__(self, message: str, location: str = ""):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location


@dataclass(frozen=True)
class Entry:
    i: int
    j: int
    k: int
    value: float


@dataclass(frozen=True, eq=False)
class InputDocument:
    dim: int
    entries: tuple
    gram: object = "identity"
    basis_labels: tuple | None = None
    tolerances: dict = field(default_factory=dict)
    expected: dict = field(default_factory=dict)
    family: dict | None = None

    def constants(self) -> np.ndarray:
        n = self.dim
        c = np.zeros((n, n, n))
        for e in self.entries:
            c[e.i - 1, e.j - 1, e.k - 1] += e.value
            c[e.j - 1, e.i - 1, e.k - 1] -= e.value
        return c

    def gram_matrix(self) -> np.ndarray:
        return np.eye(self.dim) if isinstance(self.gram, str) else np.array(self.gram, dtype=float)

    def to_metric(self) -> MetricLieAlgebra:
        return MetricLieAlgebra.build(self.constants(), self.gram_matrix(), self.basis_labels)

    def with_gram(self, gram) -> "InputDocument":
        """Copy with a new metric; ``family`` and ``expected`` described the old one and are dropped."""
        g = [[float(x) for x in row] for row in np.asarray(gram, float)]
        return InputDocument(self.dim, self.entries, g, self.basis_labels, dict(self.tolerances), {}, None)

    def to_dict(self) -> dict:
        d = {
            "schema_version": SCHEMA_VERSION,
            "dim": self.dim,
            "structure_constants": [{"i": e.i, "j": e.j, "k": e.k, "value": float(e.value)} for e in self.entries],
            "gram": self.gram if isinstance(self.gram, str) else [[float(x) for x in row] for row in self.gram],
        }
        if self.basis_labels is not None:
            d["basis_labels"] = list(self.basis_labels)
        if self.tolerances:
            d["tolerances"] = dict(self.tolerances)
        if self.expected:
            d["expected"] = self.expected
        if self.family is not None:
            d["family"] = self.family
        return d

    def __eq__(self, other) -> bool:
        return isinstance(other, InputDocument) and dumps(self.to_dict()) == dumps(other.to_dict())


def dumps(obj) -> str:
    return json.dumps(_plain(obj), indent=2, sort_keys=True, ensure_ascii=False, allow_nan=True) + "\n"


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    return obj


def from_metric(m: MetricLieAlgebra, family: dict | None = None, zero_tol: float = 0.0) -> InputDocument:
    """Sparse document for ``m``; entries with ``|value| <= zero_tol`` are dropped."""
    n = m.dim
    c = m.c
    entries = tuple(
        Entry(i + 1, j + 1, k + 1, float(c[i, j, k]))
        for i in range(n) for j in range(i + 1, n) for k in range(n)
        if abs(c[i, j, k]) > zero_tol
    )
    G = m.gram
    gram = "identity" if np.array_equal(G, np.eye(n)) else [[float(x) for x in row] for row in G]
    return InputDocument(n, entries, gram, tuple(m.algebra.basis_labels), {}, {}, family)


def _int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"expected an integer, got {value!r}", where)
    return value


def _num(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"expected a number, got {value!r}", where)
    return float(value)


def parse_dict(d) -> InputDocument:
    if not isinstance(d, dict):
        raise ParseError("top level must be an object", "document")
    unknown = sorted(set(d) - INPUT_KEYS)
    if unknown:
        raise ParseError(f"unknown field(s) {', '.join(unknown)}", "document")
    ver = d.get("schema_version")
    if ver != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema_version {ver!r} (expected {SCHEMA_VERSION})", "schema_version")
    if "dim" not in d:
        raise ParseError("missing field", "dim")
    n = _int(d["dim"], "dim")
    if n < 1:
        raise ParseError("dimension must be positive", "dim")
    raw = d.get("structure_constants", [])
    if not isinstance(raw, list):
        raise ParseError("expected a list", "structure_constants")
    entries = []
    for idx, rec in enumerate(raw):
        where = f"structure_constants[{idx}]"
        if not isinstance(rec, dict) or set(rec) != {"i", "j", "k", "value"}:
            raise ParseError("expected an object with keys i, j, k, value", where)
        i, j, k = (_int(rec[key], f"{where}.{key}") for key in ("i", "j", "k"))
        for key, v in (("i", i), ("j", j), ("k", k)):
            if not 1 <= v <= n:
                raise ParseError(f"index {v} out of range 1..{n}", f"{where}.{key}")
        if i >= j:
            raise ParseError(f"entries need i < j (got i={i}, j={j}); the antisymmetric partner is implied", where)
        entries.append(Entry(i, j, k, _num(rec["value"], f"{where}.value")))
    gram = d.get("gram", "identity")
    if isinstance(gram, str):
        if gram != "identity":
            raise ParseError(f"unknown keyword {gram!r}; use \"identity\" or a matrix", "gram")
    else:
        if not isinstance(gram, list) or len(gram) != n:
            raise ParseError(f"expected {n} rows", "gram")
        rows = []
        for r, row in enumerate(gram):
            if not isinstance(row, list) or len(row) != n:
                raise ParseError(f"expected {n} entries", f"gram[{r}]")
            rows.append([_num(x, f"gram[{r}][{s}]") for s, x in enumerate(row)])
        gram = rows
    labels = d.get("basis_labels")
    if labels is not None:
        if not isinstance(labels, list) or len(labels) != n or not all(isinstance(x, str) for x in labels):
            raise ParseError(f"expected {n} strings", "basis_labels")
        labels = tuple(labels)
    tols = d.get("tolerances", {})
    if not isinstance(tols, dict):
        raise ParseError("expected an object", "tolerances")
    tols = {k: _num(v, f"tolerances.{k}") for k, v in tols.items()}
    expected = d.get("expected", {})
    if not isinstance(expected, dict):
        raise ParseError("expected an object", "expected")
    family = d.get("family")
    if family is not None and not isinstance(family, dict):
        raise ParseError("expected an object", "family")
    return InputDocument(n, tuple(entries), gram, labels, tols, expected, family)


def parse(text: str) -> InputDocument:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None
    return parse_dict(d)


def load(path) -> InputDocument:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(str(exc), str(path)) from None
    return parse(text)


def serialize(doc: InputDocument) -> str:
    return dumps(doc.to_dict())


def save(doc: InputDocument, path) -> None:
    Path(path).write_text(serialize(doc))
