"""Built-in catalog of the fixture matrices used throughout the test and
validation suites, plus the JSON wire format for matrices.

Keys: A2, A3a, A3b, A4a, A4b (real-shadow fixtures), B4a..B4f (two-qubit
product/entangled fixtures), X1, X2 (dynamics observables) and U8 (the
three-qubit diagonal unitary whose product shadow has a hole).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .linalg import kron


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    matrix: np.ndarray
    bipartition: tuple[int, int] | None = None


def _m(rows) -> np.ndarray:
    return np.array(rows, dtype=complex)


_A2 = _m([[-1, 1 - 1j], [-1j, 1]])
_A3A = _m([[0, 1, 1], [0, 1, 1], [0, 0, 2]])
_A3B = _m([[0, 1, 0], [0, 1, 0], [0, 0, 2j]])
_A4A = _m([[0, 1, 1, 1], [0, 1, 1, 1], [0, 0, 2, 1], [0, 0, 0, 3]])
_A4B = _m([[0, 1, 1, 1], [0, 1, 1, 1], [0, 0, 1j, 1], [0, 0, 0, 1 + 1j]])

_B4A = _m([[1, 0, 1, 0], [0, 1j, 0, 1], [0, 0, -1, 0], [0, 0, 0, -1j]])
_B4B = _m([[1, 0, 0, 1], [0, 1j, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1j]])
_B4C = _m([[1, 0, 0, 0], [0, 1j, 0, 1], [0, 0, -1, 0], [0, 0, 0, -1j]])
_B4D = _m([[1, 0, 0, 1], [0, 1j, 1, 0], [0, 0, -1, 0], [0, 0, 0, -1j]])
_B4E = _m([[1, 1, 1, 1], [0, 1j, 1, 1], [0, 0, -1, 1], [0, 0, 0, -1j]])
_B4F = kron(_m([[1j, 0.5], [0, 0.5j]]), np.eye(2)) + kron(np.eye(2), _m([[0, 2], [1, 1j]]))

_X1 = _m([[-1, 0, 0, 1j], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, 1]])
_X2 = _m([[1, 0, 0, 1j], [0, -1, 0, 0], [0, 0, -1, 0], [0, 0, 0, 1]])

_U8 = np.diag(np.exp(2j * np.pi / 3 * np.array([0, 1, 1, -1, 1, -1, -1, 0])))

_ENTRIES = {
    "A2": CatalogEntry("A2", _A2),
    "A3a": CatalogEntry("A3a", _A3A),
    "A3b": CatalogEntry("A3b", _A3B),
    "A4a": CatalogEntry("A4a", _A4A),
    "A4b": CatalogEntry("A4b", _A4B),
    "B4a": CatalogEntry("B4a", _B4A, (2, 2)),
    "B4b": CatalogEntry("B4b", _B4B, (2, 2)),
    "B4c": CatalogEntry("B4c", _B4C, (2, 2)),
    "B4d": CatalogEntry("B4d", _B4D, (2, 2)),
    "B4e": CatalogEntry("B4e", _B4E, (2, 2)),
    "B4f": CatalogEntry("B4f", _B4F, (2, 2)),
    "X1": CatalogEntry("X1", _X1, (2, 2)),
    "X2": CatalogEntry("X2", _X2, (2, 2)),
    "U8": CatalogEntry("U8", _U8),
}


def names() -> list[str]:
    return sorted(_ENTRIES)


def get(name: str) -> CatalogEntry:
    try:
        return _ENTRIES[name]
    except KeyError:
        raise KeyError(f"unknown catalog key {name!r}; available: {', '.join(names())}") from None


def matrix_to_json(matrix: np.ndarray) -> str:
    """Serialize a square matrix as {dim, entries: [[re, im], ...]} (row-major)."""
    m = np.asarray(matrix, dtype=complex)
    entries = [[float(x.real), float(x.imag)] for x in m.ravel()]
    return json.dumps({"dim": int(m.shape[0]), "entries": entries})


def matrix_from_json(text: str) -> np.ndarray:
    obj = json.loads(text)
    dim = int(obj["dim"])
    entries = obj["entries"]
    if len(entries) != dim * dim:
        raise ValueError(f"entries length {len(entries)} != dim^2 = {dim * dim}")
    flat = np.array([complex(re, im) for re, im in entries])
    return flat.reshape(dim, dim)
