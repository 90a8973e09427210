"""JSON text format for bipartite density matrices.

::

    {
      "format": "zerodiscord-matrix/1",
      "dims": [N, M],
      "basis_order": "A-slow,B-fast",
      "entries": [[[re, im], ...], ...],
      "metadata": {"family": "xstate", "params": {"x": 0.25}}
    }

``entries`` holds ``N*M`` rows of ``N*M`` ``[re, im]`` pairs; row ``i*M + k``
is ``|i_A k_B>``.  Floats are written with ``repr`` precision, so a
write/read round trip is bit-exact.
"""
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .density import BipartiteDensityMatrix, validate

FORMAT_TAG = "zerodiscord-matrix/1"
BASIS_ORDER = "A-slow,B-fast"


class MatrixFileError(ValueError):
    """The file is unreadable or structurally malformed."""


@dataclass
class MatrixFile:
    dims: tuple
    entries: np.ndarray
    metadata: dict = field(default_factory=dict)

    def to_state(self, tol: float = 1e-10) -> BipartiteDensityMatrix:
        return validate(self.entries, self.dims[0], self.dims[1], tol)

    @classmethod
    def from_state(cls, rho: BipartiteDensityMatrix, metadata=None):
        return cls((rho.dim_a, rho.dim_b), np.array(rho.matrix), dict(metadata or {}))


def dumps(mf: MatrixFile) -> str:
    m = np.asarray(mf.entries, dtype=complex)
    rows = ",\n    ".join(
        json.dumps([[float(z.real), float(z.imag)] for z in row]) for row in m
    )
    header = {
        "format": FORMAT_TAG,
        "dims": [int(d) for d in mf.dims],
        "basis_order": BASIS_ORDER,
    }
    head = json.dumps(header, indent=2)[:-2]
    meta = json.dumps(mf.metadata, indent=2, sort_keys=True).replace("\n", "\n  ")
    return f'{head},\n  "entries": [\n    {rows}\n  ],\n  "metadata": {meta}\n}}\n'


def loads(text: str) -> MatrixFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFileError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MatrixFileError("top level must be an object")
    if doc.get("format", FORMAT_TAG) != FORMAT_TAG:
        raise MatrixFileError(f"unsupported format {doc.get('format')!r}")
    if doc.get("basis_order", BASIS_ORDER) != BASIS_ORDER:
        raise MatrixFileError(f"unsupported basis order {doc.get('basis_order')!r}")
    try:
        n, m = (int(d) for d in doc["dims"])
        raw = np.asarray(doc["entries"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise MatrixFileError(f"missing or malformed field: {exc}") from exc
    size = n * m
    if n < 1 or m < 1 or raw.shape != (size, size, 2):
        raise MatrixFileError(f"entries have shape {raw.shape}, expected ({size}, {size}, 2)")
    metadata = doc.get("metadata") or {}
    if not isinstance(metadata, dict):
        raise MatrixFileError("metadata must be an object")
    return MatrixFile((n, m), raw[..., 0] + 1j * raw[..., 1], metadata)


def write(path, mf: MatrixFile):
    Path(path).write_text(dumps(mf))


def read(path) -> MatrixFile:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise MatrixFileError(f"cannot read {path}: {exc}") from exc
    return loads(text)
