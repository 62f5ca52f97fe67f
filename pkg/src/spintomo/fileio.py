"""JSON state and tomogram files.

Complex numbers are ``[re, im]`` pairs and every float is written with 17
significant digits, so write -> read -> write is byte-identical.

State file::

    {"schema_version": 1, "kind": "spin" | "top", "twice_j": 1,
     "entries": [[[re, im], ...], ...]}        # 2-index (spin) or 4-index (top)

Tomogram file::

    {"schema_version": 1, "kind": "spin", "twice_j": 1,
     "grid": {"theta": [...], "theta_weights": [...], "n_phi": 4, "n_psi": 4,
              "twice_j_design": 1},
     "values": [...]}                           # flat, (i, theta, phi, psi) order

Top tomograms carry ``grid_u`` and ``grid_uprime`` instead of ``grid`` and
flatten ``values`` in ``(i1, i2, u point, u' point)`` order.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .quadrature import QuadratureGrid
from .states import DensityMatrix
from .tomogram import NORMALIZATION_TOL, SpinTomogram
from .top import TopDensityMatrix, TopTomogram

SCHEMA_VERSION = 1


class FileFormatError(ValueError):
    """Malformed or unreadable file."""


def _fmt_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValidationError(f"cannot serialize non-finite value {x!r}")
    s = format(x, ".17g")
    if s == "-0":
        s = "0"
    return s


def _dump(obj, indent: int = 0) -> str:
    # compact leaf arrays, one key per line
    if isinstance(obj, dict):
        pad = "  " * (indent + 1)
        items = [f"{pad}{json.dumps(k)}: {_dump(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_dump(v, indent) for v in obj) + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _complex_nested(a: np.ndarray):
    if a.ndim == 0:
        z = complex(a)
        return [z.real, z.imag]
    return [_complex_nested(x) for x in a]


def _grid_dict(grid: QuadratureGrid) -> dict:
    return {
        "theta": [float(t) for t in grid.theta],
        "theta_weights": [float(w) for w in grid.theta_weights],
        "n_phi": grid.n_phi,
        "n_psi": grid.n_psi,
        "twice_j_design": grid.twice_j_design,
    }


def _grid_from(d) -> QuadratureGrid:
    try:
        return QuadratureGrid(
            np.asarray(d["theta"], float), np.asarray(d["theta_weights"], float),
            int(d["n_phi"]), int(d["n_psi"]), int(d["twice_j_design"]),
        )
    except (KeyError, TypeError) as exc:
        raise FileFormatError(f"bad grid description: {exc}") from exc


def dumps_document(doc: dict) -> str:
    """Serialize a plain dict with the file conventions of this module."""
    return _dump(doc) + "\n"


def dumps_state(rho) -> str:
    kind = "top" if isinstance(rho, TopDensityMatrix) else "spin"
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "twice_j": rho.twice_j,
        "entries": _complex_nested(np.asarray(rho.entries)),
    }
    return _dump(doc) + "\n"


def dumps_tomogram(tomo) -> str:
    if isinstance(tomo, TopTomogram):
        doc = {
            "schema_version": SCHEMA_VERSION,
            "kind": "top",
            "twice_j": tomo.twice_j,
            "grid_u": _grid_dict(tomo.grid_u),
            "grid_uprime": _grid_dict(tomo.grid_uprime),
            "values": [float(v) for v in tomo.values.ravel()],
        }
    else:
        doc = {
            "schema_version": SCHEMA_VERSION,
            "kind": "spin",
            "twice_j": tomo.twice_j,
            "grid": _grid_dict(tomo.grid),
            "values": [float(v) for v in tomo.values.ravel()],
        }
    return _dump(doc) + "\n"


def _parse(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise FileFormatError("top-level value must be an object")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise FileFormatError(f"unsupported schema_version {doc.get('schema_version')!r}")
    if doc.get("kind") not in ("spin", "top"):
        raise FileFormatError(f"unknown kind {doc.get('kind')!r}")
    tj = doc.get("twice_j")
    if not isinstance(tj, int) or tj < 0:
        raise FileFormatError(f"twice_j must be a non-negative integer, got {tj!r}")
    return doc


def loads_state(text: str):
    doc = _parse(text)
    try:
        arr = np.asarray(doc["entries"], dtype=float)
    except (KeyError, ValueError, TypeError) as exc:
        raise FileFormatError(f"bad entries: {exc}") from exc
    if arr.ndim < 1 or arr.shape[-1] != 2:
        raise FileFormatError("entries must be nested [re, im] pairs")
    z = arr[..., 0] + 1j * arr[..., 1]
    n = doc["twice_j"] + 1
    if doc["kind"] == "spin":
        if z.shape != (n, n):
            raise FileFormatError(f"spin entries must have shape {(n, n)}, got {z.shape}")
        return DensityMatrix(doc["twice_j"], z)
    if z.shape != (n, n, n, n):
        raise FileFormatError(f"top entries must have shape {(n,) * 4}, got {z.shape}")
    return TopDensityMatrix(doc["twice_j"], z)


def loads_tomogram(text: str):
    doc = _parse(text)
    tj = doc["twice_j"]
    n = tj + 1
    try:
        values = np.asarray(doc["values"], dtype=float)
    except (KeyError, ValueError, TypeError) as exc:
        raise FileFormatError(f"bad values: {exc}") from exc
    if doc["kind"] == "spin":
        grid = _grid_from(doc.get("grid", {}))
        if values.size != n * grid.size:
            raise FileFormatError(f"expected {n * grid.size} values, got {values.size}")
        tomo = SpinTomogram(tj, grid, values.reshape(n, grid.size))
    else:
        gu = _grid_from(doc.get("grid_u", {}))
        gv = _grid_from(doc.get("grid_uprime", {}))
        if values.size != n * n * gu.size * gv.size:
            raise FileFormatError("top tomogram value count does not match grids")
        tomo = TopTomogram(tj, gu, gv, values.reshape(n, n, gu.size, gv.size))
    resid = tomo.normalization_residual()
    if resid > NORMALIZATION_TOL:
        raise ValidationError(f"tomogram not normalized (max residual {resid:.3g})")
    return tomo


def _read(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise FileFormatError(f"cannot read {path}: {exc}") from exc


def read_state(path):
    return loads_state(_read(path))


def read_tomogram(path):
    return loads_tomogram(_read(path))


def write_state(rho, path) -> None:
    Path(path).write_text(dumps_state(rho))


def write_tomogram(tomo, path) -> None:
    Path(path).write_text(dumps_tomogram(tomo))
