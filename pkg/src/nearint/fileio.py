"""Attribute-value text files for point sets and certificates.

A file is a block of ``key: value`` header lines followed by a counted list
of data lines::

    format: nearint-pointset/1
    dim: 3
    mode: exact-lattice
    radius_bound: 1000000
    delta: 1/20000
    norm: l2
    meta: {"construction": "sarkozy3d"}
    points: 2
    0 0 0
    1 0 72

Exact coordinates are written as decimal integers and float coordinates with
17 significant digits, so both round-trip without loss.  ``meta`` is one line
of JSON.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .certificates import Infeasible, TrigCertificate
from .errors import DomainError
from .geometry import EXACT, NormSpec, PointSet

POINTSET_FORMAT = "nearint-pointset/1"
CERT_FORMAT = "nearint-certificate/1"


def _fmt_float(x: float) -> str:
    return format(float(x), ".17g")


def _fmt_number(x) -> str:
    if isinstance(x, float):
        return _fmt_float(x)
    return str(x)


def _parse_number(text: str):
    """Inverse of :func:`_fmt_number`: int, then ``p/q`` Fraction, then float."""
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        pass
    if "/" in text:
        return Fraction(text)
    return float(text)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def _split(text: str, count_key: str):
    """Header dict and the data lines that follow ``count_key: N``."""
    lines = text.splitlines()
    header = {}
    for pos, line in enumerate(lines):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise DomainError(f"line {pos + 1}: expected 'key: value', got {line!r}")
        key, value = key.strip(), value.strip()
        header[key] = value
        if key == count_key:
            n = int(value)
            data = [ln for ln in lines[pos + 1:] if ln.strip()]
            if len(data) != n:
                raise DomainError(f"expected {n} data lines after '{count_key}', found {len(data)}")
            return header, data
    raise DomainError(f"missing '{count_key}:' section")


@dataclass
class PointSetFile:
    points: PointSet
    delta: Fraction | None = None
    meta: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.points.dim

    @property
    def mode(self) -> str:
        return self.points.mode

    @property
    def radius_bound(self):
        return self.points.radius_bound

    @property
    def norm(self) -> NormSpec:
        return self.points.norm


def dump_pointset(S: PointSet, delta=None, meta: dict | None = None) -> str:
    out = [f"format: {POINTSET_FORMAT}", f"dim: {S.dim}", f"mode: {S.mode}"]
    if S.radius_bound is not None:
        out.append(f"radius_bound: {_fmt_number(S.radius_bound)}")
    if delta is not None:
        out.append(f"delta: {_fmt_number(delta)}")
    out.append(f"norm: {S.norm}")
    out.append(f"meta: {json.dumps(_jsonable(meta or {}), sort_keys=True)}")
    out.append(f"points: {len(S)}")
    if S.mode == EXACT:
        out.extend(" ".join(str(int(x)) for x in row) for row in S.coords.tolist())
    else:
        out.extend(" ".join(_fmt_float(x) for x in row) for row in S.coords.tolist())
    return "\n".join(out) + "\n"


def load_pointset(text: str) -> PointSetFile:
    header, data = _split(text, "points")
    fmt = header.get("format", POINTSET_FORMAT)
    if fmt != POINTSET_FORMAT:
        raise DomainError(f"not a point-set file (format {fmt!r})")
    try:
        dim = int(header["dim"])
        mode = header["mode"]
    except KeyError as e:
        raise DomainError(f"point-set file is missing the {e.args[0]!r} field") from None
    norm = NormSpec.parse(header.get("norm", "l2"))
    radius = _parse_number(header["radius_bound"]) if "radius_bound" in header else None
    delta = Fraction(header["delta"]) if "delta" in header else None
    meta = json.loads(header.get("meta", "{}"))
    conv = int if mode == EXACT else float
    try:
        rows = [[conv(tok) for tok in ln.split()] for ln in data]
    except ValueError as e:
        raise DomainError(f"bad coordinate for mode {mode}: {e}") from None
    if any(len(r) != dim for r in rows):
        raise DomainError(f"every point must have {dim} coordinates")
    coords = np.array(rows, dtype=object if mode == EXACT else float).reshape(len(rows), dim)
    S = PointSet(coords, mode, radius, norm)
    return PointSetFile(S, delta, meta)


def write_pointset(path, S: PointSet, delta=None, meta: dict | None = None) -> None:
    Path(path).write_text(dump_pointset(S, delta, meta))


def read_pointset(path) -> PointSetFile:
    return load_pointset(Path(path).read_text())


def dump_certificate(result) -> str:
    out = [f"format: {CERT_FORMAT}"]
    if isinstance(result, TrigCertificate):
        out += ["status: feasible",
                f"delta: {result.delta}",
                f"ell: {result.ell}",
                f"degree: {result.degree}",
                f"margin: {_fmt_float(result.margin)}",
                f"grid_step: {_fmt_float(result.grid_step)}",
                f"derivative_bound: {_fmt_float(result.derivative_bound)}",
                f"meta: {json.dumps(_jsonable(result.meta), sort_keys=True)}",
                f"coeffs: {result.degree}"]
        out.extend(_fmt_float(c) for c in result.coeffs)
    elif isinstance(result, Infeasible):
        out += ["status: infeasible",
                f"delta: {result.delta}",
                f"ell: {result.ell}",
                f"best_margin: {_fmt_float(result.best_margin)}",
                f"degrees_tried: {' '.join(str(m) for m in result.degrees_tried)}",
                f"meta: {json.dumps(_jsonable(result.meta), sort_keys=True)}",
                "coeffs: 0"]
    else:
        raise TypeError(f"cannot serialize {type(result).__name__}")
    return "\n".join(out) + "\n"


def load_certificate(text: str):
    header, data = _split(text, "coeffs")
    fmt = header.get("format", CERT_FORMAT)
    if fmt != CERT_FORMAT:
        raise DomainError(f"not a certificate file (format {fmt!r})")
    try:
        status = header["status"]
        delta = Fraction(header["delta"])
        ell = int(header["ell"])
        meta = json.loads(header.get("meta", "{}"))
        if status == "infeasible":
            tried = tuple(int(m) for m in header.get("degrees_tried", "").split())
            return Infeasible(delta, ell, float(header["best_margin"]), tried, meta)
        if status != "feasible":
            raise DomainError(f"unknown certificate status {status!r}")
        coeffs = np.array([float(ln) for ln in data])
        if int(header.get("degree", len(coeffs))) != len(coeffs):
            raise DomainError("degree does not match the number of coefficients")
        return TrigCertificate(delta, ell, coeffs, float(header["margin"]),
                               float(header["grid_step"]), float(header["derivative_bound"]), meta)
    except KeyError as e:
        raise DomainError(f"certificate file is missing the {e.args[0]!r} field") from None


def write_certificate(path, result) -> None:
    Path(path).write_text(dump_certificate(result))


def read_certificate(path):
    return load_certificate(Path(path).read_text())
