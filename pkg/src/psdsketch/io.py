"""Bit-exact file formats: PSDM matrices, LRKF factors, CSV matrices and
vectors, and the fixed-schema JSON run report.

All binary values are little-endian; floats serialize with 17 significant
digits so text round-trips reproduce the exact binary64 values.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .core import PsdMatrix, ValidationError
from .lowrank import LowRankFactor

PSDM_MAGIC = b"PSDM"
LRKF_MAGIC = b"LRKF"
FORMAT_VERSION = 1


def fmt_float(x: float) -> str:
    return format(float(x), ".17g")


# ---------------------------------------------------------------------------
# PSDM: magic, version u32, n u64, then n*n f64 row-major
# ---------------------------------------------------------------------------

def write_psdm(path, matrix: PsdMatrix) -> None:
    a = np.ascontiguousarray(matrix.values, dtype="<f8")
    with open(path, "wb") as fh:
        fh.write(PSDM_MAGIC)
        fh.write(struct.pack("<I", FORMAT_VERSION))
        fh.write(struct.pack("<Q", matrix.n))
        fh.write(a.tobytes())


def read_psdm(path) -> PsdMatrix:
    raw = Path(path).read_bytes()
    if raw[:4] != PSDM_MAGIC:
        raise ValidationError(f"{path}: not a PSDM file")
    (version,) = struct.unpack_from("<I", raw, 4)
    if version != FORMAT_VERSION:
        raise ValidationError(f"{path}: unsupported PSDM version {version}")
    (n,) = struct.unpack_from("<Q", raw, 8)
    expect = 16 + 8 * n * n
    if len(raw) != expect:
        raise ValidationError(f"{path}: truncated PSDM payload")
    vals = np.frombuffer(raw, dtype="<f8", offset=16).reshape(n, n)
    return PsdMatrix.from_dense(vals)


# ---------------------------------------------------------------------------
# LRKF: magic, version u32, n u64, k u64, flag u8, left then right f64
# ---------------------------------------------------------------------------

def write_lrkf(path, factor: LowRankFactor) -> None:
    n, k = factor.left.shape
    with open(path, "wb") as fh:
        fh.write(LRKF_MAGIC)
        fh.write(struct.pack("<I", FORMAT_VERSION))
        fh.write(struct.pack("<Q", n))
        fh.write(struct.pack("<Q", k))
        fh.write(struct.pack("<B", 1 if factor.symmetric_psd else 0))
        fh.write(np.ascontiguousarray(factor.left, dtype="<f8").tobytes())
        fh.write(np.ascontiguousarray(factor.right, dtype="<f8").tobytes())


def read_lrkf(path) -> LowRankFactor:
    raw = Path(path).read_bytes()
    if raw[:4] != LRKF_MAGIC:
        raise ValidationError(f"{path}: not an LRKF file")
    (version,) = struct.unpack_from("<I", raw, 4)
    if version != FORMAT_VERSION:
        raise ValidationError(f"{path}: unsupported LRKF version {version}")
    (n,) = struct.unpack_from("<Q", raw, 8)
    (k,) = struct.unpack_from("<Q", raw, 16)
    (flag,) = struct.unpack_from("<B", raw, 24)
    need = 25 + 2 * 8 * n * k
    if len(raw) != need:
        raise ValidationError(f"{path}: truncated LRKF payload")
    left = np.frombuffer(raw, dtype="<f8", offset=25, count=n * k).reshape(n, k)
    right = np.frombuffer(raw, dtype="<f8", offset=25 + 8 * n * k,
                          count=n * k).reshape(n, k)
    return LowRankFactor(left=left.copy(), right=right.copy(),
                         symmetric_psd=bool(flag))


# ---------------------------------------------------------------------------
# CSV matrices / vectors
# ---------------------------------------------------------------------------

def write_csv_matrix(path, matrix: PsdMatrix) -> None:
    with open(path, "w") as fh:
        for row in matrix.values:
            fh.write(",".join(fmt_float(v) for v in row) + "\n")


def read_csv_matrix(path) -> PsdMatrix:
    vals = np.loadtxt(path, delimiter=",", ndmin=2)
    return PsdMatrix.from_dense(vals)


def write_csv_vector(path, vec: np.ndarray) -> None:
    with open(path, "w") as fh:
        for v in vec:
            fh.write(fmt_float(v) + "\n")


def read_csv_vector(path) -> np.ndarray:
    return np.loadtxt(path, ndmin=1)


def write_bin_vector(path, vec: np.ndarray) -> None:
    with open(path, "wb") as fh:
        fh.write(struct.pack("<Q", len(vec)))
        fh.write(np.ascontiguousarray(vec, dtype="<f8").tobytes())


def read_bin_vector(path) -> np.ndarray:
    raw = Path(path).read_bytes()
    (m,) = struct.unpack_from("<Q", raw, 0)
    if len(raw) != 8 + 8 * m:
        raise ValidationError(f"{path}: truncated vector payload")
    return np.frombuffer(raw, dtype="<f8", offset=8).copy()


def read_vector(path) -> np.ndarray:
    """Dispatch on extension: .csv / .txt text, anything else binary."""
    suffix = Path(path).suffix.lower()
    if suffix in (".csv", ".txt"):
        return read_csv_vector(path)
    return read_bin_vector(path)


# ---------------------------------------------------------------------------
# JSON with deterministic float formatting
# ---------------------------------------------------------------------------

def _json_value(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return fmt_float(v)
    if isinstance(v, str):
        import json

        return json.dumps(v)
    if isinstance(v, dict):
        items = ", ".join(f"{_json_value(str(k))}: {_json_value(x)}"
                          for k, x in v.items())
        return "{" + items + "}"
    if isinstance(v, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_json_value(x) for x in v) + "]"
    raise ValidationError(f"cannot serialize {type(v)!r} to report JSON")


def dumps_report(fields: dict) -> str:
    return _json_value(fields) + "\n"


def write_report(path, fields: dict) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_report(fields))
