"""Bit-exact volume serialization (HOSDT1) and study CSV output.

A volume file is an ASCII header followed by a raw payload:

    HOSDT1
    ndim 3
    size 25 25 25
    spacing 4.0 4.0 4.0
    dtype f64
    data
    <raw bytes, C order, last axis fastest>

dtype u8 stores binary labels one byte per voxel (0 background, 1 foreground);
f64 stores little-endian 8-byte doubles.  Spacing values use the shortest
decimal representation that round-trips.
"""

from __future__ import annotations

import csv

import numpy as np

from .grid import BinaryGrid, ScalarField
from .evaluation import StudyRecord

__all__ = ["write_volume", "read_volume", "write_study_csv", "read_study_csv"]

MAGIC = "HOSDT1"
CSV_COLUMNS = ["h", "l1", "order_l1", "linf", "order_linf", "corrected", "iterations", "band"]


def write_volume(path, volume) -> None:
    """Serialize a BinaryGrid (u8) or ScalarField (f64) to ``path``."""
    if isinstance(volume, BinaryGrid):
        dtype = "u8"
        payload = volume.labels.astype(np.uint8).tobytes(order="C")
        dims, spacing = volume.dims, volume.spacing
    elif isinstance(volume, ScalarField):
        dtype = "f64"
        payload = volume.values.astype("<f8").tobytes(order="C")
        dims, spacing = volume.dims, volume.spacing
    else:
        raise TypeError(f"cannot serialize {type(volume).__name__}")
    header = "\n".join(
        [
            MAGIC,
            f"ndim {len(dims)}",
            "size " + " ".join(str(n) for n in dims),
            "spacing " + " ".join(repr(h) for h in spacing),
            f"dtype {dtype}",
            "data",
        ]
    )
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii") + b"\n" + payload)


def _header_field(lines, i, name):
    try:
        line = lines[i]
    except IndexError:
        raise ValueError(f"truncated header: missing {name!r} line") from None
    if not line.startswith(name + " "):
        raise ValueError(f"malformed header: expected {name!r} line, got {line!r}")
    return line[len(name) + 1 :].split()


def read_volume(path):
    """Inverse of :func:`write_volume`; returns a BinaryGrid or ScalarField."""
    with open(path, "rb") as fh:
        blob = fh.read()
    head, sep, rest = blob.partition(b"\ndata\n")
    if not sep:
        raise ValueError("malformed header: no data marker")
    try:
        lines = head.decode("ascii").split("\n")
    except UnicodeDecodeError:
        raise ValueError("malformed header: not ASCII") from None
    if lines[0] != MAGIC:
        raise ValueError(f"bad magic: expected {MAGIC!r}, got {lines[0]!r}")
    if len(lines) != 5:
        raise ValueError(f"malformed header: expected 5 lines before data, got {len(lines)}")
    (ndim_str,) = _header_field(lines, 1, "ndim")
    ndim = int(ndim_str)
    if ndim < 1:
        raise ValueError(f"non-positive ndim: {ndim}")
    size_strs = _header_field(lines, 2, "size")
    spacing_strs = _header_field(lines, 3, "spacing")
    if len(size_strs) != ndim or len(spacing_strs) != ndim:
        raise ValueError("malformed header: size/spacing entry count != ndim")
    dims = tuple(int(s) for s in size_strs)
    spacing = tuple(float(s) for s in spacing_strs)
    if any(n < 1 for n in dims):
        raise ValueError(f"non-positive size: {dims}")
    if any(not h > 0 for h in spacing):
        raise ValueError(f"non-positive spacing: {spacing}")
    (dtype,) = _header_field(lines, 4, "dtype")
    if dtype not in ("u8", "f64"):
        raise ValueError(f"unknown dtype: {dtype!r}")

    count = int(np.prod(dims))
    itemsize = 1 if dtype == "u8" else 8
    expected = count * itemsize
    if len(rest) < expected:
        raise ValueError(
            f"truncated payload: expected {expected} bytes, got {len(rest)}"
        )
    if len(rest) > expected:
        raise ValueError(
            f"trailing bytes after payload: expected {expected} bytes, got {len(rest)}"
        )
    if dtype == "u8":
        raw = np.frombuffer(rest, dtype=np.uint8)
        if not np.isin(raw, (0, 1)).all():
            raise ValueError("invalid label byte: u8 volumes hold only 0 or 1")
        return BinaryGrid(raw.reshape(dims).astype(bool), spacing)
    values = np.frombuffer(rest, dtype="<f8").reshape(dims)
    return ScalarField(values.astype(np.float64), spacing)


def _format_cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_study_csv(path, records) -> None:
    """Write study records with the fixed column set; absent orders are empty."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for rec in records:
            writer.writerow(
                [
                    _format_cell(float(rec.h)),
                    _format_cell(float(rec.l1)),
                    _format_cell(None if rec.order_l1 is None else float(rec.order_l1)),
                    _format_cell(float(rec.linf)),
                    _format_cell(None if rec.order_linf is None else float(rec.order_linf)),
                    _format_cell(bool(rec.corrected)),
                    _format_cell(int(rec.iterations)),
                    _format_cell(float(rec.band)),
                ]
            )


def read_study_csv(path):
    """Parse a study CSV back into records (inverse of :func:`write_study_csv`)."""
    records = []
    with open(path, "r", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_COLUMNS:
            raise ValueError(f"unexpected study CSV columns: {reader.fieldnames}")
        for row in reader:
            records.append(
                StudyRecord(
                    h=float(row["h"]),
                    l1=float(row["l1"]),
                    linf=float(row["linf"]),
                    order_l1=float(row["order_l1"]) if row["order_l1"] else None,
                    order_linf=float(row["order_linf"]) if row["order_linf"] else None,
                    corrected=row["corrected"] == "true",
                    iterations=int(row["iterations"]),
                    band=float(row["band"]),
                )
            )
    return records
