"""Plain-text outputs: BER CSV and spectrogram matrix."""

from __future__ import annotations

import os

import numpy as np

__all__ = ["CSV_HEADER", "format_float", "csv_text", "write_csv", "write_matrix", "read_matrix"]

CSV_HEADER = "jsr_db,ebn0_db,receiver,bits,errors,ber,ci95"


def format_float(x: float) -> str:
    """Six significant digits."""
    return f"{float(x):.6g}"


def csv_text(points) -> str:
    lines = [CSV_HEADER]
    for p in sorted(points, key=lambda q: (q.receiver, q.ebn0_db, q.jsr_db)):
        lines.append(",".join([
            format_float(p.jsr_db), format_float(p.ebn0_db), p.receiver,
            str(p.bits), str(p.errors), format_float(p.ber), format_float(p.ci95),
        ]))
    return "\n".join(lines) + "\n"


def write_csv(points, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(csv_text(points))


def write_matrix(spec, path: str | os.PathLike) -> None:
    """First line ``rows cols window hop``, then one line of dB values per row."""
    rows, cols = spec.db.shape
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(f"{rows} {cols} {spec.window} {spec.hop}\n")
        for row in spec.db:
            fh.write(" ".join(format_float(v) for v in row) + "\n")


def read_matrix(path):
    """Inverse of :func:`write_matrix`; returns ``(db, window, hop)``."""
    with open(path, encoding="ascii") as fh:
        rows, cols, window, hop = (int(v) for v in fh.readline().split())
        data = np.array(fh.read().split(), dtype=np.float64)
    if data.size != rows * cols:
        raise ValueError(f"expected {rows * cols} values, found {data.size}")
    return data.reshape(rows, cols), window, hop
