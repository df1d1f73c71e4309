"""Text file formats for datasets, state paths, and training traces.

All files are comma-delimited with a header line, LF newlines, and reals
rendered with 17 significant digits (lossless for IEEE doubles).  Time steps
and states are 1-based on disk; the Python API is 0-based.

Dataset file: columns ``seq_id,t,y_1,..,y_D``; rows of one sequence are
consecutive with ``t`` counting 1,2,...; an all-zero observation row marks
death from that step onward, so any later nonzero row in the same sequence
is rejected.

Path file: columns ``seq_id,t,state``.

Trace file: columns ``iter,llh,delta`` with ``delta`` the improvement over
the previous iteration (``inf`` on the first row).
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .errors import DataError
from .model import Dataset, format_real


def _format_trace_real(x) -> str:
    x = float(x)
    if math.isnan(x):
        raise ValueError("cannot serialize NaN")
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format_real(x)


def save_dataset(data: Dataset, path) -> None:
    """Write a dataset file; deterministic byte-for-byte."""
    d = data.obs_dim
    lines = ["seq_id,t," + ",".join(f"y_{j + 1}" for j in range(d))]
    for seq_id, seq in zip(data.seq_ids, data.sequences):
        for t in range(seq.shape[0]):
            lines.append(
                f"{seq_id},{t + 1}," + ",".join(format_real(v) for v in seq[t])
            )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def _read_lines(path, what):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise DataError(f"cannot read {what}: {exc}") from None
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise DataError(f"{what} is empty")
    return lines


def load_dataset(path) -> Dataset:
    """Parse and validate a dataset file."""
    lines = _read_lines(path, "dataset file")
    header = [h.strip() for h in lines[0].split(",")]
    if header[:2] != ["seq_id", "t"] or len(header) < 3:
        raise DataError(
            "dataset header must be 'seq_id,t,y_1,..,y_D', got " + repr(lines[0])
        )
    d = len(header) - 2
    expected_y = [f"y_{j + 1}" for j in range(d)]
    if header[2:] != expected_y:
        raise DataError(f"dataset observation columns must be {expected_y}")

    order = []
    rows = {}
    for lineno, line in enumerate(lines[1:], start=2):
        cells = [c.strip() for c in line.split(",")]
        if len(cells) != d + 2:
            raise DataError(f"line {lineno}: expected {d + 2} columns, got {len(cells)}")
        seq_id = cells[0]
        try:
            t = int(cells[1])
            y = [float(c) for c in cells[2:]]
        except ValueError as exc:
            raise DataError(f"line {lineno}: {exc}") from None
        if not order or order[-1] != seq_id:
            if seq_id in rows:
                raise DataError(
                    f"line {lineno}: rows of sequence {seq_id} are not consecutive"
                )
            order.append(seq_id)
            rows[seq_id] = []
        expected_t = len(rows[seq_id]) + 1
        if t != expected_t:
            raise DataError(
                f"line {lineno}: sequence {seq_id} expects t={expected_t}, got t={t}"
            )
        rows[seq_id].append(y)

    sequences = tuple(np.array(rows[s], dtype=np.float64) for s in order)
    return Dataset(sequences=sequences, seq_ids=tuple(order))


def save_paths(paths, seq_ids, path) -> None:
    """Write decoded (or true) state paths as ``seq_id,t,state`` rows.

    ``seq_ids`` maps each path's ``seq_index`` to its identifier; states are
    written 1-based.
    """
    lines = ["seq_id,t,state"]
    for sp in paths:
        seq_id = seq_ids[sp.seq_index]
        for t, state in enumerate(sp.states):
            lines.append(f"{seq_id},{t + 1},{int(state) + 1}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def load_paths(path):
    """Read a path file back as ``[(seq_id, states array 0-based), ...]``."""
    lines = _read_lines(path, "path file")
    if [h.strip() for h in lines[0].split(",")] != ["seq_id", "t", "state"]:
        raise DataError("path file header must be 'seq_id,t,state'")
    order = []
    states = {}
    for lineno, line in enumerate(lines[1:], start=2):
        cells = [c.strip() for c in line.split(",")]
        if len(cells) != 3:
            raise DataError(f"line {lineno}: expected 3 columns")
        seq_id = cells[0]
        try:
            t = int(cells[1])
            state = int(cells[2])
        except ValueError as exc:
            raise DataError(f"line {lineno}: {exc}") from None
        if state < 1:
            raise DataError(f"line {lineno}: states are 1-based, got {state}")
        if seq_id not in states:
            order.append(seq_id)
            states[seq_id] = []
        if t != len(states[seq_id]) + 1:
            raise DataError(f"line {lineno}: unexpected t={t} for sequence {seq_id}")
        states[seq_id].append(state - 1)
    return [(s, np.array(states[s], dtype=np.int64)) for s in order]


def save_trace(loglik_trace, path) -> None:
    """Write the per-iteration trace; deltas recomputed from the trace."""
    lines = ["iter,llh,delta"]
    prev = -math.inf
    for it, llh in enumerate(loglik_trace, start=1):
        lines.append(f"{it},{_format_trace_real(llh)},{_format_trace_real(llh - prev)}")
        prev = llh
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def load_trace(path):
    """Read a trace file back as a list of ``(iter, llh, delta)`` tuples."""
    lines = _read_lines(path, "trace file")
    if [h.strip() for h in lines[0].split(",")] != ["iter", "llh", "delta"]:
        raise DataError("trace file header must be 'iter,llh,delta'")
    out = []
    for lineno, line in enumerate(lines[1:], start=2):
        cells = [c.strip() for c in line.split(",")]
        if len(cells) != 3:
            raise DataError(f"line {lineno}: expected 3 columns")
        try:
            out.append((int(cells[0]), float(cells[1]), float(cells[2])))
        except ValueError as exc:
            raise DataError(f"line {lineno}: {exc}") from None
    return out
