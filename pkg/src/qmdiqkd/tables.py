"""Conditional outcome tables p(z|x,y) over same-basis sender pairs.

Announcements: z = 0 failure, z = 1 |phi+>, z = 2 |psi+>. Only the eight
same-basis pairs are kept; cross-basis rounds are discarded at the basis
sift and never feed the bound.
"""

from __future__ import annotations

import csv
import io
import json
import os
from fractions import Fraction
from pathlib import Path

import numpy as np

PAIRS = ((0, 0), (0, 1), (1, 0), (1, 1), (2, 2), (2, 3), (3, 2), (3, 3))
PAIR_INDEX = {pair: i for i, pair in enumerate(PAIRS)}
ANNOUNCEMENTS = (0, 1, 2)

SUM_TOL = 1e-9


class TableError(ValueError):
    """Base class for table problems."""


class TableFormatError(TableError):
    """A serialized table could not be parsed."""


class TableValidationError(TableError):
    """A table violates the probability invariants."""

    def __init__(self, issues):
        self.issues = list(issues)
        super().__init__("invalid outcome table: " + "; ".join(self.issues))


def _pair_key(pair) -> str:
    return f"{pair[0]},{pair[1]}"


def validate_array(p: np.ndarray, tol: float = SUM_TOL) -> list[str]:
    """Every violated invariant of an (8, 3) probability array, one string each."""
    issues = []
    p = np.asarray(p, dtype=float)
    if p.shape != (len(PAIRS), 3):
        return [f"shape {p.shape} != (8, 3)"]
    for i, pair in enumerate(PAIRS):
        for z in ANNOUNCEMENTS:
            v = p[i, z]
            if not np.isfinite(v):
                issues.append(f"p({z}|{_pair_key(pair)}) is not finite")
            elif v < 0.0 or v > 1.0:
                issues.append(f"p({z}|{_pair_key(pair)}) = {v!r} outside [0, 1]")
        total = float(np.sum(p[i]))
        if np.isfinite(total) and abs(total - 1.0) > tol:
            issues.append(f"column {_pair_key(pair)} sums to {total!r}, not 1")
    return issues


class OutcomeTable:
    """Immutable table of p(z|x,y); rows follow ``PAIRS``, columns follow z."""

    __slots__ = ("_p",)

    def __init__(self, probs, validate: bool = True):
        arr = np.array(probs, dtype=float)
        if validate:
            issues = validate_array(arr)
            if issues:
                raise TableValidationError(issues)
        arr.setflags(write=False)
        self._p = arr

    @classmethod
    def from_mapping(cls, mapping, validate: bool = True) -> "OutcomeTable":
        """Build from {(x, y): [p0, p1, p2]}; every same-basis pair must be present."""
        arr = np.zeros((len(PAIRS), 3))
        for pair in PAIRS:
            if pair not in mapping:
                raise TableFormatError(f"missing column {_pair_key(pair)}")
            row = list(mapping[pair])
            if len(row) != 3:
                raise TableFormatError(f"column {_pair_key(pair)} needs 3 entries")
            arr[PAIR_INDEX[pair]] = [float(v) for v in row]
        extra = set(mapping) - set(PAIRS)
        if extra:
            raise TableFormatError(f"unexpected sender pairs {sorted(extra)}")
        return cls(arr, validate=validate)

    @property
    def array(self) -> np.ndarray:
        return self._p

    def p(self, z: int, x: int, y: int) -> float:
        """p(z|x,y)."""
        return float(self._p[PAIR_INDEX[(x, y)], z])

    def __getitem__(self, pair) -> np.ndarray:
        return self._p[PAIR_INDEX[tuple(pair)]]

    def to_mapping(self) -> dict:
        return {pair: [float(v) for v in self._p[i]] for i, pair in enumerate(PAIRS)}

    def __eq__(self, other) -> bool:
        if not isinstance(other, OutcomeTable):
            return NotImplemented
        return bool(np.array_equal(self._p, other._p))

    def __hash__(self):
        return hash(self._p.tobytes())

    def allclose(self, other: "OutcomeTable", atol: float = 1e-12) -> bool:
        return bool(np.allclose(self._p, other._p, rtol=0.0, atol=atol))

    def __repr__(self) -> str:
        cols = ", ".join(
            f"{_pair_key(pair)}: [{', '.join(f'{v:.6g}' for v in self._p[i])}]"
            for i, pair in enumerate(PAIRS)
        )
        return f"OutcomeTable({{{cols}}})"


def validate(table) -> list[str]:
    """Validation report for an OutcomeTable or raw (8, 3) array; empty iff valid."""
    arr = table.array if isinstance(table, OutcomeTable) else table
    return validate_array(arr)


# Honest BB84 senders and a lossless relay, as exact fractions.
_HALF = Fraction(1, 2)
_TABLE_I = {
    (0, 0): (_HALF, _HALF, 0),
    (0, 1): (_HALF, 0, _HALF),
    (1, 0): (_HALF, 0, _HALF),
    (1, 1): (_HALF, _HALF, 0),
    (2, 2): (0, _HALF, _HALF),
    (2, 3): (1, 0, 0),
    (3, 2): (1, 0, 0),
    (3, 3): (0, _HALF, _HALF),
}

# The four-dimensional joint sender has its own table; it coincides with the one above.
_TABLE_II = {
    (0, 0): (_HALF, _HALF, 0),
    (0, 1): (_HALF, 0, _HALF),
    (1, 0): (_HALF, 0, _HALF),
    (1, 1): (_HALF, _HALF, 0),
    (2, 2): (0, _HALF, _HALF),
    (2, 3): (1, 0, 0),
    (3, 2): (1, 0, 0),
    (3, 3): (0, _HALF, _HALF),
}


def ideal_bb84_table() -> OutcomeTable:
    return OutcomeTable.from_mapping(
        {pair: [float(v) for v in row] for pair, row in _TABLE_I.items()}
    )


def joint_sender_table() -> OutcomeTable:
    return OutcomeTable.from_mapping(
        {pair: [float(v) for v in row] for pair, row in _TABLE_II.items()}
    )


def from_counts(counts) -> OutcomeTable:
    """Empirical table from {(x, y): [n0, n1, n2]} (or an (8, 3) integer array)."""
    if isinstance(counts, dict):
        arr = np.zeros((len(PAIRS), 3), dtype=np.int64)
        for pair in PAIRS:
            if pair not in counts:
                raise TableError(f"no counts for sender pair {_pair_key(pair)}")
            arr[PAIR_INDEX[pair]] = counts[pair]
    else:
        arr = np.asarray(counts, dtype=np.int64)
    if arr.shape != (len(PAIRS), 3):
        raise TableError(f"counts shape {arr.shape} != (8, 3)")
    if np.any(arr < 0):
        raise TableError("counts must be non-negative")
    totals = arr.sum(axis=1)
    empty = [_pair_key(PAIRS[i]) for i in np.flatnonzero(totals == 0)]
    if empty:
        raise TableError(f"zero total count for sender pair(s) {', '.join(empty)}")
    return OutcomeTable(arr / totals[:, None])


def mix(tables, weights) -> OutcomeTable:
    """Entrywise convex combination of tables."""
    weights = np.asarray(weights, dtype=float)
    if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-12:
        raise ValueError("mixing weights must be non-negative and sum to 1")
    arr = sum(w * t.array for w, t in zip(weights, tables))
    return OutcomeTable(arr)


# -- serialization -----------------------------------------------------------


def dumps(table: OutcomeTable) -> str:
    """JSON text keyed "x,y" -> [p0, p1, p2], 17 significant digits."""
    lines = []
    for i, pair in enumerate(PAIRS):
        nums = ", ".join(format(float(v), ".17g") for v in table.array[i])
        lines.append(f'  "{_pair_key(pair)}": [{nums}]')
    return "{\n" + ",\n".join(lines) + "\n}\n"


def loads(text: str) -> OutcomeTable:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TableFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise TableFormatError("expected a JSON object keyed by 'x,y'")
    mapping = {}
    for key, row in raw.items():
        try:
            x, y = (int(s) for s in key.split(","))
        except ValueError as exc:
            raise TableFormatError(f"bad column key {key!r}") from exc
        if not isinstance(row, list) or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in row
        ):
            raise TableFormatError(f"column {key!r} must be a list of numbers")
        mapping[(x, y)] = row
    return OutcomeTable.from_mapping(mapping)


def atomic_write_text(path, text: str) -> None:
    """Write via a sibling temp file and rename, so failures leave nothing behind."""
    path = Path(path)
    tmp = path.with_name(f".{path.name}.{os.getpid()}.tmp")
    try:
        with open(tmp, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    finally:
        if tmp.exists():
            tmp.unlink()


def save(table: OutcomeTable, path) -> None:
    atomic_write_text(path, dumps(table))


def load(path) -> OutcomeTable:
    return loads(Path(path).read_text())


def to_csv(table: OutcomeTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["x", "y", "p0", "p1", "p2"])
    for i, (x, y) in enumerate(PAIRS):
        writer.writerow([x, y] + [format(float(v), ".17g") for v in table.array[i]])
    return buf.getvalue()
