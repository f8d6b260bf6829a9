"""Dense complex-vector helpers for qubit and two-qubit states.

States are plain ``numpy`` complex arrays of length 2 (qubit) or 4 (pair,
ordered |00>, |01>, |10>, |11>). Global phases are never compared directly;
every equality test goes through the modulus of an inner product.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass

import numpy as np

NORM_TOL = 1e-12

SQRT_HALF = 1.0 / np.sqrt(2.0)

KET0 = np.array([1.0, 0.0], dtype=complex)
KET1 = np.array([0.0, 1.0], dtype=complex)
KET_PLUS = np.array([SQRT_HALF, SQRT_HALF], dtype=complex)
KET_MINUS = np.array([SQRT_HALF, -SQRT_HALF], dtype=complex)


class BellLabel(enum.Enum):
    PHI_PLUS = "PhiPlus"
    PSI_PLUS = "PsiPlus"
    PHI_MINUS = "PhiMinus"
    PSI_MINUS = "PsiMinus"


_BELL = {
    BellLabel.PHI_PLUS: np.array([1, 0, 0, 1], dtype=complex) * SQRT_HALF,
    BellLabel.PSI_PLUS: np.array([0, 1, 1, 0], dtype=complex) * SQRT_HALF,
    BellLabel.PHI_MINUS: np.array([1, 0, 0, -1], dtype=complex) * SQRT_HALF,
    BellLabel.PSI_MINUS: np.array([0, 1, -1, 0], dtype=complex) * SQRT_HALF,
}


def as_state(amps, dim: int | None = None, tol: float = NORM_TOL) -> np.ndarray:
    """Coerce ``amps`` to a complex vector and check it is finite and unit-norm."""
    vec = np.asarray(amps, dtype=complex).reshape(-1)
    if dim is not None and vec.shape[0] != dim:
        raise ValueError(f"expected a {dim}-dimensional state, got {vec.shape[0]}")
    if not np.all(np.isfinite(vec)):
        raise ValueError("state amplitudes must be finite")
    norm2 = float(np.vdot(vec, vec).real)
    if abs(norm2 - 1.0) > tol:
        raise ValueError(f"state is not normalized (|psi|^2 = {norm2!r})")
    return vec


def inner_product(a, b) -> complex:
    """<a|b>, conjugate-linear in ``a``."""
    a = np.asarray(a, dtype=complex).reshape(-1)
    b = np.asarray(b, dtype=complex).reshape(-1)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    return complex(np.vdot(a, b))


def tensor(a, b) -> np.ndarray:
    """Product state a (x) b with amps[2i+j] = a[i] b[j]."""
    a = as_state(a, 2)
    b = as_state(b, 2)
    return np.kron(a, b)


def bell_vector(label: BellLabel) -> np.ndarray:
    return _BELL[BellLabel(label)].copy()


def projection_probability(bell: BellLabel, state) -> float:
    """|<Bell|state>|^2 for a normalized two-qubit state."""
    return abs(inner_product(bell_vector(bell), state)) ** 2


@dataclass(frozen=True)
class EncodingSet:
    """Four qubit states indexed by x; x in {0, 1} is basis 0, x in {2, 3} basis 1."""

    states: tuple

    def __post_init__(self):
        if len(self.states) != 4:
            raise ValueError("an encoding set holds exactly four states")
        vecs = tuple(as_state(s, 2) for s in self.states)
        for v in vecs:
            v.setflags(write=False)
        object.__setattr__(self, "states", vecs)

    def __getitem__(self, x: int) -> np.ndarray:
        return self.states[x]

    def to_json(self) -> str:
        return json.dumps(
            [[[float(a.real), float(a.imag)] for a in s] for s in self.states]
        )

    @classmethod
    def from_json(cls, text: str) -> "EncodingSet":
        raw = json.loads(text)
        if not isinstance(raw, list) or len(raw) != 4:
            raise ValueError("expected a JSON array of four states")
        states = []
        for s in raw:
            if len(s) != 2 or any(len(pair) != 2 for pair in s):
                raise ValueError("each state must be two [re, im] pairs")
            states.append([complex(re, im) for re, im in s])
        return cls(tuple(states))


def bb84_encoding() -> EncodingSet:
    """The ideal BB84 set |0>, |1>, |+>, |->."""
    return EncodingSet((KET0, KET1, KET_PLUS, KET_MINUS))


def bell_overlap_nonzero(x: int, y: int, bell: BellLabel, tol: float = NORM_TOL) -> bool:
    """Whether the ideal BB84 product state |x>|y> has support on the given Bell state."""
    enc = bb84_encoding()
    amp = inner_product(bell_vector(bell), tensor(enc[x], enc[y]))
    return abs(amp) > tol


def bell_overlap_grid(pairs, bells=tuple(BellLabel)) -> dict:
    """{(x, y): {bell: bool}} for every requested sender pair."""
    return {
        (x, y): {b: bell_overlap_nonzero(x, y, b) for b in bells} for x, y in pairs
    }
