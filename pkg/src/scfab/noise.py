"""Circuit-level Pauli error model.

Every two-qubit gate acts perfectly and is followed by two-qubit
depolarizing noise with probability p_comp (each of the 15 non-identity
two-qubit Paulis with probability p_comp/15). Idle qubits depolarize with
probability 4*p_comp/5, matching the marginal error rate of one leg of a
noisy two-qubit gate. Preparation produces the orthogonal state with
probability p_comp and measurement reports the wrong outcome with
probability p_comp.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Pauli codes used by the tableau kernels.
I, X, Y, Z = 0, 1, 2, 3


@dataclass(frozen=True)
class NoiseParams:
    """Single knob p_comp; all other rates are derived, never stored."""

    p_comp: float

    def __post_init__(self):
        if not 0.0 <= self.p_comp <= 1.0:
            raise ValueError(f"p_comp must be in [0, 1], got {self.p_comp}")

    @property
    def p_single(self) -> float:
        """Idle (single-qubit) depolarizing probability: 4*p_comp/5."""
        return 0.8 * self.p_comp

    @property
    def p_flip(self) -> float:
        """Preparation / measurement classical flip probability."""
        return self.p_comp


def two_qubit_fault(p: float, rng) -> tuple[int, int]:
    """Draw one two-qubit depolarizing fault; (0, 0) means no fault."""
    if rng.random() >= p:
        return (I, I)
    k = int(rng.integers(0, 15)) + 1  # 1..15 indexes the non-identity pairs
    return (k >> 2, k & 3)


def single_qubit_fault(p_comp: float, rng) -> int:
    """Draw one idle-qubit fault with total probability 4*p_comp/5."""
    if rng.random() >= 0.8 * p_comp:
        return I
    return int(rng.integers(1, 4))


def classical_flip(p_comp: float, rng) -> bool:
    return bool(rng.random() < p_comp)


# -- batched draws used by the round executor --------------------------------


def draw_two_qubit_faults(p: float, count: int, rng) -> np.ndarray:
    """Pauli code pairs for ``count`` gates, shape (count, 2); 0 = identity."""
    out = np.zeros((count, 2), np.uint8)
    if count == 0 or p == 0.0:
        return out
    hit = rng.random(count) < p
    k = np.flatnonzero(hit)
    if k.size:
        pauli = rng.integers(1, 16, size=k.size)
        out[k, 0] = pauli >> 2
        out[k, 1] = pauli & 3
    return out


def draw_single_qubit_faults(p_comp: float, count: int, rng) -> np.ndarray:
    """Pauli codes for ``count`` idle sites; 0 = identity."""
    out = np.zeros(count, np.uint8)
    if count == 0 or p_comp == 0.0:
        return out
    hit = rng.random(count) < 0.8 * p_comp
    k = np.flatnonzero(hit)
    if k.size:
        out[k] = rng.integers(1, 4, size=k.size)
    return out


def draw_flips(p_comp: float, count: int, rng) -> np.ndarray:
    if count == 0:
        return np.zeros(0, bool)
    if p_comp == 0.0:
        return np.zeros(count, bool)
    return rng.random(count) < p_comp


@dataclass
class FaultSiteAudit:
    """Counts fault-injection sites, one tally per site category."""

    preparations: int = 0
    two_qubit_gates: int = 0
    measurements: int = 0
    idles: int = 0

    def total(self) -> int:
        return (self.preparations + self.two_qubit_gates
                + self.measurements + self.idles)
