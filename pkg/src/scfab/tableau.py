"""Stabilizer-state simulator in the Aaronson-Gottesman tableau form.

Supports preparation, H, CNOT, Pauli application and single-qubit or
multi-qubit Pauli measurement. Rows are bit-packed 64 qubits per machine
word, so gate application costs O(n) bit operations per gate and
measurement costs O(n^2 / 64) words in the worst case (when the state must
be updated); these are the performance contracts relied on by the
experiment driver.

A Tableau is single-threaded mutable state: use one instance per trial.
"""

from __future__ import annotations

import numpy as np

from . import _kernels as _k

_GATE_ARITY = {"H": 1, "X": 1, "Y": 1, "Z": 1, "CNOT": 2}


class Tableau:
    """Stabilizer state of ``n`` qubits, initially all in the +1 Z eigenstate."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("need at least one qubit")
        self.n = n
        self.words = (n + 63) // 64
        self.xs = np.zeros((2 * n, self.words), np.uint64)
        self.zs = np.zeros((2 * n, self.words), np.uint64)
        self.r = np.zeros(2 * n, np.uint8)
        for i in range(n):
            self.xs[i, i >> 6] = np.uint64(1) << np.uint64(i & 63)
            self.zs[n + i, i >> 6] = np.uint64(1) << np.uint64(i & 63)

    # -- gates ------------------------------------------------------------

    def _check_index(self, q: int) -> None:
        if not 0 <= q < self.n:
            raise IndexError(f"qubit index {q} out of range for n={self.n}")

    def h(self, q: int) -> None:
        self._check_index(q)
        _k.h_many(self.xs, self.zs, self.r, np.array([q], np.int64))

    def cnot(self, a: int, b: int) -> None:
        self._check_index(a)
        self._check_index(b)
        if a == b:
            raise ValueError("CNOT control and target must differ")
        _k.cnot_many(self.xs, self.zs, self.r,
                     np.array([a], np.int64), np.array([b], np.int64))

    def x(self, q: int) -> None:
        self._check_index(q)
        _k.pauli_many(self.xs, self.zs, self.r,
                      np.array([q], np.int64), np.array([1], np.uint8))

    def y(self, q: int) -> None:
        self._check_index(q)
        _k.pauli_many(self.xs, self.zs, self.r,
                      np.array([q], np.int64), np.array([2], np.uint8))

    def z(self, q: int) -> None:
        self._check_index(q)
        _k.pauli_many(self.xs, self.zs, self.r,
                      np.array([q], np.int64), np.array([3], np.uint8))

    def apply_gate(self, name: str, *qubits: int) -> None:
        name = name.upper()
        if name not in _GATE_ARITY:
            raise ValueError(f"unsupported gate {name!r}")
        if len(qubits) != _GATE_ARITY[name]:
            raise ValueError(f"{name} takes {_GATE_ARITY[name]} qubit argument(s)")
        getattr(self, name.lower() if name != "CNOT" else "cnot")(*qubits)

    # -- batched operations used by the round scheduler --------------------

    def apply_cnots(self, ctrls: np.ndarray, tgts: np.ndarray) -> None:
        _k.cnot_many(self.xs, self.zs, self.r, ctrls, tgts)

    def apply_paulis(self, qubits: np.ndarray, codes: np.ndarray) -> None:
        _k.pauli_many(self.xs, self.zs, self.r, qubits, codes)

    def measure_many(self, qubits: np.ndarray, basis: str, rng) -> np.ndarray:
        bits = np.empty(len(qubits), np.uint8)
        det = np.empty(len(qubits), np.uint8)
        _k.measure_single_many(self.xs, self.zs, self.r, qubits,
                               basis.upper() == "X", rng, bits, det)
        return bits

    def reset_many(self, qubits: np.ndarray, basis: str, rng) -> None:
        _k.reset_many(self.xs, self.zs, self.r, qubits, basis.upper() == "X", rng)

    # -- measurement -------------------------------------------------------

    def measure(self, q: int, basis: str = "Z", rng=None) -> tuple[int, bool]:
        """Measure qubit q in the Z or X basis.

        Returns (outcome, deterministic) with outcome in {+1, -1}. When the
        observable commutes with the stabilizer group the outcome is
        deterministic and the state is unchanged; otherwise the outcome is
        uniformly random and the state is projected accordingly.
        """
        self._check_index(q)
        rng = np.random.default_rng() if rng is None else rng
        bit, det = _k.measure_single(self.xs, self.zs, self.r, q,
                                     basis.upper() == "X", rng)
        return (-1 if bit else +1), bool(det)

    def reset(self, q: int, basis: str = "Z", rng=None) -> None:
        """Put qubit q in the +1 eigenstate of the basis (measure, then flip)."""
        self._check_index(q)
        rng = np.random.default_rng() if rng is None else rng
        _k.reset_many(self.xs, self.zs, self.r, np.array([q], np.int64),
                      basis.upper() == "X", rng)

    def pack_pauli(self, x_support, z_support) -> tuple[np.ndarray, np.ndarray, int]:
        """Pack a Hermitian Pauli with X on x_support and Z on z_support."""
        px = np.zeros(self.words, np.uint64)
        pz = np.zeros(self.words, np.uint64)
        for q in x_support:
            self._check_index(q)
            px[q >> 6] |= np.uint64(1) << np.uint64(q & 63)
        for q in z_support:
            self._check_index(q)
            pz[q >> 6] |= np.uint64(1) << np.uint64(q & 63)
        yp = int(sum(bin(int(a & b)).count("1") for a, b in zip(px, pz)))
        return px, pz, yp

    def measure_pauli(self, x_support, z_support, rng=None) -> tuple[int, bool]:
        """Measure the Hermitian Pauli product X[x_support] * Z[z_support]."""
        rng = np.random.default_rng() if rng is None else rng
        px, pz, yp = self.pack_pauli(x_support, z_support)
        bit, det = _k.measure_pauli(self.xs, self.zs, self.r, px, pz, yp, rng)
        return (-1 if bit else +1), bool(det)

    def measure_packed(self, px: np.ndarray, pz: np.ndarray, yp: int, rng) -> tuple[int, bool]:
        bit, det = _k.measure_pauli(self.xs, self.zs, self.r, px, pz, yp, rng)
        return (-1 if bit else +1), bool(det)

    def measure_packed_many(self, pxs: np.ndarray, pzs: np.ndarray,
                            yps: np.ndarray, rng) -> np.ndarray:
        """Measure a sequence of packed Paulis in order; returns outcome bits."""
        bits = np.empty(len(yps), np.uint8)
        det = np.empty(len(yps), np.uint8)
        _k.measure_pauli_many(self.xs, self.zs, self.r, pxs, pzs, yps, rng,
                              bits, det)
        return bits


def new_tableau(n: int) -> Tableau:
    return Tableau(n)
