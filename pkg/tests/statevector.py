"""Brute-force state-vector simulator used as an independent oracle.

Supports the same gate set as the tableau (H, CNOT, X, Y, Z) plus exact
measurement probabilities, for a handful of qubits.
"""

import numpy as np

_H = np.array([[1, 1], [1, -1]], complex) / np.sqrt(2)
_X = np.array([[0, 1], [1, 0]], complex)
_Y = np.array([[0, -1j], [1j, 0]], complex)
_Z = np.array([[1, 0], [0, -1]], complex)


class StateVector:
    def __init__(self, n):
        self.n = n
        self.psi = np.zeros(2 ** n, complex)
        self.psi[0] = 1.0

    def _apply_1q(self, mat, q):
        psi = self.psi.reshape([2] * self.n)
        psi = np.moveaxis(psi, q, 0)
        psi = np.tensordot(mat, psi, axes=(1, 0))
        self.psi = np.moveaxis(psi, 0, q).reshape(-1)

    def h(self, q):
        self._apply_1q(_H, q)

    def x(self, q):
        self._apply_1q(_X, q)

    def y(self, q):
        self._apply_1q(_Y, q)

    def z(self, q):
        self._apply_1q(_Z, q)

    def cnot(self, a, b):
        psi = self.psi.reshape([2] * self.n)
        psi = np.moveaxis(psi, (a, b), (0, 1))
        flipped = psi.copy()
        flipped[1, 0], flipped[1, 1] = psi[1, 1], psi[1, 0]
        self.psi = np.moveaxis(flipped, (0, 1), (a, b)).reshape(-1)

    def apply_gate(self, name, *qs):
        getattr(self, name.lower())(*qs)

    def prob_plus(self, q, basis="Z"):
        """Probability of the +1 outcome for a Z or X measurement of q."""
        if basis.upper() == "X":
            self.h(q)
            p = self.prob_plus(q, "Z")
            self.h(q)
            return p
        psi = np.moveaxis(self.psi.reshape([2] * self.n), q, 0)
        return float(np.sum(np.abs(psi[0]) ** 2))

    def measure(self, q, basis, rng):
        """Projective measurement; returns +1 or -1."""
        if basis.upper() == "X":
            self.h(q)
            out = self.measure(q, "Z", rng)
            self.h(q)
            return out
        p0 = self.prob_plus(q, "Z")
        out = +1 if rng.random() < p0 else -1
        psi = np.moveaxis(self.psi.reshape([2] * self.n), q, 0)
        if out == +1:
            psi[1] = 0
            norm = np.sqrt(max(p0, 1e-300))
        else:
            psi[0] = 0
            norm = np.sqrt(max(1 - p0, 1e-300))
        self.psi = np.moveaxis(psi, 0, q).reshape(-1) / norm
        return out

    def outcome_distribution(self, order, bases):
        """Joint outcome distribution of measuring the qubits in order.

        Returns {tuple of +-1: probability}, enumerated exactly by branching.
        """
        dist = {}
        stack = [(self, (), 1.0)]
        while stack:
            sv, prefix, prob = stack.pop()
            if prob < 1e-12:
                continue
            if len(prefix) == len(order):
                dist[prefix] = dist.get(prefix, 0.0) + prob
                continue
            q = order[len(prefix)]
            basis = bases[len(prefix)]
            p0 = sv.prob_plus(q, basis)
            for out, p in ((+1, p0), (-1, 1 - p0)):
                if p < 1e-12:
                    continue
                branch = StateVector(sv.n)
                branch.psi = sv.psi.copy()
                forced = _ForcedRng(out)
                got = branch.measure(q, basis, forced)
                assert got == out
                stack.append((branch, prefix + (out,), prob * p))
        return dist


class _ForcedRng:
    def __init__(self, outcome):
        self.outcome = outcome

    def random(self):
        return 0.0 if self.outcome == +1 else 1.0
