"""Expectation values on a statevector.

Emission intensity is ``gamma0 <S+ S->`` with ``S- = sum_a sigma-_a``. It
splits into the same-atom (non-coherent) part ``gamma0 sum_a <sigma+_a sigma-_a>``
and the cross-atom coherence ``gamma0 sum_{a != b} <sigma+_a sigma-_b>``.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .boson import number_op
from .engine import StateVector, StringKernel, diagonal_values
from .hamiltonian import QubitLayout, SystemSpec
from .pauli import PauliSum

OBSERVABLE_NAMES = ("n_total", "intensity", "intensity_nc", "coherence", "energy")


@lru_cache(maxsize=4096)
def _kernel(letters: str) -> StringKernel:
    return StringKernel(letters)


def expectation(state: StateVector, op: PauliSum) -> complex:
    """``<psi|op|psi>`` evaluated string by string, without a dense matrix."""
    amps = state.amplitudes
    probs = None
    total = 0j
    for t in op.terms:
        if t.is_diagonal():
            if probs is None:
                probs = np.abs(amps) ** 2
            kern = _kernel(t.letters)
            # Z-only strings: <P> = sum_b |psi_b|^2 sign(b)
            total += t.coefficient * _z_expectation(probs, kern)
        else:
            total += t.coefficient * _kernel(t.letters).expectation(amps)
    return complex(total)


def _z_expectation(probs: np.ndarray, kern: StringKernel) -> float:
    if not kern.z_mask:
        return float(probs.sum())
    return float(kern.apply(probs).sum().real)


def sigma_plus(atom_qubit: int, width: int) -> PauliSum:
    return PauliSum(1, {"X": 0.5, "Y": -0.5j}).embed(width, atom_qubit)


def sigma_minus(atom_qubit: int, width: int) -> PauliSum:
    return PauliSum(1, {"X": 0.5, "Y": 0.5j}).embed(width, atom_qubit)


def collective_operator(layout: QubitLayout, same_atom: bool = True, cross_atom: bool = True) -> PauliSum:
    """Pauli sum of ``sum_{a,b} sigma+_a sigma-_b`` restricted to the chosen pair types."""
    width = layout.width
    out = []
    for a in layout.atom_qubits:
        for b in layout.atom_qubits:
            if (a == b and same_atom) or (a != b and cross_atom):
                out.extend((sigma_plus(a, width) @ sigma_minus(b, width)).terms)
    return PauliSum(width, out)


def mode_number_operator(layout: QubitLayout, mode: int) -> PauliSum:
    reg = layout.mode_registers[mode]
    return number_op(len(reg)).embed(layout.width, reg.start)


def mode_occupation(state: StateVector, layout: QubitLayout, mode: int) -> float:
    return expectation(state, mode_number_operator(layout, mode)).real


def total_occupation(state: StateVector, layout: QubitLayout) -> float:
    return sum(mode_occupation(state, layout, k) for k in range(layout.n_modes))


def intensity(state: StateVector, spec: SystemSpec) -> float:
    return spec.gamma0 * expectation(state, collective_operator(spec.layout)).real


def intensity_noncoherent(state: StateVector, spec: SystemSpec) -> float:
    return spec.gamma0 * expectation(state, collective_operator(spec.layout, cross_atom=False)).real


def coherence(state: StateVector, spec: SystemSpec) -> float:
    return intensity(state, spec) - intensity_noncoherent(state, spec)


def energy(state: StateVector, h_total: PauliSum) -> float:
    return expectation(state, h_total).real


def excited_population(state: StateVector, layout: QubitLayout, atom: int) -> float:
    q = layout.atom_qubits[atom]
    return expectation(state, PauliSum(1, {"I": 0.5, "Z": -0.5}).embed(layout.width, q)).real


class ObservableSet:
    """All per-sample observables for one system, with operators assembled once.

    Diagonal quantities (occupations, populations, the free energy) come from a
    single pass over the probabilities; the collective operators and the
    interaction energy are evaluated string by string.
    """

    def __init__(self, spec: SystemSpec, h_total: PauliSum | None = None):
        self.spec = spec
        layout = spec.layout
        n = layout.width
        self._mode_diag = [diagonal_values(mode_number_operator(layout, k)) for k in range(layout.n_modes)]
        idx = np.arange(1 << n, dtype=np.int64)
        self._atom_bits = [((idx >> (n - 1 - q)) & 1).astype(float) for q in layout.atom_qubits]
        # S+S- = sum_a n_a + sum_{a<b} (X_a X_b + Y_a Y_b) / 2
        self._cross = collective_operator(layout, same_atom=False)
        self._h_diag = None
        self._h_off = None
        if h_total is not None:
            diag = PauliSum(n, [t for t in h_total if t.is_diagonal()])
            self._h_diag = diagonal_values(diag) if len(diag) else np.zeros(1 << n)
            self._h_off = PauliSum(n, [t for t in h_total if not t.is_diagonal()])

    def __call__(self, t: float, state: StateVector) -> dict[str, float]:
        spec = self.spec
        amps = state.amplitudes
        probs = np.abs(amps) ** 2
        g0 = spec.gamma0
        rec: dict[str, float] = {}
        pops = [float(probs @ bits) for bits in self._atom_bits]
        occ = [float(probs @ d) for d in self._mode_diag]
        nc = g0 * sum(pops)
        coh = g0 * expectation(state, self._cross).real
        rec["n_total"] = sum(occ)
        rec["intensity"] = nc + coh
        rec["intensity_nc"] = nc
        rec["coherence"] = coh
        if self._h_diag is not None:
            rec["energy"] = float(probs @ self._h_diag) + expectation(state, self._h_off).real
        rec["norm"] = float(probs.sum())
        for k, v in enumerate(occ):
            rec[f"n_mode_{k}"] = v
        for a, v in enumerate(pops):
            rec[f"pop_atom_{a}"] = v
        return rec
