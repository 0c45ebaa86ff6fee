"""Qubit Hamiltonian for two-level atoms coupled to a discretized radiation bath.

Atoms occupy the lowest qubit indices, then one contiguous binary register per
mode in increasing frequency. An atom's excited state is ``|1>`` (so
``sigma_z = -Z``) and the free Hamiltonian is

    H0 = -1/2 sum_a w_a Z_a + sum_k w_k n_k

where ``n_k`` is the register's number operator (``(I - Z)/2`` for a single
qubit). Each atom-mode pair contributes

    -i g_k X_a (exp(-i k r_a) a+_k - exp(i k r_a) a_k)

which for a one-qubit register is ``-g_k (cos(k r_a) X_a Y_k + sin(k r_a) X_a X_k)``.
Units are natural (c = 1) so ``k = w_k``.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .boson import annihilation_op, creation_op, number_op
from .errors import CapacityError, ConstructionError, InvalidArgumentError
from .pauli import PauliSum

DEFAULT_MAX_QUBITS = 24

G2_OVER_DELTA = "g2_over_delta"
G2_TIMES_DELTA = "g2_times_delta"
COUPLING_CONVENTIONS = (G2_OVER_DELTA, G2_TIMES_DELTA)
# Selected by the single-atom decay calibration (see tests/test_acceptance.py).
DEFAULT_CONVENTION = G2_OVER_DELTA


def max_qubits() -> int:
    """Qubit cap, overridable through ``SUPERRAD_MAX_QUBITS``."""
    raw = os.environ.get("SUPERRAD_MAX_QUBITS")
    return int(raw) if raw else DEFAULT_MAX_QUBITS


def coupling_from_gamma(gamma0: float, spacing: float, convention: str = DEFAULT_CONVENTION) -> float:
    """Atom-mode coupling reproducing the decay rate ``gamma0`` with mode spacing ``spacing``.

    ``g2_over_delta`` uses the golden rule with density of states ``1/spacing``,
    ``gamma0 = 2 pi g**2 / spacing``. ``g2_times_delta`` takes
    ``gamma0 = 2 pi g**2 spacing`` literally.
    """
    if not gamma0 > 0 or not spacing > 0:
        raise InvalidArgumentError("gamma0 and spacing must be positive")
    if convention == G2_OVER_DELTA:
        return math.sqrt(gamma0 * spacing / (2 * math.pi))
    if convention == G2_TIMES_DELTA:
        return math.sqrt(gamma0 / (2 * math.pi * spacing))
    raise InvalidArgumentError(f"unknown coupling convention {convention!r}")


def standard_mode_window(center: float, width: float, count: int) -> list[float]:
    """``count`` evenly spaced frequencies spanning ``center +/- width/2``."""
    if count < 1:
        raise InvalidArgumentError("mode count must be at least 1")
    if not width > 0:
        raise InvalidArgumentError("window width must be positive")
    if count == 1:
        return [float(center)]
    return [float(w) for w in np.linspace(center - width / 2, center + width / 2, count)]


@dataclass(frozen=True)
class AtomSpec:
    frequency: float
    gamma0: float
    position: float = 0.0

    def __post_init__(self):
        if not self.frequency > 0:
            raise InvalidArgumentError("atom frequency must be positive")
        if not self.gamma0 > 0:
            raise InvalidArgumentError("gamma0 must be positive")


@dataclass(frozen=True)
class ModeSpec:
    frequency: float
    coupling: float
    qubits: int = 1

    def __post_init__(self):
        if not self.frequency > 0:
            raise InvalidArgumentError("mode frequency must be positive")
        if self.qubits < 1:
            raise InvalidArgumentError("each mode needs at least one qubit")

    @property
    def wavevector(self) -> float:
        return self.frequency


@dataclass(frozen=True)
class QubitLayout:
    atom_qubits: tuple[int, ...]
    mode_registers: tuple[range, ...]

    @classmethod
    def build(cls, n_atoms: int, mode_qubits: Sequence[int]) -> "QubitLayout":
        regs = []
        start = n_atoms
        for q in mode_qubits:
            regs.append(range(start, start + q))
            start += q
        return cls(tuple(range(n_atoms)), tuple(regs))

    @property
    def n_atoms(self) -> int:
        return len(self.atom_qubits)

    @property
    def n_modes(self) -> int:
        return len(self.mode_registers)

    @property
    def width(self) -> int:
        return len(self.atom_qubits) + sum(len(r) for r in self.mode_registers)


@dataclass(frozen=True)
class SystemSpec:
    atoms: tuple[AtomSpec, ...]
    modes: tuple[ModeSpec, ...]
    layout: QubitLayout = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        object.__setattr__(self, "modes", tuple(self.modes))
        if not self.atoms:
            raise InvalidArgumentError("at least one atom is required")
        if len({a.gamma0 for a in self.atoms}) != 1:
            raise InvalidArgumentError("all atoms must share gamma0")
        freqs = [m.frequency for m in self.modes]
        if any(b <= a for a, b in zip(freqs, freqs[1:])):
            raise InvalidArgumentError("mode frequencies must be strictly increasing")
        layout = QubitLayout.build(len(self.atoms), [m.qubits for m in self.modes])
        cap = max_qubits()
        if layout.width > cap:
            raise CapacityError(f"system needs {layout.width} qubits, cap is {cap}")
        object.__setattr__(self, "layout", layout)

    @property
    def gamma0(self) -> float:
        return self.atoms[0].gamma0

    @property
    def n_atoms(self) -> int:
        return len(self.atoms)

    @property
    def width(self) -> int:
        return self.layout.width


def make_system(
    atom_frequencies: Sequence[float],
    gamma0: float,
    mode_frequencies: Sequence[float],
    mode_qubits: int | Sequence[int] = 1,
    positions: Sequence[float] | None = None,
    coupling: float | None = None,
    convention: str = DEFAULT_CONVENTION,
) -> SystemSpec:
    """Build a :class:`SystemSpec` with a uniform coupling.

    Without an explicit ``coupling`` the value is calibrated from ``gamma0``
    and the (uniform) mode spacing, which needs at least two modes.
    """
    mode_frequencies = list(mode_frequencies)
    if isinstance(mode_qubits, int):
        mode_qubits = [mode_qubits] * len(mode_frequencies)
    if len(mode_qubits) != len(mode_frequencies):
        raise InvalidArgumentError("one qubit allocation per mode is required")
    if positions is None:
        positions = [0.0] * len(atom_frequencies)
    if len(positions) != len(atom_frequencies):
        raise InvalidArgumentError("one position per atom is required")
    if coupling is None:
        if len(mode_frequencies) < 2:
            raise InvalidArgumentError("a single mode needs an explicit coupling")
        spacing = (mode_frequencies[-1] - mode_frequencies[0]) / (len(mode_frequencies) - 1)
        coupling = coupling_from_gamma(gamma0, spacing, convention)
    atoms = [AtomSpec(w, gamma0, r) for w, r in zip(atom_frequencies, positions)]
    modes = [ModeSpec(w, coupling, q) for w, q in zip(mode_frequencies, mode_qubits)]
    return SystemSpec(tuple(atoms), tuple(modes))


@dataclass(frozen=True)
class HamiltonianParts:
    h0: PauliSum
    hint_terms: tuple[PauliSum, ...]
    total: PauliSum


def _single(letter: str, qubit: int, width: int) -> PauliSum:
    return PauliSum.from_label(letter).embed(width, qubit)


def build_h0(spec: SystemSpec) -> PauliSum:
    width = spec.width
    h0 = PauliSum.zero(width)
    for q, atom in zip(spec.layout.atom_qubits, spec.atoms):
        h0 = h0 + (-0.5 * atom.frequency) * _single("Z", q, width)
    for reg, mode in zip(spec.layout.mode_registers, spec.modes):
        h0 = h0 + mode.frequency * number_op(mode.qubits).embed(width, reg.start)
    return h0


def pair_term(spec: SystemSpec, atom: int, mode: int) -> PauliSum:
    """Interaction between one atom and one mode, cosine part first."""
    width = spec.width
    a_spec, m_spec = spec.atoms[atom], spec.modes[mode]
    reg = spec.layout.mode_registers[mode]
    x_atom = _single("X", spec.layout.atom_qubits[atom], width)
    up = creation_op(m_spec.qubits).embed(width, reg.start)
    down = annihilation_op(m_spec.qubits).embed(width, reg.start)
    phase = m_spec.wavevector * a_spec.position
    g = m_spec.coupling
    cos_part = (-1j * g * math.cos(phase)) * (x_atom @ (up - down))
    sin_part = (-g * math.sin(phase)) * (x_atom @ (up + down))
    term = PauliSum(width, cos_part.terms + sin_part.terms)
    if not term.is_hermitian():
        raise ConstructionError(f"interaction term for atom {atom}, mode {mode} is not Hermitian")
    # Drop the exactly-zero imaginary parts left by the complex arithmetic.
    return PauliSum(width, {t.letters: t.coefficient.real for t in term})


def build_hint(spec: SystemSpec) -> list[PauliSum]:
    """One Hermitian term per (atom, mode) pair, atoms outer and modes inner."""
    return [
        pair_term(spec, a, k)
        for a in range(spec.n_atoms)
        for k in range(len(spec.modes))
    ]


def build_total(spec: SystemSpec) -> HamiltonianParts:
    h0 = build_h0(spec)
    hint = build_hint(spec)
    total = PauliSum(spec.width, h0.terms + tuple(t for h in hint for t in h.terms))
    if not total.is_hermitian():
        raise ConstructionError("total Hamiltonian is not Hermitian")
    return HamiltonianParts(h0, tuple(hint), total)
