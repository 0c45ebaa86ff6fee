"""Dense statevector evolution.

Each Pauli string ``P`` squares to the identity, so its exponential is applied
exactly as ``exp(-i theta P) = cos(theta) - i sin(theta) P`` instead of being
compiled into gates. The diagonal free Hamiltonian is applied as one vector of
phases. A first-order Trotter step is

    exp(-i H0 dt) followed by exp(-i c_j P_j dt) for every interaction string j

in the fixed order recorded in the :class:`TrotterPlan`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from ._kernels import exp_pauli_inplace
from .errors import CapacityError, InvalidArgumentError
from .hamiltonian import HamiltonianParts, QubitLayout
from .pauli import PauliSum, PauliTerm, string_masks
from .series import TimeSeries

MAX_EXACT_WIDTH = 12


@dataclass
class StateVector:
    """``2**n`` complex amplitudes; qubit 0 is the most significant index bit.

    Evolution functions update ``amplitudes`` in place and return the same
    object.
    """

    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        n = self.amplitudes.size.bit_length() - 1
        if self.amplitudes.ndim != 1 or self.amplitudes.size != 1 << n:
            raise InvalidArgumentError("amplitude count must be a power of two")

    @property
    def qubit_count(self) -> int:
        return self.amplitudes.size.bit_length() - 1

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def copy(self) -> "StateVector":
        return StateVector(self.amplitudes.copy())


def basis_state(width: int, index: int) -> StateVector:
    amps = np.zeros(1 << width, dtype=complex)
    amps[index] = 1.0
    return StateVector(amps)


def init_state(layout: QubitLayout) -> StateVector:
    """All atoms excited, every mode register empty."""
    n = layout.width
    index = 0
    for q in layout.atom_qubits:
        index |= 1 << (n - 1 - q)
    return basis_state(n, index)


class StringKernel:
    """Precomputed action of one Pauli string on a statevector.

    The amplitude vector is viewed as a tensor with one length-2 axis per
    non-identity letter and one merged axis per run of identities. ``P`` then
    becomes a flip along the X/Y axes times a small broadcast sign factor
    (``(-1)**bit`` on the Z/Y axes, times ``i**n_y``).
    """

    __slots__ = ("width", "shape", "x_axes", "factor", "x_mask", "z_mask", "y_phase")

    def __init__(self, letters: str):
        self.width = len(letters)
        self.x_mask, self.z_mask, n_y = string_masks(letters)
        self.y_phase = 1j**n_y
        shape: list[int] = []
        x_axes: list[int] = []
        z_axes: list[int] = []
        run = 0
        for p in letters:
            if p == "I":
                run += 1
                continue
            if run:
                shape.append(1 << run)
                run = 0
            if p in "XY":
                x_axes.append(len(shape))
            if p in "ZY":
                z_axes.append(len(shape))
            shape.append(2)
        if run:
            shape.append(1 << run)
        self.shape = tuple(shape)
        self.x_axes = tuple(x_axes)
        factor = np.ones([2 if j in z_axes or j in x_axes else 1 for j in range(len(shape))], dtype=complex)
        for ax in z_axes:
            idx = [slice(None)] * len(shape)
            idx[ax] = 1
            factor[tuple(idx)] *= -1
        # signs are evaluated on the source index, i.e. after the flip
        self.factor = np.flip(factor, axis=self.x_axes) * self.y_phase

    def apply(self, amplitudes: np.ndarray, scale: complex = 1.0) -> np.ndarray:
        """Return ``scale * P @ amplitudes`` as a new flat array."""
        t = amplitudes.reshape(self.shape)
        return (np.flip(t, axis=self.x_axes) * (self.factor * scale)).reshape(-1)

    def expectation(self, amplitudes: np.ndarray) -> complex:
        return complex(np.vdot(amplitudes, self.apply(amplitudes)))

    def exponentiate(self, amplitudes: np.ndarray, theta: float) -> None:
        """In-place ``amplitudes <- exp(-i theta P) amplitudes``."""
        exp_pauli_inplace(
            amplitudes, self.x_mask, self.z_mask, np.cos(theta), -1j * np.sin(theta) * self.y_phase
        )


def diagonal_values(op: PauliSum) -> np.ndarray:
    """Diagonal of an I/Z-only Pauli sum as a real vector."""
    if not op.is_diagonal():
        raise InvalidArgumentError("operator has off-diagonal letters")
    n = op.width
    idx = np.arange(1 << n, dtype=np.int64)
    diag = np.zeros(1 << n, dtype=complex)
    for t in op.terms:
        _, z_mask, _ = string_masks(t.letters)
        signs = 1 - 2 * (np.bitwise_count(idx & z_mask).astype(np.int64) & 1)
        diag += t.coefficient * signs
    return diag.real if np.allclose(diag.imag, 0.0, atol=1e-12) else diag


def apply_pauli_exponential(
    state: StateVector, term: PauliTerm | PauliSum, duration: float
) -> StateVector:
    """Apply ``exp(-i H duration)`` for a single real-weighted string or a diagonal sum."""
    if isinstance(term, PauliSum):
        if not term.is_diagonal():
            raise InvalidArgumentError("only diagonal sums can be exponentiated as a whole")
        if not term.is_hermitian():
            raise InvalidArgumentError("operator must be Hermitian")
        _check_width(state, term.width)
        state.amplitudes *= np.exp(-1j * duration * diagonal_values(term))
        return state
    if not term.is_hermitian():
        raise InvalidArgumentError("Pauli term must carry a real coefficient")
    _check_width(state, term.width)
    StringKernel(term.letters).exponentiate(state.amplitudes, term.coefficient.real * duration)
    return state


def _check_width(state: StateVector, width: int) -> None:
    if state.qubit_count != width:
        raise InvalidArgumentError(
            f"operator width {width} does not match state width {state.qubit_count}"
        )


@dataclass(frozen=True)
class TrotterPlan:
    """First-order Trotter schedule.

    ``schedule[0]`` is ``(h0, delta_t)``; every later entry is
    ``(term, angle)`` with ``angle = term.coefficient * delta_t``.
    """

    delta_t: float
    step_count: int
    schedule: tuple[tuple[PauliSum | PauliTerm, float], ...]
    _phases: np.ndarray = field(repr=False, compare=False)
    _kernels: tuple[tuple[StringKernel, float], ...] = field(repr=False, compare=False)

    @property
    def total_time(self) -> float:
        return self.delta_t * self.step_count

    @property
    def width(self) -> int:
        return self.schedule[0][0].width


def build_plan(parts: HamiltonianParts, total_time: float, step_count: int) -> TrotterPlan:
    if step_count < 0:
        raise InvalidArgumentError("step count must be non-negative")
    if not total_time >= 0:
        raise InvalidArgumentError("total time must be non-negative")
    dt = total_time / step_count if step_count else 0.0
    schedule: list[tuple[PauliSum | PauliTerm, float]] = [(parts.h0, dt)]
    for pair in parts.hint_terms:
        for t in pair.terms:
            schedule.append((t, t.coefficient.real * dt))
    phases = np.exp(-1j * dt * diagonal_values(parts.h0))
    kernels = tuple((StringKernel(t.letters), angle) for t, angle in schedule[1:])
    return TrotterPlan(dt, step_count, tuple(schedule), phases, kernels)


def trotter_step(state: StateVector, plan: TrotterPlan) -> StateVector:
    amps = state.amplitudes
    amps *= plan._phases
    for kernel, angle in plan._kernels:
        kernel.exponentiate(amps, angle)
    return state


Sampler = Callable[[float, StateVector], Mapping[str, float]]


def sample_steps(step_count: int, stride: int) -> list[int]:
    """Step indices at which :func:`evolve` samples: 0, every ``stride``, and the last."""
    if stride < 1:
        raise InvalidArgumentError("sample stride must be at least 1")
    steps = list(range(0, step_count + 1, stride))
    if steps[-1] != step_count:
        steps.append(step_count)
    return steps


def evolve(
    state: StateVector, plan: TrotterPlan, sampler: Sampler, sample_stride: int = 1
) -> TimeSeries:
    """Run ``plan.step_count`` Trotter steps, sampling at t=0, every stride, and t=T."""
    wanted = set(sample_steps(plan.step_count, sample_stride))
    times, records = [0.0], [dict(sampler(0.0, state))]
    for step in range(1, plan.step_count + 1):
        trotter_step(state, plan)
        if step in wanted:
            t = step * plan.delta_t
            times.append(t)
            records.append(dict(sampler(t, state)))
    return TimeSeries.from_records(times, records)


class ExactPropagator:
    """``exp(-i H t)`` from one eigendecomposition of a dense Hermitian ``H``."""

    def __init__(self, h: np.ndarray):
        h = np.asarray(h)
        width = h.shape[0].bit_length() - 1
        if width > MAX_EXACT_WIDTH:
            raise CapacityError(f"exact evolution limited to {MAX_EXACT_WIDTH} qubits, got {width}")
        self.energies, self.vectors = np.linalg.eigh(h)

    def evolve(self, state: StateVector, t: float) -> StateVector:
        coeffs = self.vectors.conj().T @ state.amplitudes
        return StateVector(self.vectors @ (np.exp(-1j * self.energies * t) * coeffs))


def exact_evolve(h: np.ndarray, state: StateVector, t: float) -> StateVector:
    """Return a new state ``exp(-i h t) state`` via eigendecomposition."""
    return ExactPropagator(h).evolve(state, t)
