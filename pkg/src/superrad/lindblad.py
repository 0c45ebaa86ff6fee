"""Master-equation reference for the homogeneous long-wavelength ensemble.

The atoms alone are tracked through their ``2**N`` density matrix under

    d rho/dt = -i [H_A, rho] + gamma0 (S- rho S+ - 1/2 {S+ S-, rho})

with ``H_A = 1/2 sum_a w_a sigma_z``. ``collective=False`` swaps the single
collective jump for independent jumps ``sigma-_a``, which gives plain
exponential decay. Qubit and excitation conventions match the statevector
engine: atom 0 is the most significant bit and ``|1>`` is excited.

Integration is fixed-step RK4.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import IntegrationError, InvalidArgumentError
from .series import TimeSeries

TRACE_FAIL_TOL = 1e-6

_LOWER = np.array([[0, 1], [0, 0]], dtype=complex)  # |0><1| : excited -> ground


def embed_single(op: np.ndarray, atom: int, n_atoms: int) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for a in range(n_atoms):
        out = np.kron(out, op if a == atom else np.eye(2))
    return out


def lowering_operators(n_atoms: int) -> list[np.ndarray]:
    return [embed_single(_LOWER, a, n_atoms) for a in range(n_atoms)]


def excited_state(n_atoms: int) -> np.ndarray:
    """``|1...1><1...1|``: every atom excited."""
    dim = 2**n_atoms
    rho = np.zeros((dim, dim), dtype=complex)
    rho[-1, -1] = 1.0
    return rho


def ground_state(n_atoms: int) -> np.ndarray:
    dim = 2**n_atoms
    rho = np.zeros((dim, dim), dtype=complex)
    rho[0, 0] = 1.0
    return rho


def _n_atoms(rho: np.ndarray) -> int:
    n = rho.shape[0].bit_length() - 1
    if rho.shape != (1 << n, 1 << n):
        raise InvalidArgumentError("density matrix must be 2**N square")
    return n


class DickeGenerator:
    """Precomputed Lindblad generator for ``n_atoms`` atoms."""

    def __init__(
        self,
        n_atoms: int,
        gamma0: float,
        omega: float | Sequence[float] = 0.0,
        collective: bool = True,
    ):
        if n_atoms < 1:
            raise InvalidArgumentError("need at least one atom")
        if not gamma0 > 0:
            raise InvalidArgumentError("gamma0 must be positive")
        self.n_atoms = n_atoms
        self.gamma0 = gamma0
        lowers = lowering_operators(n_atoms)
        self.jumps = [sum(lowers)] if collective else lowers
        self.jumps_dag = [j.conj().T for j in self.jumps]
        self.decay = sum(jd @ j for j, jd in zip(self.jumps, self.jumps_dag))
        omegas = np.broadcast_to(np.asarray(omega, dtype=float), (n_atoms,))
        # sigma_z = |e><e| - |g><g| is diagonal; excited is bit value 1
        idx = np.arange(2**n_atoms)
        bits = [(idx >> (n_atoms - 1 - a)) & 1 for a in range(n_atoms)]
        self.h_diag = 0.5 * sum(w * (2 * b - 1) for w, b in zip(omegas, bits))
        self._rotating = not np.any(omegas)

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        if self._rotating:
            drho = np.zeros_like(rho)
        else:
            h = self.h_diag
            drho = -1j * (h[:, None] - h[None, :]) * rho
        for j, jd in zip(self.jumps, self.jumps_dag):
            drho += self.gamma0 * (j @ rho @ jd)
        anti = self.decay @ rho
        drho -= 0.5 * self.gamma0 * (anti + anti.conj().T)
        return drho


def dicke_rhs(rho: np.ndarray, gamma0: float, omega: float = 0.0, collective: bool = True) -> np.ndarray:
    """Time derivative of ``rho`` under the collective-decay master equation."""
    return DickeGenerator(_n_atoms(rho), gamma0, omega, collective)(rho)


@dataclass
class Trajectory:
    times: np.ndarray
    states: list[np.ndarray]


def integrate(
    rho0: np.ndarray,
    gamma0: float,
    omega: float = 0.0,
    total_time: float = 3.0,
    dt: float | None = None,
    collective: bool = True,
    sample_stride: int = 1,
) -> Trajectory:
    """Fixed-step RK4 integration from ``rho0`` over ``total_time``.

    ``dt`` defaults to ``0.01 / gamma0`` and is shrunk so that an integer
    number of steps lands exactly on ``total_time``. Raises
    :class:`IntegrationError` if the trace drifts by more than 1e-6.
    """
    if dt is None:
        dt = 0.01 / gamma0
    if not dt > 0 or not total_time >= 0:
        raise InvalidArgumentError("dt must be positive and total_time non-negative")
    if sample_stride < 1:
        raise InvalidArgumentError("sample stride must be at least 1")
    steps = max(1, math.ceil(total_time / dt - 1e-9)) if total_time > 0 else 0
    h = total_time / steps if steps else 0.0
    gen = DickeGenerator(_n_atoms(rho0), gamma0, omega, collective)
    rho = np.array(rho0, dtype=complex)
    trace0 = np.trace(rho).real
    times, states = [0.0], [rho.copy()]
    for step in range(1, steps + 1):
        k1 = gen(rho)
        k2 = gen(rho + 0.5 * h * k1)
        k3 = gen(rho + 0.5 * h * k2)
        k4 = gen(rho + h * k3)
        rho = rho + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        drift = abs(np.trace(rho).real - trace0)
        if not drift <= TRACE_FAIL_TOL:
            raise IntegrationError(f"trace drifted by {drift:.3g} at t={step * h:.6g}")
        if step % sample_stride == 0 or step == steps:
            times.append(step * h)
            states.append(rho.copy())
    return Trajectory(np.asarray(times), states)


def collective_matrices(n_atoms: int) -> tuple[np.ndarray, np.ndarray]:
    """Dense ``(S+ S-, sum_a sigma+_a sigma-_a)`` on the atom space."""
    lowers = lowering_operators(n_atoms)
    s_minus = sum(lowers)
    full = s_minus.conj().T @ s_minus
    same = sum(l.conj().T @ l for l in lowers)
    return full, same


def density_observables(rho: np.ndarray, gamma0: float) -> dict[str, float]:
    n = _n_atoms(rho)
    full, same = collective_matrices(n)
    i_full = gamma0 * np.trace(full @ rho).real
    i_nc = gamma0 * np.trace(same @ rho).real
    return {"intensity": i_full, "intensity_nc": i_nc, "coherence": i_full - i_nc}


def independent_intensity(n_atoms: int, gamma0: float, t: float | np.ndarray) -> float | np.ndarray:
    """Incoherent sum of ``n_atoms`` exponential decays."""
    return n_atoms * gamma0 * np.exp(-gamma0 * np.asarray(t))


def dicke_intensity_series(
    n_atoms: int,
    gamma0: float,
    total_time: float,
    dt: float | None = None,
    omega: float = 0.0,
    collective: bool = True,
    sample_stride: int = 1,
) -> TimeSeries:
    """Intensity, non-coherent part, coherence and atom populations from the fully excited start."""
    traj = integrate(excited_state(n_atoms), gamma0, omega, total_time, dt, collective, sample_stride)
    full, same = collective_matrices(n_atoms)
    dim = 2**n_atoms
    idx = np.arange(dim)
    bits = [((idx >> (n_atoms - 1 - a)) & 1).astype(float) for a in range(n_atoms)]
    records = []
    for rho in traj.states:
        diag = np.diag(rho).real
        i_full = gamma0 * np.einsum("ij,ji->", full, rho).real
        pops = [float(diag @ b) for b in bits]
        i_nc = gamma0 * sum(pops)
        rec = {"intensity": i_full, "intensity_nc": i_nc, "coherence": i_full - i_nc}
        rec["n_total"] = n_atoms - sum(pops)
        for a, p in enumerate(pops):
            rec[f"pop_atom_{a}"] = p
        records.append(rec)
    meta = {"backend": "lindblad", "n_atoms": n_atoms, "gamma0": gamma0, "collective": collective}
    return TimeSeries.from_records(traj.times, records, meta)
