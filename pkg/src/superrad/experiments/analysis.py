"""Derived quantities computed from sampled series."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from ..errors import InvalidArgumentError, NoCrossingError


def saturation_time(
    times: Sequence[float], occupation: Sequence[float], target_fraction: float, n_atoms: int
) -> float:
    """First time ``occupation >= target_fraction * n_atoms``, linearly interpolated."""
    t = np.asarray(times, dtype=float)
    n = np.asarray(occupation, dtype=float)
    if t.shape != n.shape or t.size == 0:
        raise InvalidArgumentError("times and occupation must be non-empty and equally long")
    target = target_fraction * n_atoms
    hits = np.flatnonzero(n >= target)
    if hits.size == 0:
        raise NoCrossingError(f"occupation never reaches {target:g}")
    i = int(hits[0])
    if i == 0:
        return float(t[0])
    t0, t1, n0, n1 = t[i - 1], t[i], n[i - 1], n[i]
    return float(t0 + (target - n0) * (t1 - t0) / (n1 - n0))


def first_burst_peak(values: Sequence[float], drop: float = 0.02) -> int:
    """Index of the first maximum that the signal later falls ``drop`` below.

    Unlike a global argmax this ignores re-excitation bumps that a finite bath
    produces after the main burst.
    """
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise InvalidArgumentError("empty series")
    best = 0
    for i in range(1, v.size):
        if v[i] > v[best]:
            best = i
        elif v[i] < v[best] - drop * abs(v[best]):
            break
    return best


@dataclass(frozen=True)
class FitResult:
    """Best fit of ``a (N - b)**n + c``; ``flat`` marks constant input."""

    a: float
    b: float
    c: float
    n: float
    residual: float
    flat: bool = False

    def __call__(self, n_atoms):
        return self.a * (np.asarray(n_atoms, dtype=float) - self.b) ** self.n + self.c


def _linear_fit(x: np.ndarray, y: np.ndarray, b: float, n: float) -> tuple[float, float, float]:
    basis = (x - b) ** n
    design = np.stack([basis, np.ones_like(basis)], axis=1)
    (a, c), *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = float(np.sum((design @ (a, c) - y) ** 2))
    return resid, float(a), float(c)


def fit_peak_scaling(
    points: Sequence[tuple[float, float]],
    n_range: tuple[float, float] = (0.5, 4.0),
    b_low: float = -5.0,
    grid: int = 31,
    levels: int = 5,
) -> FitResult:
    """Least-squares fit of ``a (N - b)**n + c`` to ``(N, peak)`` pairs.

    ``n`` and ``b`` are searched on a grid that is repeatedly narrowed around
    the best cell; ``a`` and ``c`` come from a linear solve at every node.
    A final simplex pass polishes ``(n, b)`` inside the same bounds. ``b``
    stays below the smallest ``N`` so every base is positive.
    """
    if len(points) < 4:
        raise InvalidArgumentError("need at least four points")
    x = np.array([p[0] for p in points], dtype=float)
    y = np.array([p[1] for p in points], dtype=float)
    if np.ptp(y) <= 1e-12 * max(1.0, float(np.max(np.abs(y)))):
        return FitResult(0.0, 0.0, float(np.mean(y)), 0.0, 0.0, flat=True)
    b_high = float(x.min()) - 1e-6
    n_lo, n_hi = n_range
    b_lo, b_hi = b_low, b_high
    best = (math.inf, 0.0, 0.0, 0.0, 0.0)
    for _ in range(levels):
        ns = np.linspace(n_lo, n_hi, grid)
        bs = np.linspace(b_lo, b_hi, grid)
        for n in ns:
            for b in bs:
                resid, a, c = _linear_fit(x, y, b, n)
                if resid < best[0]:
                    best = (resid, a, b, c, n)
        _, _, b_best, _, n_best = best
        dn = (n_hi - n_lo) / (grid - 1)
        db = (b_hi - b_lo) / (grid - 1)
        n_lo, n_hi = max(n_range[0], n_best - 2 * dn), min(n_range[1], n_best + 2 * dn)
        b_lo, b_hi = max(b_low, b_best - 2 * db), min(b_high, b_best + 2 * db)

    def profiled(p):
        n, b = p
        if not (n_range[0] <= n <= n_range[1] and b_low <= b <= b_high):
            return math.inf
        return _linear_fit(x, y, b, n)[0]

    polish = minimize(profiled, [best[4], best[2]], method="Nelder-Mead",
                      options={"xatol": 1e-10, "fatol": 1e-16, "maxiter": 4000})
    if polish.fun < best[0]:
        n, b = polish.x
        resid, a, c = _linear_fit(x, y, b, n)
        best = (resid, a, b, c, n)
    resid, a, b, c, n = best
    return FitResult(a, float(b), c, float(n), max(resid, 0.0))


def predicted_max_coherence(dr: float, wavelength: float, n_atoms: int, peak_at_zero: float) -> float:
    """Maximum coherence of an evenly spaced chain, scaled from its co-located value.

    Pair amplitudes are held at their ``dr = 0`` value and only the phase
    factor ``cos(n dr / wavelength)`` of atoms ``n`` sites apart changes.
    """
    if n_atoms < 2:
        raise InvalidArgumentError("coherence needs at least two atoms")
    if dr < 0 or not wavelength > 0:
        raise InvalidArgumentError("dr must be non-negative and wavelength positive")
    weights = [n_atoms - n for n in range(1, n_atoms)]
    phase = sum(w * math.cos(n * dr / wavelength) for n, w in enumerate(weights, start=1))
    return peak_at_zero * phase / sum(weights)


def fit_decay_rate(times: Sequence[float], population: Sequence[float]) -> float:
    """Rate ``G`` of the least-squares fit ``p(t) = exp(-G t)`` on log scale.

    The fit has no free amplitude, so ``p(0) = 1`` is assumed.
    """
    t = np.asarray(times, dtype=float)
    p = np.asarray(population, dtype=float)
    if t.shape != p.shape or t.size < 2 or np.any(p <= 0):
        raise InvalidArgumentError("need at least two samples with positive population")
    return float(-np.dot(t, np.log(p)) / np.dot(t, t))
