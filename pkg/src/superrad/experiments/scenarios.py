"""Runnable recipes for the five scenario kinds.

A config expands into independent jobs (one per atom count, decay rate,
spacing and step count). Jobs run on a thread pool capped by
``SUPERRAD_THREADS`` and their results are gathered in job order, so output
does not depend on scheduling.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import numpy as np

from ..engine import MAX_EXACT_WIDTH, ExactPropagator, build_plan, evolve, init_state, sample_steps
from ..errors import CapacityError, NoCrossingError
from ..hamiltonian import QubitLayout, SystemSpec, build_total, make_system, max_qubits, standard_mode_window
from ..lindblad import dicke_intensity_series
from ..observables import ObservableSet
from ..series import TimeSeries
from .analysis import (
    FitResult,
    first_burst_peak,
    fit_peak_scaling,
    predicted_max_coherence,
    saturation_time,
)
from .config import ScenarioConfig
from .output import format_value, header_lines, write_series_csv, write_table


@dataclass(frozen=True)
class Job:
    n_atoms: int
    gamma0: float
    trotter_steps: int
    dr_over_lambda: float | None = None

    def describe(self) -> dict[str, Any]:
        out: dict[str, Any] = {"n_atoms": self.n_atoms, "gamma0": self.gamma0, "trotter_steps": self.trotter_steps}
        if self.dr_over_lambda is not None:
            out["dr_over_lambda"] = self.dr_over_lambda
        return out


@dataclass
class Check:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


@dataclass
class ScenarioResult:
    config: ScenarioConfig
    jobs: list[Job]
    series: dict[Job, TimeSeries]
    companions: dict[Job, TimeSeries] = field(default_factory=dict)
    files: list[Path] = field(default_factory=list)
    summary: list[dict[str, Any]] = field(default_factory=list)
    fits: dict[str, FitResult] = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def expand_jobs(cfg: ScenarioConfig) -> list[Job]:
    spacings = cfg.dr_over_lambda if cfg.dr_over_lambda is not None else (None,)
    return [
        Job(n, g, nt, dr)
        for n in cfg.n_atoms
        for g in cfg.gamma0
        for dr in spacings
        for nt in cfg.trotter_steps
    ]


def job_layout(cfg: ScenarioConfig, job: Job) -> QubitLayout:
    return QubitLayout.build(job.n_atoms, cfg.qubits_per_mode())


def check_capacity(cfg: ScenarioConfig) -> None:
    """Raise :class:`CapacityError` if any job of ``cfg`` is too wide for its backend."""
    cap = max_qubits()
    for job in expand_jobs(cfg):
        width = job_layout(cfg, job).width
        if width > cap:
            raise CapacityError(f"job {job.describe()} needs {width} qubits, cap is {cap}")
        if cfg.backend == "exact" and width > MAX_EXACT_WIDTH:
            raise CapacityError(
                f"job {job.describe()} needs {width} qubits, exact backend is limited to {MAX_EXACT_WIDTH}"
            )
        if cfg.backend == "lindblad" and job.n_atoms > 10:
            raise CapacityError(f"lindblad backend is limited to 10 atoms, got {job.n_atoms}")


def build_spec(cfg: ScenarioConfig, job: Job) -> SystemSpec:
    modes = standard_mode_window(cfg.atom_freq_center, cfg.mode_window_width, cfg.mode_count)
    positions = None
    if cfg.positions is not None:
        positions = list(cfg.positions)
    elif job.dr_over_lambda is not None:
        positions = [a * job.dr_over_lambda * cfg.wavelength for a in range(job.n_atoms)]
    return make_system(
        cfg.atom_frequencies(job.n_atoms),
        job.gamma0,
        modes,
        list(cfg.qubits_per_mode()),
        positions=positions,
        coupling=cfg.coupling_g,
        convention=cfg.coupling_convention,
    )


def _with_drift(series: TimeSeries, n_atoms: int, gamma0: float) -> TimeSeries:
    if "energy" in series.columns:
        e = series["energy"]
        series.columns["energy_drift_rel"] = np.abs(e - e[0]) / (n_atoms * gamma0)
    return series


def simulate(cfg: ScenarioConfig, job: Job, backend: str | None = None) -> TimeSeries:
    """Evolve one job from the fully excited state and return its sampled observables."""
    backend = backend or cfg.backend
    total_time = cfg.total_time_lifetimes / job.gamma0
    meta = {"backend": backend, **job.describe()}
    if backend == "lindblad":
        # refine the grid so the RK4 step stays below 0.01 / gamma0 while
        # still landing on the same sample times as the other backends
        refine = max(1, math.ceil(cfg.total_time_lifetimes / 0.01 / job.trotter_steps - 1e-9))
        series = dicke_intensity_series(
            job.n_atoms,
            job.gamma0,
            total_time,
            dt=total_time / (job.trotter_steps * refine),
            sample_stride=cfg.sample_stride * refine,
        )
        series.metadata.update(meta)
        return series
    spec = build_spec(cfg, job)
    parts = build_total(spec)
    observe = ObservableSet(spec, parts.total)
    state = init_state(spec.layout)
    if backend == "trotter":
        plan = build_plan(parts, total_time, job.trotter_steps)
        series = evolve(state, plan, observe, cfg.sample_stride)
    elif backend == "exact":
        if spec.width > MAX_EXACT_WIDTH:
            raise CapacityError(f"exact backend is limited to {MAX_EXACT_WIDTH} qubits, got {spec.width}")
        prop = ExactPropagator(parts.total.dense())
        dt = total_time / job.trotter_steps
        times = [s * dt for s in sample_steps(job.trotter_steps, cfg.sample_stride)]
        series = TimeSeries.from_records(times, [observe(t, prop.evolve(state, t)) for t in times])
    else:
        raise ValueError(f"unknown backend {backend!r}")
    series.metadata.update(meta)
    return _with_drift(series, job.n_atoms, job.gamma0)


def _threads(job_count: int, requested: int | None) -> int:
    if requested is None:
        raw = os.environ.get("SUPERRAD_THREADS")
        requested = int(raw) if raw else (os.cpu_count() or 1)
    return max(1, min(requested, job_count))


def _run_all(fn: Callable[[Job], TimeSeries], jobs: list[Job], threads: int | None) -> list[TimeSeries]:
    workers = _threads(len(jobs), threads)
    if workers == 1:
        return [fn(j) for j in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs))


def _fmt_name(value: float) -> str:
    return format_value(float(value)).replace(".", "p").replace("-", "m")


def series_filename(cfg: ScenarioConfig, job: Job, backend: str) -> str:
    parts = [cfg.scenario, backend, f"n{job.n_atoms}", f"g{_fmt_name(job.gamma0)}"]
    if job.dr_over_lambda is not None:
        parts.append(f"dr{_fmt_name(job.dr_over_lambda)}")
    if len(cfg.trotter_steps) > 1:
        parts.append(f"nt{job.trotter_steps}")
    return "_".join(parts) + ".csv"


def _companion_backend(cfg: ScenarioConfig) -> str | None:
    if cfg.scenario in ("homogeneous_scaling", "inhomogeneous_gamma_sweep") and cfg.backend != "lindblad":
        return "lindblad"
    if cfg.scenario == "jaynes_cummings" and cfg.backend != "exact":
        return "exact"
    return None


def run_scenario(
    cfg: ScenarioConfig, out_dir: str | Path | None = None, threads: int | None = None
) -> ScenarioResult:
    """Run every job of ``cfg``, write its CSV files and evaluate the scenario checks."""
    check_capacity(cfg)
    out = Path(out_dir if out_dir is not None else cfg.out_dir)
    jobs = expand_jobs(cfg)
    results = _run_all(lambda j: simulate(cfg, j), jobs, threads)
    result = ScenarioResult(cfg, jobs, dict(zip(jobs, results)))
    n_modes = cfg.mode_count

    companion = _companion_backend(cfg)
    if companion is not None:
        todo = [j for j in jobs if companion != "exact" or job_layout(cfg, j).width <= MAX_EXACT_WIDTH]
        comp = _run_all(lambda j: simulate(cfg, j, companion), todo, threads)
        result.companions = dict(zip(todo, comp))

    for job in jobs:
        path = out / series_filename(cfg, job, cfg.backend)
        write_series_csv(path, cfg, result.series[job], cfg.backend, job.n_atoms, job.gamma0, n_modes, job.describe())
        result.files.append(path)
    for job, series in result.companions.items():
        path = out / series_filename(cfg, job, companion)
        write_series_csv(path, cfg, series, companion, job.n_atoms, job.gamma0, n_modes, job.describe())
        result.files.append(path)

    result.checks.extend(_universal_checks(result))
    ANALYSES[cfg.scenario](result, out)
    return result


# --- universal invariants -------------------------------------------------

NORM_TOL = 1e-9


def _universal_checks(result: ScenarioResult) -> list[Check]:
    checks = []
    worst_norm = 0.0
    for series in [*result.series.values(), *result.companions.values()]:
        if "norm" in series.columns:
            worst_norm = max(worst_norm, float(np.max(np.abs(series["norm"] - 1.0))))
    checks.append(Check("norm drift", worst_norm < NORM_TOL, f"max |norm - 1| = {worst_norm:.3g}"))
    return checks


# --- per-scenario analyses ------------------------------------------------


def _peak(series: TimeSeries, gamma0: float) -> tuple[float, float]:
    i = first_burst_peak(series["intensity"])
    return float(series["intensity"][i] / gamma0), float(series.times[i] * gamma0)


def analyse_homogeneous(result: ScenarioResult, out: Path) -> None:
    cfg = result.config
    rows = []
    for job in result.jobs:
        s = result.series[job]
        g = job.gamma0
        peak, peak_t = _peak(s, g)
        try:
            t80 = saturation_time(s.times * g, s["n_total"], 0.8, job.n_atoms)
        except NoCrossingError:
            t80 = None
        row = {
            "n_atoms": job.n_atoms, "gamma0": g, "trotter_steps": job.trotter_steps,
            "peak_intensity": peak, "peak_time_lifetimes": peak_t, "t80_lifetimes": t80,
            "n_total_final_over_n": float(s["n_total"][-1] / job.n_atoms),
            "max_coherence": float(np.max(s["coherence"]) / g),
            "oracle_peak_intensity": None, "oracle_peak_time_lifetimes": None,
        }
        if job in result.companions:
            row["oracle_peak_intensity"], row["oracle_peak_time_lifetimes"] = _peak(result.companions[job], g)
        rows.append(row)
    result.summary = rows
    cols = list(rows[0])
    result.files.append(write_table(out / f"{cfg.scenario}_summary.csv", header_lines(cfg), cols,
                                    [[r[c] for c in cols] for r in rows]))

    # the scaling analysis needs one series per atom count
    if len(cfg.gamma0) != 1 or len(cfg.trotter_steps) != 1:
        return
    ns = [r["n_atoms"] for r in rows]
    sim_pts = [(r["n_atoms"], r["peak_intensity"]) for r in rows if r["n_atoms"] >= 2]
    if len(sim_pts) >= 4:
        result.fits["simulator"] = fit_peak_scaling(sim_pts)
        n = result.fits["simulator"].n
        result.checks.append(Check("simulator peak exponent", 1.7 <= n <= 2.3, f"n = {n:.4f}, want [1.7, 2.3]"))
    ora_pts = [(r["n_atoms"], r["oracle_peak_intensity"]) for r in rows
               if r["n_atoms"] >= 2 and r["oracle_peak_intensity"] is not None]
    if len(ora_pts) >= 4:
        result.fits["oracle"] = fit_peak_scaling(ora_pts)
        n = result.fits["oracle"].n
        result.checks.append(Check("oracle peak exponent", 1.8 <= n <= 2.2, f"n = {n:.4f}, want [1.8, 2.2]"))
    paired = [r for r in rows if r["oracle_peak_intensity"] is not None and cfg.backend != "lindblad"]
    if paired:
        worst = max(abs(r["peak_intensity"] / r["oracle_peak_intensity"] - 1) for r in paired)
        result.checks.append(Check("peak vs oracle", worst <= 0.15, f"worst relative gap {worst:.4f}, want <= 0.15"))
    t80 = [r["t80_lifetimes"] for r in sorted(rows, key=lambda r: r["n_atoms"]) if r["n_atoms"] >= 2]
    if len(t80) >= 2:
        ok = None not in t80 and all(b < a for a, b in zip(t80, t80[1:]))
        shown = ", ".join("none" if v is None else f"{v:.4f}" for v in t80)
        result.checks.append(Check("t80 strictly decreasing", ok, shown))
    if 5 in ns:
        frac = next(r["n_total_final_over_n"] for r in rows if r["n_atoms"] == 5)
        result.checks.append(Check("N=5 saturation", abs(frac - 1) <= 0.05, f"n_total(T)/5 = {frac:.4f}"))
    fit_rows = [[src, f.a, f.b, f.c, f.n, f.residual, f.flat] for src, f in result.fits.items()]
    if fit_rows:
        result.files.append(write_table(out / f"{cfg.scenario}_fit.csv", header_lines(cfg),
                                        ["source", "a", "b", "c", "n", "residual", "flat"], fit_rows))


def analyse_inhomogeneous(result: ScenarioResult, out: Path) -> None:
    cfg = result.config
    rows = []
    for job in result.jobs:
        s = result.series[job]
        scale = job.n_atoms * job.gamma0
        i = int(np.argmax(s["intensity"]))
        row = {
            "n_atoms": job.n_atoms, "gamma0": job.gamma0, "trotter_steps": job.trotter_steps,
            "peak_intensity_norm": float(s["intensity"][i] / scale),
            "peak_time_lifetimes": float(s.times[i] * job.gamma0),
            "max_abs_coherence_norm": float(np.max(np.abs(s["coherence"])) / scale),
            "max_abs_intensity_minus_nc_norm": float(np.max(np.abs(s["intensity"] - s["intensity_nc"])) / scale),
            "oracle_peak_intensity_norm": None,
        }
        if job in result.companions:
            row["oracle_peak_intensity_norm"] = float(np.max(result.companions[job]["intensity"]) / scale)
        rows.append(row)
    result.summary = rows
    cols = list(rows[0])
    result.files.append(write_table(out / f"{cfg.scenario}_summary.csv", header_lines(cfg), cols,
                                    [[r[c] for c in cols] for r in rows]))
    for n_atoms in cfg.n_atoms:
        sweep = sorted((r for r in rows if r["n_atoms"] == n_atoms), key=lambda r: r["gamma0"])
        low = sweep[0]
        if low["gamma0"] <= 0.1:
            result.checks.append(Check(
                f"N={n_atoms} weak-coupling coherence", low["max_abs_coherence_norm"] < 0.1,
                f"max |coherence| = {low['max_abs_coherence_norm']:.4f} at gamma0 = {low['gamma0']}"))
            result.checks.append(Check(
                f"N={n_atoms} weak-coupling tracking", low["max_abs_intensity_minus_nc_norm"] <= 0.1,
                f"max |I - I_nc| = {low['max_abs_intensity_minus_nc_norm']:.4f}"))
        peaks = [r["peak_intensity_norm"] for r in sweep]
        if len(peaks) >= 2:
            ok = all(b >= a for a, b in zip(peaks, peaks[1:]))
            shown = ", ".join(f"{r['gamma0']}: {r['peak_intensity_norm']:.4f}" for r in sweep)
            result.checks.append(Check(f"N={n_atoms} peak non-decreasing in gamma0", ok, shown))
        top = sweep[-1]
        if top["gamma0"] >= 5:
            result.checks.append(Check(
                f"N={n_atoms} strong-coupling burst", top["peak_intensity_norm"] >= 1.2,
                f"peak = {top['peak_intensity_norm']:.4f} at gamma0 = {top['gamma0']}, want >= 1.2"))


SPATIAL_TOL = 0.05


def analyse_spatial(result: ScenarioResult, out: Path) -> None:
    cfg = result.config
    rows = []
    for n_atoms in cfg.n_atoms:
        for g in cfg.gamma0:
            for nt in cfg.trotter_steps:
                group = [j for j in result.jobs if (j.n_atoms, j.gamma0, j.trotter_steps) == (n_atoms, g, nt)]
                anchor_job = next((j for j in group if (j.dr_over_lambda or 0.0) == 0.0), None)
                if anchor_job is None or n_atoms < 2:
                    continue
                anchor = result.series[anchor_job]
                i_star = int(np.argmax(anchor["coherence"]))
                c0 = float(anchor["coherence"][i_star] / g)
                worst = 0.0
                for job in sorted(group, key=lambda j: j.dr_over_lambda or 0.0):
                    s = result.series[job]
                    dr = job.dr_over_lambda or 0.0
                    pred = predicted_max_coherence(dr, 1.0, n_atoms, c0)
                    at_star = float(s["coherence"][i_star] / g)
                    j_max = int(np.argmax(s["coherence"]))
                    dev = abs(at_star - pred) / abs(c0)
                    worst = max(worst, dev)
                    rows.append({
                        "n_atoms": n_atoms, "gamma0": g, "trotter_steps": nt, "dr_over_lambda": dr,
                        "coherence_at_anchor_time": at_star, "predicted": pred,
                        "deviation_over_anchor": dev,
                        "max_coherence": float(s["coherence"][j_max] / g),
                        "max_coherence_time_lifetimes": float(s.times[j_max] * g),
                        "anchor_time_lifetimes": float(anchor.times[i_star] * g),
                    })
                count = len(group)
                result.checks.append(Check(
                    f"N={n_atoms} spatial predictor", worst <= SPATIAL_TOL and count >= 8,
                    f"{count} points, worst |sim - pred| / anchor = {worst:.4f}, want <= {SPATIAL_TOL}"))
    result.summary = rows
    if rows:
        cols = list(rows[0])
        result.files.append(write_table(out / f"{cfg.scenario}_summary.csv", header_lines(cfg), cols,
                                        [[r[c] for c in cols] for r in rows]))


TROTTER_BOUNDS = {100: 0.05, 1600: 0.02}


def analyse_trotter(result: ScenarioResult, out: Path) -> None:
    cfg = result.config
    rows = []
    for job in result.jobs:
        s = result.series[job]
        drift = s.columns.get("energy_drift_rel")
        if drift is None:
            continue
        rows += [[job.n_atoms, job.gamma0, job.trotter_steps, t * job.gamma0, d] for t, d in zip(s.times, drift)]
        worst = float(np.max(drift))
        result.summary.append({"n_atoms": job.n_atoms, "gamma0": job.gamma0,
                               "trotter_steps": job.trotter_steps, "max_drift": worst})
        bound = 1e-9 if cfg.backend == "exact" else TROTTER_BOUNDS.get(job.trotter_steps)
        if bound is not None:
            result.checks.append(Check(f"energy drift N_T={job.trotter_steps}", worst <= bound,
                                       f"max drift {worst:.4g}, want <= {bound}"))
    result.files.append(write_table(
        out / f"{cfg.scenario}_report.csv", header_lines(cfg),
        ["n_atoms", "gamma0", "trotter_steps", "time_lifetimes", "energy_drift_rel"], rows))


def oscillation_period(times: np.ndarray, values: np.ndarray) -> float:
    """Mean spacing of the prominent maxima of an oscillating series.

    With a single maximum the series is assumed to start at a minimum, so the
    period is twice the time of that maximum.
    """
    v = np.asarray(values)
    level = v.min() + 0.5 * (v.max() - v.min())
    peaks = []
    above = False
    start = 0
    for i, x in enumerate(v):
        if x > level and not above:
            above, start = True, i
        elif x <= level and above:
            above = False
            peaks.append(start + int(np.argmax(v[start:i])))
    if len(peaks) >= 2:
        return float(np.mean(np.diff(np.asarray(times)[peaks])))
    if peaks:
        return 2.0 * float(times[peaks[0]])
    raise NoCrossingError("no oscillation maximum found")


def analyse_jaynes_cummings(result: ScenarioResult, out: Path) -> None:
    cfg = result.config
    for job in result.jobs:
        s = result.series[job]
        occ = s["n_mode_0"]
        g = cfg.coupling_g
        try:
            period = oscillation_period(s.times, occ)
        except NoCrossingError:
            period = math.nan
        expected = math.pi / g
        result.summary.append({"n_atoms": job.n_atoms, "coupling_g": g, "period": period,
                               "expected_period": expected, "peak_occupation": float(np.max(occ))})
        rel = abs(period / expected - 1)
        result.checks.append(Check("Rabi period", rel <= 0.05, f"period {period:.5g} vs pi/g = {expected:.5g}"))
        result.checks.append(Check("Rabi peak occupation", float(np.max(occ)) >= 0.95,
                                   f"max occupation {float(np.max(occ)):.5f}"))
    if result.summary:
        cols = list(result.summary[0])
        result.files.append(write_table(out / f"{cfg.scenario}_summary.csv", header_lines(cfg), cols,
                                        [[r[c] for c in cols] for r in result.summary]))


ANALYSES: dict[str, Callable[[ScenarioResult, Path], None]] = {
    "homogeneous_scaling": analyse_homogeneous,
    "inhomogeneous_gamma_sweep": analyse_inhomogeneous,
    "spatial_dilution": analyse_spatial,
    "trotter_error": analyse_trotter,
    "jaynes_cummings": analyse_jaynes_cummings,
}


def trotter_error_report(cfg: ScenarioConfig, out_dir: str | Path | None = None, threads: int | None = None) -> Path:
    """Run a Trotter step-count sweep and return the path of its drift report."""
    if cfg.scenario != "trotter_error":
        raise ValueError("trotter_error_report needs a trotter_error config")
    result = run_scenario(cfg, out_dir, threads)
    return next(p for p in result.files if p.name.endswith("_report.csv"))
