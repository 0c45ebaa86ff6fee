"""Scenario configuration files.

A config is plain text made of ``[section]`` headers and ``key = value`` lines.
``#`` starts a comment. Lists are comma separated, with optional brackets::

    [scenario]
    scenario = homogeneous_scaling

    [atoms]
    n_atoms = 2, 3, 4, 5, 6
    gamma0 = 7.0

Keys left out take the preset of the chosen scenario, and :func:`emit_config`
writes every resolved key back out so that a run is fully described by its
output header.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from ..errors import ConfigError
from ..hamiltonian import COUPLING_CONVENTIONS, DEFAULT_CONVENTION

SCENARIOS = (
    "homogeneous_scaling",
    "inhomogeneous_gamma_sweep",
    "spatial_dilution",
    "trotter_error",
    "jaynes_cummings",
)
BACKENDS = ("trotter", "exact", "lindblad")

# key -> (section, kind); kinds ending in "s" accept a scalar or a list
_SCHEMA: dict[str, tuple[str, str]] = {
    "scenario": ("scenario", "str"),
    "backend": ("scenario", "str"),
    "coupling_convention": ("scenario", "str"),
    "n_atoms": ("atoms", "ints"),
    "gamma0": ("atoms", "floats"),
    "atom_freq_center": ("atoms", "float"),
    "atom_freq_spacing": ("atoms", "float"),
    "positions": ("atoms", "floats"),
    "dr_over_lambda": ("atoms", "floats"),
    "mode_count": ("modes", "int"),
    "mode_window_width": ("modes", "float"),
    "mode_qubits": ("modes", "ints"),
    "coupling_g": ("modes", "float"),
    "total_time_lifetimes": ("evolution", "float"),
    "trotter_steps": ("evolution", "ints"),
    "sample_stride": ("evolution", "int"),
    "out_dir": ("output", "str"),
}
SECTIONS = ("scenario", "atoms", "modes", "evolution", "output")

_HOMOGENEOUS_QUBITS = (1, 2, 2, 2, 2, 2, 1)

PRESETS: dict[str, dict[str, Any]] = {
    "homogeneous_scaling": dict(
        n_atoms=(2, 3, 4, 5, 6), gamma0=(7.0,), mode_count=7, mode_window_width=50.0,
        mode_qubits=_HOMOGENEOUS_QUBITS, trotter_steps=(300,), sample_stride=2,
    ),
    "inhomogeneous_gamma_sweep": dict(
        n_atoms=(4,), gamma0=(0.1, 2.0, 3.0, 5.0), atom_freq_spacing=7.5, mode_count=11,
        mode_window_width=37.5, mode_qubits=(1,), trotter_steps=(1600,), sample_stride=4,
    ),
    "spatial_dilution": dict(
        n_atoms=(2, 4), gamma0=(7.0,), mode_count=7, mode_window_width=50.0,
        mode_qubits=_HOMOGENEOUS_QUBITS, trotter_steps=(400,), sample_stride=2,
        dr_over_lambda=tuple(0.1875 * i for i in range(9)),
    ),
    "trotter_error": dict(
        n_atoms=(4,), gamma0=(7.0,), mode_count=7, mode_window_width=50.0,
        mode_qubits=_HOMOGENEOUS_QUBITS, trotter_steps=(100, 200, 400, 800, 1600), sample_stride=1,
    ),
    "jaynes_cummings": dict(
        n_atoms=(1,), gamma0=(1.0,), mode_count=1, mode_window_width=1.0, mode_qubits=(1,),
        coupling_g=0.5, total_time_lifetimes=12.0, trotter_steps=(12000,), sample_stride=10,
    ),
}

_COMMON_DEFAULTS: dict[str, Any] = dict(
    backend="trotter",
    coupling_convention=DEFAULT_CONVENTION,
    atom_freq_center=100.0,
    atom_freq_spacing=0.0,
    positions=None,
    dr_over_lambda=None,
    coupling_g=None,
    total_time_lifetimes=3.0,
    out_dir="out",
)


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str
    n_atoms: tuple[int, ...]
    gamma0: tuple[float, ...]
    atom_freq_center: float
    atom_freq_spacing: float
    mode_count: int
    mode_window_width: float
    mode_qubits: tuple[int, ...]
    total_time_lifetimes: float
    trotter_steps: tuple[int, ...]
    sample_stride: int
    backend: str
    coupling_convention: str
    out_dir: str
    positions: tuple[float, ...] | None = None
    dr_over_lambda: tuple[float, ...] | None = None
    coupling_g: float | None = None

    def qubits_per_mode(self) -> tuple[int, ...]:
        if len(self.mode_qubits) == 1:
            return self.mode_qubits * self.mode_count
        return self.mode_qubits

    def atom_frequencies(self, n_atoms: int) -> list[float]:
        mid = (n_atoms - 1) / 2
        return [self.atom_freq_center + (a - mid) * self.atom_freq_spacing for a in range(n_atoms)]

    @property
    def wavelength(self) -> float:
        """Emission wavelength ``1 / w_atom`` in natural units."""
        return 1.0 / self.atom_freq_center


def _parse_scalar(kind: str, text: str, key: str, line: int):
    try:
        if kind == "int":
            return int(text)
        if kind == "float":
            value = float(text)
            if not math.isfinite(value):
                raise ValueError
            return value
    except ValueError:
        raise ConfigError(f"expected {kind}, got {text!r}", key, line) from None
    return text


def _parse_value(kind: str, raw: str, key: str, line: int):
    if kind == "str":
        if not raw:
            raise ConfigError("empty value", key, line)
        return raw
    if kind in ("int", "float"):
        return _parse_scalar(kind, raw, key, line)
    body = raw
    if body.startswith("[") and body.endswith("]"):
        body = body[1:-1]
    items = [s.strip() for s in body.split(",")]
    if not items or any(not s for s in items):
        raise ConfigError("empty list entry", key, line)
    return tuple(_parse_scalar(kind[:-1], s, key, line) for s in items)


def parse_config(text: str) -> ScenarioConfig:
    """Parse and validate config text. Errors name the key and line."""
    values: dict[str, Any] = {}
    lines: dict[str, int] = {}
    section = None
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        stripped = raw_line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise ConfigError(f"malformed section header {stripped!r}", line=lineno)
            section = stripped[1:-1].strip()
            if section not in SECTIONS:
                raise ConfigError(f"unknown section {section!r}", line=lineno)
            continue
        key, sep, raw = stripped.partition("=")
        key, raw = key.strip(), raw.strip()
        if not sep or not key:
            raise ConfigError(f"expected 'key = value', got {stripped!r}", line=lineno)
        if key not in _SCHEMA:
            raise ConfigError("unknown key", key, lineno)
        home, kind = _SCHEMA[key]
        if section is not None and section != home:
            raise ConfigError(f"belongs in section [{home}], found in [{section}]", key, lineno)
        if key in values:
            raise ConfigError(f"duplicate key (first set on line {lines[key]})", key, lineno)
        values[key] = _parse_value(kind, raw, key, lineno)
        lines[key] = lineno
    return _resolve(values, lines)


def _resolve(values: dict[str, Any], lines: dict[str, int]) -> ScenarioConfig:
    if "scenario" not in values:
        raise ConfigError("missing required key", "scenario")
    scenario = values["scenario"]
    if scenario not in SCENARIOS:
        raise ConfigError(f"must be one of {', '.join(SCENARIOS)}", "scenario", lines["scenario"])
    merged = {**_COMMON_DEFAULTS, **PRESETS[scenario], **values}
    for key in ("n_atoms", "gamma0", "mode_qubits", "trotter_steps"):
        if not isinstance(merged[key], tuple):
            merged[key] = (merged[key],)
    for key in ("positions", "dr_over_lambda"):
        if merged[key] is not None and not isinstance(merged[key], tuple):
            merged[key] = (merged[key],)
    cfg = ScenarioConfig(**merged)
    _validate(cfg, lines)
    return cfg


def _validate(cfg: ScenarioConfig, lines: dict[str, int]) -> None:
    def fail(key: str, message: str):
        raise ConfigError(message, key, lines.get(key))

    if cfg.backend not in BACKENDS:
        fail("backend", f"must be one of {', '.join(BACKENDS)}")
    if cfg.coupling_convention not in COUPLING_CONVENTIONS:
        fail("coupling_convention", f"must be one of {', '.join(COUPLING_CONVENTIONS)}")
    if any(n < 1 for n in cfg.n_atoms):
        fail("n_atoms", "must be at least 1")
    if any(not g > 0 for g in cfg.gamma0):
        fail("gamma0", "must be positive")
    if not cfg.atom_freq_center > 0:
        fail("atom_freq_center", "must be positive")
    if cfg.atom_freq_spacing < 0:
        fail("atom_freq_spacing", "must be non-negative")
    lowest = min(cfg.atom_frequencies(max(cfg.n_atoms)))
    if not lowest > 0:
        fail("atom_freq_spacing", "atom frequencies must stay positive")
    if cfg.mode_count < 1:
        fail("mode_count", "must be at least 1")
    if not cfg.mode_window_width > 0:
        fail("mode_window_width", "must be positive")
    if not cfg.atom_freq_center - cfg.mode_window_width / 2 > 0 and cfg.mode_count > 1:
        fail("mode_window_width", "window reaches non-positive frequencies")
    if any(q < 1 for q in cfg.mode_qubits):
        fail("mode_qubits", "must be at least 1")
    if len(cfg.mode_qubits) not in (1, cfg.mode_count):
        fail("mode_qubits", f"needs 1 or {cfg.mode_count} entries, got {len(cfg.mode_qubits)}")
    if cfg.coupling_g is not None and not cfg.coupling_g > 0:
        fail("coupling_g", "must be positive")
    if cfg.mode_count == 1 and cfg.coupling_g is None:
        fail("coupling_g", "a single mode needs an explicit coupling")
    if not cfg.total_time_lifetimes > 0:
        fail("total_time_lifetimes", "must be positive")
    if any(n < 1 for n in cfg.trotter_steps):
        fail("trotter_steps", "must be at least 1")
    if cfg.sample_stride < 1:
        fail("sample_stride", "must be at least 1")
    if not cfg.out_dir.strip():
        fail("out_dir", "must not be empty")
    if cfg.positions is not None:
        if cfg.dr_over_lambda is not None:
            fail("positions", "give either positions or dr_over_lambda, not both")
        if len(cfg.n_atoms) != 1 or len(cfg.positions) != cfg.n_atoms[0]:
            fail("positions", "needs a single n_atoms and one position per atom")
    if cfg.dr_over_lambda is not None and any(x < 0 for x in cfg.dr_over_lambda):
        fail("dr_over_lambda", "must be non-negative")
    if cfg.backend == "lindblad" and (cfg.atom_freq_spacing != 0 or _has_spread(cfg)):
        fail("backend", "the lindblad backend covers only co-located identical atoms")


def _has_spread(cfg: ScenarioConfig) -> bool:
    if cfg.positions is not None:
        return any(r != cfg.positions[0] for r in cfg.positions)
    return cfg.dr_over_lambda is not None and any(x != 0 for x in cfg.dr_over_lambda)


def _format(value: Any) -> str:
    if isinstance(value, tuple):
        return ", ".join(_format(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def config_items(cfg: ScenarioConfig) -> list[tuple[str, str]]:
    """Resolved ``(key, text)`` pairs in schema order, skipping unset optionals."""
    data = dataclasses.asdict(cfg)
    return [(k, _format(data[k])) for k in _SCHEMA if data[k] is not None]


def emit_config(cfg: ScenarioConfig) -> str:
    out = []
    items = dict(config_items(cfg))
    for section in SECTIONS:
        keys = [k for k, (home, _) in _SCHEMA.items() if home == section and k in items]
        if not keys:
            continue
        if out:
            out.append("")
        out.append(f"[{section}]")
        out.extend(f"{k} = {items[k]}" for k in keys)
    return "\n".join(out) + "\n"


def load_config(path: str | Path) -> ScenarioConfig:
    return parse_config(Path(path).read_text())
