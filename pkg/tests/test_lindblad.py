import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from superrad.errors import IntegrationError, InvalidArgumentError
from superrad.lindblad import (
    collective_matrices,
    density_observables,
    dicke_intensity_series,
    dicke_rhs,
    excited_state,
    ground_state,
    independent_intensity,
    integrate,
)

G = 2.0


def random_density(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(2**n, 2**n)) + 1j * rng.normal(size=(2**n, 2**n))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def test_ground_state_is_dark():
    for n in (1, 2, 3):
        assert np.allclose(dicke_rhs(ground_state(n), G, 100.0), 0.0)


def test_single_atom_initial_rate():
    drho = dicke_rhs(excited_state(1), G)
    assert drho[1, 1].real == pytest.approx(-G)


@pytest.mark.parametrize("n, rate", [(2, 0.0), (3, 3.0)])
def test_initial_intensity_slope(n, rate):
    # d<S+S->/dt = <S+ (S+S-) S-> - <S+S->**2 on the fully excited state;
    # the S+S- eigenvalues on the symmetric ladder give 0 for N=2 and 3 for N=3
    full, _ = collective_matrices(n)
    slope = np.trace(full @ dicke_rhs(excited_state(n), 1.0)).real
    assert slope == pytest.approx(rate, abs=1e-12)


@given(st.integers(1, 3), st.integers(0, 2**16), st.booleans())
def test_generator_is_traceless_and_hermitian(n, seed, collective):
    rho = random_density(n, seed)
    drho = dicke_rhs(rho, G, 50.0, collective)
    assert abs(np.trace(drho)) < 1e-12
    np.testing.assert_allclose(drho, drho.conj().T, atol=1e-12)


def test_single_atom_exponential():
    ts = dicke_intensity_series(1, G, 3.0 / G)
    want = G * np.exp(-G * ts.times)
    np.testing.assert_allclose(ts["intensity"], want, rtol=1e-6)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_trajectory_invariants(n):
    traj = integrate(excited_state(n), G, total_time=3.0 / G)
    full, _ = collective_matrices(n)
    sz_prev = math.inf
    # S_z = sum of (pop - 1/2)
    idx = np.arange(2**n)
    excited_count = np.array([bin(i).count("1") for i in idx], dtype=float)
    for rho in traj.states:
        assert abs(np.trace(rho) - 1) < 1e-8
        np.testing.assert_allclose(rho, rho.conj().T, atol=1e-10)
        assert np.linalg.eigvalsh(rho).min() >= -1e-7
        assert np.trace(rho @ rho).real <= 1 + 1e-8
        sz = float(np.diag(rho).real @ excited_count) - n / 2
        assert sz <= sz_prev + 1e-12
        sz_prev = sz
    assert sz_prev < -n / 2 + 0.2


def test_step_halving_agreement():
    a = dicke_intensity_series(3, G, 3.0 / G, dt=0.01 / G)
    b = dicke_intensity_series(3, G, 3.0 / G, dt=0.005 / G, sample_stride=2)
    np.testing.assert_allclose(a.times, b.times, atol=1e-12)
    assert np.max(np.abs(a["intensity"] - b["intensity"])) < 1e-6


def test_rotating_frame_matches_lab_frame():
    lab = dicke_intensity_series(3, G, 3.0 / G, omega=100.0)
    rot = dicke_intensity_series(3, G, 3.0 / G)
    assert np.max(np.abs(lab["intensity"] - rot["intensity"])) < 1e-9
    assert np.max(np.abs(lab["coherence"] - rot["coherence"])) < 1e-9


def test_independent_intensity():
    assert independent_intensity(4, G, 0.0) == pytest.approx(4 * G)
    assert independent_intensity(4, G, 1 / G) == pytest.approx(4 * G / math.e)
    ts = dicke_intensity_series(3, G, 3.0 / G, collective=False)
    np.testing.assert_allclose(ts["intensity"], independent_intensity(3, G, ts.times), rtol=1e-6)
    assert np.max(np.abs(ts["coherence"])) < 1e-12


# peak value (units of gamma0) and peak time (units of 1/gamma0) from an
# independent solve of the symmetric Dicke ladder
LADDER_PEAKS = {3: (3.224847, 0.1567), 4: (4.857409, 0.2136), 5: (6.878733, 0.2330), 6: (9.285169, 0.2369)}


@pytest.mark.parametrize("n", sorted(LADDER_PEAKS))
def test_superradiant_burst_matches_ladder(n):
    peak, t_peak = LADDER_PEAKS[n]
    ts = dicke_intensity_series(n, G, 1.0 / G, dt=0.001 / G)
    i = int(np.argmax(ts["intensity"]))
    assert ts["intensity"][i] / G == pytest.approx(peak, rel=1e-5)
    assert ts.times[i] * G == pytest.approx(t_peak, abs=1e-3)
    assert ts["intensity"][i] > n * G


def test_series_decomposition():
    ts = dicke_intensity_series(3, G, 1.0)
    np.testing.assert_allclose(ts["intensity"], ts["intensity_nc"] + ts["coherence"], atol=1e-12)
    obs = density_observables(excited_state(3), G)
    assert obs["intensity"] == pytest.approx(3 * G)


def test_integration_failure_is_reported():
    with pytest.raises(IntegrationError):
        integrate(excited_state(3), 1.0, total_time=3000.0, dt=10.0)


def test_argument_checks():
    with pytest.raises(InvalidArgumentError):
        integrate(excited_state(1), G, dt=-1.0)
    with pytest.raises(InvalidArgumentError):
        dicke_rhs(np.eye(3), G)
    with pytest.raises(InvalidArgumentError):
        dicke_rhs(excited_state(1), 0.0)
