import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from superrad.engine import StateVector, basis_state, init_state
from superrad.hamiltonian import build_total, make_system, standard_mode_window
from superrad.observables import (
    ObservableSet,
    coherence,
    collective_operator,
    energy,
    excited_population,
    expectation,
    intensity,
    intensity_noncoherent,
    mode_occupation,
    total_occupation,
)
from superrad.pauli import PauliSum, dense_realization

GAMMA = 1.5


def two_atoms():
    return make_system([100.0, 100.0], GAMMA, [100.0], coupling=0.1)


def dicke_pair(sign):
    amps = np.zeros(8, dtype=complex)
    amps[0b100] = 1 / math.sqrt(2)
    amps[0b010] = sign / math.sqrt(2)
    return StateVector(amps)


def random_state(width, seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=2**width) + 1j * rng.normal(size=2**width)
    return StateVector(v / np.linalg.norm(v))


def test_basic_expectations():
    assert expectation(basis_state(1, 0), PauliSum.from_label("Z")) == pytest.approx(1.0)
    plus = StateVector(np.array([1, 1]) / math.sqrt(2))
    assert expectation(plus, PauliSum.from_label("X")) == pytest.approx(1.0)


@given(st.integers(0, 2**16))
def test_expectation_matches_dense(seed):
    rng = np.random.default_rng(seed)
    letters = ["".join(rng.choice(list("IXYZ"), 4)) for _ in range(6)]
    coeffs = rng.normal(size=6) + 1j * rng.normal(size=6)
    op = PauliSum(4, list(zip(letters, coeffs)))
    psi = random_state(4, seed)
    want = np.vdot(psi.amplitudes, dense_realization(op) @ psi.amplitudes)
    assert expectation(psi, op) == pytest.approx(want, abs=1e-12)
    h = op + op.dagger()
    assert abs(expectation(psi, h).imag) < 1e-10


def test_initial_and_ground_intensity():
    spec = make_system([100.0] * 3, GAMMA, standard_mode_window(100, 20, 3))
    psi = init_state(spec.layout)
    assert intensity(psi, spec) == pytest.approx(3 * GAMMA)
    assert intensity_noncoherent(psi, spec) == pytest.approx(3 * GAMMA)
    assert coherence(psi, spec) == pytest.approx(0.0, abs=1e-12)
    ground = basis_state(spec.width, 0)
    assert intensity(ground, spec) == pytest.approx(0.0, abs=1e-12)


def test_dicke_pair_states():
    spec = two_atoms()
    sym, anti = dicke_pair(+1), dicke_pair(-1)
    assert intensity(sym, spec) == pytest.approx(2 * GAMMA)
    assert intensity_noncoherent(sym, spec) == pytest.approx(GAMMA)
    assert coherence(sym, spec) == pytest.approx(GAMMA)
    assert coherence(anti, spec) == pytest.approx(-GAMMA)
    assert intensity(anti, spec) == pytest.approx(0.0, abs=1e-12)


def test_mode_occupation_fock_state():
    spec = make_system([100.0], 1.0, [95.0, 105.0], mode_qubits=[2, 1])
    # atom 0, mode 0 reads binary 11, mode 1 reads 1
    psi = basis_state(spec.width, 0b0111)
    assert mode_occupation(psi, spec.layout, 0) == pytest.approx(3.0)
    assert mode_occupation(psi, spec.layout, 1) == pytest.approx(1.0)
    assert total_occupation(psi, spec.layout) == pytest.approx(4.0)
    assert excited_population(psi, spec.layout, 0) == pytest.approx(0.0)


def test_initial_energy():
    spec = make_system([100.0] * 4, 2.0, standard_mode_window(100, 50, 7))
    parts = build_total(spec)
    assert energy(init_state(spec.layout), parts.total) == pytest.approx(200.0)


def test_collective_operator_is_s_plus_s_minus():
    spec = make_system([100.0] * 3, 1.0, [100.0], coupling=0.1)
    lower = np.array([[0, 1], [0, 0]])
    s_minus = sum(
        np.kron(np.kron(np.kron(np.eye(2**a), lower), np.eye(2 ** (2 - a))), np.eye(2)) for a in range(3)
    )
    full = dense_realization(collective_operator(spec.layout))
    np.testing.assert_allclose(full, s_minus.conj().T @ s_minus, atol=1e-12)


@given(st.integers(0, 2**16))
def test_observable_set_agrees_with_functions(seed):
    spec = make_system([100.0, 97.0], GAMMA, standard_mode_window(100, 20, 3), mode_qubits=[1, 2, 1])
    parts = build_total(spec)
    psi = random_state(spec.width, seed)
    rec = ObservableSet(spec, parts.total)(0.0, psi)
    assert rec["intensity"] == pytest.approx(intensity(psi, spec), abs=1e-12)
    assert rec["intensity_nc"] == pytest.approx(intensity_noncoherent(psi, spec), abs=1e-12)
    assert rec["coherence"] == pytest.approx(coherence(psi, spec), abs=1e-12)
    assert rec["energy"] == pytest.approx(energy(psi, parts.total), abs=1e-9)
    assert rec["n_total"] == pytest.approx(total_occupation(psi, spec.layout), abs=1e-12)
    assert abs(rec["intensity"] - (rec["coherence"] + rec["intensity_nc"])) < 1e-9
    assert rec["intensity"] >= -1e-9
    assert -1e-9 <= rec["intensity_nc"] <= 2 * GAMMA + 1e-9
    for k, q in enumerate([1, 2, 1]):
        assert -1e-9 <= rec[f"n_mode_{k}"] <= 2**q - 1 + 1e-9


@given(st.lists(st.integers(0, 1), min_size=3, max_size=3), st.integers(0, 2**16))
def test_atomic_basis_products_have_no_coherence(bits, seed):
    # any field state tensored with definite atomic levels
    spec = make_system([100.0] * 3, GAMMA, [95.0, 105.0], mode_qubits=[2, 1])
    atoms = np.zeros(8)
    atoms[bits[0] * 4 + bits[1] * 2 + bits[2]] = 1.0
    field = random_state(3, seed).amplitudes
    assert abs(coherence(StateVector(np.kron(atoms, field)), spec)) < 1e-10


def test_coherent_product_state_has_factorized_coherence():
    # <s+_a s-_b> = <s+_a><s-_b> on a product state, so coherence is generally nonzero
    spec = make_system([100.0] * 2, GAMMA, [100.0], coupling=0.1)
    one = np.array([1.0, 1.0]) / math.sqrt(2)
    psi = StateVector(np.kron(np.kron(one, one), [1, 0]))
    assert coherence(psi, spec) == pytest.approx(GAMMA * 2 * 0.25)
