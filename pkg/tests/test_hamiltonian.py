import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from superrad.boson import annihilation_matrix, creation_matrix, number_matrix
from superrad.errors import CapacityError, InvalidArgumentError
from superrad.hamiltonian import (
    G2_OVER_DELTA,
    G2_TIMES_DELTA,
    AtomSpec,
    ModeSpec,
    SystemSpec,
    build_h0,
    build_hint,
    build_total,
    coupling_from_gamma,
    make_system,
    pair_term,
    standard_mode_window,
)
from superrad.pauli import PauliSum, dense_realization

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)


def test_coupling_conventions():
    for conv in (G2_OVER_DELTA, G2_TIMES_DELTA):
        assert coupling_from_gamma(2 * math.pi, 1.0, conv) == pytest.approx(1.0)
        assert coupling_from_gamma(8.0, 5.0, conv) / coupling_from_gamma(2.0, 5.0, conv) == pytest.approx(2.0)
    assert coupling_from_gamma(2.0, 5.0, G2_OVER_DELTA) == pytest.approx(math.sqrt(10 / (2 * math.pi)))
    assert coupling_from_gamma(2.0, 5.0, G2_TIMES_DELTA) == pytest.approx(math.sqrt(2 / (10 * math.pi)))
    with pytest.raises(InvalidArgumentError):
        coupling_from_gamma(0.0, 1.0)
    with pytest.raises(InvalidArgumentError):
        coupling_from_gamma(1.0, -1.0)
    with pytest.raises(InvalidArgumentError):
        coupling_from_gamma(1.0, 1.0, "other")


def test_mode_windows():
    assert standard_mode_window(100, 30, 7) == pytest.approx([85, 90, 95, 100, 105, 110, 115])
    w = standard_mode_window(100, 50, 7)
    assert w[0] == pytest.approx(75) and w[-1] == pytest.approx(125)
    assert np.diff(w) == pytest.approx([50 / 6] * 6)
    assert standard_mode_window(100, 50, 1) == [100.0]
    with pytest.raises(InvalidArgumentError):
        standard_mode_window(100, 50, 0)


def test_h0_single_pair():
    spec = make_system([100.0], 1.0, [100.0], coupling=0.1)
    assert build_h0(spec).allclose(PauliSum(2, {"ZI": -50.0, "II": 50.0, "IZ": -50.0}))
    # atom excited, mode empty: basis index 0b10
    assert dense_realization(build_h0(spec))[2, 2].real == pytest.approx(50.0)


def test_h0_two_qubit_register():
    spec = make_system([100.0], 1.0, [90.0], mode_qubits=2, coupling=0.1)
    h0 = dense_realization(build_h0(spec))
    atom = np.diag([-50.0, 50.0])
    expected = np.kron(atom, np.eye(4)) + np.kron(np.eye(2), 90.0 * number_matrix(2))
    np.testing.assert_allclose(h0, expected, atol=1e-12)
    assert build_h0(spec).is_diagonal()


def test_pair_term_long_wavelength():
    spec = make_system([100.0], 1.0, [100.0], coupling=0.3)
    assert pair_term(spec, 0, 0).allclose(PauliSum(2, {"XY": -0.3}))


def test_pair_term_quarter_wavelength():
    spec = make_system([100.0], 1.0, [100.0], positions=[math.pi / 200], coupling=0.3)
    assert pair_term(spec, 0, 0).allclose(PauliSum(2, {"XX": -0.3}), atol=1e-12)


def test_pair_term_two_qubit_register():
    g = 0.4
    spec = make_system([100.0], 1.0, [100.0], mode_qubits=2, coupling=g)
    want = -1j * g * np.kron(SIGMA_X, creation_matrix(2) - annihilation_matrix(2))
    np.testing.assert_allclose(dense_realization(pair_term(spec, 0, 0)), want, atol=1e-12)


@given(st.floats(-0.05, 0.05), st.floats(0, 0.05), st.integers(1, 2))
def test_pair_term_translation(r, shift, q):
    g = 0.7
    base = make_system([100.0], 1.0, [95.0], mode_qubits=q, positions=[r + shift], coupling=g)
    phase = 95.0 * (r + shift)
    up = creation_matrix(q)
    down = annihilation_matrix(q)
    want = -1j * g * np.kron(SIGMA_X, np.exp(-1j * phase) * up - np.exp(1j * phase) * down)
    np.testing.assert_allclose(dense_realization(pair_term(base, 0, 0)), want, atol=1e-12)


def test_pair_terms_have_zero_diagonal():
    spec = make_system([100.0, 98.0], 2.0, standard_mode_window(100, 20, 3), positions=[0.0, 0.013])
    for term in build_hint(spec):
        assert np.allclose(np.diag(dense_realization(term)), 0.0)


def test_hint_order_atoms_outer():
    spec = make_system([100.0, 100.0], 2.0, standard_mode_window(100, 20, 3))
    hint = build_hint(spec)
    assert len(hint) == 6
    # term i touches atom i // 3 and mode i % 3
    for i, term in enumerate(hint):
        letters = term.terms[0].letters
        assert letters[i // 3] == "X"
        assert letters[2 + i % 3] != "I"


def test_total_is_distributive_and_hermitian():
    spec = make_system([100.0, 97.0], 2.0, standard_mode_window(100, 20, 3), mode_qubits=[1, 2, 1],
                       positions=[0.0, 0.02])
    parts = build_total(spec)
    total = dense_realization(parts.total)
    summed = dense_realization(parts.h0) + sum(dense_realization(t) for t in parts.hint_terms)
    np.testing.assert_allclose(total, summed, atol=1e-12)
    np.testing.assert_allclose(total, total.conj().T, atol=1e-12)


def test_vacuum_rabi_splitting():
    g = 0.2
    spec = make_system([100.0], 1.0, [100.0], coupling=g)
    energies = np.linalg.eigvalsh(dense_realization(build_total(spec).total))
    # ground |g,0> sits at -50; the one-excitation doublet sits near +50
    doublet = np.sort(energies)[1:3]
    assert doublet[1] - doublet[0] == pytest.approx(2 * g, rel=1e-3)


def test_zero_coupling_gives_free_hamiltonian():
    spec = SystemSpec((AtomSpec(100.0, 1.0),), (ModeSpec(100.0, 0.0), ModeSpec(110.0, 0.0)))
    parts = build_total(spec)
    assert parts.total == parts.h0


def test_layout_covers_all_qubits():
    spec = make_system([100.0] * 3, 2.0, standard_mode_window(100, 50, 7), mode_qubits=[1, 2, 2, 2, 2, 2, 1])
    layout = spec.layout
    used = list(layout.atom_qubits) + [q for r in layout.mode_registers for q in r]
    assert sorted(used) == list(range(layout.width)) == list(range(3 + 12))


def test_validation():
    with pytest.raises(InvalidArgumentError):
        SystemSpec((AtomSpec(100.0, 1.0), AtomSpec(100.0, 2.0)), (ModeSpec(100.0, 0.1),))
    with pytest.raises(InvalidArgumentError):
        SystemSpec((AtomSpec(100.0, 1.0),), (ModeSpec(101.0, 0.1), ModeSpec(100.0, 0.1)))
    with pytest.raises(InvalidArgumentError):
        AtomSpec(-1.0, 1.0)
    with pytest.raises(InvalidArgumentError):
        ModeSpec(100.0, 0.1, qubits=0)
    with pytest.raises(InvalidArgumentError):
        make_system([100.0], 1.0, [100.0])


def test_qubit_cap(monkeypatch):
    with pytest.raises(CapacityError):
        make_system([100.0] * 20, 1.0, standard_mode_window(100, 50, 7), mode_qubits=1)
    monkeypatch.setenv("SUPERRAD_MAX_QUBITS", "4")
    with pytest.raises(CapacityError):
        make_system([100.0] * 2, 1.0, standard_mode_window(100, 50, 3))
