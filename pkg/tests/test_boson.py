import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from superrad.boson import (
    BosonRegister,
    annihilation_matrix,
    annihilation_op,
    creation_matrix,
    creation_op,
    fock_vector,
    number_matrix,
    number_op,
)
from superrad.errors import InvalidArgumentError
from superrad.pauli import PauliSum, dense_realization, from_text, simplify, to_text

GOLDEN = Path(__file__).parent / "golden"
QS = [1, 2, 3, 4]
CS = [0.0, 1.0, 2.5]


def test_register_capacity():
    assert BosonRegister(1).max_occupation == 1
    assert BosonRegister(3).max_occupation == 7
    with pytest.raises(InvalidArgumentError):
        BosonRegister(0)


def test_single_qubit_forms():
    assert creation_op(1, 0).allclose(PauliSum(1, {"X": 0.5, "Y": -0.5j}))
    assert annihilation_op(1, 0).allclose(PauliSum(1, {"X": 0.5, "Y": 0.5j}))
    assert creation_op(1, 3).allclose(PauliSum(1, {"X": 1.0, "Y": -1.0j}))
    assert number_op(1, 0).allclose(PauliSum(1, {"I": 0.5, "Z": -0.5}))


@pytest.mark.parametrize("q", QS)
@pytest.mark.parametrize("c", CS)
def test_dense_matches_fock_sums(q, c):
    np.testing.assert_allclose(dense_realization(creation_op(q, c)), creation_matrix(q, c), atol=1e-12)
    np.testing.assert_allclose(dense_realization(annihilation_op(q, c)), annihilation_matrix(q, c), atol=1e-12)
    np.testing.assert_allclose(dense_realization(number_op(q, c)), number_matrix(q, c), atol=1e-12)


def test_reference_matrices_by_hand():
    # |n+1><n| with weights sqrt(n+1) on a 2-qubit register
    expected = np.zeros((4, 4))
    expected[1, 0], expected[2, 1], expected[3, 2] = 1.0, math.sqrt(2), math.sqrt(3)
    np.testing.assert_allclose(dense_realization(creation_op(2, 0)), expected, atol=1e-12)
    np.testing.assert_allclose(dense_realization(number_op(2, 0)), np.diag([0, 1, 2, 3]), atol=1e-12)


@pytest.mark.parametrize("q", QS)
@pytest.mark.parametrize("c", CS)
def test_annihilation_is_adjoint(q, c):
    a = dense_realization(annihilation_op(q, c))
    np.testing.assert_allclose(a, dense_realization(creation_op(q, c)).conj().T, atol=1e-12)


def test_annihilation_on_five():
    out = dense_realization(annihilation_op(3, 0)) @ fock_vector(5, 3)
    np.testing.assert_allclose(out, math.sqrt(5) * fock_vector(4, 3), atol=1e-12)


@pytest.mark.parametrize("q", [1, 2, 3])
def test_number_is_creation_times_annihilation(q):
    prod = dense_realization(creation_op(q, 0)) @ dense_realization(annihilation_op(q, 0))
    np.testing.assert_allclose(dense_realization(number_op(q, 0)), prod, atol=1e-12)
    assert (creation_op(q, 0) @ annihilation_op(q, 0)).allclose(number_op(q, 0))


def test_number_op_drops_offset_on_vacuum():
    # weight of |0> is 0, not c
    np.testing.assert_allclose(np.diag(dense_realization(number_op(2, 1.5))).real, [0, 2.5, 3.5, 4.5])


@pytest.mark.parametrize("q", QS)
def test_number_op_is_diagonal(q):
    assert all(set(t.letters) <= {"I", "Z"} for t in number_op(q, 0))


@pytest.mark.parametrize("q", QS)
def test_truncated_commutator(q):
    a = dense_realization(annihilation_op(q, 0))
    ad = dense_realization(creation_op(q, 0))
    comm = a @ ad - ad @ a
    want = np.ones(2**q)
    want[-1] = 1 - 2**q
    np.testing.assert_allclose(comm, np.diag(want), atol=1e-12)


@pytest.mark.parametrize("q", QS)
def test_creation_kills_top_state(q):
    top = fock_vector(2**q - 1, q)
    np.testing.assert_allclose(dense_realization(creation_op(q, 0)) @ top, 0, atol=1e-12)


@pytest.mark.parametrize("q", QS)
def test_term_counts(q):
    # simplified count, bounded by 4**q strings on q qubits
    counts = {1: 2, 2: 8, 3: 24, 4: 64}
    s = creation_op(q, 0)
    assert len(s) == counts[q] <= 4**q
    assert simplify(s) == s


def test_golden_serialization():
    text = (GOLDEN / "creation_q2_c0.txt").read_text()
    assert to_text(creation_op(2, 0)) == text
    np.testing.assert_allclose(dense_realization(from_text(text)), creation_matrix(2, 0), atol=1e-12)


@pytest.mark.parametrize("bad", [(0, 0.0), (2, -0.5), (-1, 0.0)])
def test_invalid_arguments(bad):
    for fn in (creation_op, annihilation_op, number_op):
        with pytest.raises(InvalidArgumentError):
            fn(*bad)


@given(st.integers(1, 4), st.floats(0, 10, allow_nan=False))
def test_encoding_matches_reference_for_any_offset(q, c):
    np.testing.assert_allclose(dense_realization(creation_op(q, c)), creation_matrix(q, c), atol=1e-10)
    np.testing.assert_allclose(dense_realization(number_op(q, c)), number_matrix(q, c), atol=1e-10)
