"""Bosonic ladder operators on binary-encoded qubit registers.

A mode with ``q`` qubits holds Fock states ``|0> .. |2**q - 1>``; the Fock
number is written in binary across the register with the first qubit as the
most significant bit (``|5>_3 = |1>|0>|1>``).

The Pauli-sum constructors follow the msb-splitting recursion

    a+_q(c) = |0><0| (x) a+_{q-1}(c)
            + sqrt(c + 2**(q-1)) |1><0| (x) (|0><1|)^(q-1)
            + |1><1| (x) a+_{q-1}(c + 2**(q-1)),       a+_0(c) = 0

with ``|0><0| = (I+Z)/2``, ``|0><1| = (X+iY)/2``, ``|1><0| = (X-iY)/2`` and
``|1><1| = (I-Z)/2``. The offset ``c`` only exists to make the recursion
close; physical operators use ``c = 0``.

The ``*_matrix`` functions build the same operators directly from their
Fock-basis sums and serve as independent references in tests.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InvalidArgumentError
from .pauli import PauliSum, tensor_power

_P0 = PauliSum(1, {"I": 0.5, "Z": 0.5})  # |0><0|
_P1 = PauliSum(1, {"I": 0.5, "Z": -0.5})  # |1><1|
_LOWER = PauliSum(1, {"X": 0.5, "Y": 0.5j})  # |0><1|
_RAISE = PauliSum(1, {"X": 0.5, "Y": -0.5j})  # |1><0|


@dataclass(frozen=True)
class BosonRegister:
    qubit_count: int

    def __post_init__(self):
        if self.qubit_count < 1:
            raise InvalidArgumentError("a boson register needs at least one qubit")

    @property
    def max_occupation(self) -> int:
        return 2**self.qubit_count - 1


def _check(q: int, c: float) -> None:
    if not isinstance(q, (int, np.integer)) or q < 1:
        raise InvalidArgumentError(f"qubit count must be a positive integer, got {q!r}")
    if not c >= 0:
        raise InvalidArgumentError(f"offset c must be non-negative, got {c!r}")


def _recurse(q: int, c: float, kind: str) -> PauliSum:
    if q == 0:
        return PauliSum.zero(0)
    half = 2 ** (q - 1)
    lower = _recurse(q - 1, c, kind)
    upper = _recurse(q - 1, c + half, kind)
    if kind == "create":
        bridge = math.sqrt(c + half) * _RAISE.tensor(tensor_power(_LOWER, q - 1))
    elif kind == "annihilate":
        bridge = math.sqrt(c + half) * _LOWER.tensor(tensor_power(_RAISE, q - 1))
    else:
        bridge = (c + half) * _P1.tensor(tensor_power(_P0, q - 1))
    return _P0.tensor(lower) + bridge + _P1.tensor(upper)


@lru_cache(maxsize=None)
def _cached(q: int, c: float, kind: str) -> PauliSum:
    return _recurse(q, c, kind)


def creation_op(q: int, c: float = 0.0) -> PauliSum:
    """Creation operator on a ``q``-qubit binary register as a Pauli sum."""
    _check(q, c)
    return _cached(int(q), float(c), "create")


def annihilation_op(q: int, c: float = 0.0) -> PauliSum:
    """Annihilation operator on a ``q``-qubit binary register; adjoint of :func:`creation_op`."""
    _check(q, c)
    return _cached(int(q), float(c), "annihilate")


def number_op(q: int, c: float = 0.0) -> PauliSum:
    """Number operator ``sum_{n>=1} (c+n)|n><n|`` (only I and Z letters).

    The ``n = 0`` state carries weight 0 rather than ``c``, matching
    ``creation_op(q, c) @ annihilation_op(q, c)``.
    """
    _check(q, c)
    return _cached(int(q), float(c), "number")


def creation_matrix(q: int, c: float = 0.0) -> np.ndarray:
    """Dense ``sum_{n=0}^{2^q-2} sqrt(c+n+1) |n+1><n|``."""
    _check(q, c)
    dim = 2**q
    m = np.zeros((dim, dim), dtype=complex)
    for n in range(dim - 1):
        m[n + 1, n] = math.sqrt(c + n + 1)
    return m


def annihilation_matrix(q: int, c: float = 0.0) -> np.ndarray:
    """Dense ``sum_{n=1}^{2^q-1} sqrt(c+n) |n-1><n|``."""
    _check(q, c)
    dim = 2**q
    m = np.zeros((dim, dim), dtype=complex)
    for n in range(1, dim):
        m[n - 1, n] = math.sqrt(c + n)
    return m


def number_matrix(q: int, c: float = 0.0) -> np.ndarray:
    """Dense ``sum_{n=1}^{2^q-1} (c+n) |n><n|``."""
    _check(q, c)
    diag = np.array([0.0] + [c + n for n in range(1, 2**q)])
    return np.diag(diag).astype(complex)


def fock_vector(n: int, q: int) -> np.ndarray:
    """Basis vector of Fock state ``|n>`` on a ``q``-qubit register."""
    if not 0 <= n < 2**q:
        raise InvalidArgumentError(f"Fock state {n} does not fit in {q} qubits")
    v = np.zeros(2**q, dtype=complex)
    v[n] = 1.0
    return v
