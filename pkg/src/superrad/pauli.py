"""Weighted Pauli strings and sums of them.

A Pauli string is stored as a ``str`` over ``"IXYZ"``. Letter ``j`` acts on
qubit ``j`` and qubit 0 is the most significant bit of a computational basis
index, so the letter order is also the Kronecker-product order::

    dense("XZ") == np.kron(X, Z)

``PauliSum`` values are immutable; every arithmetic operation returns a new,
simplified sum.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

import numpy as np

from .errors import CapacityError, InvalidArgumentError

LETTERS = "IXYZ"
PRUNE_TOL = 1e-14
MAX_DENSE_WIDTH = 14

# (a, b) -> (phase, letter) such that a @ b == phase * letter
_PRODUCT: dict[tuple[str, str], tuple[complex, str]] = {
    ("I", "I"): (1, "I"), ("I", "X"): (1, "X"), ("I", "Y"): (1, "Y"), ("I", "Z"): (1, "Z"),
    ("X", "I"): (1, "X"), ("X", "X"): (1, "I"), ("X", "Y"): (1j, "Z"), ("X", "Z"): (-1j, "Y"),
    ("Y", "I"): (1, "Y"), ("Y", "X"): (-1j, "Z"), ("Y", "Y"): (1, "I"), ("Y", "Z"): (1j, "X"),
    ("Z", "I"): (1, "Z"), ("Z", "X"): (1j, "Y"), ("Z", "Y"): (-1j, "X"), ("Z", "Z"): (1, "I"),
}


def _check_letters(letters: str) -> None:
    bad = set(letters) - set(LETTERS)
    if bad:
        raise InvalidArgumentError(f"invalid Pauli letters {sorted(bad)} in {letters!r}")


def string_masks(letters: str) -> tuple[int, int, int]:
    """Return ``(x_mask, z_mask, n_y)`` for a Pauli string.

    ``x_mask`` has a bit set where the letter flips the qubit (X or Y) and
    ``z_mask`` where it contributes a sign (Z or Y), using the basis-index bit
    of each qubit.
    """
    n = len(letters)
    x_mask = z_mask = 0
    n_y = 0
    for j, p in enumerate(letters):
        bit = 1 << (n - 1 - j)
        if p in "XY":
            x_mask |= bit
        if p in "ZY":
            z_mask |= bit
        if p == "Y":
            n_y += 1
    return x_mask, z_mask, n_y


def multiply_strings(a: str, b: str) -> tuple[complex, str]:
    """Product of two equal-length Pauli strings as ``(phase, letters)``."""
    phase: complex = 1
    out = []
    for p, q in zip(a, b):
        ph, r = _PRODUCT[p, q]
        phase *= ph
        out.append(r)
    return phase, "".join(out)


@dataclass(frozen=True)
class PauliTerm:
    coefficient: complex
    letters: str

    def __post_init__(self):
        _check_letters(self.letters)
        object.__setattr__(self, "coefficient", complex(self.coefficient))

    @property
    def width(self) -> int:
        return len(self.letters)

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return abs(self.coefficient.imag) <= tol

    def is_diagonal(self) -> bool:
        return set(self.letters) <= {"I", "Z"}


class PauliSum:
    """Complex linear combination of Pauli strings over ``width`` qubits.

    Passing ``simplify=False`` keeps duplicate strings and tiny coefficients
    as given; everything else in the API returns simplified sums in which each
    string appears once, in order of first appearance, and coefficients with
    modulus below ``PRUNE_TOL`` are dropped.
    """

    __slots__ = ("_width", "_terms")

    def __init__(
        self,
        width: int,
        terms: Mapping[str, complex] | Iterable[PauliTerm | tuple[str, complex]] = (),
        *,
        simplify: bool = True,
    ):
        if width < 0:
            raise InvalidArgumentError("width must be non-negative")
        if isinstance(terms, Mapping):
            items = [PauliTerm(c, s) for s, c in terms.items()]
        else:
            items = [t if isinstance(t, PauliTerm) else PauliTerm(t[1], t[0]) for t in terms]
        for t in items:
            if t.width != width:
                raise InvalidArgumentError(
                    f"term {t.letters!r} has width {t.width}, expected {width}"
                )
        self._width = width
        self._terms: tuple[PauliTerm, ...] = tuple(_merge(items) if simplify else items)

    # -- construction helpers ---------------------------------------------
    @classmethod
    def identity(cls, width: int, coefficient: complex = 1.0) -> "PauliSum":
        return cls(width, {"I" * width: coefficient})

    @classmethod
    def zero(cls, width: int) -> "PauliSum":
        return cls(width)

    @classmethod
    def from_label(cls, letters: str, coefficient: complex = 1.0) -> "PauliSum":
        return cls(len(letters), {letters: coefficient})

    # -- accessors ---------------------------------------------------------
    @property
    def width(self) -> int:
        return self._width

    @property
    def terms(self) -> tuple[PauliTerm, ...]:
        return self._terms

    def as_dict(self) -> dict[str, complex]:
        return {t.letters: t.coefficient for t in self._terms}

    def coefficient(self, letters: str) -> complex:
        return sum((t.coefficient for t in self._terms if t.letters == letters), 0j)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[PauliTerm]:
        return iter(self._terms)

    def __repr__(self) -> str:
        body = " + ".join(f"({t.coefficient:.6g}){t.letters}" for t in self._terms[:6])
        more = "" if len(self) <= 6 else f" + ... [{len(self)} terms]"
        return f"PauliSum(width={self._width}, {body or '0'}{more})"

    # -- algebra -----------------------------------------------------------
    def _check_width(self, other: "PauliSum") -> None:
        if other.width != self._width:
            raise InvalidArgumentError(
                f"width mismatch: {self._width} vs {other.width}"
            )

    def __add__(self, other: "PauliSum") -> "PauliSum":
        if not isinstance(other, PauliSum):
            return NotImplemented
        self._check_width(other)
        return PauliSum(self._width, self._terms + other._terms)

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        if not isinstance(other, PauliSum):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> "PauliSum":
        return self * -1

    def __mul__(self, scalar: complex) -> "PauliSum":
        if isinstance(scalar, PauliSum):
            return NotImplemented
        return PauliSum(
            self._width, [PauliTerm(t.coefficient * scalar, t.letters) for t in self._terms]
        )

    __rmul__ = __mul__

    def __truediv__(self, scalar: complex) -> "PauliSum":
        return self * (1.0 / scalar)

    def __matmul__(self, other: "PauliSum") -> "PauliSum":
        return multiply(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliSum):
            return NotImplemented
        return self._width == other._width and simplify(self).as_dict() == simplify(other).as_dict()

    __hash__ = None  # type: ignore[assignment]

    def allclose(self, other: "PauliSum", atol: float = 1e-12) -> bool:
        self._check_width(other)
        diff = simplify(self - other)
        return all(abs(t.coefficient) <= atol for t in diff)

    def dagger(self) -> "PauliSum":
        return PauliSum(
            self._width, [PauliTerm(t.coefficient.conjugate(), t.letters) for t in self._terms]
        )

    def tensor(self, other: "PauliSum") -> "PauliSum":
        """Kronecker product with ``self`` on the leading (more significant) qubits."""
        return PauliSum(
            self._width + other._width,
            [
                PauliTerm(a.coefficient * b.coefficient, a.letters + b.letters)
                for a in self._terms
                for b in other._terms
            ],
        )

    def embed(self, width: int, offset: int) -> "PauliSum":
        """Place this operator on qubits ``offset .. offset+self.width-1`` of a wider register."""
        if offset < 0 or offset + self._width > width:
            raise InvalidArgumentError(
                f"cannot embed width {self._width} at offset {offset} into width {width}"
            )
        pre, post = "I" * offset, "I" * (width - offset - self._width)
        return PauliSum(width, [PauliTerm(t.coefficient, pre + t.letters + post) for t in self._terms])

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        # Pauli strings are Hermitian and linearly independent.
        return all(abs(t.coefficient.imag) <= tol for t in simplify(self))

    def is_diagonal(self) -> bool:
        return all(t.is_diagonal() for t in self._terms)

    def dense(self) -> np.ndarray:
        return dense_realization(self, self._width)

    def to_text(self) -> str:
        return to_text(self)


def _merge(items: Iterable[PauliTerm]) -> list[PauliTerm]:
    acc: dict[str, complex] = {}
    for t in items:
        acc[t.letters] = acc.get(t.letters, 0j) + t.coefficient
    return [PauliTerm(c, s) for s, c in acc.items() if abs(c) >= PRUNE_TOL]


def simplify(s: PauliSum) -> PauliSum:
    return PauliSum(s.width, s.terms)


def multiply(a: PauliSum, b: PauliSum) -> PauliSum:
    """Operator product ``a @ b`` using single-qubit Pauli multiplication rules."""
    if a.width != b.width:
        raise InvalidArgumentError(f"width mismatch: {a.width} vs {b.width}")
    out = []
    for ta in a.terms:
        for tb in b.terms:
            phase, letters = multiply_strings(ta.letters, tb.letters)
            out.append(PauliTerm(phase * ta.coefficient * tb.coefficient, letters))
    return PauliSum(a.width, out)


def tensor(*sums: PauliSum) -> PauliSum:
    result = PauliSum.identity(0)
    for s in sums:
        result = result.tensor(s)
    return result


def tensor_power(s: PauliSum, k: int) -> PauliSum:
    """``s`` tensored with itself ``k`` times; ``k = 0`` gives the scalar 1."""
    result = PauliSum.identity(0)
    for _ in range(k):
        result = result.tensor(s)
    return result


def dense_realization(s: PauliSum, width: int | None = None) -> np.ndarray:
    """Exact ``2**width`` square matrix of ``s``."""
    width = s.width if width is None else width
    if width != s.width:
        raise InvalidArgumentError(f"sum has width {s.width}, requested {width}")
    if width > MAX_DENSE_WIDTH:
        raise CapacityError(f"dense realization of width {width} exceeds cap {MAX_DENSE_WIDTH}")
    dim = 1 << width
    out = np.zeros((dim, dim), dtype=complex)
    cols = np.arange(dim, dtype=np.int64)
    for t in s.terms:
        x_mask, z_mask, n_y = string_masks(t.letters)
        signs = 1 - 2 * (np.bitwise_count(cols & z_mask).astype(np.int64) & 1)
        out[cols ^ x_mask, cols] += t.coefficient * (1j**n_y) * signs
    return out


def to_text(s: PauliSum) -> str:
    """One term per line: ``<re> <im> <letters>``."""
    return "".join(
        f"{t.coefficient.real!r} {t.coefficient.imag!r} {t.letters}\n" for t in s.terms
    )


def from_text(text: str, width: int | None = None) -> PauliSum:
    terms = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise InvalidArgumentError(f"line {lineno}: expected '<re> <im> <letters>'")
        terms.append(PauliTerm(complex(float(parts[0]), float(parts[1])), parts[2]))
    if width is None:
        if not terms:
            raise InvalidArgumentError("cannot infer width of an empty sum")
        width = terms[0].width
    return PauliSum(width, terms, simplify=False)
