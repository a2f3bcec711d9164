"""Exact Pauli-string algebra for N-qubit chains.

Operators are stored as weighted Pauli strings and manipulated
symbolically; dense matrices are only rendered on demand.  Site 0 is the
least-significant bit of the computational-basis index, i.e. basis state
``|b>`` assigns bit ``(b >> n) & 1`` to site ``n``.  Every module in the
package shares this convention.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .errors import AlgebraError, DimensionError, NormalizationError, SizeLimitError

AXES = ("X", "Y", "Z")

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# sigma_a sigma_b = phase * sigma_c for a != b, both non-identity
_PRODUCT = {
    ("X", "X"): (1.0, None),
    ("Y", "Y"): (1.0, None),
    ("Z", "Z"): (1.0, None),
    ("X", "Y"): (1j, "Z"),
    ("Y", "Z"): (1j, "X"),
    ("Z", "X"): (1j, "Y"),
    ("Y", "X"): (-1j, "Z"),
    ("Z", "Y"): (-1j, "X"),
    ("X", "Z"): (-1j, "Y"),
}

COEFF_TOLERANCE = 1e-12

DEFAULT_DENSE_LIMIT = 14


@dataclass(frozen=True)
class PauliTerm:
    """A weighted Pauli string: coefficient times a product of single-site Paulis.

    ``factors`` maps site index to axis; sites absent from the map carry the
    identity, so an empty map is a multiple of the identity operator.
    """

    coefficient: complex
    factors: dict[int, str] = field(default_factory=dict)

    def __post_init__(self):
        for site, axis in self.factors.items():
            if axis not in AXES:
                raise ValueError(f"unknown Pauli axis {axis!r} at site {site}")
            if site < 0:
                raise ValueError(f"negative site index {site}")

    @property
    def key(self) -> tuple[tuple[int, str], ...]:
        """Canonical hashable identity of the string (coefficient excluded)."""
        return tuple(sorted(self.factors.items()))

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self.factors)

    def is_identity(self) -> bool:
        return not self.factors

    def __str__(self):
        if not self.factors:
            return f"({self.coefficient:g})*I"
        body = " ".join(f"{axis}{site}" for site, axis in sorted(self.factors.items()))
        return f"({self.coefficient:g})*{body}"


def multiply(a: PauliTerm, b: PauliTerm) -> PauliTerm:
    """Product of two Pauli strings, with the phase from per-site products."""
    coeff = a.coefficient * b.coefficient
    factors = dict(a.factors)
    for site, axis_b in b.factors.items():
        axis_a = factors.pop(site, None)
        if axis_a is None:
            factors[site] = axis_b
            continue
        phase, axis_c = _PRODUCT[(axis_a, axis_b)]
        coeff *= phase
        if axis_c is not None:
            factors[site] = axis_c
    return PauliTerm(coeff, factors)


def anticommutes(a: PauliTerm, b: PauliTerm) -> bool:
    """True when the two strings anticommute (odd number of clashing sites)."""
    clashes = 0
    for site, axis in a.factors.items():
        other = b.factors.get(site)
        if other is not None and other != axis:
            clashes += 1
    return clashes % 2 == 1


class OperatorSum:
    """A sum of weighted Pauli strings acting on ``num_sites`` qubits.

    Construction canonicalizes: terms with identical factor maps are merged
    and merged coefficients below ``COEFF_TOLERANCE`` are dropped.  Instances
    are immutable; all arithmetic returns new objects.
    """

    __slots__ = ("num_sites", "terms")

    def __init__(self, num_sites: int, terms=()):
        if num_sites < 1:
            raise ValueError("need at least one site")
        merged: dict[tuple, complex] = {}
        for term in terms:
            for site in term.factors:
                if site >= num_sites:
                    raise DimensionError(
                        f"site {site} outside chain of {num_sites} sites"
                    )
            merged[term.key] = merged.get(term.key, 0.0) + term.coefficient
        canonical = tuple(
            PauliTerm(coeff, dict(key))
            for key, coeff in sorted(merged.items())
            if abs(coeff) > COEFF_TOLERANCE
        )
        object.__setattr__(self, "num_sites", num_sites)
        object.__setattr__(self, "terms", canonical)

    def __setattr__(self, name, value):
        raise AttributeError("OperatorSum is immutable")

    # -- algebra ----------------------------------------------------------

    def _check_same_size(self, other: "OperatorSum"):
        if self.num_sites != other.num_sites:
            raise DimensionError(
                f"operator sizes differ: {self.num_sites} vs {other.num_sites}"
            )

    def __add__(self, other: "OperatorSum") -> "OperatorSum":
        self._check_same_size(other)
        return OperatorSum(self.num_sites, self.terms + other.terms)

    def __sub__(self, other: "OperatorSum") -> "OperatorSum":
        return self + (-1.0) * other

    def __mul__(self, scalar) -> "OperatorSum":
        scalar = complex(scalar)
        return OperatorSum(
            self.num_sites,
            (PauliTerm(scalar * t.coefficient, t.factors) for t in self.terms),
        )

    __rmul__ = __mul__

    def __matmul__(self, other: "OperatorSum") -> "OperatorSum":
        """Operator product, expanded term by term."""
        self._check_same_size(other)
        return OperatorSum(
            self.num_sites,
            (multiply(a, b) for a in self.terms for b in other.terms),
        )

    def __eq__(self, other):
        if not isinstance(other, OperatorSum):
            return NotImplemented
        return self.num_sites == other.num_sites and self.terms == other.terms

    def __len__(self):
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_hermitian(self, tol: float = COEFF_TOLERANCE) -> bool:
        """Pauli strings are self-adjoint, so Hermiticity is coefficient realness."""
        return all(abs(t.coefficient.imag) <= tol for t in self.terms)

    @property
    def support(self) -> frozenset[int]:
        return frozenset().union(*(t.support for t in self.terms)) if self.terms else frozenset()

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(str(t) for t in self.terms)

    # -- serialization ----------------------------------------------------

    def to_json(self) -> str:
        payload = [
            {
                "coefficient": [t.coefficient.real, t.coefficient.imag],
                "factors": {str(site): axis for site, axis in sorted(t.factors.items())},
            }
            for t in self.terms
        ]
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str, num_sites: int) -> "OperatorSum":
        terms = []
        for entry in json.loads(text):
            re, im = entry["coefficient"]
            factors = {int(site): axis for site, axis in entry["factors"].items()}
            terms.append(PauliTerm(complex(re, im), factors))
        return cls(num_sites, terms)


def identity(num_sites: int, coefficient=1.0) -> OperatorSum:
    return OperatorSum(num_sites, [PauliTerm(complex(coefficient))])


def pauli(axis: str, site: int, num_sites: int, coefficient=1.0) -> OperatorSum:
    """Single Pauli operator as an OperatorSum."""
    return OperatorSum(num_sites, [PauliTerm(complex(coefficient), {site: axis})])


def commutator(a: OperatorSum, b: OperatorSum) -> OperatorSum:
    """Symbolic commutator ab - ba.

    Uses the fact that two Pauli strings either commute or anticommute, so
    each anticommuting pair contributes exactly 2*(term product).
    """
    a._check_same_size(b)
    pieces = [
        multiply(PauliTerm(2.0 * ta.coefficient, ta.factors), tb)
        for ta in a.terms
        for tb in b.terms
        if anticommutes(ta, tb)
    ]
    return OperatorSum(a.num_sites, pieces)


# -- dense rendering and statevector application ---------------------------


def _term_masks(term: PauliTerm) -> tuple[int, int, complex]:
    """Decompose a string into bit masks: sigma = phase * X^xmask Z^zmask.

    Uses Y = i X Z per site, so phase = i^(number of Y factors).
    """
    xmask = zmask = 0
    n_y = 0
    for site, axis in term.factors.items():
        if axis == "X":
            xmask |= 1 << site
        elif axis == "Z":
            zmask |= 1 << site
        else:
            xmask |= 1 << site
            zmask |= 1 << site
            n_y += 1
    return xmask, zmask, 1j**n_y


def _parity_signs(indices: np.ndarray, zmask: int) -> np.ndarray:
    """(-1)^popcount(b & zmask) for every basis index b."""
    counts = np.bitwise_count(indices & zmask)
    return 1.0 - 2.0 * (counts & 1)


def apply_to_state(op: OperatorSum, state: np.ndarray) -> np.ndarray:
    """Matrix-free application op|state> via per-term bit manipulation."""
    dim = 1 << op.num_sites
    if state.shape != (dim,):
        raise DimensionError(f"state has dimension {state.shape}, expected ({dim},)")
    basis = np.arange(dim, dtype=np.uint64)
    out = np.zeros(dim, dtype=complex)
    for term in op.terms:
        xmask, zmask, phase = _term_masks(term)
        weights = (term.coefficient * phase) * _parity_signs(basis, zmask)
        # b ^ xmask is a permutation of the basis, so plain fancy indexing
        # accumulates without collisions
        out[basis ^ np.uint64(xmask)] += weights * state
    return out


def to_matrix(op: OperatorSum, dense_limit: int = DEFAULT_DENSE_LIMIT) -> np.ndarray:
    """Dense 2^N x 2^N matrix of the operator (site 0 = least-significant bit)."""
    if op.num_sites > dense_limit:
        raise SizeLimitError(
            f"dense rendering of {op.num_sites} sites exceeds limit {dense_limit}"
        )
    dim = 1 << op.num_sites
    basis = np.arange(dim, dtype=np.uint64)
    out = np.zeros((dim, dim), dtype=complex)
    for term in op.terms:
        xmask, zmask, phase = _term_masks(term)
        weights = (term.coefficient * phase) * _parity_signs(basis, zmask)
        out[basis ^ np.uint64(xmask), basis] += weights
    return out


def kron_matrix(term: PauliTerm, num_sites: int) -> np.ndarray:
    """Reference tensor-product rendering of a single string (tests cross-check this)."""
    mats = [PAULI_MATRICES[term.factors.get(n, "I")] for n in range(num_sites)]
    # site 0 is the least-significant bit, hence the last Kronecker factor
    return term.coefficient * reduce(np.kron, mats[::-1])


def expectation(state: np.ndarray, op: OperatorSum, norm_tol: float = 1e-10) -> complex:
    """<state|op|state> for a normalized state vector."""
    norm = np.linalg.norm(state)
    if abs(norm - 1.0) > norm_tol:
        raise NormalizationError(f"state norm {norm} differs from 1 beyond {norm_tol}")
    return complex(np.vdot(state, apply_to_state(op, state)))


def hermitian_expectation(state: np.ndarray, op: OperatorSum, imag_tol: float = 1e-10) -> float:
    """Real expectation value of a Hermitian operator; rejects stray imaginary parts."""
    value = expectation(state, op)
    if abs(value.imag) > imag_tol:
        raise AlgebraError(f"expectation has imaginary part {value.imag:g}")
    return value.real
