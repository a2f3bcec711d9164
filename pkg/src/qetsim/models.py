"""Spin-chain Hamiltonian families, local terms, and zero-point calibration.

Every model is an OperatorSum plus coupling metadata.  Calibration stores two
independent zero-point mechanisms: per-site offsets eps_n that zero each local
term's ground-state expectation, and a global shift e0 that zeroes <g|H|g>.
Multi-site terms are assigned at full coefficient to every local Hamiltonian
whose site they touch, so the local terms deliberately overlap and do not sum
to H; the global zero-point is handled by e0 alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
import json

import numpy as np

from .errors import ContractError, QetsimError
from .pauli import (
    OperatorSum,
    PauliTerm,
    commutator,
    hermitian_expectation,
    identity,
    pauli,
)

MODEL_NAMES = ("ising", "cluster", "cluster_zz", "y_cluster", "jw_mapped")


@dataclass(frozen=True)
class SpinChainModel:
    name: str
    num_sites: int
    couplings: dict[str, float]
    boundary: str
    bulk_terms: OperatorSum
    epsilon: np.ndarray | None = None
    e0_shift: float | None = None

    @property
    def calibrated(self) -> bool:
        return self.epsilon is not None and self.e0_shift is not None

    def to_json(self) -> str:
        return json.dumps(
            {
                "name": self.name,
                "N": self.num_sites,
                "couplings": self.couplings,
                "boundary": self.boundary,
                "epsilon": None if self.epsilon is None else list(self.epsilon),
                "e0_shift": self.e0_shift,
            }
        )


@dataclass(frozen=True)
class FermionChainSpec:
    """Quadratic fermion chain to be mapped to spin form."""

    kind: str  # "ssh" (cells of A/B sites) or "kitaev" (plain sites)
    size: int  # cells for ssh, sites for kitaev
    lam: float

    def __post_init__(self):
        if self.kind not in ("ssh", "kitaev"):
            raise ValueError(f"unknown fermion chain kind {self.kind!r}")
        if self.size < 2:
            raise ValueError("chain needs at least two cells/sites")

    @property
    def num_spin_sites(self) -> int:
        return 2 * self.size if self.kind == "ssh" else self.size


def _bond_range(num_sites: int, boundary: str) -> range:
    if boundary == "periodic":
        return range(num_sites)
    if boundary == "open":
        return range(num_sites - 1)
    raise ValueError(f"unknown boundary {boundary!r}")


def _three_site_centers(num_sites: int, boundary: str) -> range:
    if boundary == "periodic":
        return range(num_sites)
    return range(1, num_sites - 1)


def build_ising(num_sites: int, h_x: float, h_z: float, coupling_axis: str = "X",
                boundary: str = "periodic") -> SpinChainModel:
    """H = -sum_n [sigma_n sigma_{n+1} + h_x X_n + h_z Z_n] with sigma = coupling_axis."""
    if num_sites < 3:
        raise ValueError("need at least three sites")
    terms = []
    for n in _bond_range(num_sites, boundary):
        m = (n + 1) % num_sites
        terms.append(PauliTerm(-1.0, {n: coupling_axis, m: coupling_axis}))
    for n in range(num_sites):
        terms.append(PauliTerm(-h_x, {n: "X"}))
        terms.append(PauliTerm(-h_z, {n: "Z"}))
    return SpinChainModel(
        name="ising",
        num_sites=num_sites,
        couplings={"h_x": h_x, "h_z": h_z},
        boundary=boundary,
        bulk_terms=OperatorSum(num_sites, terms),
    )


def build_cluster(num_sites: int, j1: float, j2: float, with_zz: bool = False,
                  boundary: str = "periodic") -> SpinChainModel:
    """H = sum_n (Z_n - J1 X_n X_{n+1} - J2 X_{n-1} Z_n X_{n+1}), optionally
    plus (1/2) sum_n Z_n Z_{n+1}."""
    if num_sites < 3:
        raise ValueError("need at least three sites")
    terms = [PauliTerm(1.0, {n: "Z"}) for n in range(num_sites)]
    for n in _bond_range(num_sites, boundary):
        m = (n + 1) % num_sites
        terms.append(PauliTerm(-j1, {n: "X", m: "X"}))
        if with_zz:
            terms.append(PauliTerm(0.5, {n: "Z", m: "Z"}))
    for n in _three_site_centers(num_sites, boundary):
        left, right = (n - 1) % num_sites, (n + 1) % num_sites
        terms.append(PauliTerm(-j2, {left: "X", n: "Z", right: "X"}))
    return SpinChainModel(
        name="cluster_zz" if with_zz else "cluster",
        num_sites=num_sites,
        couplings={"J1": j1, "J2": j2},
        boundary=boundary,
        bulk_terms=OperatorSum(num_sites, terms),
    )


def build_y_cluster(num_sites: int, h_y: float, j_y: float,
                    boundary: str = "periodic") -> SpinChainModel:
    """H = sum_n (h_y Y_n - J_y Y_n Y_{n+1} - X_{n-1} Z_n X_{n+1})."""
    if num_sites < 3:
        raise ValueError("need at least three sites")
    terms = [PauliTerm(h_y, {n: "Y"}) for n in range(num_sites)]
    for n in _bond_range(num_sites, boundary):
        m = (n + 1) % num_sites
        terms.append(PauliTerm(-j_y, {n: "Y", m: "Y"}))
    for n in _three_site_centers(num_sites, boundary):
        left, right = (n - 1) % num_sites, (n + 1) % num_sites
        terms.append(PauliTerm(-1.0, {left: "X", n: "Z", right: "X"}))
    return SpinChainModel(
        name="y_cluster",
        num_sites=num_sites,
        couplings={"h_y": h_y, "J_y": j_y},
        boundary=boundary,
        bulk_terms=OperatorSum(num_sites, terms),
    )


# -- Jordan-Wigner mapping of quadratic fermion chains ----------------------


def _annihilator(site: int, num_sites: int) -> OperatorSum:
    """c_site = (prod_{m<site} Z_m)(X_site + i Y_site)/2 as an OperatorSum."""
    string = {m: "Z" for m in range(site)}
    return OperatorSum(
        num_sites,
        [
            PauliTerm(0.5, {**string, site: "X"}),
            PauliTerm(0.5j, {**string, site: "Y"}),
        ],
    )


def _creator(site: int, num_sites: int) -> OperatorSum:
    string = {m: "Z" for m in range(site)}
    return OperatorSum(
        num_sites,
        [
            PauliTerm(0.5, {**string, site: "X"}),
            PauliTerm(-0.5j, {**string, site: "Y"}),
        ],
    )


def jordan_wigner(spec: FermionChainSpec, boundary: str = "open") -> SpinChainModel:
    """Map an SSH or Kitaev chain to spin form, term by term.

    Only open chains are supported: a periodic fermion chain picks up
    parity-sector boundary terms that the plain substitution does not
    reproduce, so that case is rejected outright.
    """
    if boundary != "open":
        raise QetsimError("jordan_wigner supports open chains only")
    n = spec.num_spin_sites
    h = OperatorSum(n)

    def hop(i: int, j: int, coeff: float):
        """coeff * (c_i^dag c_j + h.c.)"""
        nonlocal h
        term = coeff * (_creator(i, n) @ _annihilator(j, n))
        h = h + term + coeff * (_creator(j, n) @ _annihilator(i, n))

    def pair(i: int, j: int, coeff: float):
        """coeff * (c_i^dag c_j^dag + h.c.)"""
        nonlocal h
        h = h + coeff * (_creator(i, n) @ _creator(j, n))
        h = h + coeff * (_annihilator(j, n) @ _annihilator(i, n))

    if spec.kind == "kitaev":
        for i in range(spec.size - 1):
            hop(i, i + 1, 1.0)
            pair(i, i + 1, spec.lam)
    else:  # ssh: cell m holds sites A=2m, B=2m+1
        for m in range(spec.size):
            hop(2 * m, 2 * m + 1, 2.0 * (1.0 - spec.lam))
        for m in range(spec.size - 1):
            hop(2 * (m + 1), 2 * m + 1, 2.0 * spec.lam)

    return SpinChainModel(
        name="jw_mapped",
        num_sites=n,
        couplings={"lam": spec.lam},
        boundary="open",
        bulk_terms=h,
    )


# -- local Hamiltonians and calibration -------------------------------------


def local_hamiltonian(model: SpinChainModel, n: int) -> OperatorSum:
    """H_n: single-site terms at n plus every multi-site term touching n at
    full coefficient, plus eps_n * I when the model is calibrated."""
    if not 0 <= n < model.num_sites:
        raise QetsimError(f"site {n} out of range for {model.num_sites} sites")
    terms = [t for t in model.bulk_terms.terms if n in t.support]
    if model.epsilon is not None:
        terms.append(PauliTerm(complex(model.epsilon[n])))
    return OperatorSum(model.num_sites, terms)


def calibrate(model: SpinChainModel, ground) -> SpinChainModel:
    """Fill in eps_n = -<g|H_n|g> and the global shift e0 = E0.

    Recalibrating a calibrated model reproduces the same offsets: the eps
    terms are stripped before the expectations are taken.
    """
    bare = replace(model, epsilon=None, e0_shift=None)
    eps = np.array(
        [
            -hermitian_expectation(ground.amplitudes, local_hamiltonian(bare, n))
            for n in range(model.num_sites)
        ]
    )
    return replace(model, epsilon=eps, e0_shift=float(ground.energy))


def shifted_hamiltonian(model: SpinChainModel) -> OperatorSum:
    """H - E0*I, the globally zeroed Hamiltonian used by the protocol scalars."""
    if model.e0_shift is None:
        raise ContractError("model is not globally shifted; run calibrate first")
    return model.bulk_terms - identity(model.num_sites, model.e0_shift)


def check_commutator_condition(model: SpinChainModel, n_b: int, axis_b: str,
                               local_op: OperatorSum | None = None):
    """Verify [H, sigma_B] == [H_n_B, sigma_B] symbolically.

    Returns (ok, residual).  ``local_op`` overrides the model's own local
    Hamiltonian, which lets diagnostics probe deliberately broken choices.
    """
    sigma = pauli(axis_b, n_b, model.num_sites)
    if local_op is None:
        local_op = local_hamiltonian(model, n_b)
    residual = commutator(model.bulk_terms, sigma) - commutator(local_op, sigma)
    return residual.is_zero(), residual
