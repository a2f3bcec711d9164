"""Ground states and spectra: dense diagonalization and matrix-free Lanczos."""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import AlgebraError, ConvergenceError, SizeLimitError
from .pauli import OperatorSum, apply_to_state, to_matrix

DENSE_LIMIT = 14
LANCZOS_LIMIT = 24
DEGENERACY_TOLERANCE = 1e-10
DUMP_MAGIC = b"QETGS\x00\x00\x00"


@dataclass
class GroundState:
    """Lowest eigenpair of a chain Hamiltonian.

    ``gap`` is E1 - E0; ``degenerate`` flags gap < 1e-10.  The global phase
    is fixed by making the first amplitude of magnitude > 1e-10 real positive,
    so results are deterministic across runs for non-degenerate models.
    """

    amplitudes: np.ndarray
    energy: float
    gap: float
    degenerate: bool


def _fix_phase(vec: np.ndarray) -> np.ndarray:
    idx = np.flatnonzero(np.abs(vec) > 1e-10)
    if idx.size == 0:
        return vec
    pivot = vec[idx[0]]
    return vec * (abs(pivot) / pivot)


def _residual_norm(op: OperatorSum, vec: np.ndarray, energy: float) -> float:
    return float(np.max(np.abs(apply_to_state(op, vec) - energy * vec)))


def _dense_ground(op: OperatorSum) -> GroundState:
    h = to_matrix(op, dense_limit=DENSE_LIMIT)
    vals, vecs = np.linalg.eigh(h)
    energy = float(vals[0])
    gap = float(vals[1] - vals[0]) if len(vals) > 1 else 0.0
    vec = _fix_phase(vecs[:, 0])
    return GroundState(vec, energy, gap, gap < DEGENERACY_TOLERANCE)


def _lanczos_run(op: OperatorSum, seed: int, max_iter: int, residual_tol: float):
    """One Lanczos pass with full reorthogonalization from a seeded start vector."""
    dim = 1 << op.num_sites
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    v /= np.linalg.norm(v)

    basis = [v]
    alphas: list[float] = []
    betas: list[float] = []
    w = apply_to_state(op, v)

    for it in range(max_iter):
        alpha = float(np.vdot(basis[-1], w).real)
        alphas.append(alpha)
        w = w - alpha * basis[-1]
        if len(basis) > 1:
            w = w - betas[-1] * basis[-2]
        # full reorthogonalization against every Krylov vector so far
        for b in basis:
            w = w - np.vdot(b, w) * b
        beta = float(np.linalg.norm(w))

        vals, vecs = eigh_tridiagonal(np.array(alphas), np.array(betas))
        ritz_residual = abs(beta * vecs[-1, 0])
        if ritz_residual < residual_tol or beta < 1e-14 or len(basis) == dim:
            ground = np.zeros(dim, dtype=complex)
            for coeff, b in zip(vecs[:, 0], basis):
                ground += coeff * b
            ground /= np.linalg.norm(ground)
            energy = float(vals[0])
            gap = float(vals[1] - vals[0]) if len(vals) > 1 else 0.0
            return energy, gap, ground

        betas.append(beta)
        w /= beta
        basis.append(w)
        w = apply_to_state(op, basis[-1])

    raise ConvergenceError(f"Lanczos did not converge within {max_iter} iterations")


def _lanczos_ground(op: OperatorSum, seed: int, max_iter: int,
                    residual_tol: float) -> GroundState:
    energy, gap, vec = _lanczos_run(op, seed, max_iter, residual_tol)
    # independent second run guards against an unlucky start vector
    energy2, _, _ = _lanczos_run(op, seed + 0x9E3779B9, max_iter, residual_tol)
    if abs(energy - energy2) > 1e-9:
        raise ConvergenceError(
            f"Lanczos energies from independent seeds disagree: {energy} vs {energy2}"
        )
    vec = _fix_phase(vec)
    return GroundState(vec, energy, gap, gap < DEGENERACY_TOLERANCE)


def ground_state(model, method: str = "auto", seed: int = 7,
                 max_iter: int = 500, residual_tol: float = 1e-10) -> GroundState:
    """Ground state of a model's bulk Hamiltonian.

    ``auto`` picks dense diagonalization for N <= 10 and Lanczos beyond.
    The model may be a SpinChainModel or a bare OperatorSum.
    """
    op = getattr(model, "bulk_terms", model)
    if not op.is_hermitian():
        raise AlgebraError("Hamiltonian is not Hermitian (complex canonical coefficient)")
    if method == "auto":
        method = "dense" if op.num_sites <= 10 else "lanczos"
    if method == "dense":
        if op.num_sites > DENSE_LIMIT:
            raise SizeLimitError(f"dense method limited to {DENSE_LIMIT} sites")
        state = _dense_ground(op)
    elif method == "lanczos":
        if op.num_sites > LANCZOS_LIMIT:
            raise SizeLimitError(f"lanczos method limited to {LANCZOS_LIMIT} sites")
        state = _lanczos_ground(op, seed, max_iter, residual_tol)
    else:
        raise ValueError(f"unknown method {method!r}")

    residual = _residual_norm(op, state.amplitudes, state.energy)
    if residual > 1e-8:
        raise ConvergenceError(f"eigenpair residual {residual:g} exceeds 1e-8")
    return state


def spectrum(model) -> np.ndarray:
    """All 2^N eigenvalues, ascending, degenerate values repeated (dense, N <= 10)."""
    op = getattr(model, "bulk_terms", model)
    if op.num_sites > 10:
        raise SizeLimitError("full spectrum limited to 10 sites")
    if not op.is_hermitian():
        raise AlgebraError("Hamiltonian is not Hermitian")
    return np.linalg.eigvalsh(to_matrix(op))


# -- binary amplitude dump --------------------------------------------------


def dump_amplitudes(state: GroundState, num_sites: int, path) -> None:
    """Write amplitudes: 16-byte header (magic, u32 N, u32 reserved), then
    little-endian interleaved re/im float64 pairs."""
    with open(path, "wb") as fh:
        fh.write(DUMP_MAGIC)
        fh.write(struct.pack("<II", num_sites, 0))
        fh.write(np.ascontiguousarray(state.amplitudes, dtype="<c16").tobytes())


def load_amplitudes(path) -> tuple[int, np.ndarray]:
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic != DUMP_MAGIC:
            raise ValueError(f"bad magic {magic!r}")
        num_sites, _reserved = struct.unpack("<II", fh.read(8))
        data = np.frombuffer(fh.read(), dtype="<c16")
    if data.size != 1 << num_sites:
        raise ValueError("amplitude payload size does not match header N")
    return num_sites, data.astype(complex)
