"""Entanglement measures: two-qubit spin-flip spectrum, concurrence and its
diagonalizing decomposition, pure-state I-concurrence, isotropic states, and
the partial-transpose witness.

Conventions.  The spin flip of a two-qubit state is
``flip(rho) = (Y otimes Y) conj(rho) (Y otimes Y)``, with conjugation taken in
the computational basis.  The spectrum ``lambdas`` holds the descending square
roots of the eigenvalues of ``rho @ flip(rho)``; ``lam = l1 - l2 - l3 - l4``
and the concurrence is ``max(lam, 0)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qcore import (
    DensityMatrix,
    PureState,
    eig_hermitian,
    max_abs,
    partial_transpose,
    psd_sqrt,
    pure_state,
    validate_density,
    _readonly,
)

YY_FLIP = np.kron(
    np.array([[0.0, -1.0j], [1.0j, 0.0]]), np.array([[0.0, -1.0j], [1.0j, 0.0]])
).real  # real symmetric 4x4

RANK_TOL = 1e-10
CROSS_CHECK_TOL = 1e-7
GRAM_RESIDUAL_TOL = 1e-6


class CrossCheckError(ArithmeticError):
    """The two eigenvalue routes for the spin-flip spectrum disagree."""


class GramConditionError(ArithmeticError):
    """Decomposition vectors fail their orthogonality or reconstruction contract."""


@dataclass(frozen=True)
class WoottersData:
    """Spin-flip spectrum of a two-qubit state and, optionally, the
    decomposition ``rho = sum_i |x_i><x_i|`` whose cross Gram matrix
    ``<x_i|flip ops|x_j>`` is diagonal with entries ``lambdas``."""

    lambdas: np.ndarray  # four values, descending, >= 0
    lam: float  # l1 - l2 - l3 - l4
    concurrence: float  # max(lam, 0)
    vectors: np.ndarray | None = None  # columns are subnormalized |x_i>, zero-padded to 4


def _require_two_qubit(rho: DensityMatrix) -> np.ndarray:
    if rho.dims != (2, 2):
        raise ValueError(f"operation requires a 2x2 qubit pair, got dims {rho.dims}")
    return rho.matrix


def spin_flip(rho: DensityMatrix) -> np.ndarray:
    """The spin-flipped companion matrix of a two-qubit state."""
    m = _require_two_qubit(rho)
    return YY_FLIP @ m.conj() @ YY_FLIP


def _flip_raw(m: np.ndarray) -> np.ndarray:
    return YY_FLIP @ m.conj() @ YY_FLIP


def _lambdas_product(m: np.ndarray) -> np.ndarray:
    """Fast spectrum route: eigenvalues of the (non-normal) product m @ flip(m)."""
    w = np.linalg.eigvals(m @ _flip_raw(m))
    lam = np.sqrt(np.clip(w.real, 0.0, None))
    lam.sort()
    return lam[::-1]


def _lam_of(m: np.ndarray) -> float:
    l = _lambdas_product(m)
    return float(l[0] - l[1] - l[2] - l[3])


def lambda_two_qubit(rho: DensityMatrix) -> WoottersData:
    """Spin-flip spectrum via the Hermitian route, cross-checked.

    Primary computation: square roots of the eigenvalues of
    ``sqrt(rho) flip(rho) sqrt(rho)``, evaluated as the singular values of
    ``sqrt(flip(rho)) sqrt(rho)`` (the same Hermitian-route spectrum, but
    without the square-root amplification of eigenvalue roundoff near zero).
    The same values are recomputed from the non-normal product
    ``rho @ flip(rho)``; disagreement beyond 1e-7 raises CrossCheckError.
    """
    m = _require_two_qubit(rho)
    root = psd_sqrt(m)
    lam = np.linalg.svd(_flip_raw(root) @ root, compute_uv=False)
    check = _lambdas_product(m)
    if max_abs(lam - check) > CROSS_CHECK_TOL:
        raise CrossCheckError(
            f"spin-flip spectrum routes disagree: {lam} vs {check}"
        )
    value = float(lam[0] - lam[1] - lam[2] - lam[3])
    return WoottersData(
        lambdas=_readonly(lam),
        lam=value,
        concurrence=max(value, 0.0),
    )


def concurrence_two_qubit(rho: DensityMatrix) -> float:
    """Two-qubit concurrence max(lam, 0)."""
    return lambda_two_qubit(rho).concurrence


def _takagi_symmetric(tau: np.ndarray, tol: float = RANK_TOL):
    """Takagi factorization of a complex symmetric matrix.

    Returns (sig, v) with unitary columns v and sig >= 0 descending such
    that ``tau conj(v_i) = sig_i v_i`` (hence v.T.conj() @ tau @ v.conj()
    is diagonal).  Uses the eigendecomposition of the real symmetric
    embedding [[Re, Im], [Im, -Re]], whose spectrum comes in +/- pairs:
    eigenvectors of a positive pair member give Takagi vectors directly,
    while the kernel maps 2-to-1 onto the complex null space and needs a
    complex re-orthonormalization.
    """
    m = tau.shape[0]
    emb = np.block([[tau.real, tau.imag], [tau.imag, -tau.real]])
    w, u = np.linalg.eigh(emb)
    order = np.argsort(w)[::-1]
    pos = order[w[order] > tol][: m]
    sig = w[pos]
    v = u[:m, pos] + 1j * u[m:, pos]
    missing = m - len(pos)
    if missing > 0:
        kernel = np.abs(w) <= tol
        images = u[:m, kernel] + 1j * u[m:, kernel]
        left, weights, _ = np.linalg.svd(images, full_matrices=False)
        if int((weights > 0.1).sum()) < missing:
            raise GramConditionError("degenerate null space could not be separated")
        v = np.concatenate([v, left[:, :missing]], axis=1)
        sig = np.concatenate([sig, np.zeros(missing)])
    return sig, v


def wootters_decomposition(rho: DensityMatrix) -> WoottersData:
    """Decompose rho into subnormalized vectors with a diagonal cross Gram.

    Construction: subnormalized eigenvectors ``w_i`` of rho (eigenvalues
    below 1e-10 truncated), then a Takagi diagonalization of the symmetric
    matrix ``tau_ij = <w_i|flip|w_j*>``.  The returned columns satisfy
    ``sum_i |x_i><x_i| = rho`` and ``<x_i|x_tilde_j> = lambdas_i delta_ij``;
    residuals beyond 1e-6 raise GramConditionError.
    """
    m = _require_two_qubit(rho)
    mu, vec = eig_hermitian(m)
    keep = mu > RANK_TOL
    sub = vec[:, keep] * np.sqrt(mu[keep])
    tau = sub.T.conj() @ YY_FLIP @ sub.conj()
    sig, v = _takagi_symmetric(tau)
    x = sub @ v
    rank = x.shape[1]
    vectors = np.zeros((4, 4), dtype=complex)
    vectors[:, :rank] = x
    lambdas = np.zeros(4)
    lambdas[:rank] = sig

    recon = vectors @ vectors.conj().T
    gram = vectors.T.conj() @ YY_FLIP @ vectors.conj()
    residual = max(
        max_abs(recon - m),
        max_abs(gram - np.diag(lambdas)),
    )
    if residual > GRAM_RESIDUAL_TOL:
        raise GramConditionError(f"decomposition residual {residual}")

    value = float(lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3])
    return WoottersData(
        lambdas=_readonly(lambdas),
        lam=value,
        concurrence=max(value, 0.0),
        vectors=_readonly(vectors),
    )


def i_concurrence_pure(psi: PureState) -> float:
    """I-concurrence sqrt(2 (1 - Tr rho_A^2)) of a bipartite pure state."""
    d_a, d_b = psi.dims
    block = psi.amplitudes.reshape(d_a, d_b)
    red = block @ block.conj().T
    purity = float(np.trace(red @ red).real)
    return float(np.sqrt(max(0.0, 2.0 * (1.0 - purity))))


def maximally_entangled(d: int) -> PureState:
    """(1/sqrt(d)) sum_i |ii> on a d x d system."""
    amps = np.zeros(d * d, dtype=complex)
    amps[:: d + 1] = 1.0
    return pure_state(amps, (d, d))


def _check_isotropic_params(d: int, fidelity: float) -> None:
    if not 2 <= int(d) <= 16:
        raise ValueError(f"local dimension {d} outside [2, 16]")
    if not 0.0 <= fidelity <= 1.0:
        raise ValueError(f"fidelity {fidelity} outside [0, 1]")


def isotropic_state(d: int, fidelity: float) -> DensityMatrix:
    """Isotropic state with the given overlap on the maximally entangled projector."""
    _check_isotropic_params(d, fidelity)
    proj = maximally_entangled(d).projector()
    rest = (np.eye(d * d) - proj) * ((1.0 - fidelity) / (d * d - 1))
    return validate_density(fidelity * proj + rest, (d, d))


def isotropic_i_concurrence(d: int, fidelity: float) -> float:
    """Closed-form I-concurrence of the d x d isotropic state."""
    _check_isotropic_params(d, fidelity)
    if fidelity <= 1.0 / d:
        return 0.0
    return float(np.sqrt(2.0 * d / (d - 1.0)) * (fidelity - 1.0 / d))


def ppt_min_eigenvalue(rho: DensityMatrix) -> float:
    """Smallest eigenvalue of the partial transpose; negative certifies entanglement."""
    return float(np.linalg.eigvalsh(partial_transpose(rho, "B"))[0])


def _ppt_min_raw(m: np.ndarray, dims: tuple[int, int]) -> float:
    d_a, d_b = dims
    pt = m.reshape(d_a, d_b, d_a, d_b).transpose(0, 3, 2, 1).reshape(m.shape)
    return float(np.linalg.eigvalsh(pt)[0])


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Gaussian matrix."""
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def random_qubit_pure(rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    return v / np.linalg.norm(v)


def random_two_qubit_density(rng: np.random.Generator) -> DensityMatrix:
    g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    m = g @ g.conj().T
    return validate_density(m / np.trace(m).real, (2, 2))


__all__ = [
    "WoottersData",
    "CrossCheckError",
    "GramConditionError",
    "YY_FLIP",
    "spin_flip",
    "lambda_two_qubit",
    "concurrence_two_qubit",
    "wootters_decomposition",
    "i_concurrence_pure",
    "maximally_entangled",
    "isotropic_state",
    "isotropic_i_concurrence",
    "ppt_min_eigenvalue",
    "random_unitary",
    "random_qubit_pure",
    "random_two_qubit_density",
]
