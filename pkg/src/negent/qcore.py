"""Dense complex linear algebra and density-matrix plumbing.

Everything here is a pure function of its inputs.  Matrices are plain
numpy arrays; validated states are wrapped in small frozen dataclasses
whose arrays are marked read-only so they can be shared freely.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass

import numpy as np

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-8
EIGENVALUE_FLOOR = -1e-8  # eigenvalues in [floor, 0) are clamped to 0

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)


class DensityValidationError(ValueError):
    """Input fails the density-matrix contract (Hermiticity, trace, positivity)."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class DensityMatrix:
    """Validated bipartite state: unit-trace PSD Hermitian matrix with subsystem dims."""

    matrix: np.ndarray
    dims: tuple[int, int]

    def __post_init__(self):
        d_a, d_b = self.dims
        if self.matrix.shape != (d_a * d_b, d_a * d_b):
            raise DensityValidationError(
                f"matrix shape {self.matrix.shape} does not match dims {self.dims}"
            )

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class PureState:
    """Normalized bipartite pure state as an amplitude vector."""

    amplitudes: np.ndarray
    dims: tuple[int, int]

    def __post_init__(self):
        d_a, d_b = self.dims
        if self.amplitudes.shape != (d_a * d_b,):
            raise ValueError(f"amplitude length {self.amplitudes.shape} vs dims {self.dims}")
        norm2 = float(np.vdot(self.amplitudes, self.amplitudes).real)
        if abs(norm2 - 1.0) > 1e-12:
            raise ValueError(f"state not normalized: |psi|^2 = {norm2}")

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def to_density(self) -> DensityMatrix:
        return validate_density(self.projector(), self.dims)


def pure_state(amplitudes, dims: tuple[int, int]) -> PureState:
    """Build a PureState, normalizing the given amplitudes."""
    amps = np.asarray(amplitudes, dtype=complex).ravel()
    nrm = np.linalg.norm(amps)
    if nrm < 1e-12:
        raise ValueError("cannot normalize a null vector")
    return PureState(_readonly(amps / nrm), tuple(dims))


def product_state(phi_a, phi_b) -> PureState:
    """Tensor product of two single-subsystem pure vectors."""
    a = np.asarray(phi_a, dtype=complex).ravel()
    b = np.asarray(phi_b, dtype=complex).ravel()
    return pure_state(np.kron(a, b), (len(a), len(b)))


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product (subsystem A varies slowest)."""
    return np.kron(a, b)


def hermitize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.conj().T)


def max_abs(m: np.ndarray) -> float:
    return float(np.abs(m).max()) if m.size else 0.0


def is_hermitian(m: np.ndarray, tol: float = HERMITICITY_TOL) -> bool:
    return max_abs(m - m.conj().T) <= tol


def eig_hermitian(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and matching orthonormal eigenvector columns.

    Raises ValueError for non-Hermitian input; the LAPACK solve is
    deterministic for a fixed input matrix.
    """
    h = np.asarray(h, dtype=complex)
    if not np.all(np.isfinite(h)):
        raise ValueError("non-finite entries")
    if not is_hermitian(h):
        raise ValueError(f"matrix is not Hermitian to {HERMITICITY_TOL}")
    w, v = np.linalg.eigh(h)
    return w[::-1].copy(), v[:, ::-1].copy()


def psd_sqrt(m: np.ndarray) -> np.ndarray:
    """Hermitian square root of a PSD matrix; eigenvalues in [-1e-8, 0) clamp to 0."""
    w, v = eig_hermitian(m)
    if w[-1] < EIGENVALUE_FLOOR:
        raise ValueError(f"matrix not PSD: min eigenvalue {w[-1]}")
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    return hermitize(root)


def partial_transpose(rho: DensityMatrix, subsystem: str = "B") -> np.ndarray:
    """Transpose one subsystem of a bipartite state."""
    d_a, d_b = rho.dims
    four = rho.matrix.reshape(d_a, d_b, d_a, d_b)
    if subsystem == "A":
        out = four.transpose(2, 1, 0, 3)
    elif subsystem == "B":
        out = four.transpose(0, 3, 2, 1)
    else:
        raise ValueError("subsystem must be 'A' or 'B'")
    return out.reshape(d_a * d_b, d_a * d_b)


def partial_trace(rho: DensityMatrix, keep: str = "A") -> DensityMatrix:
    """Reduced state of one subsystem."""
    d_a, d_b = rho.dims
    four = rho.matrix.reshape(d_a, d_b, d_a, d_b)
    if keep == "A":
        red = np.einsum("ikjk->ij", four)
        dims = (d_a, 1)
    elif keep == "B":
        red = np.einsum("kikj->ij", four)
        dims = (d_b, 1)
    else:
        raise ValueError("keep must be 'A' or 'B'")
    return validate_density(red, dims)


def validate_density(m: np.ndarray, dims: tuple[int, int]) -> DensityMatrix:
    """Check the density-matrix contract and return a cleaned, immutable state.

    Cleaning symmetrizes roundoff-level anti-Hermitian parts, clamps
    eigenvalues in [-1e-8, 0) to zero and renormalizes the trace, so the
    returned state satisfies the invariants to 1e-10 even when the input
    only meets the looser 1e-8 entry gates.
    """
    m = np.asarray(m, dtype=complex)
    d_a, d_b = int(dims[0]), int(dims[1])
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DensityValidationError(f"not a square matrix: shape {m.shape}")
    if m.shape[0] != d_a * d_b:
        raise DensityValidationError(f"dimension {m.shape[0]} != product of dims {dims}")
    if not np.all(np.isfinite(m)):
        raise DensityValidationError("non-finite entries")
    if not is_hermitian(m):
        raise DensityValidationError(f"not Hermitian to {HERMITICITY_TOL}")
    tr = float(np.trace(m).real)
    if abs(tr - 1.0) > TRACE_TOL:
        raise DensityValidationError(f"trace {tr} deviates from 1 beyond {TRACE_TOL}")
    w, v = eig_hermitian(m)
    if w[-1] < EIGENVALUE_FLOOR:
        raise DensityValidationError(f"negative eigenvalue {w[-1]} below {EIGENVALUE_FLOOR}")
    if w[-1] < 0.0:
        w = np.clip(w, 0.0, None)
        m = (v * w) @ v.conj().T
    m = hermitize(m / np.trace(m).real)
    return DensityMatrix(_readonly(m), (d_a, d_b))


def read_density(path) -> DensityMatrix:
    """Load the JSON state format {"dims":[dA,dB],"re":[[..]],"im":[[..]]}."""
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    try:
        dims = tuple(int(d) for d in payload["dims"])
        re = np.asarray(payload["re"], dtype=float)
        im = np.asarray(payload["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise DensityValidationError(f"malformed state file: {exc}") from exc
    if len(dims) != 2 or re.shape != im.shape:
        raise DensityValidationError("state file needs two dims and matching re/im shapes")
    return validate_density(re + 1j * im, dims)


def write_density(rho: DensityMatrix, path) -> None:
    """Write the JSON state format, atomically."""
    payload = {
        "dims": list(rho.dims),
        "re": rho.matrix.real.tolist(),
        "im": rho.matrix.imag.tolist(),
    }
    atomic_write_text(path, json.dumps(payload))


def atomic_write_text(path, text: str) -> None:
    """Write via a same-directory temp file and rename."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
