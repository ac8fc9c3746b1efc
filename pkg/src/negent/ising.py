"""Transverse-field Ising chain application.

Hamiltonian (periodic, N sites, coupling ``lam``):

    H = - sum_j ( lam * X_j X_{j+1} + Z_j )

The thermodynamic-limit two-site observables at separation r come from the
fermionic contraction

    G(l) = (1/pi) Int_0^pi [ (1 + lam cos p) cos(p l) - lam sin(p) sin(p l) ]
                             / sqrt(1 + lam^2 + 2 lam cos p)  dp

assembled as ``mz = G(0)``, ``xx = det[G(j-k-1)]``, ``yy = det[G(j-k+1)]``
(r x r Toeplitz, 1-based j, k) and ``zz = G(0)^2 - G(r) G(-r)``.  The sign
and index conventions were fixed against the exact-diagonalization oracle
below; ``validate_pipeline`` re-runs that comparison and must pass before
sweep output is trusted.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad, quad_vec
from scipy.linalg import eigh as dense_eigh
from scipy.sparse import csr_matrix, identity as sparse_identity, kron as sparse_kron
from scipy.sparse.linalg import eigsh

from .qcore import (
    DensityMatrix,
    IDENTITY_2,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    atomic_write_text,
    kron,
    validate_density,
)
from .measures import lambda_two_qubit, ppt_min_eigenvalue

QUAD_ABS_TOL = 1e-10
ED_MAX_SITES = 14
ED_DENSE_MAX_SITES = 12
ED_DEGENERACY_GAP = 1e-12


class QuadratureError(ArithmeticError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class EntangledRdm(ValueError):
    """A sweep hit a two-site state with nonzero entanglement (possible for r <= 2)."""

    def __init__(self, lam: float, r: int, concurrence: float):
        super().__init__(
            f"two-site state at lambda={lam}, r={r} is entangled "
            f"(concurrence ~ {concurrence:.3e}); the NEM needs a separable input"
        )
        self.lam = lam
        self.r = r
        self.concurrence = concurrence


class PipelineValidationError(AssertionError):
    """Thermodynamic-limit correlators disagree with the ED oracle."""


@dataclass(frozen=True)
class CorrelatorSet:
    """Thermodynamic-limit observables at a given coupling and separation."""

    lam: float
    r: int
    mz: float
    xx: float
    yy: float
    zz: float
    g_values: np.ndarray  # G(-r) .. G(r)

    def g(self, l: int) -> float:
        return float(self.g_values[l + self.r])


@dataclass(frozen=True)
class SweepRow:
    lam: float
    r: int
    nem: float
    dnem_dlambda: float
    correlators: CorrelatorSet


@dataclass(frozen=True)
class SweepResult:
    rows: list[SweepRow]
    grid_step: float
    derivative_step: float

    def extremum(self) -> tuple[float, float]:
        """(lambda, |dN/dlambda|) at the grid point of largest derivative magnitude."""
        best = max(self.rows, key=lambda row: abs(row.dnem_dlambda))
        return best.lam, abs(best.dnem_dlambda)


def _check_params(lam: float, r: int, gamma: float) -> None:
    if lam < 0.0:
        raise ValueError("coupling must be nonnegative")
    if r < 1:
        raise ValueError("separation must be a positive integer")
    if gamma != 1.0:
        raise ValueError("only the Ising anisotropy gamma = 1 is supported")


def _g_integrand(p, lam: float, ls: np.ndarray) -> np.ndarray:
    weight = np.sqrt(1.0 + lam * lam + 2.0 * lam * np.cos(p))
    return ((1.0 + lam * np.cos(p)) * np.cos(p * ls) - lam * np.sin(p) * np.sin(p * ls)) / weight


def correlator_g(lam: float, l: int) -> float:
    """Single fermionic contraction G(l) by adaptive quadrature (abs tol 1e-10)."""
    if lam < 0.0:
        raise ValueError("coupling must be nonnegative")
    ls = np.array([float(l)])
    value, err = quad(
        lambda p: float(_g_integrand(p, lam, ls)[0]),
        0.0,
        np.pi,
        epsabs=QUAD_ABS_TOL,
        epsrel=1e-12,
        limit=400,
    )
    if err > 1e-9:
        raise QuadratureError(f"G({l}) at lambda={lam}: reported error {err}")
    return value / np.pi


@lru_cache(maxsize=16384)
def _g_window(lam: float, lmax: int) -> np.ndarray:
    """G(l) for l in [-lmax, lmax], one shared adaptive subdivision."""
    ls = np.arange(-lmax, lmax + 1, dtype=float)
    values, err = quad_vec(
        lambda p: _g_integrand(p, lam, ls),
        0.0,
        np.pi,
        epsabs=QUAD_ABS_TOL,
        epsrel=1e-12,
        norm="max",
    )
    if err > 1e-9:
        raise QuadratureError(f"G window at lambda={lam}: reported error {err}")
    out = values / np.pi
    out.flags.writeable = False
    return out


def correlator_set(lam: float, r: int, gamma: float = 1.0) -> CorrelatorSet:
    """All two-site observables at (lam, r) from the contraction window."""
    _check_params(lam, r, gamma)
    g = _g_window(float(lam), int(r))

    def gv(l: int) -> float:
        return float(g[l + r])

    xx = float(np.linalg.det([[gv(j - k - 1) for k in range(r)] for j in range(r)]))
    yy = float(np.linalg.det([[gv(j - k + 1) for k in range(r)] for j in range(r)]))
    zz = gv(0) ** 2 - gv(r) * gv(-r)
    return CorrelatorSet(lam=float(lam), r=int(r), mz=gv(0), xx=xx, yy=yy, zz=zz, g_values=g)


def rdm_from_correlators(c: CorrelatorSet) -> DensityMatrix:
    """Two-site state from (mz, xx, yy, zz); odd-parity terms vanish by symmetry."""
    m = (
        np.eye(4, dtype=complex)
        + c.mz * (kron(PAULI_Z, IDENTITY_2) + kron(IDENTITY_2, PAULI_Z))
        + c.xx * kron(PAULI_X, PAULI_X)
        + c.yy * kron(PAULI_Y, PAULI_Y)
        + c.zz * kron(PAULI_Z, PAULI_Z)
    ) / 4.0
    return validate_density(m, (2, 2))


def two_site_rdm(lam: float, r: int, gamma: float = 1.0) -> DensityMatrix:
    """Thermodynamic-limit reduced state of two sites a distance r apart."""
    return rdm_from_correlators(correlator_set(lam, r, gamma))


# --- exact-diagonalization oracle -----------------------------------------

_SPARSE_X = csr_matrix(PAULI_X.real)
_SPARSE_Z = csr_matrix(PAULI_Z.real)


def _site_operator(op: csr_matrix, site: int, n: int) -> csr_matrix:
    out = csr_matrix(np.eye(1))
    for j in range(n):
        factor = op if j == site else sparse_identity(2, format="csr")
        out = sparse_kron(out, factor, format="csr")
    return out


def _hamiltonian(n: int, lam: float) -> csr_matrix:
    h = csr_matrix((2**n, 2**n))
    for j in range(n):
        h = h - lam * (_site_operator(_SPARSE_X, j, n) @ _site_operator(_SPARSE_X, (j + 1) % n, n))
        h = h - _site_operator(_SPARSE_Z, j, n)
    return h


@lru_cache(maxsize=64)
def _ground_pair(n: int, lam: float) -> tuple[np.ndarray, np.ndarray]:
    """Two lowest eigenpairs; dense solve up to 12 sites, Lanczos above."""
    h = _hamiltonian(n, lam)
    if n <= ED_DENSE_MAX_SITES:
        vals, vecs = dense_eigh(h.toarray(), subset_by_index=[0, 1])
    else:
        vals, vecs = eigsh(h, k=2, which="SA")
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]
    vals.flags.writeable = False
    vecs.flags.writeable = False
    return vals, vecs


def _pair_rdm(state: np.ndarray, n: int, site_a: int, site_b: int) -> np.ndarray:
    tensor = state.reshape((2,) * n)
    moved = np.moveaxis(tensor, (site_a, site_b), (0, 1)).reshape(4, -1)
    return moved @ moved.conj().T


def ed_two_site_rdm(n_sites: int, lam: float, r: int, site: int = 0) -> DensityMatrix:
    """Finite-chain oracle for the two-site state at separation r.

    Ground state of the periodic chain by Hermitian eigensolve; a ground
    space degenerate below 1e-12 (ordered phase at large n) is averaged so
    the state matches the symmetric thermodynamic-limit correlators.
    """
    if n_sites > ED_MAX_SITES:
        raise ValueError(f"ED capped at {ED_MAX_SITES} sites")
    if not 1 <= r < n_sites / 2:
        raise ValueError("need 1 <= r < n_sites / 2")
    if lam < 0.0:
        raise ValueError("coupling must be nonnegative")
    vals, vecs = _ground_pair(n_sites, float(lam))
    site_b = (site + r) % n_sites
    rdm = _pair_rdm(vecs[:, 0], n_sites, site, site_b)
    if vals[1] - vals[0] < ED_DEGENERACY_GAP:
        rdm = 0.5 * (rdm + _pair_rdm(vecs[:, 1], n_sites, site, site_b))
    return validate_density(rdm, (2, 2))


def validate_pipeline(
    n_sites: int = 12,
    lams: tuple[float, ...] = (0.5, 2.0),
    max_r: int = 3,
    tol: float = 2e-2,
) -> float:
    """Compare thermodynamic-limit states against the ED oracle.

    Returns the worst max-norm discrepancy; raises PipelineValidationError
    beyond tol.  This gate fixes the G(l) sign convention and must pass
    before any sweep output is used.
    """
    worst = 0.0
    for lam in lams:
        for r in range(1, max_r + 1):
            gap = np.abs(
                two_site_rdm(lam, r).matrix - ed_two_site_rdm(n_sites, lam, r).matrix
            ).max()
            worst = max(worst, float(gap))
            if gap > tol:
                raise PipelineValidationError(
                    f"thermodynamic vs ED mismatch {gap:.3e} at lambda={lam}, r={r}"
                )
    return worst


# --- sweeps ----------------------------------------------------------------


def _nem_at(lam: float, r: int) -> float:
    rdm = two_site_rdm(lam, r)
    if ppt_min_eigenvalue(rdm) < -1e-9:
        raise EntangledRdm(lam, r, lambda_two_qubit(rdm).concurrence)
    return min(lambda_two_qubit(rdm).lam, 0.0)


def nem_sweep(
    lambda_min: float,
    lambda_max: float,
    steps: int,
    r: int,
    h: float,
) -> SweepResult:
    """NEM and its finite-difference derivative over a coupling grid.

    The derivative step h is independent of the grid step: interior points
    use central differences, the grid ends (and any point within h of zero
    coupling) fall back to one-sided differences.
    """
    if not 0.0 <= lambda_min < lambda_max or steps < 2:
        if not (lambda_min == lambda_max and steps == 1):
            raise ValueError("need lambda_min < lambda_max with steps >= 2, or a single point")
    if h <= 0.0:
        raise ValueError("derivative step must be positive")
    grid = np.linspace(lambda_min, lambda_max, steps)
    values = [_nem_at(float(lam), r) for lam in grid]

    rows = []
    last = len(grid) - 1
    for i, lam in enumerate(grid):
        lam = float(lam)
        if last == 0:
            forward = _nem_at(lam + h, r)
            deriv = (forward - values[0]) / h
        elif i == 0 or lam - h < 0.0:
            deriv = (_nem_at(lam + h, r) - values[i]) / h
        elif i == last:
            deriv = (values[i] - _nem_at(lam - h, r)) / h
        else:
            deriv = (_nem_at(lam + h, r) - _nem_at(lam - h, r)) / (2.0 * h)
        rows.append(
            SweepRow(
                lam=lam,
                r=r,
                nem=values[i],
                dnem_dlambda=float(deriv),
                correlators=correlator_set(lam, r),
            )
        )
    step = float(grid[1] - grid[0]) if len(grid) > 1 else 0.0
    return SweepResult(rows=rows, grid_step=step, derivative_step=float(h))


CSV_HEADER = "lambda,r,nem,dnem_dlambda,mz,xx,yy,zz"


def sweep_to_csv(result: SweepResult) -> str:
    """Render a sweep as CSV text: 12 significant digits, LF line endings."""
    lines = [CSV_HEADER]
    for row in result.rows:
        c = row.correlators
        fields = (row.lam, row.r, row.nem, row.dnem_dlambda, c.mz, c.xx, c.yy, c.zz)
        lines.append(",".join(f"{v:d}" if isinstance(v, int) else f"{v:.12g}" for v in fields))
    return "\n".join(lines) + "\n"


def write_sweep_csv(result: SweepResult, path) -> None:
    atomic_write_text(path, sweep_to_csv(result))


__all__ = [
    "CorrelatorSet",
    "SweepRow",
    "SweepResult",
    "QuadratureError",
    "EntangledRdm",
    "PipelineValidationError",
    "correlator_g",
    "correlator_set",
    "rdm_from_correlators",
    "two_site_rdm",
    "ed_two_site_rdm",
    "validate_pipeline",
    "nem_sweep",
    "sweep_to_csv",
    "write_sweep_csv",
    "CSV_HEADER",
]
