"""Acceptance suite: one callable per criterion, reused by pytest and the CLI.

Each criterion returns a CriterionResult with a pass flag, a short detail
string (worst observed residuals) and its runtime.  Seeds are fixed so the
suite is reproducible run to run.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import ising, measures, nem
from .qcore import kron, validate_density

ZERO_TOL = 1e-7  # numerical zero for sqrt-amplified spin-flip spectra


@dataclass(frozen=True)
class CriterionResult:
    index: int
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.index}: {self.name} ({self.seconds:.1f}s) {self.detail}"


def _timed(index: int, name: str, budget: float | None):
    def wrap(fn):
        def run() -> CriterionResult:
            start = time.perf_counter()
            passed, detail = fn()
            elapsed = time.perf_counter() - start
            if budget is not None and elapsed >= budget:
                passed = False
                detail += f"; exceeded {budget:.0f}s budget"
            return CriterionResult(index, name, passed, detail, elapsed)

        run.index = index
        run.criterion_name = name
        return run

    return wrap


def _mixture_ensemble(count: int = 100, base_seed: int = 20_000):
    return [nem.sample_separable(base_seed + i, (i % 8) + 1) for i in range(count)]


@_timed(1, "diagonal closed form matches the exact two-qubit value", 5.0)
def criterion_1():
    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(1000):
        w = rng.dirichlet(np.ones(4))
        rho = validate_density(np.diag(w).astype(complex), (2, 2))
        gap = abs(nem.nem_diagonal(w) - nem.nem_two_qubit(rho))
        worst = max(worst, gap)
    return worst <= 1e-10, f"max |closed form - exact| = {worst:.2e}"


@_timed(2, "minimization oracle reproduces the exact two-qubit value", 600.0)
def criterion_2():
    states = _mixture_ensemble()
    worst_under = 0.0  # search shortfall (estimate below exact)
    worst_over = 0.0  # would indicate a broken lower bound
    for i, rho in enumerate(states):
        exact = nem.nem_two_qubit(rho)
        est, _ = nem.nem_oracle(rho, nem.OracleConfig(restarts=50, seed=31_000 + 97 * i))
        worst_under = max(worst_under, exact - est)
        worst_over = max(worst_over, est - exact)
    ok = worst_under <= 1e-2 and worst_over <= 1e-9
    return ok, f"max undershoot {worst_under:.2e} (<=1e-2), max overshoot {worst_over:.2e} (<=1e-9)"


@_timed(3, "constructive mixer certificate: cost equals slack-shifted magnitude", None)
def criterion_3():
    eps = 1e-3
    worst = 0.0
    min_witness = np.inf
    for rho in _mixture_ensemble():
        lam = measures.lambda_two_qubit(rho).lam
        cert = nem.optimal_mixer(rho, eps)
        worst = max(worst, abs(cert.cost - (-lam + eps)))
        min_witness = min(min_witness, cert.mixed_lambda)
    ok = worst <= 1e-9 and min_witness > 0.0
    return ok, f"max |cost + lam - eps| = {worst:.2e}, min mixture witness = {min_witness:.2e}"


@_timed(4, "spin-flip combination is convex under mixing", None)
def criterion_4():
    rng = np.random.default_rng(404)
    worst = 0.0
    for _ in range(10_000):
        k = int(rng.integers(2, 5))
        parts = [measures.random_two_qubit_density(rng) for _ in range(k)]
        weights = rng.dirichlet(np.ones(k))
        mix = validate_density(
            sum(w * p.matrix for w, p in zip(weights, parts)), (2, 2)
        )
        lhs = sum(
            w * measures.lambda_two_qubit(p).lam for w, p in zip(weights, parts)
        )
        violation = measures.lambda_two_qubit(mix).lam - lhs
        worst = max(worst, violation)
    return worst <= 1e-10, f"max (lam(mix) - sum w lam) = {worst:.2e}"


@_timed(5, "pure product states: free entangling mixtures, vanishing NEM", None)
def criterion_5():
    rng = np.random.default_rng(505)
    cfg = nem.OracleConfig(restarts=12, max_iters=600, feasibility_delta=1e-5, seed=55_000)
    worst_est = 0.0
    worst_wit = -np.inf
    for i in range(100):
        a = measures.random_qubit_pure(rng)
        b = measures.random_qubit_pure(rng)
        value, certs = nem.nem_pure_product(a, b, [1e-6])
        prod = validate_density(np.outer(np.kron(a, b), np.kron(a, b).conj()), (2, 2))
        mixture = validate_density(
            (prod.matrix + 1e-6 * certs[0].mixer.matrix) / (1.0 + 1e-6), (2, 2)
        )
        worst_wit = max(worst_wit, measures.ppt_min_eigenvalue(mixture))
        est, _ = nem.nem_oracle(
            prod, nem.OracleConfig(
                restarts=cfg.restarts,
                max_iters=cfg.max_iters,
                feasibility_delta=cfg.feasibility_delta,
                seed=cfg.seed + 11 * i,
            )
        )
        if value != 0.0:
            return False, "pure-product value not identically zero"
        worst_est = max(worst_est, abs(est))
        if est > 0.0:
            return False, f"oracle value {est} above zero"
    ok = worst_wit < 0.0 and worst_est <= 1e-4
    return ok, f"max PT eigenvalue {worst_wit:.2e} (<0), max |oracle value| {worst_est:.2e} (<=1e-4)"


@_timed(6, "isotropic formulas match independent computations", None)
def criterion_6():
    # The d=2 spin-flip spectrum is the Bell-diagonal eigenvalue set
    # {F, (1-F)/3 x3}, so the exact value is 2 max(F, (1-F)/3) - 1: the
    # bound reduces to 2F - 1 and is tight exactly on F >= 1/4.  Below
    # that the bound stays a strict lower bound, which is what is checked.
    worst_reduction = 0.0
    worst_tight = 0.0
    worst_direction = 0.0
    for fid in np.arange(0.0, 0.51, 0.1):
        fid = float(fid)
        bound = nem.nem_isotropic_lower_bound(2, fid)
        worst_reduction = max(worst_reduction, abs(bound - (2.0 * fid - 1.0)))
        exact = measures.lambda_two_qubit(measures.isotropic_state(2, fid)).lam
        worst_direction = max(worst_direction, bound - exact)
        if fid >= 0.25:
            worst_tight = max(worst_tight, abs(bound - exact))
    worst_pure = 0.0
    for d in range(3, 9):
        closed = measures.isotropic_i_concurrence(d, 1.0)
        direct = measures.i_concurrence_pure(measures.maximally_entangled(d))
        worst_pure = max(worst_pure, abs(closed - direct))
    ok = (
        worst_reduction <= 1e-10
        and worst_tight <= 1e-10
        and worst_direction <= 1e-10
        and worst_pure <= 1e-12
    )
    return ok, (
        f"d=2 reduction to 2F-1 {worst_reduction:.2e}, tight branch {worst_tight:.2e}, "
        f"bound direction {worst_direction:.2e}, F=1 closed form vs pure {worst_pure:.2e}"
    )


@_timed(7, "thermodynamic-limit correlators match exact diagonalization", 120.0)
def criterion_7():
    worst = ising.validate_pipeline(n_sites=12, lams=(0.5, 2.0), max_r=3, tol=2e-2)
    up_up = np.zeros((4, 4), dtype=complex)
    up_up[0, 0] = 1.0
    zero_gap = float(np.abs(ising.two_site_rdm(0.0, 3).matrix - up_up).max())
    ok = worst <= 2e-2 and zero_gap <= 1e-8
    return ok, f"max ED discrepancy {worst:.2e} (<=2e-2), lambda=0 state error {zero_gap:.2e}"


@_timed(8, "critical-point divergence signature of the derivative", 60.0)
def criterion_8():
    ok = True
    notes = []
    for r in (3, 4, 5):
        extrema = []
        for h in (1e-2, 1e-3, 1e-4):
            sweep = ising.nem_sweep(0.0, 2.0, 201, r, h)
            if h == 1e-3:
                conc = max(
                    measures.concurrence_two_qubit(ising.two_site_rdm(row.lam, r))
                    for row in sweep.rows
                )
                nem_max = max(row.nem for row in sweep.rows)
                nem_zero = abs(sweep.rows[0].nem)
                if conc > ZERO_TOL:
                    ok = False
                    notes.append(f"r={r}: nonzero concurrence {conc:.1e}")
                if nem_max > 0.0 or nem_zero > ZERO_TOL:
                    ok = False
                    notes.append(f"r={r}: positive or nonvanishing NEM at lambda=0")
            loc, mag = sweep.extremum()
            extrema.append((h, loc, mag))
        for h, loc, _ in extrema:
            if abs(loc - 1.0) > 0.05:
                ok = False
                notes.append(f"r={r}, h={h}: extremum at {loc}")
        mags = [m for _, _, m in extrema]
        if not (mags[0] < mags[1] < mags[2]):
            ok = False
            notes.append(f"r={r}: magnitudes not increasing {mags}")
        notes.append(
            f"r={r}: extremum at {extrema[-1][1]:.2f}, |dN/dl| = "
            + "/".join(f"{m:.2f}" for m in mags)
        )
    return ok, "; ".join(notes)


@_timed(9, "invariance and monotonicity property suites", None)
def criterion_9():
    rng = np.random.default_rng(909)
    worst_lu = 0.0
    for _ in range(100):
        rho = measures.random_two_qubit_density(rng)
        u_local = kron(measures.random_unitary(2, rng), measures.random_unitary(2, rng))
        rotated = validate_density(u_local @ rho.matrix @ u_local.conj().T, (2, 2))
        worst_lu = max(
            worst_lu,
            abs(measures.lambda_two_qubit(rotated).lam - measures.lambda_two_qubit(rho).lam),
        )

    worst_mix = 0.0
    for trial in range(1000):
        k = int(rng.integers(2, 5))
        parts = [nem.sample_separable(90_000 + 7 * trial + j, (trial + j) % 8 + 1) for j in range(k)]
        weights = rng.dirichlet(np.ones(k))
        mix = validate_density(sum(w * p.matrix for w, p in zip(weights, parts)), (2, 2))
        bound = sum(w * nem.nem_two_qubit(p) for w, p in zip(weights, parts))
        worst_mix = max(worst_mix, nem.nem_two_qubit(mix) - bound)

    worst_locc = 0.0
    for trial in range(1000):
        rho = nem.sample_separable(91_000 + trial, trial % 8 + 1)
        kraus = nem.sample_local_kraus(rng, int(rng.integers(2, 5)))
        magnitude = -nem.nem_two_qubit(rho)
        averaged = 0.0
        for k_op in kraus:
            op = kron(k_op, np.eye(2))
            out = op @ rho.matrix @ op.conj().T
            prob = float(np.trace(out).real)
            if prob < 1e-12:
                continue
            averaged += prob * -nem.nem_two_qubit(validate_density(out / prob, (2, 2)))
        worst_locc = max(worst_locc, averaged - magnitude)

    ok = worst_lu <= 1e-10 and worst_mix <= 1e-10 and worst_locc <= 1e-9
    return ok, (
        f"local-unitary drift {worst_lu:.2e} (<=1e-10), mixing violation {worst_mix:.2e} "
        f"(<=1e-10), channel-average increase {worst_locc:.2e} (<=1e-9)"
    )


ALL_CRITERIA = (
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
)


def run_suite(indices=None, report=print) -> list[CriterionResult]:
    """Run selected criteria (default all) and report one line per criterion."""
    selected = set(indices) if indices else None
    results = []
    for criterion in ALL_CRITERIA:
        if selected is not None and criterion.index not in selected:
            continue
        result = criterion()
        results.append(result)
        if report is not None:
            report(result.line())
    return results
