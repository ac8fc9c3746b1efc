import json

import numpy as np
import pytest

from negent.measures import (
    isotropic_state,
    lambda_two_qubit,
    ppt_min_eigenvalue,
    random_qubit_pure,
)
from negent.nem import (
    EntangledInput,
    NoFeasiblePoint,
    OracleConfig,
    bell_phi_plus,
    is_ess_two_qubit,
    nem_diagonal,
    nem_isotropic_lower_bound,
    nem_oracle,
    nem_pure_product,
    nem_two_qubit,
    optimal_mixer,
    sample_local_kraus,
    sample_separable,
)
from negent.qcore import kron, validate_density


def dm(matrix, dims=(2, 2)):
    return validate_density(np.asarray(matrix, dtype=complex), dims)


def bell_dm():
    return bell_phi_plus().to_density()


class TestExactValue:
    def test_maximally_mixed(self):
        assert abs(nem_two_qubit(dm(np.eye(4) / 4)) + 0.5) <= 1e-12

    def test_diagonal(self):
        assert abs(nem_two_qubit(dm(np.diag([0.4, 0.3, 0.2, 0.1]))) + 0.4) <= 1e-12

    def test_polarized_product(self):
        assert nem_two_qubit(dm(np.diag([1.0, 0, 0, 0]))) == 0.0

    def test_rejects_entangled(self):
        with pytest.raises(EntangledInput):
            nem_two_qubit(bell_dm())

    def test_never_positive(self):
        rng = np.random.default_rng(31)
        for i in range(50):
            assert nem_two_qubit(sample_separable(1000 + i, int(rng.integers(1, 9)))) <= 0.0


class TestDiagonalClosedForm:
    def test_examples(self):
        assert abs(nem_diagonal([0.4, 0.3, 0.2, 0.1]) + 0.4) <= 1e-15
        assert abs(nem_diagonal([0.25, 0.25, 0.25, 0.25]) + 0.5) <= 1e-15
        assert nem_diagonal([0.5, 0.5, 0.0, 0.0]) == 0.0

    def test_matches_exact_value(self):
        rng = np.random.default_rng(32)
        for _ in range(50):
            w = rng.dirichlet(np.ones(4))
            rho = dm(np.diag(w))
            assert abs(nem_diagonal(w) - nem_two_qubit(rho)) <= 1e-10

    def test_gates(self):
        with pytest.raises(ValueError):
            nem_diagonal([0.5, 0.5, 0.1, -0.1])
        with pytest.raises(ValueError):
            nem_diagonal([0.5, 0.3, 0.1, 0.2])


class TestOptimalMixer:
    def test_maximally_mixed(self):
        cert = optimal_mixer(dm(np.eye(4) / 4), 0.01)
        assert abs(cert.cost - 0.51) <= 1e-9
        assert cert.mixed_lambda > 0.0

    def test_polarized_product_uses_bell(self):
        cert = optimal_mixer(dm(np.diag([1.0, 0, 0, 0])), 0.01)
        assert np.abs(cert.mixer.matrix - bell_dm().matrix).max() <= 1e-12
        assert abs(cert.t - 0.01) <= 1e-15
        assert abs(cert.cost - 0.01) <= 1e-12
        assert cert.mixed_lambda > 0.0

    def test_edge_state(self):
        cert = optimal_mixer(dm(np.diag([0.5, 0.5, 0.0, 0.0])), 1e-3)
        assert abs(cert.cost - 1e-3) <= 1e-9
        mixed = dm((np.diag([0.5, 0.5, 0.0, 0.0]) + cert.t * cert.mixer.matrix) / (1 + cert.t))
        assert ppt_min_eigenvalue(mixed) < 0.0

    def test_cost_dominates_magnitude(self):
        # any certificate cost must stay above the exact NEM magnitude
        rng = np.random.default_rng(33)
        for i in range(40):
            rho = sample_separable(2000 + i, int(rng.integers(1, 9)))
            lam = lambda_two_qubit(rho).lam
            cert = optimal_mixer(rho, 1e-3)
            assert cert.cost >= -lam - 1e-9
            assert cert.mixed_lambda > 0.0

    def test_rejects_entangled(self):
        with pytest.raises(EntangledInput):
            optimal_mixer(bell_dm(), 1e-3)


class TestEdgeStateDetection:
    def test_flat_pair_is_edge(self):
        assert is_ess_two_qubit(dm(np.diag([0.5, 0.5, 0.0, 0.0]))) is True

    def test_maximally_mixed_is_not(self):
        assert is_ess_two_qubit(dm(np.eye(4) / 4)) is False

    def test_products_are_edge(self):
        rng = np.random.default_rng(34)
        for _ in range(20):
            v = np.kron(random_qubit_pure(rng), random_qubit_pure(rng))
            assert is_ess_two_qubit(dm(np.outer(v, v.conj()))) is True


class TestIsotropicBound:
    def test_boundary_is_zero(self):
        for d in (2, 3, 5):
            assert nem_isotropic_lower_bound(d, 1.0 / d) == pytest.approx(0.0, abs=1e-15)

    def test_qutrit_origin(self):
        assert abs(nem_isotropic_lower_bound(3, 0.0) + np.sqrt(3) / 3) <= 1e-12

    def test_tight_at_qubits(self):
        bound = nem_isotropic_lower_bound(2, 0.3)
        assert abs(bound + 0.4) <= 1e-12
        exact = lambda_two_qubit(isotropic_state(2, 0.3)).lam
        assert abs(bound - exact) <= 1e-10

    def test_rejects_entangled_range(self):
        with pytest.raises(ValueError):
            nem_isotropic_lower_bound(3, 0.5)


class TestPureProductCertificates:
    def test_polarized(self):
        value, certs = nem_pure_product([1, 0], [1, 0], [1e-6])
        assert value == 0.0
        assert certs[0].mixed_lambda > 0.0

    def test_rotation_invariant(self):
        rng = np.random.default_rng(35)
        a = random_qubit_pure(rng)
        b = random_qubit_pure(rng)
        value, certs = nem_pure_product(a, b, [1e-6, 1e-3])
        assert value == 0.0
        assert all(c.mixed_lambda > 0.0 for c in certs)

    def test_costs_track_t(self):
        _, certs = nem_pure_product([1, 0], [0, 1], [1.0, 0.1, 0.01])
        costs = [c.cost for c in certs]
        assert np.allclose(costs, [1.0, 0.1, 0.01], atol=1e-12)
        assert costs[0] > costs[1] > costs[2]


class TestSampling:
    def test_single_component_is_edge(self):
        rho = sample_separable(77, 1)
        assert abs(lambda_two_qubit(rho).lam) <= 1e-7

    def test_ppt_by_construction(self):
        for seed in range(30):
            assert ppt_min_eigenvalue(sample_separable(seed, 4)) >= -1e-10

    def test_deterministic(self):
        a = sample_separable(123456, 5)
        b = sample_separable(123456, 5)
        assert np.array_equal(a.matrix, b.matrix)

    def test_k_gate(self):
        with pytest.raises(ValueError):
            sample_separable(1, 9)


def entangling_threshold(rho_diag, sigma_vec, lo=1e-6, hi=1e6):
    """Bisection on the mixing weight for the PT sign change (independent oracle)."""

    def entangled(t):
        mixed = dm((rho_diag + t * np.outer(sigma_vec, sigma_vec.conj())) / (1 + t))
        return ppt_min_eigenvalue(mixed) < 0.0

    if not entangled(hi):
        return np.inf
    for _ in range(200):
        mid = np.sqrt(lo * hi)
        if entangled(mid):
            hi = mid
        else:
            lo = mid
    return hi


class TestDiagonalMixerFamily:
    """Threshold costs of the two mixer families against the closed form."""

    def test_cos_sin_family_on_dominant_diagonal(self):
        rng = np.random.default_rng(36)
        for _ in range(5):
            a, d = 0.3 + 0.1 * rng.uniform(), 0.25
            b = c_w = (1.0 - a - d) / 2  # ad >= bc
            rho = np.diag([a, b, c_w, d])
            costs = []
            for theta in np.linspace(0.05, np.pi / 2 - 0.05, 25):
                vec = np.array([np.cos(theta), 0, 0, np.sin(theta)], dtype=complex)
                conc = 2 * abs(np.cos(theta) * np.sin(theta))
                t0 = entangling_threshold(rho, vec)
                costs.append(t0 * conc)
            assert abs(min(costs) - 2 * np.sqrt(b * c_w)) <= 1e-6

    def test_swap_family_reaches_minimum_otherwise(self):
        rng = np.random.default_rng(37)
        for _ in range(5):
            b, c_w = 0.3 + 0.1 * rng.uniform(), 0.3
            a = d = (1.0 - b - c_w) / 2  # ad < bc
            rho = np.diag([a, b, c_w, d])
            vec = np.zeros(4, dtype=complex)
            vec[1] = np.sqrt(b / (b + c_w))
            vec[2] = np.sqrt(c_w / (b + c_w))
            conc = 2 * np.sqrt(b * c_w) / (b + c_w)
            t0 = entangling_threshold(rho, vec)
            assert abs(t0 * conc - 2 * np.sqrt(a * d)) <= 1e-6


class TestChannelMonotonicity:
    def test_average_magnitude_never_grows(self):
        rng = np.random.default_rng(38)
        for trial in range(100):
            rho = sample_separable(3000 + trial, trial % 8 + 1)
            magnitude = -nem_two_qubit(rho)
            averaged = 0.0
            for k_op in sample_local_kraus(rng, int(rng.integers(2, 5))):
                op = kron(k_op, np.eye(2))
                out = op @ rho.matrix @ op.conj().T
                prob = float(np.trace(out).real)
                if prob < 1e-12:
                    continue
                averaged += prob * -nem_two_qubit(dm(out / prob))
            assert averaged <= magnitude + 1e-9


class TestOracle:
    def test_maximally_mixed(self):
        est, cert = nem_oracle(dm(np.eye(4) / 4), OracleConfig(restarts=10, seed=7))
        assert abs(est + 0.5) <= 1e-2
        assert cert.mixed_lambda > 0.0
        assert cert.cost >= 0.5 - 1e-9

    def test_diagonal(self):
        est, _ = nem_oracle(
            dm(np.diag([0.4, 0.3, 0.2, 0.1])), OracleConfig(restarts=10, seed=8)
        )
        assert abs(est + 0.4) <= 1e-2

    def test_product_state_vanishes(self):
        cfg = OracleConfig(restarts=8, max_iters=600, feasibility_delta=1e-5, seed=9)
        est, _ = nem_oracle(dm(np.diag([1.0, 0, 0, 0])), cfg)
        assert -1e-4 <= est <= 0.0

    def test_deterministic(self):
        rho = sample_separable(555, 4)
        cfg = OracleConfig(restarts=6, max_iters=400, seed=11)
        first = nem_oracle(rho, cfg)
        second = nem_oracle(rho, cfg)
        assert first[0] == second[0]
        assert first[1].t == second[1].t

    def test_no_feasible_point(self):
        cfg = OracleConfig(restarts=2, max_iters=150, t_max=1e-5, seed=12)
        with pytest.raises(NoFeasiblePoint):
            nem_oracle(dm(np.eye(4) / 4), cfg)

    def test_higher_dimensional_upper_bound(self):
        # separable qutrit isotropic state: the maximally entangled mixer
        # reaches cost |bound|, so a working search cannot land far below
        # the closed-form bound, and never above zero
        rho = isotropic_state(3, 0.2)
        cfg = OracleConfig(restarts=6, max_iters=800, seed=13)
        est, cert = nem_oracle(rho, cfg)
        assert cert.mixed_lambda > 0.0
        assert nem_isotropic_lower_bound(3, 0.2) - 0.05 <= est <= 0.0


class TestOracleConfig:
    def test_json_roundtrip(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(
            json.dumps(
                {
                    "restarts": 3,
                    "max_iters": 100,
                    "feasibility_delta": 1e-4,
                    "seed": 42,
                    "t_max": 10.0,
                }
            )
        )
        cfg = OracleConfig.from_json(path)
        assert cfg.restarts == 3
        assert cfg.t_max == 10.0

    def test_gates(self):
        with pytest.raises(ValueError):
            OracleConfig(restarts=0)
        with pytest.raises(ValueError):
            OracleConfig(feasibility_delta=0.5)
