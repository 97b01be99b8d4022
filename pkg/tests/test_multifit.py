"""Greedy decomposition of a dataset into a union of subspaces."""

import numpy as np
import pytest
from scipy.linalg import subspace_angles

from msa.exceptions import ConfigError, DegenerateDataError
from msa.multifit import FitConfig, SubspaceCollection, fit_multi
from msa.subspace import FeatureMatrix, Subspace, fit_pca, reconstruction_errors
from msa.synthetic import planted_benchmark

from conftest import random_orthonormal


class TestFitConfig:
    def test_defaults(self):
        cfg = FitConfig(k=3, tau=0.4)
        assert cfg.max_subspaces == 16

    def test_validation(self):
        with pytest.raises(ConfigError):
            FitConfig(k=0, tau=0.5)
        with pytest.raises(ConfigError):
            FitConfig(k=2, tau=0.0)
        with pytest.raises(ConfigError):
            FitConfig(k=2, tau=1.5)
        with pytest.raises(ConfigError):
            FitConfig(k=2, tau=0.5, max_subspaces=0)

    def test_tau_one_allowed(self):
        FitConfig(k=2, tau=1.0)


class TestSubspaceCollection:
    def test_accessors(self, rng):
        basis = random_orthonormal(rng, 4, 2)
        sub = Subspace(basis, np.zeros(4))
        coll = SubspaceCollection(
            subspaces=(sub, sub), assignment=np.array([1, 2, 1, 2])
        )
        assert len(coll) == 2
        assert coll.ids == (1, 2)
        assert coll.ambient_dim == 4
        assert coll.subspace(2) is coll.subspaces[1]
        assert coll.sample_counts() == {1: 2, 2: 2}

    def test_every_id_must_appear(self, rng):
        sub = Subspace(random_orthonormal(rng, 4, 2), np.zeros(4))
        with pytest.raises(DegenerateDataError):
            SubspaceCollection(subspaces=(sub, sub), assignment=np.array([1, 1, 1]))

    def test_assignment_bounds(self, rng):
        sub = Subspace(random_orthonormal(rng, 4, 2), np.zeros(4))
        with pytest.raises(DegenerateDataError):
            SubspaceCollection(subspaces=(sub,), assignment=np.array([1, 2]))


class TestFitMulti:
    def test_single_subspace_when_tau_is_one(self, rng):
        """tau = 1.0 cannot produce outliers, so the fit is plain PCA."""
        X = rng.normal(size=(40, 6))
        fit = fit_multi(X, FitConfig(k=3, tau=1.0))
        ref = fit_pca(X, 3)
        assert len(fit) == 1
        assert np.array_equal(fit.subspace(1).basis, ref.basis)
        assert np.array_equal(fit.subspace(1).mean, ref.mean)
        assert np.all(fit.assignment == 1)

    def test_single_plane_stays_single(self, rng):
        basis = random_orthonormal(rng, 8, 2)
        coeff = rng.normal(size=(60, 2)) * [3.0, 1.5]
        X = coeff @ basis.T + rng.normal(size=(60, 8)) * 0.01
        fit = fit_multi(X, FitConfig(k=2, tau=0.3))
        assert len(fit) == 1

    def test_recovers_planted_planes(self):
        """Two orthogonal planes come back within 5 degrees, assignments pure."""
        for seed in range(5):
            src, tgt, info = planted_benchmark(seed=seed)
            for fm, planes in ((src, info["source_planes"]), (tgt, info["target_planes"])):
                fit = fit_multi(fm, FitConfig(k=2, tau=0.3))
                assert len(fit) == 2
                assert fit.tau_escalations == 0
                for sub in fit.subspaces:
                    worst = min(
                        np.degrees(subspace_angles(sub.basis, plane)).max()
                        for plane in planes
                    )
                    assert worst < 5.0

    def test_error_contract(self, rng):
        """Non-final subspaces reconstruct every assigned sample below tau."""
        X = np.vstack([
            rng.normal(size=(40, 2)) @ random_orthonormal(rng, 6, 2).T,
            rng.normal(size=(40, 2)) @ random_orthonormal(rng, 6, 2).T,
            rng.normal(size=(10, 6)) * 2.0,
        ])
        cfg = FitConfig(k=2, tau=0.25)
        fit = fit_multi(X, cfg)
        assert fit.tau_escalations == 0
        last = len(fit)
        for sid in fit.ids:
            if sid == last:
                continue
            members = X[fit.assignment == sid]
            errs = reconstruction_errors(members, fit.subspace(sid))
            assert np.all(errs < cfg.tau)

    def test_termination_and_coverage_randomized(self, rng):
        """Random data and configs: always terminates, assigns every sample."""
        for _ in range(50):
            n = int(rng.integers(5, 80))
            d = int(rng.integers(2, 10))
            k = int(rng.integers(1, min(n - 1, d) + 1))
            tau = float(rng.uniform(0.05, 1.0))
            X = rng.normal(size=(n, d))
            if rng.random() < 0.3:
                X[: n // 2] @= np.diag(rng.uniform(0.1, 2.0, size=d))
            cfg = FitConfig(k=k, tau=tau, max_subspaces=int(rng.integers(1, 8)))
            fit = fit_multi(X, cfg)
            assert len(fit) <= cfg.max_subspaces
            assert fit.assignment.shape == (n,)
            assert set(np.unique(fit.assignment)) == set(fit.ids)
            for sub in fit.subspaces:
                assert 1 <= sub.rank <= k

    def test_max_subspaces_caps_growth(self, rng):
        planes = [random_orthonormal(rng, 10, 1) for _ in range(6)]
        X = np.vstack([
            rng.normal(size=(15, 1)) @ p.T + rng.normal(size=(15, 10)) * 0.001
            for p in planes
        ])
        fit = fit_multi(X, FitConfig(k=1, tau=0.05, max_subspaces=3))
        assert len(fit) == 3

    def test_ids_are_one_based_and_dense(self, rng):
        X = rng.normal(size=(50, 5))
        fit = fit_multi(X, FitConfig(k=2, tau=0.3))
        assert fit.ids == tuple(range(1, len(fit) + 1))

    def test_accepts_feature_matrix(self, rng):
        X = rng.normal(size=(30, 4))
        a = fit_multi(FeatureMatrix(X), FitConfig(k=2, tau=0.4))
        b = fit_multi(X, FitConfig(k=2, tau=0.4))
        assert len(a) == len(b)
        assert np.array_equal(a.assignment, b.assignment)

    def test_degenerate_pool_rejected(self):
        with pytest.raises(DegenerateDataError):
            fit_multi(np.ones((5, 3)), FitConfig(k=1, tau=0.5))
