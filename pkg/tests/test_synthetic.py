"""Planted two-plane benchmark generator."""

import numpy as np
import pytest

from msa.synthetic import planted_benchmark, random_orthogonal


class TestRandomOrthogonal:
    def test_orthogonal(self, rng):
        q = random_orthogonal(rng, 7)
        assert np.allclose(q.T @ q, np.eye(7), atol=1e-12)

    def test_deterministic_per_seed(self):
        a = random_orthogonal(np.random.default_rng(5), 4)
        b = random_orthogonal(np.random.default_rng(5), 4)
        assert np.array_equal(a, b)


class TestPlantedBenchmark:
    def test_shapes_and_labels(self):
        src, tgt, info = planted_benchmark(seed=0)
        assert src.data.shape == (200, 8)
        assert tgt.data.shape == (200, 8)
        assert set(src.labels.tolist()) == {0, 1}
        assert set(tgt.labels.tolist()) == {0, 1}
        assert np.sum(src.labels == 0) == 100

    def test_reproducible(self):
        a_src, a_tgt, _ = planted_benchmark(seed=4)
        b_src, b_tgt, _ = planted_benchmark(seed=4)
        assert np.array_equal(a_src.data, b_src.data)
        assert np.array_equal(a_tgt.data, b_tgt.data)
        assert np.array_equal(a_src.labels, b_src.labels)

    def test_seeds_differ(self):
        a, _, _ = planted_benchmark(seed=0)
        b, _, _ = planted_benchmark(seed=1)
        assert not np.array_equal(a.data, b.data)

    def test_planes_are_orthonormal_frames(self):
        _, _, info = planted_benchmark(seed=0)
        for key in ("source_planes", "target_planes"):
            for plane in info[key]:
                assert plane.shape == (8, 2)
                assert np.allclose(plane.T @ plane, np.eye(2), atol=1e-10)

    def test_source_planes_orthogonal_to_each_other(self):
        _, _, info = planted_benchmark(seed=0)
        p1, p2 = info["source_planes"]
        assert np.allclose(p1.T @ p2, 0.0, atol=1e-10)

    def test_angles_fall_in_requested_bands(self):
        for seed in range(5):
            _, _, info = planted_benchmark(seed=seed)
            a0, a1 = info["angles_deg"]
            assert 50.0 <= a0 <= 56.0
            assert 12.0 <= a1 <= 20.0

    def test_samples_hug_their_planes(self):
        src, _, info = planted_benchmark(seed=0, noise=0.01)
        # every sample sits within a few noise lengths of one of the planes
        for x in src.data:
            best = min(
                np.linalg.norm(x - plane @ (plane.T @ x))
                for plane in info["source_planes"]
            )
            assert best < 0.1

    def test_noise_scales(self):
        clean_src, _, info = planted_benchmark(seed=0, noise=0.0)
        residuals = []
        for x in clean_src.data:
            best = min(
                np.linalg.norm(x - plane @ (plane.T @ x))
                for plane in info["source_planes"]
            )
            residuals.append(best)
        assert max(residuals) < 1e-10

    def test_cluster_count_parameter(self):
        src, tgt, _ = planted_benchmark(seed=0, n_per_cluster=10)
        assert src.data.shape == (40, 8)
        assert tgt.data.shape == (40, 8)
