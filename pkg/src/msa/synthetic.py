"""Synthetic rotated-domain benchmark with planted subspace structure.

Each domain holds samples from two orthogonal 2-dimensional planes in R^8.
Every plane carries two sign-clusters on its leading axis, and the cluster
sign encodes the class label with opposite conventions on the two planes.
The target domain re-draws the same coefficient law in rotated planes: the
dominant plane is rotated toward the other plane's cluster axis, which drives
raw-space nearest-neighbour matching across the wrong class boundary, while
the quieter plane is rotated mildly toward previously unused directions.
"""

from __future__ import annotations

import math

import numpy as np

from .subspace import FeatureMatrix


def random_orthogonal(rng: np.random.Generator, n: int) -> np.ndarray:
    """A random n x n orthogonal matrix drawn via QR."""
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def _cluster_coefficients(rng, n, offset, spread_major, spread_minor, sign):
    major = sign * offset + rng.normal(0.0, spread_major, size=n)
    minor = rng.normal(0.0, spread_minor, size=n)
    return np.column_stack([major, minor])


def planted_benchmark(
    seed: int = 0,
    n_per_cluster: int = 50,
    noise: float = 0.01,
    offsets: tuple[float, float] = (2.5, 0.9),
    spreads_major: tuple[float, float] = (0.6, 0.3),
    spreads_minor: tuple[float, float] = (1.3, 0.25),
    theta_deg: tuple[tuple[float, float], tuple[float, float]] = (
        (50.0, 56.0),
        (12.0, 20.0),
    ),
):
    """Generate one source/target domain pair with known structure.

    Args:
        seed: seed for every random draw.
        n_per_cluster: samples per sign-cluster; each domain ends up with
            4 * n_per_cluster samples.
        noise: standard deviation of isotropic ambient noise.
        offsets: cluster offset along each plane's leading axis.
        spreads_major: in-cluster spread along the leading axis, per plane.
        spreads_minor: spread along each plane's second axis.
        theta_deg: (low, high) rotation-angle range in degrees, per plane.

    Returns:
        (source, target, info): two labelled FeatureMatrix objects and a dict
        with the planted plane bases of both domains ("source_planes",
        "target_planes") and the drawn rotation angles ("angles_deg").
    """
    rng = np.random.default_rng(seed)
    frame = random_orthogonal(rng, 8)
    planes_src = (frame[:, 0:2], frame[:, 2:4])
    fresh = frame[:, 4:6]

    angles = tuple(
        math.radians(rng.uniform(low, high)) for low, high in theta_deg
    )
    # Plane 1 rotates axis-for-axis into plane 2; plane 2 into fresh space.
    planes_tgt = (
        math.cos(angles[0]) * planes_src[0] + math.sin(angles[0]) * planes_src[1],
        math.cos(angles[1]) * planes_src[1] + math.sin(angles[1]) * fresh,
    )

    # Sign-to-class conventions are crossed between the planes.
    class_of_sign = ({+1: 0, -1: 1}, {+1: 1, -1: 0})

    def make_domain(planes):
        blocks, labels = [], []
        for p, basis in enumerate(planes):
            for sign in (+1, -1):
                coeff = _cluster_coefficients(
                    rng,
                    n_per_cluster,
                    offsets[p],
                    spreads_major[p],
                    spreads_minor[p],
                    sign,
                )
                blocks.append(coeff @ basis.T)
                labels.append(np.full(n_per_cluster, class_of_sign[p][sign]))
        data = np.vstack(blocks)
        data += rng.normal(0.0, noise, size=data.shape)
        label_vec = np.concatenate(labels)
        order = rng.permutation(data.shape[0])
        return FeatureMatrix(data[order], label_vec[order])

    source = make_domain(planes_src)
    target = make_domain(planes_tgt)
    info = {
        "source_planes": planes_src,
        "target_planes": planes_tgt,
        "angles_deg": tuple(math.degrees(a) for a in angles),
    }
    return source, target, info
