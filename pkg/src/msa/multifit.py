"""Greedy decomposition of a dataset into a union of low-rank subspaces.

The fitting loop peels one subspace at a time: fit a rank-k PCA to the
current pool, keep the samples it reconstructs well, refit on those, and
recurse on the rest.  The last subspace absorbs whatever remains, so every
sample ends up assigned to exactly one subspace.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigError, DegenerateDataError, DimensionMismatchError
from .subspace import FeatureMatrix, Subspace, fit_pca, reconstruction_errors


@dataclass(frozen=True)
class FitConfig:
    """Settings for :func:`fit_multi`.

    Args:
        k: requested dimension of each subspace, >= 1.
        tau: relative reconstruction-error threshold in (0, 1]; a sample with
            error below tau counts as an inlier of the current subspace.
            With tau = 1.0 the decomposition degenerates to a single PCA fit.
        max_subspaces: hard cap on the number of subspaces.
    """

    k: int
    tau: float
    max_subspaces: int = 16

    def __post_init__(self):
        if not isinstance(self.k, (int, np.integer)) or self.k < 1:
            raise ConfigError(f"k must be a positive integer, got {self.k!r}")
        if not 0.0 < self.tau <= 1.0:
            raise ConfigError(f"tau must lie in (0, 1], got {self.tau!r}")
        if self.max_subspaces < 1:
            raise ConfigError(
                f"max_subspaces must be >= 1, got {self.max_subspaces!r}"
            )


@dataclass(frozen=True, eq=False)
class SubspaceCollection:
    """An ordered set of subspaces plus the per-sample assignment.

    Subspace ids run from 1 to len(subspaces) in fit order.  ``assignment``
    maps each sample (by row index in the fitted data) to the id of the
    subspace it belongs to; every id appears at least once.

    ``tau_escalations`` counts how many times the fitting loop had to relax
    its error threshold to make progress; it is 0 on well-behaved data.
    """

    subspaces: tuple[Subspace, ...]
    assignment: np.ndarray
    tau_escalations: int = 0

    def __post_init__(self):
        subspaces = tuple(self.subspaces)
        if not subspaces:
            raise DegenerateDataError("a collection needs at least one subspace")
        dims = {s.ambient_dim for s in subspaces}
        if len(dims) != 1:
            raise DimensionMismatchError(
                f"subspaces live in different ambient dimensions: {sorted(dims)}"
            )
        assignment = np.array(self.assignment, dtype=np.int64)
        if assignment.ndim != 1:
            raise DimensionMismatchError("assignment must be a vector")
        m = len(subspaces)
        present = np.unique(assignment)
        if present.size == 0 or present[0] < 1 or present[-1] > m:
            raise DegenerateDataError(
                f"assignment ids must lie in 1..{m}, got {present.tolist()}"
            )
        if present.size != m:
            missing = sorted(set(range(1, m + 1)) - set(present.tolist()))
            raise DegenerateDataError(f"subspace ids {missing} have no samples")
        assignment.setflags(write=False)
        object.__setattr__(self, "subspaces", subspaces)
        object.__setattr__(self, "assignment", assignment)

    @property
    def ids(self) -> tuple[int, ...]:
        return tuple(range(1, len(self.subspaces) + 1))

    @property
    def ambient_dim(self) -> int:
        return self.subspaces[0].ambient_dim

    def __len__(self) -> int:
        return len(self.subspaces)

    def subspace(self, sid: int) -> Subspace:
        """The subspace with id ``sid`` (ids are 1-based)."""
        if not 1 <= sid <= len(self.subspaces):
            raise DimensionMismatchError(f"no subspace with id {sid}")
        return self.subspaces[sid - 1]

    def sample_counts(self) -> dict[int, int]:
        ids, counts = np.unique(self.assignment, return_counts=True)
        return {int(i): int(c) for i, c in zip(ids, counts)}


def _fittable(pool: np.ndarray) -> bool:
    """Whether a pool can support a PCA fit: >= 2 samples, not all identical."""
    return pool.shape[0] >= 2 and bool(np.any(pool != pool[0]))


def fit_multi(data, config: FitConfig) -> SubspaceCollection:
    """Decompose a dataset into a union of rank-<=k subspaces.

    Each round fits a rank-k PCA to the remaining pool and computes every
    pool sample's relative reconstruction error.  If fewer than k samples
    have error >= tau, or the would-be remainder cannot support another fit,
    the round's subspace (fitted on the whole pool) becomes the final one and
    absorbs every remaining sample.  Otherwise the subspace is refitted on
    the samples with error < tau, the pool samples the refit reconstructs
    within tau are assigned to it, and the loop recurses on the rest.

    A round whose threshold admits no inlier relaxes tau (doubling it, for
    that round only) until at least k samples qualify; ``tau_escalations``
    on the result counts these relaxations.

    Args:
        data: FeatureMatrix or (N, d) array with N >= 2.
        config: fitting settings; config.k must not exceed d.

    Returns:
        SubspaceCollection over the input samples.
    """
    X = data.data if isinstance(data, FeatureMatrix) else np.asarray(data, dtype=np.float64)
    if X.ndim != 2:
        raise DimensionMismatchError(f"expected an (N, d) array, got shape {X.shape}")
    n, d = X.shape
    if n < 2:
        raise DegenerateDataError(f"need at least 2 samples, got {n}")
    if config.k > d:
        raise ConfigError(f"k = {config.k} exceeds the feature dimension {d}")

    remaining = np.arange(n)
    assignment = np.zeros(n, dtype=np.int64)
    subspaces: list[Subspace] = []
    escalations = 0

    while True:
        sid = len(subspaces) + 1
        pool = X[remaining]
        base = fit_pca(pool, min(config.k, pool.shape[0]))
        errors = reconstruction_errors(pool, base)
        outliers = errors >= config.tau
        n_out = int(np.count_nonzero(outliers))

        final = (
            sid == config.max_subspaces
            or n_out < config.k
            or not _fittable(pool[outliers])
        )
        if final:
            subspaces.append(base)
            assignment[remaining] = sid
            break

        tau_eff = config.tau
        inliers = ~outliers
        if not inliers.any():
            # All errors sit at or above tau; relax the threshold until the
            # round has enough inliers to refit on.
            while int(np.count_nonzero(errors < tau_eff)) < config.k:
                tau_eff *= 2.0
                escalations += 1
            inliers = errors < tau_eff

        refit_pool = pool[inliers]
        if _fittable(refit_pool):
            base = fit_pca(refit_pool, min(config.k, refit_pool.shape[0]))
            errors = reconstruction_errors(pool, base)

        keep = errors < tau_eff
        while not keep.any():
            tau_eff *= 2.0
            escalations += 1
            keep = errors < tau_eff

        subspaces.append(base)
        assignment[remaining[keep]] = sid
        rest = remaining[~keep]
        if rest.size == 0:
            break
        if not _fittable(X[rest]):
            # Remainder too small or degenerate for another fit; fold it into
            # the subspace just added, which thereby becomes the final one.
            assignment[rest] = sid
            break
        remaining = rest

    return SubspaceCollection(
        subspaces=tuple(subspaces),
        assignment=assignment,
        tau_escalations=escalations,
    )
