"""Greedy pairing of source subspaces with target subspaces by distance."""

from __future__ import annotations

from dataclasses import dataclass

from .exceptions import DegenerateDataError
from .grassmann import DistanceMatrix


@dataclass(frozen=True)
class Matching:
    """Matched (source_id, target_id, distance) triples plus the surplus policy.

    ``pairs`` holds one triple per source subspace, sorted by source id.
    ``policy`` records how a size mismatch between the two collections was
    handled.
    """

    pairs: tuple[tuple[int, int, float], ...]
    policy: str

    def target_for(self, source_id: int) -> int:
        for sid, tid, _ in self.pairs:
            if sid == source_id:
                return tid
        raise KeyError(f"no pair for source subspace {source_id}")


def greedy_match(distances: DistanceMatrix) -> Matching:
    """Match every source subspace to a target subspace, nearest first.

    Repeatedly takes the globally smallest entry among still-unmatched rows
    and columns, breaking ties by lowest source id, then lowest target id.
    When sources outnumber targets, each leftover source is matched to its
    individually nearest target, reusing targets already taken.  When targets
    outnumber sources, the leftovers stay unmatched.

    Args:
        distances: DistanceMatrix between the two collections.

    Returns:
        Matching with one pair per source subspace.
    """
    values = distances.values
    if values.size == 0:
        raise DegenerateDataError("cannot match against an empty distance matrix")

    entries = sorted(
        (float(values[i, j]), rid, cid)
        for i, rid in enumerate(distances.row_ids)
        for j, cid in enumerate(distances.col_ids)
    )
    matched: dict[int, tuple[int, float]] = {}
    taken_cols: set[int] = set()
    for dist, rid, cid in entries:
        if rid in matched or cid in taken_cols:
            continue
        matched[rid] = (cid, dist)
        taken_cols.add(cid)

    row_index = {rid: i for i, rid in enumerate(distances.row_ids)}
    leftovers = [rid for rid in distances.row_ids if rid not in matched]
    for rid in leftovers:
        i = row_index[rid]
        best = min(
            (float(values[i, j]), cid) for j, cid in enumerate(distances.col_ids)
        )
        matched[rid] = (best[1], best[0])

    if len(distances.row_ids) == len(distances.col_ids):
        policy = "one_to_one"
    elif len(distances.row_ids) > len(distances.col_ids):
        policy = "surplus_sources_reuse_nearest_target"
    else:
        policy = "surplus_targets_unmatched"

    pairs = tuple(
        (rid, matched[rid][0], matched[rid][1]) for rid in sorted(matched)
    )
    return Matching(pairs=pairs, policy=policy)
