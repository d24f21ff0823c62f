"""Per-hop gradient-share aggregation for over-squashing analysis.

Hop distances come from BFS around the chiral center. Gradient norms are
an external input (they require backpropagation through a trained model):
a JSONL file of ``{"sample_index": i, "norms": [...]}`` records, one per
sample. Aggregation pools every node at distance d across all graphs,
averages, and normalizes the averages over d = 1..D so they sum to 1. The
center (d = 0) never enters the profile.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Sequence

from .errors import DisconnectedGraphError, GradientInputError, MalformedRecordError
from .model import GraphSample
from .pipeline import format_float


@dataclass(frozen=True, slots=True)
class HopGradientProfile:
    distances: tuple[int, ...]  # 1..D
    g_bar: tuple[float, ...]  # average norm per distance
    g_hat: tuple[float, ...]  # normalized shares, summing to 1
    node_counts: tuple[int, ...]  # pooled node count per distance


def hop_distances(sample: GraphSample) -> list[int]:
    """BFS shortest-path length from the chiral center to every node."""
    n = sample.node_count
    adj: dict[int, list[int]] = {i: [] for i in range(n)}
    for u, v in sample.edges:
        adj[u].append(v)
    dist = [-1] * n
    dist[sample.chiral_center] = 0
    frontier = [sample.chiral_center]
    while frontier:
        nxt = []
        for u in frontier:
            for v in adj[u]:
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    nxt.append(v)
        frontier = nxt
    if any(d < 0 for d in dist):
        missing = [i for i, d in enumerate(dist) if d < 0]
        raise DisconnectedGraphError(f"nodes {missing} are unreachable from the center")
    return dist


def aggregate_gradient_profile(
    samples: Sequence[GraphSample],
    norms: Sequence[Sequence[float]],
    distance: int,
) -> HopGradientProfile:
    """Average g(v) over the pooled nodes at each hop distance, then normalize."""
    if len(norms) != len(samples):
        raise GradientInputError(
            f"{len(norms)} norm rows for {len(samples)} samples"
        )
    sums = [0.0] * (distance + 1)
    counts = [0] * (distance + 1)
    for i, (sample, row) in enumerate(zip(samples, norms)):
        if len(row) != sample.node_count:
            raise GradientInputError(
                f"sample {i}: {len(row)} norms for {sample.node_count} nodes"
            )
        for value, d in zip(row, hop_distances(sample)):
            if value < 0:
                raise GradientInputError(f"sample {i}: negative norm {value!r}")
            if 1 <= d <= distance:
                sums[d] += value
                counts[d] += 1
    g_bar = [sums[d] / counts[d] if counts[d] else 0.0 for d in range(1, distance + 1)]
    total = sum(g_bar)
    if total <= 0.0:
        raise GradientInputError("all gradient norms are zero; shares are undefined")
    g_hat = [g / total for g in g_bar]
    return HopGradientProfile(
        distances=tuple(range(1, distance + 1)),
        g_bar=tuple(g_bar),
        g_hat=tuple(g_hat),
        node_counts=tuple(counts[1:]),
    )


def load_gradient_norms(
    path: str | os.PathLike, expected_count: int | None = None
) -> list[list[float]]:
    """Read and validate the per-sample norm table, returned in index order."""
    rows: dict[int, list[float]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped:
                raise MalformedRecordError("blank line in gradient file", lineno)
            try:
                obj = json.loads(stripped)
            except json.JSONDecodeError as exc:
                raise MalformedRecordError(f"invalid JSON: {exc.msg}", lineno) from None
            if not isinstance(obj, dict) or "sample_index" not in obj or "norms" not in obj:
                raise MalformedRecordError(
                    "record must carry sample_index and norms", lineno
                )
            index = obj["sample_index"]
            if not isinstance(index, int) or isinstance(index, bool) or index < 0:
                raise MalformedRecordError(f"bad sample_index {index!r}", lineno)
            if index in rows:
                raise GradientInputError(f"duplicate sample_index {index}")
            values = obj["norms"]
            if not isinstance(values, list):
                raise MalformedRecordError("norms must be a list", lineno)
            row = []
            for v in values:
                if isinstance(v, bool) or not isinstance(v, (int, float)):
                    raise MalformedRecordError(f"norm must be a number, got {v!r}", lineno)
                if v < 0:
                    raise GradientInputError(f"sample {index}: negative norm {v!r}")
                row.append(float(v))
            rows[index] = row
    count = expected_count if expected_count is not None else len(rows)
    missing = [i for i in range(count) if i not in rows]
    extra = [i for i in rows if i >= count]
    if missing or extra:
        raise GradientInputError(
            f"sample indices do not align: missing {missing}, unexpected {extra}"
        )
    return [rows[i] for i in range(count)]


def write_profile_csv(profile: HopGradientProfile, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("d,g_bar,g_hat\n")
        for d, g, h in zip(profile.distances, profile.g_bar, profile.g_hat):
            fh.write(f"{d},{format_float(g)},{format_float(h)}\n")
