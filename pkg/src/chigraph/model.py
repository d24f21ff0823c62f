"""Shared domain types and the canonical node-indexing scheme.

Indexing convention used everywhere in this package: the chiral center is
always node 0, and layer L (1-based) occupies node indices
``k*(L-1)+1 .. k*L``, where k is the layer width (3 for simple/crossed,
4 for classic). Within a layer, slots 1..3 are the bottom ring; classic
layers have a fourth slot holding the single top node.

All types are immutable after construction and safe to share across
threads or pickle to worker processes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import InvalidConfigError, InvariantViolationError

U64_MAX = (1 << 64) - 1


class ChiralityTag(str, Enum):
    NA = "NA"
    R = "R"
    S = "S"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


class SampleType(str, Enum):
    SIMPLE = "simple"
    CROSSED = "crossed"
    CLASSIC = "classic"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value

    @property
    def layer_width(self) -> int:
        """Nodes per layer: a triplet, or a quadruplet for classic."""
        return 4 if self is SampleType.CLASSIC else 3


def node_count(sample_type: SampleType, distance: int) -> int:
    """Total nodes: one center plus ``layer_width`` per layer."""
    return 1 + sample_type.layer_width * distance


def species_count(sample_type: SampleType, distance: int) -> int:
    """Distinct species drawn per sample.

    One for the center, one per intermediate layer, and a full ring
    (plus top node for classic) of distinct species for the final layer.
    """
    base = 5 if sample_type is SampleType.CLASSIC else 4
    return base + (distance - 1)


def undirected_edge_count(sample_type: SampleType, distance: int) -> int:
    k = sample_type.layer_width
    return k + k * (distance - 1)


def layer_nodes(sample_type: SampleType, layer: int) -> range:
    """Node indices of 1-based `layer`."""
    k = sample_type.layer_width
    return range(k * (layer - 1) + 1, k * layer + 1)


def layer_of_node(sample_type: SampleType, node: int) -> int:
    """Layer holding `node` (0 for the chiral center)."""
    if node == 0:
        return 0
    return (node - 1) // sample_type.layer_width + 1


def parent_of(sample_type: SampleType, node: int) -> int:
    """Parent of `node` under aligned slot wiring.

    Slot i of layer L attaches to slot i of layer L-1; layer-1 nodes
    attach to the center.
    """
    if node <= 0:
        raise ValueError("the chiral center has no parent")
    if node <= sample_type.layer_width:
        return 0
    return node - sample_type.layer_width


@dataclass(frozen=True, slots=True)
class GenerationConfig:
    """User-facing parameters governing one dataset."""

    sample_type: SampleType
    distance: int
    species_range: int
    noise: bool
    count: int
    master_seed: int

    def __post_init__(self) -> None:
        if self.distance < 1:
            raise InvalidConfigError(f"distance must be >= 1, got {self.distance}")
        if self.count < 1:
            raise InvalidConfigError(f"count must be >= 1, got {self.count}")
        needed = species_count(self.sample_type, self.distance)
        if self.species_range < needed:
            raise InvalidConfigError(
                f"species_range {self.species_range} cannot supply {needed} distinct "
                f"species for {self.sample_type.value} distance {self.distance}"
            )
        if not 0 <= self.master_seed <= U64_MAX:
            raise InvalidConfigError("master_seed must fit in an unsigned 64-bit value")


@dataclass(frozen=True, slots=True)
class GraphSample:
    """One generated graph.

    `edges` stores every undirected edge as two directed entries. Exactly
    one label is R or S, at `chiral_center` (always node 0), and the sign
    of `stp_value` encodes it: positive means R.
    """

    sample_type: SampleType
    distance: int
    species: tuple[int, ...]
    positions: tuple[tuple[float, float, float], ...]
    edges: tuple[tuple[int, int], ...]
    chiral_center: int
    labels: tuple[ChiralityTag, ...]
    stp_value: float
    sample_seed: int

    @property
    def node_count(self) -> int:
        return len(self.species)

    def final_layer(self) -> range:
        return layer_nodes(self.sample_type, self.distance)


@dataclass(frozen=True, slots=True)
class DatasetManifest:
    """Sidecar metadata for a serialized dataset."""

    config: GenerationConfig
    split_train: tuple[int, ...]
    split_val: tuple[int, ...]
    split_test: tuple[int, ...]
    class_counts: tuple[int, int, int]  # (NA, R, S)
    class_weights: tuple[float, float, float]
    weight_constant: float
    format_version: str


def validate_sample(sample: GraphSample, index: int | None = None) -> None:
    """Check every structural GraphSample invariant; raise on the first failure.

    This is the shape-level validation used when deserializing. It does not
    recompute labels from geometry (the verifier does that).
    """

    def fail(msg: str) -> None:
        raise InvariantViolationError(msg, sample_index=index)

    st, d = sample.sample_type, sample.distance
    if d < 1:
        fail(f"distance must be >= 1, got {d}")
    expected_nodes = node_count(st, d)
    if len(sample.species) != expected_nodes:
        fail(f"expected {expected_nodes} species entries, got {len(sample.species)}")
    if len(sample.positions) != expected_nodes:
        fail(f"expected {expected_nodes} positions, got {len(sample.positions)}")
    if len(sample.labels) != expected_nodes:
        fail(f"expected {expected_nodes} labels, got {len(sample.labels)}")
    if any(s < 1 for s in sample.species):
        fail("species must be positive integers")
    for pos in sample.positions:
        if len(pos) != 3 or not all(math.isfinite(c) for c in pos):
            fail(f"positions must be finite 3-vectors, got {pos!r}")
    if sample.chiral_center != 0:
        fail(f"chiral center must be node 0, got {sample.chiral_center}")
    if not 0 <= sample.sample_seed <= U64_MAX:
        fail("sample_seed must fit in an unsigned 64-bit value")

    seen = set()
    for u, v in sample.edges:
        if not (0 <= u < expected_nodes and 0 <= v < expected_nodes):
            fail(f"edge ({u}, {v}) references a missing node")
        if u == v:
            fail(f"self-loop at node {u}")
        if (u, v) in seen:
            fail(f"duplicate directed edge ({u}, {v})")
        seen.add((u, v))
    for u, v in sample.edges:
        if (v, u) not in seen:
            fail(f"edge ({u}, {v}) has no reverse entry")
    if len(sample.edges) != 2 * undirected_edge_count(st, d):
        fail(
            f"expected {2 * undirected_edge_count(st, d)} directed edges, "
            f"got {len(sample.edges)}"
        )

    tagged = [i for i, tag in enumerate(sample.labels) if tag is not ChiralityTag.NA]
    if tagged != [sample.chiral_center]:
        fail(f"exactly node {sample.chiral_center} must carry an R/S label, got {tagged}")
    if not math.isfinite(sample.stp_value) or sample.stp_value == 0.0:
        fail(f"stp_value must be finite and nonzero, got {sample.stp_value!r}")
    center_tag = sample.labels[sample.chiral_center]
    expected_tag = ChiralityTag.R if sample.stp_value > 0 else ChiralityTag.S
    if center_tag is not expected_tag:
        fail(
            f"label {center_tag.value} contradicts stp_value sign "
            f"({sample.stp_value!r})"
        )
