"""Chirality tag assignment.

The label comes from the sign of a scalar triple product over a
type-specific choice of relative vectors, with node priorities resolved
from species (higher species = higher priority, ties broken by walking
each neighbor's descendant chain to the final layer, where species are
distinct by construction). Positive triple product means R.

`cip_oracle_label` is an independent cross-check that never evaluates that
triple product: it orients the lowest-priority direction away from the
viewer, projects the top three priority nodes onto the viewing plane, and
reads the winding of the 1 -> 2 -> 3 path. Clockwise means R.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import DegenerateGeometryError, StructuralError
from .geometry import apply, cross, dot, norm, rotation_aligning_to_z, sub
from .model import ChiralityTag, GraphSample, SampleType, layer_nodes

# The construction keeps |STP| far above this (ring radius >= 0.1, ring
# angle gaps > 0.06 rad, dz >= 0.1); crossing it can only mean corruption.
STP_TOLERANCE = 1e-9
PROJECTION_TOLERANCE = 1e-12


def scalar_triple_product(v1, v2, v3) -> float:
    """v1 . (v2 x v3); the determinant with rows v1, v2, v3."""
    return dot(v1, cross(v2, v3))


@dataclass(frozen=True, slots=True)
class PriorityOrder:
    """Node indices entering the triple product, highest priority first.

    Three entries for simple/crossed; four for classic, where the last
    entry is the lowest-priority neighbor.
    """

    nodes: tuple[int, ...]


def _adjacency(sample: GraphSample) -> dict[int, set[int]]:
    adj: dict[int, set[int]] = {i: set() for i in range(sample.node_count)}
    for u, v in sample.edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def _chain_endpoint(sample: GraphSample, start: int, adj: dict[int, set[int]]) -> int:
    """Follow `start`'s unique descendant chain from layer 1 to the final layer."""
    st = sample.sample_type
    current = start
    for layer in range(2, sample.distance + 1):
        below = layer_nodes(st, layer)
        children = [n for n in adj[current] if n in below]
        if len(children) != 1:
            raise StructuralError(
                f"node {current} has {len(children)} descendants in layer {layer}; "
                "expected exactly one"
            )
        current = children[0]
    return current


def resolve_priorities(sample: GraphSample) -> PriorityOrder:
    """Rank the nodes whose positions decide the label.

    Simple/classic rank the chiral center's neighbors (layer 1) by the
    species found at the end of each neighbor's chain; crossed ranks the
    final-layer nodes by their own species. Descending species order =
    descending priority. A tie means the neighborhood cannot be
    differentiated, which the construction rules out, so it is treated as
    a structural fault.
    """
    st = sample.sample_type
    if st is SampleType.CROSSED:
        ranked_pool = list(sample.final_layer())
        keys = {n: sample.species[n] for n in ranked_pool}
    else:
        adj = _adjacency(sample)
        ranked_pool = list(layer_nodes(st, 1))
        keys = {n: sample.species[_chain_endpoint(sample, n, adj)] for n in ranked_pool}
    if len(set(keys.values())) != len(keys):
        raise StructuralError(f"priority tie among species {sorted(keys.values())}")
    ranked = sorted(ranked_pool, key=lambda n: keys[n], reverse=True)
    return PriorityOrder(nodes=tuple(ranked))


def _stp_vectors(sample: GraphSample, priorities: PriorityOrder):
    p = sample.positions
    pc = p[sample.chiral_center]
    n = priorities.nodes
    if sample.sample_type is SampleType.CLASSIC:
        return (
            sub(p[n[3]], pc),
            sub(p[n[1]], p[n[0]]),
            sub(p[n[2]], p[n[1]]),
        )
    # Simple uses layer 1, crossed uses layer D; the vector pattern is shared.
    return (sub(pc, p[n[0]]), sub(pc, p[n[1]]), sub(pc, p[n[2]]))


def label_sample(sample: GraphSample) -> GraphSample:
    """Fill in the per-node tags and the signed triple product."""
    priorities = resolve_priorities(sample)
    stp = scalar_triple_product(*_stp_vectors(sample, priorities))
    if abs(stp) <= STP_TOLERANCE:
        raise DegenerateGeometryError(
            f"|STP| = {abs(stp):.3e} is below {STP_TOLERANCE}; geometry is degenerate"
        )
    tag = ChiralityTag.R if stp > 0 else ChiralityTag.S
    labels = tuple(
        tag if i == sample.chiral_center else ChiralityTag.NA
        for i in range(sample.node_count)
    )
    return replace(sample, labels=labels, stp_value=stp)


def cip_oracle_label(sample: GraphSample, priorities: PriorityOrder) -> ChiralityTag:
    """Label by orienting, projecting, and reading the winding.

    For classic samples the away direction is the real fourth neighbor
    (center to lowest priority), exactly the textbook procedure. Three
    neighbor centers have no fourth substituent; there the privileged axis
    is the line from the highest-priority node through the center, which
    points to the opposite side of the ring and plays the same
    away-from-the-viewer role.
    """
    p = sample.positions
    pc = p[sample.chiral_center]
    n = priorities.nodes
    if sample.sample_type is SampleType.CLASSIC:
        away = sub(p[n[3]], pc)
    else:
        away = sub(pc, p[n[0]])
    align = rotation_aligning_to_z(away)
    q1, q2, q3 = (apply(align, sub(p[node], pc)) for node in n[:3])
    # Winding of the projected 1 -> 2 -> 3 path, viewed from -z (the viewer
    # side): positive z-component of the turn = clockwise = R.
    wind = (q2[0] - q1[0]) * (q3[1] - q2[1]) - (q2[1] - q1[1]) * (q3[0] - q2[0])
    scale = max(norm(q) for q in (q1, q2, q3))
    if abs(wind) <= PROJECTION_TOLERANCE * max(1.0, scale * scale):
        raise DegenerateGeometryError("projected priority nodes are collinear")
    return ChiralityTag.R if wind > 0 else ChiralityTag.S
