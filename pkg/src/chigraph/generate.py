"""Layer-by-layer construction of chiral graph samples.

Construction happens along the z axis: the chiral center sits at z = 1 and
each successive layer ring drops by dz (classic samples also grow a single
top node upward by dz per layer). Without noise the geometry is rigid
(dz = 0.5, ring radius 1, ring angles 0/120/240 degrees); with noise each
quantity is drawn per layer from the documented intervals. After all
layers exist, the structure is centered on its centroid and given a
uniformly random rotation, which removes any systematic orientation.

RNG draw order per sample is fixed so streams replay identically:

  1. the species subset (draw order matters: draw 0 is the center,
     draw L is intermediate layer L, the final draws are the last layer)
  2. chiral-center xy offset (noise only): radius, azimuth
  3. per layer, noise only: dz, ring radius (classic: plus top radius),
     three ring angle offsets (classic: plus top azimuth)
  4. the sort-direction coin for the final layer (True = descending)
  5. one slot permutation per inter-layer gap (crossed only)
  6. the rotation, drawn inside finalize_sample
"""

from __future__ import annotations

import math
from dataclasses import replace

from .geometry import apply, centroid, sub
from .labeling import label_sample
from .model import (
    ChiralityTag,
    GenerationConfig,
    GraphSample,
    SampleType,
    node_count,
    species_count,
)
from .rng import TWO_PI, SampleRng, derive_sample_seed

BASE_RING_ANGLES = (0.0, TWO_PI / 3.0, 2.0 * TWO_PI / 3.0)
RING_ANGLE_JITTER = math.pi / 3.1
DZ_RANGE = (0.1, 1.5)
RING_RADIUS_RANGE = (0.1, 1.0)
TOP_RADIUS_RANGE = (0.0, 1.0)
CENTER_Z = 1.0


def _center_position(noise: bool, rng: SampleRng) -> tuple[float, float, float]:
    if not noise:
        return (0.0, 0.0, CENTER_Z)
    radius = rng.uniform_real(0.0, 1.0)
    azimuth = rng.uniform_real(0.0, TWO_PI)
    return (radius * math.cos(azimuth), radius * math.sin(azimuth), CENTER_Z)


def _ring_points(radius: float, offsets: tuple[float, float, float], z: float):
    return [
        (radius * math.cos(base + off), radius * math.sin(base + off), z)
        for base, off in zip(BASE_RING_ANGLES, offsets)
    ]


def _assign_species(
    sample_type: SampleType, distance: int, drawn: list[int], descending: bool
) -> list[int]:
    """Map the drawn species onto node indices.

    Intermediate layers are homogeneous. The final layer receives its
    distinct species sorted ascending or descending into the ring slots;
    classic samples first peel off the minimum for the top slot.
    """
    k = sample_type.layer_width
    species = [drawn[0]] + [0] * (k * distance)
    for layer in range(1, distance):
        for slot in range(k):
            species[k * (layer - 1) + 1 + slot] = drawn[layer]
    final = drawn[distance:]
    base = k * (distance - 1)
    if sample_type is SampleType.CLASSIC:
        lowest = min(final)
        ring = sorted((v for v in final if v != lowest), reverse=descending)
        species[base + 4] = lowest
    else:
        ring = sorted(final, reverse=descending)
    for slot, value in enumerate(ring, start=1):
        species[base + slot] = value
    return species


def _gap_edges(k: int, distance: int, rng: SampleRng | None) -> list[tuple[int, int]]:
    """Center edges plus one slot-to-slot edge per ring position per gap.

    When `rng` is given (crossed samples), a fresh permutation decides the
    append order of each gap's edges; the permutation indexes both
    endpoints, so the edge set itself stays slot-aligned.
    """
    edges = [pair for i in range(1, k + 1) for pair in ((0, i), (i, 0))]
    for gap in range(1, distance):
        idx_prev = k * (gap - 1) + 1
        idx_curr = k * gap + 1
        slots = rng.uniform_permutation3() if rng is not None else range(k)
        for s in slots:
            edges.append((idx_prev + s, idx_curr + s))
            edges.append((idx_curr + s, idx_prev + s))
    return edges


def _build_three_ring(
    sample_type: SampleType,
    distance: int,
    species_range: int,
    noise: bool,
    rng: SampleRng,
) -> GraphSample:
    drawn = rng.uniform_subset(1, species_range, species_count(sample_type, distance))
    positions = [_center_position(noise, rng)]
    z = CENTER_Z
    for _ in range(distance):
        if noise:
            dz = rng.uniform_real(*DZ_RANGE)
            radius = rng.uniform_real(*RING_RADIUS_RANGE)
            offsets = (
                rng.uniform_real(-RING_ANGLE_JITTER, RING_ANGLE_JITTER),
                rng.uniform_real(-RING_ANGLE_JITTER, RING_ANGLE_JITTER),
                rng.uniform_real(-RING_ANGLE_JITTER, RING_ANGLE_JITTER),
            )
        else:
            dz, radius, offsets = 0.5, 1.0, (0.0, 0.0, 0.0)
        z -= dz
        positions.extend(_ring_points(radius, offsets, z))
    species = _assign_species(sample_type, distance, drawn, rng.coin())
    gap_rng = rng if sample_type is SampleType.CROSSED else None
    edges = _gap_edges(3, distance, gap_rng)
    n = node_count(sample_type, distance)
    return GraphSample(
        sample_type=sample_type,
        distance=distance,
        species=tuple(species),
        positions=tuple(positions),
        edges=tuple(edges),
        chiral_center=0,
        labels=(ChiralityTag.NA,) * n,
        stp_value=0.0,
        sample_seed=0,
    )


def build_simple(
    distance: int, species_range: int, noise: bool, rng: SampleRng
) -> GraphSample:
    """Aligned triplet chains; unrotated and unlabeled."""
    return _build_three_ring(SampleType.SIMPLE, distance, species_range, noise, rng)


def build_crossed(
    distance: int, species_range: int, noise: bool, rng: SampleRng
) -> GraphSample:
    """Like simple, with a per-gap slot permutation; unrotated and unlabeled."""
    return _build_three_ring(SampleType.CROSSED, distance, species_range, noise, rng)


def build_classic(
    distance: int, species_range: int, noise: bool, rng: SampleRng
) -> GraphSample:
    """Quadruplet layers: a bottom ring plus a single top node per layer.

    Unrotated and unlabeled. The top chain carries the minimum final-layer
    species, so it always resolves as the lowest-priority neighbor.
    """
    drawn = rng.uniform_subset(
        1, species_range, species_count(SampleType.CLASSIC, distance)
    )
    positions = [_center_position(noise, rng)]
    z_bot = z_top = CENTER_Z
    tops: list[tuple[float, float, float]] = []
    for _ in range(distance):
        if noise:
            dz = rng.uniform_real(*DZ_RANGE)
            r_bot = rng.uniform_real(*RING_RADIUS_RANGE)
            r_top = rng.uniform_real(*TOP_RADIUS_RANGE)
            offsets = (
                rng.uniform_real(-RING_ANGLE_JITTER, RING_ANGLE_JITTER),
                rng.uniform_real(-RING_ANGLE_JITTER, RING_ANGLE_JITTER),
                rng.uniform_real(-RING_ANGLE_JITTER, RING_ANGLE_JITTER),
            )
            theta_top = rng.uniform_real(-math.pi, math.pi)
        else:
            dz, r_bot, r_top = 0.5, 1.0, 0.0
            offsets = (0.0, 0.0, 0.0)
            theta_top = 0.0
        z_bot -= dz
        z_top += dz
        positions.extend(_ring_points(r_bot, offsets, z_bot))
        top = (r_top * math.cos(theta_top), r_top * math.sin(theta_top), z_top)
        positions.append(top)
        tops.append(top)
    species = _assign_species(SampleType.CLASSIC, distance, drawn, rng.coin())
    edges = _gap_edges(4, distance, None)
    n = node_count(SampleType.CLASSIC, distance)
    return GraphSample(
        sample_type=SampleType.CLASSIC,
        distance=distance,
        species=tuple(species),
        positions=tuple(positions),
        edges=tuple(edges),
        chiral_center=0,
        labels=(ChiralityTag.NA,) * n,
        stp_value=0.0,
        sample_seed=0,
    )


_BUILDERS = {
    SampleType.SIMPLE: build_simple,
    SampleType.CROSSED: build_crossed,
    SampleType.CLASSIC: build_classic,
}


def finalize_sample(sample: GraphSample, rng: SampleRng) -> GraphSample:
    """Center the structure on its centroid, then rotate it uniformly.

    Species, edges, and indexing are untouched; labels computed before or
    after this step agree because the label depends only on relative
    geometry and orientation.
    """
    shift = centroid(sample.positions)
    rotation = rng.random_rotation()
    moved = tuple(apply(rotation, sub(p, shift)) for p in sample.positions)
    return replace(sample, positions=moved)


def generate_sample(config: GenerationConfig, sample_seed: int) -> GraphSample:
    """Build, finalize, and label one sample; pure in (config, sample_seed)."""
    rng = SampleRng(sample_seed)
    built = _BUILDERS[config.sample_type](
        config.distance, config.species_range, config.noise, rng
    )
    built = replace(built, sample_seed=sample_seed)
    return label_sample(finalize_sample(built, rng))


def generate_sample_at(config: GenerationConfig, index: int) -> GraphSample:
    """Sample `index` of the dataset `config` describes."""
    return generate_sample(config, derive_sample_seed(config.master_seed, index))
