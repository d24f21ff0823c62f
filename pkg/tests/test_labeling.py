"""Labeling tests: triple product against an independent determinant,
priority resolution on hand-built samples, and the orient/project/wind
cross-check."""

import math
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chigraph import (
    ChiralityTag,
    DegenerateGeometryError,
    PriorityOrder,
    SampleType,
    StructuralError,
    cip_oracle_label,
    label_sample,
    resolve_priorities,
    scalar_triple_product,
)
from chigraph.model import GraphSample, layer_nodes

from conftest import det3_sarrus, gen

unit = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False)
uvec = st.tuples(unit, unit, unit)


def hand_sample(sample_type, distance, species, positions, edges):
    n = len(species)
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


def star_edges(k):
    return tuple(pair for i in range(1, k + 1) for pair in ((0, i), (i, 0)))


class TestScalarTripleProduct:
    def test_right_handed_basis(self):
        assert scalar_triple_product((1, 0, 0), (0, 1, 0), (0, 0, 1)) == 1.0

    def test_degenerate_cross(self):
        v = (0.3, -1.2, 2.5)
        assert scalar_triple_product((1, 2, 3), v, v) == 0.0

    @given(uvec, uvec, uvec)
    @settings(max_examples=500)
    def test_matches_independent_determinant(self, v1, v2, v3):
        assert abs(scalar_triple_product(v1, v2, v3) - det3_sarrus(v1, v2, v3)) < 1e-12

    @given(uvec, uvec, uvec)
    @settings(max_examples=300)
    def test_shear_identity(self, v1, v2, v3):
        lhs = scalar_triple_product(v1, v2, v3)
        rhs = scalar_triple_product(
            v1,
            (v2[0] + v1[0], v2[1] + v1[1], v2[2] + v1[2]),
            (v3[0] + v1[0], v3[1] + v1[1], v3[2] + v1[2]),
        )
        assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs))


def ring(z, radius=1.0):
    return [
        (radius * math.cos(a), radius * math.sin(a), z)
        for a in (0.0, 2 * math.pi / 3, 4 * math.pi / 3)
    ]


class TestResolvePriorities:
    def test_simple_d1_ranked_by_species(self):
        # species 9, 4, 12 at slots 1, 2, 3 rank as nodes (3, 1, 2)
        sample = hand_sample(
            SampleType.SIMPLE,
            1,
            [5, 9, 4, 12],
            [(0.0, 0.0, 1.0)] + ring(0.5),
            star_edges(3),
        )
        assert resolve_priorities(sample).nodes == (3, 1, 2)

    def test_classic_d1_lowest_goes_last(self):
        # quadruplet 7, 2, 11, 5: lowest species 2 is the final entry
        sample = hand_sample(
            SampleType.CLASSIC,
            1,
            [3, 7, 2, 11, 5],
            [(0.0, 0.0, 1.0)] + ring(0.5) + [(0.0, 0.0, 1.5)],
            star_edges(4),
        )
        order = resolve_priorities(sample).nodes
        assert order == (3, 1, 4, 2)
        assert [sample.species[i] for i in order] == [11, 7, 5, 2]

    def test_intermediate_species_never_affect_order(self):
        sample = gen(SampleType.SIMPLE, 3, index=4)
        baseline = resolve_priorities(sample).nodes
        mutated_species = list(sample.species)
        for i in layer_nodes(SampleType.SIMPLE, 2):
            mutated_species[i] = 999
        mutated = replace(sample, species=tuple(mutated_species))
        assert resolve_priorities(mutated).nodes == baseline

    def test_crossed_uses_final_layer(self):
        sample = gen(SampleType.CROSSED, 3, index=1)
        nodes = resolve_priorities(sample).nodes
        final = set(layer_nodes(SampleType.CROSSED, 3))
        assert set(nodes) <= final
        species = [sample.species[i] for i in nodes]
        assert species == sorted(species, reverse=True)

    def test_broken_chain_raises(self):
        sample = gen(SampleType.SIMPLE, 2, index=0)
        pruned = tuple(e for e in sample.edges if e not in ((1, 4), (4, 1)))
        with pytest.raises(StructuralError):
            resolve_priorities(replace(sample, edges=pruned))

    def test_species_tie_raises(self):
        sample = gen(SampleType.SIMPLE, 1, index=0)
        species = list(sample.species)
        species[2] = species[1]
        with pytest.raises(StructuralError, match="tie"):
            resolve_priorities(replace(sample, species=tuple(species)))


class TestLabelSample:
    def test_exactly_one_center_label(self, sample_grid):
        for sample in sample_grid:
            tagged = [i for i, t in enumerate(sample.labels) if t is not ChiralityTag.NA]
            assert tagged == [0]
            assert abs(sample.stp_value) > 1e-9

    def test_mirror_flips_label_exactly(self, sample_grid):
        flip = {ChiralityTag.R: ChiralityTag.S, ChiralityTag.S: ChiralityTag.R}
        for sample in sample_grid:
            mirrored = replace(
                sample,
                positions=tuple((-x, y, z) for x, y, z in sample.positions),
            )
            out = label_sample(mirrored)
            assert out.labels[0] is flip[sample.labels[0]]
            assert out.stp_value == -sample.stp_value  # axis mirrors are exact

    def test_degenerate_geometry_raises(self):
        flat = hand_sample(
            SampleType.SIMPLE,
            1,
            [5, 9, 4, 12],
            [(0.0, 0.0, 0.5)] + ring(0.5),  # center in the ring plane
            star_edges(3),
        )
        with pytest.raises(DegenerateGeometryError):
            label_sample(flat)

    def test_stored_value_matches_sign(self, sample_grid):
        for sample in sample_grid:
            expected = ChiralityTag.R if sample.stp_value > 0 else ChiralityTag.S
            assert sample.labels[0] is expected


class TestCipOracle:
    def test_clockwise_is_r(self):
        # Lowest priority along +z; 1 -> 2 -> 3 winds clockwise when viewed
        # from below (counterclockwise from +z), so the tag is R.
        sample = hand_sample(
            SampleType.CLASSIC,
            1,
            [3, 12, 9, 7, 2],
            [
                (0.0, 0.0, 0.0),
                (1.0, 0.0, -0.3),
                (-0.5, math.sin(2 * math.pi / 3), -0.3),
                (-0.5, math.sin(4 * math.pi / 3), -0.3),
                (0.0, 0.0, 1.0),
            ],
            star_edges(4),
        )
        priorities = resolve_priorities(sample)
        assert priorities.nodes == (1, 2, 3, 4)
        assert cip_oracle_label(sample, priorities) is ChiralityTag.R
        assert label_sample(sample).labels[0] is ChiralityTag.R

    def test_swapping_top_two_priorities_flips(self):
        sample = gen(SampleType.CLASSIC, 1, index=3)
        order = resolve_priorities(sample)
        swapped = PriorityOrder(nodes=(order.nodes[1], order.nodes[0]) + order.nodes[2:])
        assert cip_oracle_label(sample, order) is not cip_oracle_label(sample, swapped)

    @pytest.mark.parametrize("st_", SampleType)
    @pytest.mark.parametrize("d", [1, 3])
    def test_agrees_with_stp_labeler(self, st_, d):
        for index in range(200):
            sample = gen(st_, d, index=index, master_seed=17)
            priorities = resolve_priorities(sample)
            assert cip_oracle_label(sample, priorities) is sample.labels[0]

    def test_collinear_projection_raises(self):
        sample = hand_sample(
            SampleType.CLASSIC,
            1,
            [3, 12, 9, 7, 2],
            [
                (0.0, 0.0, 0.0),
                (1.0, 0.0, -0.5),
                (2.0, 0.0, -0.25),
                (3.0, 0.0, -0.75),
                (0.0, 0.0, 1.0),
            ],
            star_edges(4),
        )
        with pytest.raises(DegenerateGeometryError):
            cip_oracle_label(sample, resolve_priorities(sample))


def test_rotation_translation_invariance(sample_grid):
    """Proper rigid motions leave the label and value alone; a pure
    translation stays within 1e-12 relative."""
    from chigraph import SampleRng
    from chigraph.verify import transform_positions

    rng = SampleRng(55)
    for sample in sample_grid[::3]:
        rotated = label_sample(
            transform_positions(sample, rng.random_rotation(), (0.4, -1.2, 2.0))
        )
        assert rotated.labels == sample.labels
        assert abs(rotated.stp_value - sample.stp_value) <= 1e-9 * abs(sample.stp_value)

        identity = ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0))
        shifted = label_sample(transform_positions(sample, identity, (3.7, 0.1, -9.0)))
        assert shifted.labels == sample.labels
        assert abs(shifted.stp_value - sample.stp_value) <= 1e-12 * abs(sample.stp_value)


def test_general_reflection_negates_within_tolerance(sample_grid):
    from chigraph import SampleRng
    from chigraph.geometry import Z_MIRROR, mat_mul
    from chigraph.verify import transform_positions

    rng = SampleRng(77)
    for sample in sample_grid[::3]:
        reflection = mat_mul(rng.random_rotation(), Z_MIRROR)
        mirrored = label_sample(transform_positions(sample, reflection))
        assert abs(mirrored.stp_value + sample.stp_value) <= 1e-12 * max(
            1.0, abs(sample.stp_value)
        )
        assert mirrored.labels[0] is not sample.labels[0]
