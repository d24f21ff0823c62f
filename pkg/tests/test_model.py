"""Domain-type invariants and index arithmetic."""

from dataclasses import replace

import pytest
from hypothesis import given
from hypothesis import strategies as st

from chigraph import (
    ChiralityTag,
    GenerationConfig,
    InvalidConfigError,
    InvariantViolationError,
    SampleType,
    node_count,
    parent_of,
    species_count,
    undirected_edge_count,
    validate_sample,
)
from chigraph.model import layer_nodes, layer_of_node

from conftest import gen


def test_tag_values():
    assert [t.value for t in ChiralityTag] == ["NA", "R", "S"]
    assert [t.value for t in SampleType] == ["simple", "crossed", "classic"]


@pytest.mark.parametrize("st_", SampleType)
@pytest.mark.parametrize("d", [1, 2, 5, 9])
def test_count_arithmetic(st_, d):
    k = st_.layer_width
    assert node_count(st_, d) == 1 + k * d
    assert undirected_edge_count(st_, d) == k * d
    assert species_count(st_, d) == (5 if st_ is SampleType.CLASSIC else 4) + d - 1


@given(
    st.sampled_from(list(SampleType)),
    st.integers(min_value=1, max_value=9),
    st.integers(min_value=0, max_value=3),
)
def test_parent_arithmetic(st_, layer, slot_offset):
    """Aligned wiring: slot i of layer L hangs off slot i of layer L-1."""
    k = st_.layer_width
    slot = slot_offset % k
    node = k * (layer - 1) + 1 + slot
    assert layer_of_node(st_, node) == layer
    if layer == 1:
        assert parent_of(st_, node) == 0
    else:
        parent = parent_of(st_, node)
        assert layer_of_node(st_, parent) == layer - 1
        assert (parent - 1) % k == slot


def test_layer_nodes_partition():
    for st_ in SampleType:
        for d in (1, 3, 6):
            seen = [0]
            for layer in range(1, d + 1):
                seen.extend(layer_nodes(st_, layer))
            assert seen == list(range(node_count(st_, d)))


class TestGenerationConfig:
    def test_feasibility_bounds(self):
        GenerationConfig(SampleType.SIMPLE, 1, 4, False, 1, 0)
        GenerationConfig(SampleType.CLASSIC, 1, 5, False, 1, 0)
        with pytest.raises(InvalidConfigError):
            GenerationConfig(SampleType.SIMPLE, 1, 3, False, 1, 0)
        with pytest.raises(InvalidConfigError):
            GenerationConfig(SampleType.CLASSIC, 1, 4, False, 1, 0)
        with pytest.raises(InvalidConfigError):
            GenerationConfig(SampleType.SIMPLE, 2, 4, False, 1, 0)  # needs 5

    def test_positive_counts(self):
        with pytest.raises(InvalidConfigError):
            GenerationConfig(SampleType.SIMPLE, 0, 15, False, 1, 0)
        with pytest.raises(InvalidConfigError):
            GenerationConfig(SampleType.SIMPLE, 1, 15, False, 0, 0)

    def test_seed_bounds(self):
        GenerationConfig(SampleType.SIMPLE, 1, 15, False, 1, 2**64 - 1)
        with pytest.raises(InvalidConfigError):
            GenerationConfig(SampleType.SIMPLE, 1, 15, False, 1, 2**64)
        with pytest.raises(InvalidConfigError):
            GenerationConfig(SampleType.SIMPLE, 1, 15, False, 1, -1)


class TestValidateSample:
    def test_generated_samples_pass(self, sample_grid):
        for sample in sample_grid:
            validate_sample(sample)

    def test_two_labels_rejected(self):
        sample = gen(SampleType.SIMPLE, 1)
        labels = list(sample.labels)
        labels[1] = ChiralityTag.R
        with pytest.raises(InvariantViolationError, match="exactly node 0"):
            validate_sample(replace(sample, labels=tuple(labels)))

    def test_sign_mismatch_rejected(self):
        sample = gen(SampleType.SIMPLE, 1)
        with pytest.raises(InvariantViolationError, match="contradicts"):
            validate_sample(replace(sample, stp_value=-sample.stp_value))

    def test_zero_stp_rejected(self):
        sample = gen(SampleType.SIMPLE, 1)
        with pytest.raises(InvariantViolationError, match="nonzero"):
            validate_sample(replace(sample, stp_value=0.0))

    def test_self_loop_rejected(self):
        sample = gen(SampleType.SIMPLE, 1)
        edges = sample.edges[:-2] + ((2, 2), (2, 2))
        with pytest.raises(InvariantViolationError):
            validate_sample(replace(sample, edges=edges))

    def test_missing_reverse_rejected(self):
        sample = gen(SampleType.SIMPLE, 2)
        edges = tuple(e for e in sample.edges if e != (0, 1)) + ((1, 2),)
        with pytest.raises(InvariantViolationError):
            validate_sample(replace(sample, edges=edges))

    def test_wrong_node_count_rejected(self):
        sample = gen(SampleType.SIMPLE, 1)
        with pytest.raises(InvariantViolationError, match="species"):
            validate_sample(replace(sample, species=sample.species + (5,)))

    def test_index_reported(self):
        sample = gen(SampleType.SIMPLE, 1)
        with pytest.raises(InvariantViolationError, match="sample 17"):
            validate_sample(replace(sample, stp_value=0.0), index=17)
