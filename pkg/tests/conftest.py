"""Shared fixtures and independent oracles used across the test suite."""

from __future__ import annotations

import pytest

from chigraph import GenerationConfig, SampleType, generate_sample_at


def det3_sarrus(v1, v2, v3) -> float:
    """Rule-of-Sarrus determinant: six signed products, summed separately.

    Deliberately a different arithmetic path than the cross-then-dot
    evaluation under test.
    """
    a, b, c = v1
    d, e, f = v2
    g, h, i = v3
    pos = a * e * i + b * f * g + c * d * h
    neg = c * e * g + a * f * h + b * d * i
    return pos - neg


def floyd_warshall(n: int, edges) -> list[list[float]]:
    """All-pairs shortest paths on an unweighted directed edge list."""
    inf = float("inf")
    dist = [[0.0 if i == j else inf for j in range(n)] for i in range(n)]
    for u, v in edges:
        dist[u][v] = 1.0
    for k in range(n):
        dk = dist[k]
        for i in range(n):
            dik = dist[i][k]
            if dik == inf:
                continue
            row = dist[i]
            for j in range(n):
                alt = dik + dk[j]
                if alt < row[j]:
                    row[j] = alt
    return dist


def make_config(
    sample_type=SampleType.SIMPLE,
    distance=1,
    species_range=None,
    noise=True,
    count=1,
    master_seed=0,
) -> GenerationConfig:
    if species_range is None:
        species_range = 15 if distance <= 9 else distance + 10
    return GenerationConfig(
        sample_type=sample_type,
        distance=distance,
        species_range=species_range,
        noise=noise,
        count=count,
        master_seed=master_seed,
    )


def gen(sample_type, distance, noise=True, index=0, master_seed=0, species_range=None):
    cfg = make_config(
        sample_type=sample_type,
        distance=distance,
        species_range=species_range,
        noise=noise,
        master_seed=master_seed,
    )
    return generate_sample_at(cfg, index)


@pytest.fixture(scope="session")
def sample_grid():
    """A modest cross-section of types, distances, and noise settings."""
    out = []
    for st in SampleType:
        for d in (1, 2, 4):
            for noise in (False, True):
                for idx in range(3):
                    out.append(gen(st, d, noise=noise, index=idx, master_seed=99))
    return out
