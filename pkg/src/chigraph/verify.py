"""Executable guarantees: per-sample checks, metamorphic transforms, and
dataset-level aggregation.

Verification never trusts stored fields: labels and the triple product are
recomputed from positions and species, and the stored values are audited
against them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .geometry import Mat3, Vec3, Z_MIRROR, add, apply, cross, mat_mul, norm, sub
from .labeling import STP_TOLERANCE, label_sample, resolve_priorities
from .model import (
    ChiralityTag,
    GenerationConfig,
    GraphSample,
    layer_nodes,
    node_count,
    undirected_edge_count,
)
from .rng import SampleRng

RING_AREA_TOLERANCE = 1e-8
STP_AUDIT_RTOL = 1e-9
TRANSLATION_RANGE = (-2.0, 2.0)


@dataclass(frozen=True, slots=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True, slots=True)
class VerificationReport:
    sample_index: int
    checks: tuple[CheckResult, ...]
    overall: bool

    @staticmethod
    def from_checks(sample_index: int, checks: Sequence[CheckResult]) -> "VerificationReport":
        return VerificationReport(
            sample_index=sample_index,
            checks=tuple(checks),
            overall=all(c.passed for c in checks),
        )

    def failed_names(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]


def _bfs_reachable(sample: GraphSample) -> int:
    adj: dict[int, list[int]] = {i: [] for i in range(sample.node_count)}
    for u, v in sample.edges:
        adj[u].append(v)
    seen = {sample.chiral_center}
    frontier = [sample.chiral_center]
    while frontier:
        nxt = []
        for u in frontier:
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
    return len(seen)


def verify_sample(sample: GraphSample, sample_index: int = -1) -> VerificationReport:
    """Run every structural and labeling check; failures are reported, not raised."""
    st, d = sample.sample_type, sample.distance
    k = st.layer_width
    checks: list[CheckResult] = []

    def check(name: str, passed: bool, detail: str = "") -> None:
        checks.append(CheckResult(name, passed, detail))

    expected_nodes = node_count(st, d)
    sizes_ok = (
        len(sample.species) == expected_nodes
        and len(sample.positions) == expected_nodes
        and len(sample.labels) == expected_nodes
    )
    check(
        "node-count",
        sizes_ok,
        f"expected {expected_nodes}, got {len(sample.species)} species / "
        f"{len(sample.positions)} positions / {len(sample.labels)} labels",
    )
    if not sizes_ok:
        return VerificationReport.from_checks(sample_index, checks)

    directed = set(sample.edges)
    structure_ok = (
        len(directed) == len(sample.edges)
        and all(u != v for u, v in sample.edges)
        and all(0 <= u < expected_nodes and 0 <= v < expected_nodes for u, v in sample.edges)
        and all((v, u) in directed for u, v in sample.edges)
        and len(sample.edges) == 2 * undirected_edge_count(st, d)
    )
    check("edge-structure", structure_ok, f"{len(sample.edges)} directed entries")

    degree = [0] * expected_nodes
    for u, _ in sample.edges:
        degree[u] += 1
    check(
        "center-degree",
        degree[sample.chiral_center] == k,
        f"expected {k}, got {degree[sample.chiral_center]}",
    )
    reached = _bfs_reachable(sample)
    check("connectivity", reached == expected_nodes, f"reached {reached}/{expected_nodes}")

    tagged = [i for i, tag in enumerate(sample.labels) if tag is not ChiralityTag.NA]
    check(
        "single-center",
        tagged == [sample.chiral_center],
        f"R/S labels at {tagged}",
    )

    final = [sample.species[i] for i in sample.final_layer()]
    check("final-species-distinct", len(set(final)) == len(final), f"{final}")

    homogeneous = all(
        len({sample.species[i] for i in layer_nodes(st, layer)}) == 1
        for layer in range(1, d)
    )
    check("intermediate-homogeneous", homogeneous)

    check(
        "stp-magnitude",
        abs(sample.stp_value) > STP_TOLERANCE,
        f"|stp| = {abs(sample.stp_value):.3e}",
    )

    # the audit owns the center tag and the stored value; stray labels on
    # other nodes are single-center's business. Anything a corrupted sample
    # makes the relabeling throw is a reported failure, never an escape.
    try:
        relabeled = label_sample(sample)
        audit_ok = relabeled.labels[sample.chiral_center] is sample.labels[
            sample.chiral_center
        ] and (
            abs(relabeled.stp_value - sample.stp_value)
            <= STP_AUDIT_RTOL * max(1.0, abs(sample.stp_value))
        )
        detail = f"recomputed stp {relabeled.stp_value!r} vs stored {sample.stp_value!r}"
    except Exception as exc:
        audit_ok, detail = False, f"{type(exc).__name__}: {exc}"
    check("stp-audit", audit_ok, detail)

    try:
        ring = _ring_nodes(sample)
        p1, p2, p3 = (sample.positions[i] for i in ring)
        area = 0.5 * norm(cross(sub(p2, p1), sub(p3, p1)))
        check("ring-non-collinear", area > RING_AREA_TOLERANCE, f"area = {area:.3e}")
    except Exception as exc:
        check("ring-non-collinear", False, f"{type(exc).__name__}: {exc}")

    return VerificationReport.from_checks(sample_index, checks)


def _ring_nodes(sample: GraphSample) -> tuple[int, int, int]:
    """The three positions entering the cross product of the triple product."""
    nodes = resolve_priorities(sample).nodes
    return nodes[0], nodes[1], nodes[2]


def transform_positions(
    sample: GraphSample, matrix: Mat3, shift: Vec3 = (0.0, 0.0, 0.0)
) -> GraphSample:
    """Apply x -> matrix @ x + shift to every position; labels untouched."""
    moved = tuple(add(apply(matrix, p), shift) for p in sample.positions)
    return replace(sample, positions=moved)


def random_rigid_motion(rng: SampleRng) -> tuple[Mat3, Vec3]:
    rotation = rng.random_rotation()
    shift = (
        rng.uniform_real(*TRANSLATION_RANGE),
        rng.uniform_real(*TRANSLATION_RANGE),
        rng.uniform_real(*TRANSLATION_RANGE),
    )
    return rotation, shift


def random_reflection(rng: SampleRng) -> tuple[Mat3, Vec3]:
    rotation, shift = random_rigid_motion(rng)
    return mat_mul(rotation, Z_MIRROR), shift


_FLIP = {ChiralityTag.R: ChiralityTag.S, ChiralityTag.S: ChiralityTag.R}


def metamorphic_suite(
    sample: GraphSample, rng: SampleRng, n_transforms: int, sample_index: int = -1
) -> VerificationReport:
    """Random rigid motions must preserve the label and the triple product
    (1e-9 relative); random reflections must flip the label and negate it."""
    center_tag = sample.labels[sample.chiral_center]
    stp = sample.stp_value
    tol = STP_AUDIT_RTOL * max(1.0, abs(stp))

    rigid_failures = 0
    for _ in range(n_transforms):
        matrix, shift = random_rigid_motion(rng)
        moved = label_sample(transform_positions(sample, matrix, shift))
        if (
            moved.labels[moved.chiral_center] is not center_tag
            or abs(moved.stp_value - stp) > tol
        ):
            rigid_failures += 1

    reflect_failures = 0
    for _ in range(n_transforms):
        matrix, shift = random_reflection(rng)
        moved = label_sample(transform_positions(sample, matrix, shift))
        if (
            moved.labels[moved.chiral_center] is not _FLIP[center_tag]
            or abs(moved.stp_value + stp) > tol
        ):
            reflect_failures += 1

    checks = [
        CheckResult(
            "rigid-motion-invariance",
            rigid_failures == 0,
            f"{n_transforms - rigid_failures}/{n_transforms} passed",
        ),
        CheckResult(
            "reflection-equivariance",
            reflect_failures == 0,
            f"{n_transforms - reflect_failures}/{n_transforms} passed",
        ),
    ]
    return VerificationReport.from_checks(sample_index, checks)


@dataclass(frozen=True, slots=True)
class DatasetReport:
    sample_reports: tuple[VerificationReport, ...]
    class_counts: tuple[int, int, int]  # (NA, R, S)
    imbalance_ok: bool
    imbalance_detail: str
    rs_balanced: bool  # 3-sigma binomial band; a warning, not a failure
    overall: bool
    warnings: tuple[str, ...] = field(default=())

    @property
    def rs_ratio(self) -> str:
        _, r, s = self.class_counts
        g = math.gcd(r, s)
        return f"{r // g}:{s // g}" if g else "0:0"


def count_labels(samples: Iterable[GraphSample]) -> tuple[int, int, int]:
    na = r = s = 0
    for sample in samples:
        for tag in sample.labels:
            if tag is ChiralityTag.NA:
                na += 1
            elif tag is ChiralityTag.R:
                r += 1
            else:
                s += 1
    return na, r, s


def verify_dataset(
    samples: Sequence[GraphSample], config: GenerationConfig
) -> DatasetReport:
    """Aggregate per-sample reports and check the class-imbalance identity.

    Every sample contributes k*D non-center nodes, so n_NA must equal
    k*D * (n_R + n_S) exactly, with k the layer width.
    """
    reports = tuple(verify_sample(s, i) for i, s in enumerate(samples))
    na, r, s = count_labels(samples)
    factor = config.sample_type.layer_width * config.distance
    imbalance_ok = na == factor * (r + s)
    detail = f"n_NA = {na}, expected {factor} * ({r} + {s}) = {factor * (r + s)}"

    n = r + s
    band = 3.0 * (n / 4.0) ** 0.5
    rs_balanced = abs(r - n / 2.0) <= band
    warnings = []
    if n and not rs_balanced:
        warnings.append(
            f"R:S counts {r}:{s} fall outside the 3-sigma binomial band ({band:.1f})"
        )

    overall = imbalance_ok and all(rep.overall for rep in reports)
    return DatasetReport(
        sample_reports=reports,
        class_counts=(na, r, s),
        imbalance_ok=imbalance_ok,
        imbalance_detail=detail,
        rs_balanced=rs_balanced,
        overall=overall,
        warnings=tuple(warnings),
    )
