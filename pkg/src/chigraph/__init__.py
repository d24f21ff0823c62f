"""chigraph: deterministic synthetic chiral graph datasets.

Generates layered graph samples with exactly one chiral center labeled R
or S from the sign of a scalar triple product, verifies every structural
guarantee as executable checks, and exports datasets as JSONL with a
manifest carrying splits and class weights.
"""

from .errors import (
    ChigraphError,
    DegenerateGeometryError,
    DisconnectedGraphError,
    FormatVersionError,
    GradientInputError,
    InfeasibleSamplingError,
    InvalidConfigError,
    InvalidRangeError,
    InvalidRatioError,
    InvariantViolationError,
    MalformedRecordError,
    StructuralError,
)
from .generate import (
    build_classic,
    build_crossed,
    build_simple,
    finalize_sample,
    generate_sample,
    generate_sample_at,
)
from .labeling import (
    PriorityOrder,
    cip_oracle_label,
    label_sample,
    resolve_priorities,
    scalar_triple_product,
)
from .model import (
    ChiralityTag,
    DatasetManifest,
    GenerationConfig,
    GraphSample,
    SampleType,
    node_count,
    parent_of,
    species_count,
    undirected_edge_count,
    validate_sample,
)
from .oversquash import (
    HopGradientProfile,
    aggregate_gradient_profile,
    hop_distances,
    load_gradient_norms,
    write_profile_csv,
)
from .pipeline import (
    FORMAT_VERSION,
    class_weights,
    dataset_stats,
    generate_dataset,
    load_manifest,
    manifest_path_for,
    parse_dataset,
    save_manifest,
    serialize_dataset,
    split_dataset,
)
from .rng import SampleRng, derive_sample_seed
from .verify import (
    DatasetReport,
    VerificationReport,
    metamorphic_suite,
    verify_dataset,
    verify_sample,
)

__version__ = "0.1.0"

__all__ = [
    "ChigraphError",
    "ChiralityTag",
    "DatasetManifest",
    "DatasetReport",
    "DegenerateGeometryError",
    "DisconnectedGraphError",
    "FORMAT_VERSION",
    "FormatVersionError",
    "GenerationConfig",
    "GradientInputError",
    "GraphSample",
    "HopGradientProfile",
    "InfeasibleSamplingError",
    "InvalidConfigError",
    "InvalidRangeError",
    "InvalidRatioError",
    "InvariantViolationError",
    "MalformedRecordError",
    "PriorityOrder",
    "SampleRng",
    "SampleType",
    "StructuralError",
    "VerificationReport",
    "aggregate_gradient_profile",
    "build_classic",
    "build_crossed",
    "build_simple",
    "cip_oracle_label",
    "class_weights",
    "dataset_stats",
    "derive_sample_seed",
    "finalize_sample",
    "generate_dataset",
    "generate_sample",
    "generate_sample_at",
    "hop_distances",
    "label_sample",
    "load_gradient_norms",
    "load_manifest",
    "manifest_path_for",
    "node_count",
    "parent_of",
    "parse_dataset",
    "resolve_priorities",
    "save_manifest",
    "scalar_triple_product",
    "serialize_dataset",
    "species_count",
    "split_dataset",
    "undirected_edge_count",
    "validate_sample",
    "verify_dataset",
    "verify_sample",
    "write_profile_csv",
]
