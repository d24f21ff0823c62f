"""Dataset assembly, splitting, class weights, stats, and serialization.

On-disk layout: `<name>.jsonl` holds one sample per line, and
`<name>.manifest.json` sits next to it. Bytes are deterministic: key order
is fixed, floats are rendered with 17 significant digits (round-trip exact
for 64-bit floats, always with a decimal point so -0.0 survives), and
samples are written in index order regardless of how many workers
generated them.

Dedicated seed streams (indices into derive_sample_seed under the dataset
master seed): sample i uses index i; the split shuffle uses index 2**63,
so regenerating with a larger count never perturbs earlier samples.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Iterable, Sequence

from .errors import (
    FormatVersionError,
    InvalidConfigError,
    InvalidRatioError,
    InvariantViolationError,
    MalformedRecordError,
)
from .generate import generate_sample
from .model import (
    ChiralityTag,
    DatasetManifest,
    GenerationConfig,
    GraphSample,
    SampleType,
    validate_sample,
)
from .rng import SampleRng, derive_sample_seed
from .verify import count_labels

FORMAT_VERSION = "1"
SPLIT_STREAM_INDEX = 2**63
VERIFY_STREAM_INDEX = 2**63 + 1
DEFAULT_RATIOS = (0.8, 0.1, 0.1)
DEFAULT_WEIGHT_CONSTANT = 10.0

_SIZE_EPS = 1e-9  # absorbs binary representation error in count*ratio


# ---------------------------------------------------------------------------
# splitting and weights


def split_dataset(
    count: int,
    ratios: tuple[float, float, float],
    rng: SampleRng | None = None,
    sequential: bool = False,
) -> tuple[list[int], list[int], list[int]]:
    """Partition 0..count-1 into train/val/test index lists.

    Sizes are floor(count*ratio) with the remainder assigned to train.
    Membership comes from a seeded shuffle (or plain order with
    `sequential`); each list is returned sorted ascending.
    """
    if any(r <= 0 for r in ratios) or len(ratios) != 3:
        raise InvalidRatioError(f"ratios must be three positive reals, got {ratios}")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise InvalidRatioError(f"ratios must sum to 1, got {sum(ratios)!r}")
    sizes = [math.floor(count * r + _SIZE_EPS) for r in ratios]
    sizes[0] += count - sum(sizes)

    indices = list(range(count))
    if not sequential:
        if rng is None:
            raise ValueError("random split requires an rng; pass sequential=True otherwise")
        for j in range(count - 1, 0, -1):
            swap = rng.uniform_int(j + 1)
            indices[j], indices[swap] = indices[swap], indices[j]
    train = sorted(indices[: sizes[0]])
    val = sorted(indices[sizes[0] : sizes[0] + sizes[1]])
    test = sorted(indices[sizes[0] + sizes[1] :])
    return train, val, test


def class_weights(b: float, distance: int) -> tuple[float, float, float]:
    """Loss weights countering the structural class imbalance: (1, b+3D, b+3D)."""
    if distance < 1:
        raise InvalidConfigError(f"distance must be >= 1, got {distance}")
    w = b + 3.0 * distance
    return (1.0, w, w)


def split_rng(master_seed: int) -> SampleRng:
    return SampleRng(derive_sample_seed(master_seed, SPLIT_STREAM_INDEX))


# ---------------------------------------------------------------------------
# dataset generation


def _generate_chunk(args: tuple[GenerationConfig, int, int]) -> list[GraphSample]:
    config, start, stop = args
    return [
        generate_sample(config, derive_sample_seed(config.master_seed, i))
        for i in range(start, stop)
    ]


def generate_dataset(
    config: GenerationConfig,
    ratios: tuple[float, float, float] = DEFAULT_RATIOS,
    weight_b: float = DEFAULT_WEIGHT_CONSTANT,
    threads: int = 1,
    sequential_split: bool = False,
) -> tuple[list[GraphSample], DatasetManifest]:
    """Generate `config.count` samples plus a populated manifest.

    Sample i is a pure function of (config, i), so any worker count yields
    identical output, ordered by index.
    """
    count = config.count
    if threads > 1 and count > 1:
        workers = min(threads, count)
        chunk = -(-count // workers)
        bounds = [(config, lo, min(lo + chunk, count)) for lo in range(0, count, chunk)]
        samples: list[GraphSample] = []
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_generate_chunk, bounds):
                samples.extend(part)
    else:
        samples = _generate_chunk((config, 0, count))

    train, val, test = split_dataset(
        count, ratios, rng=split_rng(config.master_seed), sequential=sequential_split
    )
    manifest = DatasetManifest(
        config=config,
        split_train=tuple(train),
        split_val=tuple(val),
        split_test=tuple(test),
        class_counts=count_labels(samples),
        class_weights=class_weights(weight_b, config.distance),
        weight_constant=weight_b,
        format_version=FORMAT_VERSION,
    )
    return samples, manifest


# ---------------------------------------------------------------------------
# canonical JSON


def format_float(x: float) -> str:
    """17-significant-digit rendering, always a JSON float token."""
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite float {x!r}")
    s = format(x, ".17g")
    if "." not in s and "e" not in s and "E" not in s:
        s += ".0"
    return s


def _emit(value, out: list[str]) -> None:
    if isinstance(value, bool):
        out.append("true" if value else "false")
    elif isinstance(value, int):
        out.append(str(value))
    elif isinstance(value, float):
        out.append(format_float(value))
    elif isinstance(value, str):
        out.append(json.dumps(value))
    elif isinstance(value, dict):
        out.append("{")
        for i, (key, item) in enumerate(value.items()):
            if i:
                out.append(", ")
            out.append(json.dumps(key))
            out.append(": ")
            _emit(item, out)
        out.append("}")
    elif isinstance(value, (list, tuple)):
        out.append("[")
        for i, item in enumerate(value):
            if i:
                out.append(", ")
            _emit(item, out)
        out.append("]")
    else:  # pragma: no cover - guards new record fields
        raise TypeError(f"cannot serialize {type(value).__name__}")


def canonical_json(value) -> str:
    out: list[str] = []
    _emit(value, out)
    return "".join(out)


def sample_record(sample: GraphSample) -> dict:
    return {
        "sample_type": sample.sample_type.value,
        "distance": sample.distance,
        "sample_seed": sample.sample_seed,
        "species": list(sample.species),
        "positions": [list(p) for p in sample.positions],
        "edges": [list(e) for e in sample.edges],
        "chiral_center": sample.chiral_center,
        "labels": [tag.value for tag in sample.labels],
        "stp_value": sample.stp_value,
    }


def manifest_record(manifest: DatasetManifest) -> dict:
    cfg = manifest.config
    return {
        "format_version": manifest.format_version,
        "config": {
            "sample_type": cfg.sample_type.value,
            "distance": cfg.distance,
            "species_range": cfg.species_range,
            "noise": cfg.noise,
            "count": cfg.count,
            "master_seed": cfg.master_seed,
        },
        "split_indices": {
            "train": list(manifest.split_train),
            "val": list(manifest.split_val),
            "test": list(manifest.split_test),
        },
        "class_counts": {
            "NA": manifest.class_counts[0],
            "R": manifest.class_counts[1],
            "S": manifest.class_counts[2],
        },
        "class_weights": list(manifest.class_weights),
        "weight_constant": manifest.weight_constant,
    }


def manifest_path_for(path: str | os.PathLike) -> Path:
    p = Path(path)
    stem = p.name[: -len(".jsonl")] if p.name.endswith(".jsonl") else p.name
    return p.with_name(stem + ".manifest.json")


def serialize_dataset(
    samples: Sequence[GraphSample], manifest: DatasetManifest, path: str | os.PathLike
) -> None:
    if len(samples) != manifest.config.count:
        raise InvariantViolationError(
            f"manifest count {manifest.config.count} != {len(samples)} samples"
        )
    p = Path(path)
    with open(p, "w", encoding="utf-8", newline="\n") as fh:
        for sample in samples:
            fh.write(canonical_json(sample_record(sample)))
            fh.write("\n")
    with open(manifest_path_for(p), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(canonical_json(manifest_record(manifest)))
        fh.write("\n")


# ---------------------------------------------------------------------------
# parsing


def _expect(obj: dict, key: str, lineno: int | None):
    if key not in obj:
        raise MalformedRecordError(f"missing field {key!r}", lineno)
    return obj[key]


def _as_float(value, what: str, lineno: int | None) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise MalformedRecordError(f"{what} must be a number, got {value!r}", lineno)
    return float(value)


def _as_int(value, what: str, lineno: int | None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise MalformedRecordError(f"{what} must be an integer, got {value!r}", lineno)
    return value


def sample_from_record(obj: dict, lineno: int | None = None) -> GraphSample:
    if not isinstance(obj, dict):
        raise MalformedRecordError("record must be a JSON object", lineno)
    try:
        sample_type = SampleType(_expect(obj, "sample_type", lineno))
    except ValueError:
        raise MalformedRecordError(
            f"sample_type must be one of {[t.value for t in SampleType]}, "
            f"got {obj.get('sample_type')!r}",
            lineno,
        ) from None
    labels = []
    for raw in _expect(obj, "labels", lineno):
        try:
            labels.append(ChiralityTag(raw))
        except ValueError:
            raise MalformedRecordError(
                f"label must be one of {[t.value for t in ChiralityTag]}, got {raw!r}",
                lineno,
            ) from None
    positions = []
    for p in _expect(obj, "positions", lineno):
        if not isinstance(p, (list, tuple)) or len(p) != 3:
            raise MalformedRecordError(f"position must be a 3-vector, got {p!r}", lineno)
        positions.append(tuple(_as_float(c, "coordinate", lineno) for c in p))
    edges = []
    for e in _expect(obj, "edges", lineno):
        if not isinstance(e, (list, tuple)) or len(e) != 2:
            raise MalformedRecordError(f"edge must be an index pair, got {e!r}", lineno)
        edges.append((_as_int(e[0], "edge endpoint", lineno), _as_int(e[1], "edge endpoint", lineno)))
    return GraphSample(
        sample_type=sample_type,
        distance=_as_int(_expect(obj, "distance", lineno), "distance", lineno),
        species=tuple(_as_int(s, "species", lineno) for s in _expect(obj, "species", lineno)),
        positions=tuple(positions),
        edges=tuple(edges),
        chiral_center=_as_int(_expect(obj, "chiral_center", lineno), "chiral_center", lineno),
        labels=tuple(labels),
        stp_value=_as_float(_expect(obj, "stp_value", lineno), "stp_value", lineno),
        sample_seed=_as_int(_expect(obj, "sample_seed", lineno), "sample_seed", lineno),
    )


def manifest_from_record(obj: dict) -> DatasetManifest:
    if not isinstance(obj, dict):
        raise MalformedRecordError("manifest must be a JSON object")
    version = _expect(obj, "format_version", None)
    if version != FORMAT_VERSION:
        raise FormatVersionError(
            f"unsupported format_version {version!r}; this build reads {FORMAT_VERSION!r}"
        )
    raw_cfg = _expect(obj, "config", None)
    try:
        config = GenerationConfig(
            sample_type=SampleType(_expect(raw_cfg, "sample_type", None)),
            distance=_as_int(_expect(raw_cfg, "distance", None), "distance", None),
            species_range=_as_int(_expect(raw_cfg, "species_range", None), "species_range", None),
            noise=bool(_expect(raw_cfg, "noise", None)),
            count=_as_int(_expect(raw_cfg, "count", None), "count", None),
            master_seed=_as_int(_expect(raw_cfg, "master_seed", None), "master_seed", None),
        )
    except ValueError as exc:
        raise MalformedRecordError(f"bad config: {exc}") from None
    splits = _expect(obj, "split_indices", None)
    counts = _expect(obj, "class_counts", None)
    weights = _expect(obj, "class_weights", None)
    if not isinstance(weights, list) or len(weights) != 3:
        raise MalformedRecordError(f"class_weights must be three reals, got {weights!r}")
    return DatasetManifest(
        config=config,
        split_train=tuple(_as_int(i, "split index", None) for i in _expect(splits, "train", None)),
        split_val=tuple(_as_int(i, "split index", None) for i in _expect(splits, "val", None)),
        split_test=tuple(_as_int(i, "split index", None) for i in _expect(splits, "test", None)),
        class_counts=(
            _as_int(_expect(counts, "NA", None), "class count", None),
            _as_int(_expect(counts, "R", None), "class count", None),
            _as_int(_expect(counts, "S", None), "class count", None),
        ),
        class_weights=tuple(_as_float(w, "class weight", None) for w in weights),
        weight_constant=_as_float(_expect(obj, "weight_constant", None), "weight_constant", None),
        format_version=version,
    )


def load_manifest(path: str | os.PathLike) -> DatasetManifest:
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MalformedRecordError(f"manifest is not valid JSON: {exc}") from None
    return manifest_from_record(obj)


def save_manifest(manifest: DatasetManifest, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(canonical_json(manifest_record(manifest)))
        fh.write("\n")


def _check_manifest_against(
    manifest: DatasetManifest, samples: Sequence[GraphSample]
) -> None:
    count = manifest.config.count
    if len(samples) != count:
        raise InvariantViolationError(
            f"manifest count {count} != {len(samples)} records in sample file"
        )
    for i, sample in enumerate(samples):
        if (
            sample.sample_type is not manifest.config.sample_type
            or sample.distance != manifest.config.distance
        ):
            raise InvariantViolationError(
                f"record ({sample.sample_type.value}, D={sample.distance}) does not "
                f"match the manifest config ({manifest.config.sample_type.value}, "
                f"D={manifest.config.distance})",
                sample_index=i,
            )
    merged = sorted(manifest.split_train + manifest.split_val + manifest.split_test)
    if merged != list(range(count)):
        raise InvariantViolationError("split lists do not partition 0..count-1")
    actual = count_labels(samples)
    if tuple(manifest.class_counts) != actual:
        raise InvariantViolationError(
            f"manifest class_counts {manifest.class_counts} != actual {actual}"
        )


def parse_dataset(
    path: str | os.PathLike,
) -> tuple[list[GraphSample], DatasetManifest]:
    """Read and validate a dataset; every model invariant is re-checked."""
    manifest = load_manifest(manifest_path_for(path))
    samples: list[GraphSample] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped:
                raise MalformedRecordError("blank line in sample file", lineno)
            try:
                obj = json.loads(stripped)
            except json.JSONDecodeError as exc:
                raise MalformedRecordError(f"invalid JSON: {exc.msg}", lineno) from None
            sample = sample_from_record(obj, lineno)
            validate_sample(sample, index=lineno - 1)
            samples.append(sample)
    _check_manifest_against(manifest, samples)
    return samples, manifest


# ---------------------------------------------------------------------------
# statistics


def dataset_stats(
    samples: Sequence[GraphSample], weight_b: float = DEFAULT_WEIGHT_CONSTANT
) -> dict:
    """Counts, imbalance, weights, and triple-product extremes for a dataset."""
    na, r, s = count_labels(samples)
    g = math.gcd(r, s)
    nodes = sum(sample.node_count for sample in samples)
    directed = sum(len(sample.edges) for sample in samples)
    abs_stps = [abs(sample.stp_value) for sample in samples]
    distance = samples[0].distance if samples else None
    stats = {
        "count": len(samples),
        "sample_type": samples[0].sample_type.value if samples else None,
        "distance": distance,
        "n_na": na,
        "n_r": r,
        "n_s": s,
        "r_s_ratio": f"{r // g}:{s // g}" if g else "0:0",
        "node_total": nodes,
        "edge_total_directed": directed,
        "edge_total_undirected": directed // 2,
        "weight_constant": weight_b,
        "class_weights": list(class_weights(weight_b, distance)) if distance else None,
        "stp_abs_min": min(abs_stps) if abs_stps else None,
        "stp_abs_max": max(abs_stps) if abs_stps else None,
    }
    return stats
