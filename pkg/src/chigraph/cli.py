"""Command-line front end.

Exit codes: 0 success, 1 validation/verification failure, 2 usage error,
3 I/O error. Errors go to stderr with a machine-parsable prefix
(``error:validation:``, ``error:usage:``, ``error:io:``). All randomness
flows from ``--seed``; reruns with identical flags overwrite outputs with
byte-identical content.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from .errors import ChigraphError
from .model import GenerationConfig, SampleType
from .oversquash import aggregate_gradient_profile, load_gradient_norms, write_profile_csv
from .pipeline import (
    DEFAULT_WEIGHT_CONSTANT,
    VERIFY_STREAM_INDEX,
    class_weights,
    dataset_stats,
    generate_dataset,
    load_manifest,
    manifest_path_for,
    parse_dataset,
    save_manifest,
    serialize_dataset,
    split_dataset,
    split_rng,
)
from .rng import SampleRng, derive_sample_seed
from .verify import metamorphic_suite, verify_dataset

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2
EXIT_IO = 3

THREADS_ENV_VAR = "CHIGRAPH_THREADS"


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # exit 2 with the documented prefix
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error:usage: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _ratios(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected three comma-separated ratios")
    try:
        a, b, c = (float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"ratios must be numbers, got {text!r}") from None
    return a, b, c


def _bool_flag(text: str) -> bool:
    return text == "true"


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="chigraph",
        description="Generate, verify, and analyze synthetic chiral graph datasets.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    gen = sub.add_parser(
        "generate", help="generate a dataset and write it with its manifest"
    )
    gen.add_argument(
        "--type",
        dest="sample_type",
        choices=[t.value for t in SampleType],
        default=SampleType.SIMPLE.value,
        help="structural arrangement (default: simple)",
    )
    gen.add_argument(
        "--distance", type=int, required=True, help="number of layers (>= 1)"
    )
    gen.add_argument(
        "--species-range",
        type=int,
        default=15,
        help="upper bound of the species sampling interval (default: 15)",
    )
    gen.add_argument(
        "--noise",
        type=_bool_flag,
        choices=[True, False],
        metavar="{true,false}",
        default=True,
        help="randomize node positions (default: true)",
    )
    gen.add_argument(
        "--count", type=int, default=25000, help="number of samples (default: 25000)"
    )
    gen.add_argument(
        "--seed", type=int, default=0, help="master seed, unsigned 64-bit (default: 0)"
    )
    gen.add_argument("--out", required=True, help="output .jsonl path")
    gen.add_argument(
        "--split",
        type=_ratios,
        default=(0.8, 0.1, 0.1),
        metavar="A,B,C",
        help="train/val/test ratios (default: 0.8,0.1,0.1)",
    )
    gen.add_argument(
        "--weight-b",
        type=float,
        default=DEFAULT_WEIGHT_CONSTANT,
        help="class-weight constant b (default: 10.0)",
    )
    gen.add_argument(
        "--threads",
        type=int,
        default=None,
        help=f"worker processes (default: ${THREADS_ENV_VAR} or all cores)",
    )
    gen.add_argument(
        "--sequential",
        action="store_true",
        help="sequential split instead of the seeded shuffle",
    )
    gen.set_defaults(func=_cmd_generate)

    ver = sub.add_parser("verify", help="re-check every invariant of a dataset")
    ver.add_argument("--in", dest="input", required=True, help="dataset .jsonl path")
    ver.add_argument(
        "--metamorphic",
        type=int,
        default=0,
        metavar="N",
        help="also run N random rigid motions and N reflections per sample",
    )
    ver.add_argument("--report", help="write a machine-readable JSON report here")
    ver.set_defaults(func=_cmd_verify)

    sta = sub.add_parser("stats", help="print dataset statistics as JSON")
    sta.add_argument("--in", dest="input", required=True, help="dataset .jsonl path")
    sta.add_argument(
        "--weight-b",
        type=float,
        default=DEFAULT_WEIGHT_CONSTANT,
        help="class-weight constant b (default: 10.0)",
    )
    sta.set_defaults(func=_cmd_stats)

    spl = sub.add_parser("split", help="recompute manifest split indices")
    spl.add_argument("--in", dest="input", required=True, help="dataset .jsonl path")
    spl.add_argument(
        "--ratios", type=_ratios, required=True, metavar="A,B,C", help="three ratios"
    )
    spl.add_argument(
        "--seed",
        type=int,
        default=None,
        help="seed for the split shuffle (default: the dataset master seed)",
    )
    spl.add_argument("--sequential", action="store_true", help="split in index order")
    spl.set_defaults(func=_cmd_split)

    wei = sub.add_parser("weights", help="print class weights for (b, distance)")
    wei.add_argument("--b", type=float, required=True, help="weight constant b")
    wei.add_argument("--distance", type=int, required=True, help="chirality distance")
    wei.set_defaults(func=_cmd_weights)

    ove = sub.add_parser(
        "oversquash", help="aggregate external gradient norms into a per-hop profile"
    )
    ove.add_argument("--in", dest="input", required=True, help="dataset .jsonl path")
    ove.add_argument(
        "--gradients", required=True, help="gradient-norm .jsonl path (external input)"
    )
    ove.add_argument("--out", required=True, help="output CSV path (d,g_bar,g_hat)")
    ove.set_defaults(func=_cmd_oversquash)

    return parser


def _resolve_threads(value: int | None) -> int:
    if value is not None:
        return max(1, value)
    env = os.environ.get(THREADS_ENV_VAR)
    if env is not None and env.strip().isdigit():
        return max(1, int(env))
    return os.cpu_count() or 1


def _cmd_generate(args) -> int:
    config = GenerationConfig(
        sample_type=SampleType(args.sample_type),
        distance=args.distance,
        species_range=args.species_range,
        noise=args.noise,
        count=args.count,
        master_seed=args.seed,
    )
    samples, manifest = generate_dataset(
        config,
        ratios=args.split,
        weight_b=args.weight_b,
        threads=_resolve_threads(args.threads),
        sequential_split=args.sequential,
    )
    serialize_dataset(samples, manifest, args.out)
    print(json.dumps(dataset_stats(samples, args.weight_b), indent=2))
    return EXIT_OK


def _cmd_verify(args) -> int:
    samples, manifest = parse_dataset(args.input)
    report = verify_dataset(samples, manifest.config)
    failing = [rep for rep in report.sample_reports if not rep.overall]

    meta_reports = []
    if args.metamorphic > 0:
        rng = SampleRng(
            derive_sample_seed(manifest.config.master_seed, VERIFY_STREAM_INDEX)
        )
        for i, sample in enumerate(samples):
            meta_reports.append(metamorphic_suite(sample, rng, args.metamorphic, i))
    meta_failing = [rep for rep in meta_reports if not rep.overall]

    ok = report.overall and not meta_failing
    for rep in failing[:20]:
        print(f"sample {rep.sample_index}: failed {', '.join(rep.failed_names())}")
    for rep in meta_failing[:20]:
        print(f"sample {rep.sample_index}: failed {', '.join(rep.failed_names())}")
    for warning in report.warnings:
        print(f"warning: {warning}")
    print(
        f"checked {len(samples)} samples: "
        f"{len(failing)} structural failures, {len(meta_failing)} metamorphic failures, "
        f"imbalance identity {'holds' if report.imbalance_ok else 'VIOLATED'} "
        f"({report.imbalance_detail}), R:S = {report.rs_ratio}"
    )

    if args.report:
        payload = {
            "overall": ok,
            "class_counts": {
                "NA": report.class_counts[0],
                "R": report.class_counts[1],
                "S": report.class_counts[2],
            },
            "imbalance_ok": report.imbalance_ok,
            "rs_ratio": report.rs_ratio,
            "warnings": list(report.warnings),
            "samples": [
                {
                    "index": rep.sample_index,
                    "overall": rep.overall,
                    "checks": [
                        {"name": c.name, "passed": c.passed, "detail": c.detail}
                        for c in rep.checks
                    ],
                }
                for rep in report.sample_reports
            ],
            "metamorphic": [
                {
                    "index": rep.sample_index,
                    "overall": rep.overall,
                    "checks": [
                        {"name": c.name, "passed": c.passed, "detail": c.detail}
                        for c in rep.checks
                    ],
                }
                for rep in meta_reports
            ],
        }
        with open(args.report, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")

    return EXIT_OK if ok else EXIT_VALIDATION


def _cmd_stats(args) -> int:
    samples, _ = parse_dataset(args.input)
    print(json.dumps(dataset_stats(samples, args.weight_b), indent=2))
    return EXIT_OK


def _cmd_split(args) -> int:
    manifest_path = manifest_path_for(args.input)
    manifest = load_manifest(manifest_path)
    seed = manifest.config.master_seed if args.seed is None else args.seed
    train, val, test = split_dataset(
        manifest.config.count,
        args.ratios,
        rng=split_rng(seed),
        sequential=args.sequential,
    )
    from dataclasses import replace

    save_manifest(
        replace(
            manifest,
            split_train=tuple(train),
            split_val=tuple(val),
            split_test=tuple(test),
        ),
        manifest_path,
    )
    print(f"split sizes: train={len(train)} val={len(val)} test={len(test)}")
    return EXIT_OK


def _cmd_weights(args) -> int:
    print(" ".join(str(w) for w in class_weights(args.b, args.distance)))
    return EXIT_OK


def _cmd_oversquash(args) -> int:
    samples, manifest = parse_dataset(args.input)
    norms = load_gradient_norms(args.gradients, expected_count=len(samples))
    profile = aggregate_gradient_profile(samples, norms, manifest.config.distance)
    write_profile_csv(profile, args.out)
    print(
        json.dumps(
            {
                "distances": list(profile.distances),
                "g_bar": list(profile.g_bar),
                "g_hat": list(profile.g_hat),
            }
        )
    )
    return EXIT_OK


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse handles usage errors and --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ChigraphError as exc:
        sys.stderr.write(f"error:validation: {exc}\n")
        return EXIT_VALIDATION
    except OSError as exc:
        sys.stderr.write(f"error:io: {exc}\n")
        return EXIT_IO


def main() -> int:
    return run(sys.argv[1:])


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
