"""Command-line front end: a thin client over the service handlers.

Subcommands: degrade (single image), synth (batch dataset), replay
(re-render from a params sidecar), eval (PSNR/SSIM report). Exit codes:
0 success, 1 runtime failure, 2 usage error. Diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .image_core import DecodeError, ParameterError, ShapeError
from .pipeline import FACTOR_ORDER, RecordError
from .service.app import run_degrade, run_eval, run_replay, run_synth
from .service.schemas import (
    DegradeRequest,
    EvalRequest,
    ReplayRequest,
    SynthRequest,
    validate_factors,
)

_RUNTIME_ERRORS = (ParameterError, ShapeError, DecodeError, RecordError, OSError)


def _factors_argument(text: str):
    try:
        return validate_factors([t.strip() for t in text.split(",")] if "," in text else text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fundusynth",
        description="Seeded fundus-image degradation, dataset synthesis and evaluation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    degrade_p = sub.add_parser("degrade", help="degrade a single image")
    degrade_p.add_argument("--input", required=True, help="clean input image (PNG/JPEG)")
    degrade_p.add_argument("--output", required=True, help="degraded output PNG")
    degrade_p.add_argument("--mask", help="write the artifact ground-truth mask PNG here")
    degrade_p.add_argument("--params", help="write the provenance sidecar JSON here")
    degrade_p.add_argument("--seed", type=int, default=0, help="64-bit master seed (default 0)")
    degrade_p.add_argument(
        "--factors",
        type=_factors_argument,
        default="random",
        help=f"comma-separated subset of {','.join(FACTOR_ORDER)}, or random|all",
    )
    degrade_p.add_argument("--resize", action="store_true", help="resize to 512x512 first")
    degrade_p.add_argument("--noise-std", type=float, default=0.01, help="blur noise level")
    degrade_p.set_defaults(func=_cmd_degrade)

    synth_p = sub.add_parser("synth", help="synthesize a paired dataset")
    synth_p.add_argument("--clean-dir", required=True, help="directory of clean images")
    synth_p.add_argument("--out-dir", required=True, help="output dataset directory")
    synth_p.add_argument("--seed", type=int, default=0)
    synth_p.add_argument("--variants", type=int, default=1, help="variants per clean image")
    synth_p.add_argument("--factors", type=_factors_argument, default="random")
    synth_p.add_argument("--resize", action="store_true", help="resize to 512x512 first")
    synth_p.add_argument("--jobs", type=int, default=1, help="concurrent per-image tasks")
    synth_p.add_argument("--noise-std", type=float, default=0.01)
    synth_p.set_defaults(func=_cmd_synth)

    replay_p = sub.add_parser("replay", help="re-render a degradation from its sidecar")
    replay_p.add_argument("--input", required=True, help="the original clean image")
    replay_p.add_argument("--params", required=True, help="provenance sidecar JSON")
    replay_p.add_argument("--output", required=True, help="re-rendered output PNG")
    replay_p.set_defaults(func=_cmd_replay)

    eval_p = sub.add_parser("eval", help="score test images against references")
    eval_p.add_argument("--ref-dir", required=True, help="reference (ground truth) images")
    eval_p.add_argument("--test-dir", required=True, help="images to score, same filenames")
    eval_p.add_argument("--report", required=True, help="quality report JSON output")
    eval_p.set_defaults(func=_cmd_eval)
    return parser


def _cmd_degrade(args) -> int:
    run_degrade(
        DegradeRequest(
            input_path=args.input,
            output_path=args.output,
            mask_path=args.mask,
            params_path=args.params,
            seed=args.seed,
            factors=args.factors,
            resize=args.resize,
            noise_std=args.noise_std,
        )
    )
    return 0


def _cmd_synth(args) -> int:
    resp = run_synth(
        SynthRequest(
            clean_dir=args.clean_dir,
            out_dir=args.out_dir,
            seed=args.seed,
            variants=args.variants,
            factors=args.factors,
            resize=args.resize,
            jobs=args.jobs,
            noise_std=args.noise_std,
        )
    )
    print(f"generated {resp.variants} variants from {resp.images} images")
    return 0


def _cmd_replay(args) -> int:
    run_replay(
        ReplayRequest(input_path=args.input, params_path=args.params, output_path=args.output)
    )
    return 0


def _cmd_eval(args) -> int:
    resp = run_eval(
        EvalRequest(ref_dir=args.ref_dir, test_dir=args.test_dir, report_path=args.report)
    )
    print(f"mean PSNR {resp.mean_psnr} dB, mean SSIM {resp.mean_ssim:.4f} over {resp.count} pairs")
    return 0


def main(argv=None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="%(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _RUNTIME_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
