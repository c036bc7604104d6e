"""HTTP facade over the degradation pipeline.

Each endpoint wraps one handler function; the CLI drives the same handlers
in-process, so both surfaces share request/response models and behavior.
Paths in requests refer to the service host's filesystem.
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..image_core import DecodeError, ParameterError, ShapeError, load_image, save_image, write_bytes_atomic
from ..metrics import evaluate_dirs
from ..pipeline import (
    RESIZE_TARGET,
    RecordError,
    VersionMismatchError,
    apply_record,
    degrade,
    dump_record,
    load_record,
    synth_dataset,
)
from .schemas import (
    DegradeRequest,
    DegradeResponse,
    EvalRequest,
    EvalResponse,
    HealthResponse,
    ReplayRequest,
    ReplayResponse,
    SynthRequest,
    SynthResponse,
)

_CLIENT_ERRORS = (ParameterError, ShapeError, DecodeError, RecordError, OSError)


def run_degrade(req: DegradeRequest) -> DegradeResponse:
    img = load_image(req.input_path)
    degraded, mask, record = degrade(
        img,
        req.seed,
        image_id=Path(req.input_path).stem,
        factor_selection=req.factors,
        noise_std=req.noise_std,
        resize_to=RESIZE_TARGET if req.resize else None,
    )
    save_image(req.output_path, degraded)
    if req.mask_path:
        save_image(req.mask_path, mask)
    if req.params_path:
        write_bytes_atomic(req.params_path, dump_record(record).encode("utf-8"))
    return DegradeResponse(
        output_path=req.output_path,
        mask_path=req.mask_path,
        params_path=req.params_path,
        factors=list(record.factors),
    )


def run_synth(req: SynthRequest) -> SynthResponse:
    summary = synth_dataset(
        req.clean_dir,
        req.out_dir,
        req.seed,
        variants_per_image=req.variants,
        factor_selection=req.factors,
        resize=req.resize,
        jobs=req.jobs,
        noise_std=req.noise_std,
    )
    if summary.variants == 0:
        raise ParameterError(f"no variants produced from {req.clean_dir}")
    return SynthResponse(
        images=summary.images,
        variants=summary.variants,
        failures=summary.failures,
        elapsed_seconds=summary.elapsed_seconds,
        out_dir=summary.out_dir,
        manifest_path=summary.manifest_path,
    )


def run_replay(req: ReplayRequest) -> ReplayResponse:
    record = load_record(req.params_path)
    img = load_image(req.input_path)
    degraded, _mask = apply_record(img, record)
    save_image(req.output_path, degraded)
    return ReplayResponse(output_path=req.output_path, factors=list(record.factors))


def run_eval(req: EvalRequest) -> EvalResponse:
    report, skipped = evaluate_dirs(req.ref_dir, req.test_dir)
    write_bytes_atomic(req.report_path, (json.dumps(report, indent=2) + "\n").encode("utf-8"))
    return EvalResponse(
        count=report["count"],
        skipped=skipped,
        mean_psnr=report["mean_psnr"],
        mean_ssim=report["mean_ssim"],
        report_path=req.report_path,
    )


app = FastAPI(title="fundusynth", version=__version__)


def _guard(handler, req):
    try:
        return handler(req)
    except VersionMismatchError as exc:
        raise HTTPException(status_code=409, detail=str(exc)) from exc
    except _CLIENT_ERRORS as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.post("/degrade", response_model=DegradeResponse)
def degrade_endpoint(req: DegradeRequest) -> DegradeResponse:
    return _guard(run_degrade, req)


@app.post("/synth", response_model=SynthResponse)
def synth_endpoint(req: SynthRequest) -> SynthResponse:
    return _guard(run_synth, req)


@app.post("/replay", response_model=ReplayResponse)
def replay_endpoint(req: ReplayRequest) -> ReplayResponse:
    return _guard(run_replay, req)


@app.post("/eval", response_model=EvalResponse)
def eval_endpoint(req: EvalRequest) -> EvalResponse:
    return _guard(run_eval, req)
