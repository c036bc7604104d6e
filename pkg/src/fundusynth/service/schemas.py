"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from pydantic import BaseModel, field_validator

from ..pipeline import FACTOR_ORDER, LIGHT_FACTORS


def validate_factors(value):
    if isinstance(value, str):
        if value in ("random", "all"):
            return value
        value = [value]
    tags = list(value)
    if not tags:
        raise ValueError("factor list is empty")
    for tag in tags:
        if tag not in FACTOR_ORDER:
            raise ValueError(f"unknown degradation factor {tag!r}")
    if set(LIGHT_FACTORS) <= set(tags):
        raise ValueError("light_leak and uneven_exposure are mutually exclusive")
    return tags


class DegradeRequest(BaseModel):
    input_path: str
    output_path: str
    mask_path: str | None = None
    params_path: str | None = None
    seed: int = 0
    factors: str | list[str] = "random"
    resize: bool = False
    noise_std: float = 0.01

    @field_validator("factors")
    @classmethod
    def _factors(cls, value):
        return validate_factors(value)


class DegradeResponse(BaseModel):
    output_path: str
    mask_path: str | None
    params_path: str | None
    factors: list[str]


class SynthRequest(BaseModel):
    clean_dir: str
    out_dir: str
    seed: int = 0
    variants: int = 1
    factors: str | list[str] = "random"
    resize: bool = False
    jobs: int = 1
    noise_std: float = 0.01

    @field_validator("factors")
    @classmethod
    def _factors(cls, value):
        return validate_factors(value)


class SynthResponse(BaseModel):
    images: int
    variants: int
    failures: int
    elapsed_seconds: float
    out_dir: str
    manifest_path: str


class ReplayRequest(BaseModel):
    input_path: str
    params_path: str
    output_path: str


class ReplayResponse(BaseModel):
    output_path: str
    factors: list[str]


class EvalRequest(BaseModel):
    ref_dir: str
    test_dir: str
    report_path: str


class EvalResponse(BaseModel):
    count: int
    skipped: int
    mean_psnr: float | str
    mean_ssim: float
    report_path: str


class HealthResponse(BaseModel):
    status: str
    version: str
