"""Seeded fundus-image degradation with paired-dataset synthesis and quality metrics."""

__version__ = "0.1.0"

from .artifacts import (
    ArtifactSpec,
    apply_artifacts,
    ground_truth_mask,
    render_artifact_layer,
    sample_artifacts,
)
from .blur import BlurParams, LensConfig, apply_defocus, blur_radius, sample_blur
from .image_core import (
    DecodeError,
    GaussianKernel,
    ImageF,
    ParameterError,
    ShapeError,
    clip_saturate,
    convolve_gaussian,
    decode_image,
    encode_image,
    gaussian_kernel,
    load_image,
    save_image,
)
from .light import (
    LEAK_BIASES,
    NEUTRAL_TONE,
    GlobalToneParams,
    IlluminationPanelParams,
    apply_light_disturbance,
    build_panel,
    sample_light_leak,
    sample_uneven_exposure,
)
from .metrics import (
    LossWeights,
    content_loss,
    evaluate_dirs,
    mask_loss,
    masked_content_loss,
    psnr,
    ssim,
    total_loss,
)
from .pipeline import (
    FACTOR_ORDER,
    SPEC_VERSION,
    DegradationRecord,
    FovMask,
    RecordError,
    SynthSummary,
    VersionMismatchError,
    apply_record,
    degrade,
    detect_fov,
    dump_record,
    load_record,
    resize_image,
    synth_dataset,
)
from .seeding import SEED_DERIVATION, SeededStream

__all__ = [
    "ArtifactSpec",
    "BlurParams",
    "DegradationRecord",
    "DecodeError",
    "FACTOR_ORDER",
    "FovMask",
    "GaussianKernel",
    "GlobalToneParams",
    "ImageF",
    "IlluminationPanelParams",
    "LEAK_BIASES",
    "LensConfig",
    "LossWeights",
    "NEUTRAL_TONE",
    "ParameterError",
    "RecordError",
    "SEED_DERIVATION",
    "SPEC_VERSION",
    "SeededStream",
    "ShapeError",
    "SynthSummary",
    "VersionMismatchError",
    "apply_artifacts",
    "apply_defocus",
    "apply_light_disturbance",
    "apply_record",
    "blur_radius",
    "build_panel",
    "clip_saturate",
    "content_loss",
    "convolve_gaussian",
    "decode_image",
    "degrade",
    "detect_fov",
    "dump_record",
    "encode_image",
    "evaluate_dirs",
    "gaussian_kernel",
    "ground_truth_mask",
    "load_image",
    "load_record",
    "mask_loss",
    "masked_content_loss",
    "psnr",
    "render_artifact_layer",
    "resize_image",
    "sample_artifacts",
    "sample_blur",
    "sample_light_leak",
    "sample_uneven_exposure",
    "save_image",
    "ssim",
    "synth_dataset",
    "total_loss",
]
