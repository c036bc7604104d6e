"""Seeded composition of the degradation operators into paired-dataset synthesis runs.

Every run is fully determined by (master_seed, image_id, variant, factor
selection, input bytes). Sampled parameters are captured in a
DegradationRecord whose JSON sidecar is sufficient to replay the degraded
image byte-exactly from the clean source.
"""

from __future__ import annotations

import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from .artifacts import ArtifactSpec, apply_artifacts, ground_truth_mask, sample_artifacts
from .blur import BlurParams, apply_defocus, sample_blur
from .image_core import (
    DecodeError,
    ImageF,
    ParameterError,
    ShapeError,
    load_image,
    save_image,
    write_bytes_atomic,
)
from .light import (
    GlobalToneParams,
    IlluminationPanelParams,
    apply_light_disturbance,
    build_panel,
    sample_light_leak,
    sample_uneven_exposure,
)
from .seeding import SEED_DERIVATION, SeededStream

logger = logging.getLogger(__name__)

SPEC_VERSION = "1.0"

FACTOR_ORDER = ("light_leak", "uneven_exposure", "blur", "artifact")
LIGHT_FACTORS = ("light_leak", "uneven_exposure")

IMAGE_SUFFIXES = {".png", ".jpg", ".jpeg"}

RESIZE_TARGET = (512, 512)

_FOV_THRESHOLD = 0.03
_FOV_MIN_FOREGROUND = 0.05
_FOV_RADIUS_SCALE = 1.02
_FOV_PERCENTILE = 99.0
# Panel and artifact centers stay within this fraction of the FOV radius.
_PLACEMENT_SHRINK = 0.9


class RecordError(ValueError):
    """A degradation record is malformed or inconsistent."""


class VersionMismatchError(RecordError):
    """The record was produced by a different engine version."""

    def __init__(self, found, expected):
        super().__init__(f"record version {found!r} does not match engine version {expected!r}")
        self.found = found
        self.expected = expected


@dataclass(frozen=True)
class FovMask:
    """Circular field of view: center (cx, cy) and radius, in pixels."""

    cx: float
    cy: float
    radius: float

    def __post_init__(self):
        if self.radius <= 0:
            raise ParameterError(f"FOV radius must be > 0, got {self.radius}")


def detect_fov(img: ImageF) -> FovMask:
    """Centroid plus 99th-percentile radius of above-threshold pixels.

    Falls back to a full-frame circle when less than 5% of pixels clear the
    threshold.
    """
    if img.channels != 3:
        raise ShapeError(f"FOV detection expects 3 channels, got {img.channels}")
    mean = img.data.mean(axis=0)
    h, w = mean.shape
    fg = mean > _FOV_THRESHOLD
    if fg.sum() < _FOV_MIN_FOREGROUND * fg.size:
        return FovMask((w - 1) / 2.0, (h - 1) / 2.0, float(np.hypot(w, h) / 2.0))
    ys, xs = np.nonzero(fg)
    cx = float(xs.mean())
    cy = float(ys.mean())
    dist = np.hypot(xs - cx, ys - cy)
    radius = float(_FOV_RADIUS_SCALE * np.percentile(dist, _FOV_PERCENTILE))
    return FovMask(cx, cy, max(radius, 1.0))


@dataclass(frozen=True)
class DegradationRecord:
    """Full provenance of one synthesis run.

    `params` maps factor tag to its sampled parameters: (panel, tone) for the
    light factors, BlurParams for blur, a list of ArtifactSpec for artifact.
    """

    master_seed: int
    image_id: str
    variant: int
    factors: tuple[str, ...]
    params: dict
    fov: FovMask
    resize: tuple[int, int] | None = None
    spec_version: str = SPEC_VERSION

    def to_dict(self) -> dict:
        params = {}
        for tag in self.factors:
            value = self.params[tag]
            if tag in LIGHT_FACTORS:
                panel, tone = value
                params[tag] = {
                    "center": list(panel.center),
                    "radius": panel.radius,
                    "sigma": panel.sigma,
                    "bias": list(panel.bias),
                    "tone": {
                        "contrast": tone.contrast,
                        "brightness": tone.brightness,
                        "saturation": tone.saturation,
                    },
                }
            elif tag == "blur":
                params[tag] = {
                    "radius": value.radius,
                    "sigma": value.sigma,
                    "noise_std": value.noise_std,
                }
            else:
                params[tag] = {
                    "specs": [
                        {
                            "center": list(s.center),
                            "radius": s.radius,
                            "sigma": s.sigma,
                            "bias": s.bias,
                        }
                        for s in value
                    ]
                }
        return {
            "spec_version": self.spec_version,
            "master_seed": self.master_seed,
            "image_id": self.image_id,
            "variant": self.variant,
            "factors": list(self.factors),
            "params": params,
            "fov": {"cx": self.fov.cx, "cy": self.fov.cy, "r": self.fov.radius},
            "resize": list(self.resize) if self.resize else None,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "DegradationRecord":
        if not isinstance(payload, dict):
            raise RecordError("record payload must be a JSON object")
        required = ("spec_version", "master_seed", "image_id", "variant", "factors", "params", "fov")
        for key in required:
            if key not in payload:
                raise RecordError(f"record is missing key {key!r}")
        if payload["spec_version"] != SPEC_VERSION:
            raise VersionMismatchError(payload["spec_version"], SPEC_VERSION)
        factors = tuple(payload["factors"])
        if not factors:
            raise RecordError("record factor list is empty")
        for tag in factors:
            if tag not in FACTOR_ORDER:
                raise RecordError(f"record has unknown factor {tag!r}")
        raw_params = payload["params"]
        if set(raw_params) != set(factors):
            raise RecordError("record params do not match its factor list")
        try:
            params = {tag: _params_from_dict(tag, raw_params[tag]) for tag in factors}
            fov = FovMask(
                float(payload["fov"]["cx"]),
                float(payload["fov"]["cy"]),
                float(payload["fov"]["r"]),
            )
            resize = payload.get("resize")
            resize = (int(resize[0]), int(resize[1])) if resize else None
            return cls(
                master_seed=int(payload["master_seed"]),
                image_id=str(payload["image_id"]),
                variant=int(payload["variant"]),
                factors=factors,
                params=params,
                fov=fov,
                resize=resize,
                spec_version=str(payload["spec_version"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise RecordError(f"malformed record field: {exc}") from exc


def _params_from_dict(tag: str, obj: dict):
    if tag in LIGHT_FACTORS:
        if set(obj) != {"center", "radius", "sigma", "bias", "tone"}:
            raise RecordError(f"unexpected fields in {tag} params: {sorted(obj)}")
        tone = obj["tone"]
        if set(tone) != {"contrast", "brightness", "saturation"}:
            raise RecordError(f"unexpected fields in {tag} tone: {sorted(tone)}")
        panel = IlluminationPanelParams(
            center=(float(obj["center"][0]), float(obj["center"][1])),
            radius=float(obj["radius"]),
            sigma=float(obj["sigma"]),
            bias=tuple(float(v) for v in obj["bias"]),
        )
        return panel, GlobalToneParams(
            contrast=float(tone["contrast"]),
            brightness=float(tone["brightness"]),
            saturation=float(tone["saturation"]),
        )
    if tag == "blur":
        if set(obj) != {"radius", "sigma", "noise_std"}:
            raise RecordError(f"unexpected fields in blur params: {sorted(obj)}")
        return BlurParams(
            radius=float(obj["radius"]),
            sigma=float(obj["sigma"]),
            noise_std=float(obj["noise_std"]),
        )
    if set(obj) != {"specs"}:
        raise RecordError(f"unexpected fields in artifact params: {sorted(obj)}")
    specs = []
    for s in obj["specs"]:
        if set(s) != {"center", "radius", "sigma", "bias"}:
            raise RecordError(f"unexpected fields in artifact spec: {sorted(s)}")
        specs.append(
            ArtifactSpec(
                center=(float(s["center"][0]), float(s["center"][1])),
                radius=float(s["radius"]),
                sigma=float(s["sigma"]),
                bias=float(s["bias"]),
            )
        )
    return specs


def dump_record(record: DegradationRecord) -> str:
    return json.dumps(record.to_dict(), indent=2) + "\n"


def load_record(path) -> DegradationRecord:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise RecordError(f"{path}: cannot read record ({exc})") from exc
    return DegradationRecord.from_dict(payload)


def resize_image(img: ImageF, size: tuple[int, int]) -> ImageF:
    """Bilinear per-channel resize to (width, height)."""
    w, h = int(size[0]), int(size[1])
    if w < 1 or h < 1:
        raise ParameterError(f"resize target must be >= 1, got {size}")
    if (w, h) == (img.width, img.height):
        return img.copy()
    planes = [
        np.asarray(
            Image.fromarray(plane.astype(np.float32), mode="F").resize(
                (w, h), Image.Resampling.BILINEAR
            ),
            dtype=np.float64,
        )
        for plane in img.data
    ]
    return ImageF(np.stack(planes))


def _resolve_selection(selection, stream: SeededStream) -> tuple[str, ...]:
    """Normalize a factor selection to an ordered tag tuple.

    "random" flips an independent fair coin per factor and rejects draws that
    are empty or contain both illumination panels; "all" combines one light
    factor (chosen by coin) with blur and artifact.
    """
    if isinstance(selection, str):
        if selection == "random":
            rng = stream.rng
            while True:
                picked = tuple(tag for tag in FACTOR_ORDER if rng.random() < 0.5)
                if picked and not set(LIGHT_FACTORS) <= set(picked):
                    return picked
        if selection == "all":
            light = LIGHT_FACTORS[int(stream.rng.integers(0, 2))]
            return (light, "blur", "artifact")
        selection = [selection]
    tags = tuple(selection)
    if not tags:
        raise ParameterError("factor list is empty")
    for tag in tags:
        if tag not in FACTOR_ORDER:
            raise ParameterError(f"unknown degradation factor {tag!r}")
    if set(LIGHT_FACTORS) <= set(tags):
        raise ParameterError("light_leak and uneven_exposure are mutually exclusive")
    return tuple(tag for tag in FACTOR_ORDER if tag in set(tags))


def apply_record(img: ImageF, record: DegradationRecord) -> tuple[ImageF, ImageF]:
    """Re-render a record against its clean source image.

    This is the byte-exact replay path; `degrade` routes through it too, so a
    stored sidecar always reproduces the shipped degraded image. Returns the
    degraded image and the artifact ground-truth mask (all-zero when the
    artifact factor is absent).
    """
    work = resize_image(img, record.resize) if record.resize else img
    x = work
    mask = ImageF(np.zeros((1, work.height, work.width)))
    noise_stream = SeededStream(record.master_seed).child(
        record.image_id, record.variant, "blur", "noise"
    )
    for tag in record.factors:
        value = record.params[tag]
        if tag in LIGHT_FACTORS:
            panel_params, tone = value
            panel = build_panel(x.width, x.height, panel_params)
            x = apply_light_disturbance(x, panel, tone)
        elif tag == "blur":
            x = apply_defocus(x, value, noise_stream, min_radius=1)
        else:
            x = apply_artifacts(x, value)
            mask = ground_truth_mask(x.width, x.height, value)
    return ImageF(np.clip(x.data, 0.0, 1.0)), mask


def degrade(
    img: ImageF,
    master_seed: int,
    image_id: str,
    factor_selection="random",
    *,
    variant: int = 0,
    noise_std: float = 0.01,
    resize_to: tuple[int, int] | None = None,
) -> tuple[ImageF, ImageF, DegradationRecord]:
    """Sample one degradation and render it.

    Factors apply in fixed order light -> blur -> artifact; each factor's
    sampler consumes its own child stream of (master_seed, image_id, variant,
    tag). The result is clamped to [0, 1] at the very end.
    """
    if img.channels != 3:
        raise ShapeError(f"degrade expects a 3-channel image, got {img.channels}")
    root = SeededStream(master_seed)
    factors = _resolve_selection(factor_selection, root.child(image_id, variant, "select"))
    work = resize_image(img, resize_to) if resize_to else img
    fov = detect_fov(work)
    region = (fov.cx, fov.cy, _PLACEMENT_SHRINK * fov.radius)
    params = {}
    for tag in factors:
        stream = root.child(image_id, variant, tag)
        if tag == "light_leak":
            params[tag] = sample_light_leak(stream, work.width, region=region)
        elif tag == "uneven_exposure":
            params[tag] = sample_uneven_exposure(stream, work.width, region=region)
        elif tag == "blur":
            params[tag] = sample_blur(stream, work.width, noise_std=noise_std)
        else:
            params[tag] = sample_artifacts(stream, work.width, work.height, region=region)
    record = DegradationRecord(
        master_seed=root.master_seed,
        image_id=image_id,
        variant=variant,
        factors=factors,
        params=params,
        fov=fov,
        resize=(int(resize_to[0]), int(resize_to[1])) if resize_to else None,
    )
    degraded, mask = apply_record(img, record)
    return degraded, mask, record


@dataclass
class SynthSummary:
    """Counts and timing for one dataset synthesis run."""

    images: int
    variants: int
    failures: int
    elapsed_seconds: float
    out_dir: str
    manifest_path: str


def synth_dataset(
    clean_dir,
    out_dir,
    master_seed: int,
    variants_per_image: int = 1,
    factor_selection="random",
    *,
    resize: bool = False,
    jobs: int = 1,
    noise_std: float = 0.01,
) -> SynthSummary:
    """Degrade every image in clean_dir, writing paired outputs plus a manifest.

    Layout under out_dir: degraded/<id>_<k>.png, mask/<id>_<k>.png,
    params/<id>_<k>.json and manifest.json. Undecodable inputs are logged and
    skipped. Results are byte-identical regardless of `jobs`.
    """
    start = time.perf_counter()
    clean_dir = Path(clean_dir)
    out_dir = Path(out_dir)
    if variants_per_image < 1:
        raise ParameterError(f"variants_per_image must be >= 1, got {variants_per_image}")
    files = sorted(
        p for p in clean_dir.iterdir() if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES
    )
    if not files:
        raise ParameterError(f"no images found in {clean_dir}")
    for sub in ("degraded", "mask", "params"):
        (out_dir / sub).mkdir(parents=True, exist_ok=True)
    resize_to = RESIZE_TARGET if resize else None

    def synth_one(path: Path):
        try:
            img = load_image(path)
        except DecodeError as exc:
            logger.warning("skipping %s: %s", path, exc)
            return None
        rows = []
        for k in range(variants_per_image):
            degraded, mask, record = degrade(
                img,
                master_seed,
                path.stem,
                factor_selection,
                variant=k,
                noise_std=noise_std,
                resize_to=resize_to,
            )
            stem = f"{path.stem}_{k}"
            save_image(out_dir / "degraded" / f"{stem}.png", degraded)
            save_image(out_dir / "mask" / f"{stem}.png", mask)
            write_bytes_atomic(
                out_dir / "params" / f"{stem}.json", dump_record(record).encode("utf-8")
            )
            rows.append(
                {
                    "clean": str(path),
                    "degraded": f"degraded/{stem}.png",
                    "mask": f"mask/{stem}.png",
                    "params": f"params/{stem}.json",
                }
            )
        return rows

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(synth_one, files))
    else:
        results = [synth_one(p) for p in files]

    entries = []
    failures = 0
    for rows in results:
        if rows is None:
            failures += 1
        else:
            entries.extend(rows)
    entries.sort(key=lambda e: (e["clean"], e["params"]))

    manifest = {
        "spec_version": SPEC_VERSION,
        "master_seed": SeededStream(master_seed).master_seed,
        "count": len(entries),
        "entries": entries,
        "factor_selection": factor_selection if isinstance(factor_selection, str) else list(factor_selection),
        "seed_derivation": SEED_DERIVATION,
    }
    manifest_path = out_dir / "manifest.json"
    write_bytes_atomic(manifest_path, (json.dumps(manifest, indent=2) + "\n").encode("utf-8"))
    return SynthSummary(
        images=len(files) - failures,
        variants=len(entries),
        failures=failures,
        elapsed_seconds=time.perf_counter() - start,
        out_dir=str(out_dir),
        manifest_path=str(manifest_path),
    )
