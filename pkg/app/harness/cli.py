"""
Command line entry point.

Commands fan per-image work out over worker threads (bounded by ``--workers``)
and write results in input order, so repeated runs produce identical files.
Exit codes: 0 success, 1 bad input, 2 property-suite failure.
"""

import argparse
import asyncio
import json
import sys
from collections.abc import Callable, Sequence
from pathlib import Path

import aiofiles
import yaml
from pydantic import ValidationError
from ulid import ULID

from app import __project__, __version__
from app.core.config import settings
from app.core.errors import ConfigurationError, CtrexError
from app.core.log import configure_logging, logger, run_id
from app.evaluation.protocol import accumulate, evaluate
from app.harness.annotations import dump_detection_json, load_annotation_dir, load_detection_file
from app.harness.gridio import encode_grid, encode_pgm, read_map
from app.harness.pipeline import image_labels, image_loss, run_e2e_image, sweep_row
from app.harness.properties import run_geometry_checks
from app.inference.postprocess import extract_detections
from app.schema.annotation import AnnotationFile, DetectionFile
from app.schema.evaluation import DontCareRule
from app.schema.inference import PostprocessConfig
from app.schema.labels import RatioSampler
from app.schema.report import E2EReport, LossSummary, SweepReport
from app.schema.synth import CorpusKind, NoiseConfig
from app.synth.corpus import synth_corpus

__all__ = ("build_parser", "main")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_PROPERTY = 2


def _ratio_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _size(text: str) -> tuple[int, int]:
    try:
        width, height = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected WIDTHxHEIGHT, got {text!r}") from None
    if width < 1 or height < 1:
        raise argparse.ArgumentTypeError(f"size must be positive, got {text!r}")
    return width, height


def _emit(model) -> None:
    print(model.model_dump_json(indent=2))


async def _write(path: Path, data: bytes | str) -> None:
    mode = "wb" if isinstance(data, bytes) else "w"
    async with aiofiles.open(path, mode) as f:
        await f.write(data)


async def _fan_out(func: Callable, calls: Sequence[tuple], workers: int) -> list:
    """Run ``func(*args)`` for every tuple on worker threads; results keep the input order."""
    limit = asyncio.Semaphore(max(workers, 1))

    async def one(args: tuple):
        async with limit:
            return await asyncio.to_thread(func, *args)

    return await asyncio.gather(*(one(args) for args in calls))


def _sampler(args) -> RatioSampler:
    if getattr(args, "fixed", None) is not None:
        return RatioSampler.fixed(args.fixed, seed=args.seed)
    return RatioSampler.uniform(getattr(args, "ratios", None), seed=args.seed)


def _postprocess_config(args) -> PostprocessConfig:
    data: dict = {}
    if getattr(args, "config", None) is not None:
        try:
            loaded = yaml.safe_load(args.config.read_text(encoding="utf-8"))
        except yaml.YAMLError as e:
            raise ConfigurationError(f"{args.config}: malformed YAML ({e})") from None
        if loaded is not None and not isinstance(loaded, dict):
            raise ConfigurationError(f"{args.config}: expected a mapping")
        data = loaded or {}
    if getattr(args, "quad", False):
        data["quad_mode"] = True
    try:
        return PostprocessConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigurationError(f"{getattr(args, 'config', None) or 'config'}: {e.errors()[0]['msg']}") from None


def _corpus(args) -> list[AnnotationFile]:
    if args.annotations is not None:
        return load_annotation_dir(args.annotations)
    return synth_corpus(args.corpus, count=args.scenes, seed=args.corpus_seed)


async def cmd_gen_labels(args) -> int:
    corpus = load_annotation_dir(args.annotations)
    sampler = _sampler(args)
    args.out.mkdir(parents=True, exist_ok=True)

    label_sets = await _fan_out(
        image_labels, [(ann, sampler, args.iteration, args.size) for ann in corpus], args.workers
    )
    for ann, labels in zip(corpus, label_sets, strict=True):
        await _write(args.out / f"{ann.image_id}_full.pgm", encode_pgm(labels.full_mask))
        await _write(args.out / f"{ann.image_id}_central.pgm", encode_pgm(labels.central_mask))
        await _write(args.out / f"{ann.image_id}_ratio.f32g", encode_grid(labels.ratio_map))
        await _write(args.out / f"{ann.image_id}_train.pgm", encode_pgm(labels.train_mask))
        records = json.dumps(labels.instance_records(), indent=2) + "\n"
        await _write(args.out / f"{ann.image_id}_instances.json", records)
        logger.info(f"labels for {ann.image_id}: {labels.summary()}")
    return EXIT_OK


async def cmd_infer(args) -> int:
    cfg = _postprocess_config(args)
    full, central, ratio = (read_map(p) for p in (args.full, args.central, args.ratio))
    detections = await asyncio.to_thread(extract_detections, full, central, ratio, cfg)
    image_id = args.image_id or args.central.stem.removesuffix("_central")
    await _write(args.out, dump_detection_json(DetectionFile(image_id=image_id, detections=detections)))
    logger.info(f"{len(detections)} detections written to {args.out}")
    return EXIT_OK


def _evaluate_file(ann: AnnotationFile, detections_dir: Path, iou: float | None, rule: DontCareRule):
    path = detections_dir / f"{ann.image_id}.json"
    if not path.exists():
        path = detections_dir / f"{ann.image_id}.txt"
    if not path.exists():
        logger.warning(f"no detections for {ann.image_id}")
        return evaluate([], ann.instances, iou, rule)
    return evaluate(load_detection_file(path).detections, ann.instances, iou, rule)


async def cmd_eval(args) -> int:
    if not args.detections.is_dir():
        raise CtrexError(f"detections directory not found: {args.detections}")
    corpus = load_annotation_dir(args.annotations)
    reports = await _fan_out(
        _evaluate_file, [(ann, args.detections, args.iou, args.dont_care) for ann in corpus], args.workers
    )
    _emit(accumulate(reports))
    return EXIT_OK


async def cmd_e2e_synth(args) -> int:
    corpus = _corpus(args)
    sampler = _sampler(args)
    noise = NoiseConfig(
        prob_noise_sigma=args.noise_sigma,
        ratio_noise_sigma=args.ratio_sigma,
        boundary_jitter=args.jitter,
        seed=args.seed,
    )
    cfg = _postprocess_config(args)
    reports = await _fan_out(
        run_e2e_image,
        [(ann, i, sampler, noise, cfg, args.iou, args.dont_care) for i, ann in enumerate(corpus)],
        args.workers,
    )
    corpus_report = accumulate(reports)
    if args.per_image:
        _emit(E2EReport(corpus=corpus_report, images={a.image_id: r for a, r in zip(corpus, reports, strict=True)}))
    else:
        _emit(corpus_report)
    return EXIT_OK


async def cmd_losses(args) -> int:
    corpus = _corpus(args)
    sampler = _sampler(args)
    noise = NoiseConfig(prob_noise_sigma=args.noise_sigma, ratio_noise_sigma=args.ratio_sigma, seed=args.seed)
    images = await _fan_out(
        image_loss,
        [(ann, i, sampler, noise, None, args.normalize_ratio) for i, ann in enumerate(corpus)],
        args.workers,
    )
    mean = sum(item.losses.total for item in images) / len(images) if images else 0.0
    _emit(LossSummary(images=images, mean_total=mean))
    return EXIT_OK


async def cmd_check_geometry(args) -> int:
    report = await asyncio.to_thread(run_geometry_checks, args.trials, args.seed)
    _emit(report)
    return EXIT_OK if report.ok else EXIT_PROPERTY


async def cmd_sweep_ratio(args) -> int:
    corpus = synth_corpus(CorpusKind.adjacent, count=args.scenes, seed=args.seed)
    rows = await _fan_out(sweep_row, [(corpus, r) for r in args.ratios], args.workers)
    _emit(SweepReport(scenes=args.scenes, seed=args.seed, rows=rows))
    return EXIT_OK


def _add_ratio_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--ratios", type=_ratio_list, default=None, help="shrink ratios sampled per instance")
    group.add_argument("--fixed", type=float, default=None, help="one shrink ratio for every instance")


def _add_corpus_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--annotations", type=Path, default=None, help="annotation directory (default: synthetic)")
    parser.add_argument("--corpus", choices=[k.value for k in CorpusKind], default=CorpusKind.bundled.value)
    parser.add_argument("--scenes", type=int, default=None, help="synthetic scene count")
    parser.add_argument("--corpus-seed", type=int, default=None, help="synthetic corpus seed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=__project__.lower(), description="Central text region expansion toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=None, help=f"log level (default {settings.LOG_LEVEL})")
    parser.add_argument("--workers", type=int, default=settings.WORKER_CONCURRENCY, help="worker threads")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-labels", help="write label maps for an annotation directory")
    p.add_argument("--annotations", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    _add_ratio_options(p)
    p.add_argument("--size", type=_size, default=None, help="WIDTHxHEIGHT for every image")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--iteration", type=int, default=0)
    p.set_defaults(handler=cmd_gen_labels)

    p = sub.add_parser("infer", help="extract detections from prediction maps")
    p.add_argument("--full", type=Path, required=True)
    p.add_argument("--central", type=Path, required=True)
    p.add_argument("--ratio", type=Path, required=True)
    p.add_argument("--config", type=Path, default=None, help="YAML or JSON post-processing config")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--quad", action="store_true", help="expand minimum-area rectangles")
    p.add_argument("--image-id", default=None)
    p.set_defaults(handler=cmd_infer)

    p = sub.add_parser("eval", help="score a detections directory against annotations")
    p.add_argument("--detections", type=Path, required=True)
    p.add_argument("--annotations", type=Path, required=True)
    p.add_argument("--iou", type=float, default=settings.IOU_THRESHOLD)
    p.add_argument("--dont-care", type=DontCareRule, choices=list(DontCareRule), default=DontCareRule.iou)
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("e2e-synth", help="labels, synthetic predictions, inference and evaluation in one pass")
    _add_corpus_options(p)
    _add_ratio_options(p)
    p.add_argument("--noise-sigma", type=float, default=0.0)
    p.add_argument("--ratio-sigma", type=float, default=0.0)
    p.add_argument("--jitter", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config", type=Path, default=None)
    p.add_argument("--quad", action="store_true")
    p.add_argument("--iou", type=float, default=settings.IOU_THRESHOLD)
    p.add_argument("--dont-care", type=DontCareRule, choices=list(DontCareRule), default=DontCareRule.iou)
    p.add_argument("--per-image", action="store_true", help="include one report per image")
    p.set_defaults(handler=cmd_e2e_synth)

    p = sub.add_parser("check-geometry", help="run the randomized geometry property suite")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=cmd_check_geometry)

    p = sub.add_parser("sweep-ratio", help="fixed-ratio separation sweep on adjacent instances")
    p.add_argument("--ratios", type=_ratio_list, default=[0.0, 0.2, 0.4, 0.6, 0.8, 1.0])
    p.add_argument("--scenes", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=cmd_sweep_ratio)

    p = sub.add_parser("losses", help="loss terms of synthetic predictions")
    _add_corpus_options(p)
    _add_ratio_options(p)
    p.add_argument("--noise-sigma", type=float, default=0.1)
    p.add_argument("--ratio-sigma", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--normalize-ratio", action="store_true")
    p.set_defaults(handler=cmd_losses)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    run_id.set(str(ULID()))
    logger.info(f"{args.command} started")

    try:
        code = asyncio.run(args.handler(args))
    except (CtrexError, ValidationError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT

    logger.info(f"{args.command} finished with exit code {code}")
    return code


if __name__ == "__main__":
    sys.exit(main())
