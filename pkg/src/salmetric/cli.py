"""Batch command-line front end.

Usage:
    salmetric density  <manifest> --sigma 19 --out densities/
    salmetric evaluate <manifest> --pred preds/ --out report.json
    salmetric negatives <manifest> --sampler fn --k 5 --out negs/
    salmetric quality  <manifest> --samplers shuffled,fn:5 --out quality.json
    salmetric synth    --config synth.json --out data/
    salmetric sweep    <manifest-or-synth-config> --sigmas 10,20,30,40,50 --out sweep.json
    salmetric smooth   <map> --mode global --out smoothed.smap

Every subcommand is deterministic given --seed (default 0; wall-clock entropy
is never used). Usage errors exit with 2, data errors with 1.
"""

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
from pathlib import Path

from . import io as sio
from .core import DatasetIndex
from .errors import MissingPredictionError, SalmetricError
from .gaussian import density_from_fixations
from .metrics import ALL_METRICS, EvalConfig, evaluate_all
from .quality import quality_report
from .sampling import negatives_farthest, negatives_farthest_fast, negatives_shuffled
from .seeding import derive_seed
from .smoothing import tie_break_global, tie_break_noise
from .synth import PREDICTOR_MODES, SWEEP_METRICS, SynthConfig, gen_dataset, gen_prediction, sigma_sweep


def _default_jobs() -> int:
    return int(os.environ.get("SALMETRIC_JOBS", "1"))


def _comma_list(text: str) -> list[str]:
    return [tok.strip() for tok in text.split(",") if tok.strip()]


def _load_synth_config(path) -> SynthConfig:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise SalmetricError(f"{path}: synth config must be a JSON object")
    known = set(SynthConfig.__dataclass_fields__)
    unknown = set(doc) - known
    if unknown:
        raise SalmetricError(f"{path}: unknown synth config keys {sorted(unknown)}")
    if "frame" in doc:
        doc["frame"] = tuple(int(v) for v in doc["frame"])
    try:
        return SynthConfig(**doc)
    except (TypeError, ValueError) as exc:
        raise SalmetricError(f"{path}: bad synth config: {exc}") from exc


def _load_dataset_or_synth(path) -> DatasetIndex:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if isinstance(doc, dict) and "images" in doc:
        return sio.manifest_to_dataset(doc)
    if isinstance(doc, dict):
        config = doc.copy()
        if "frame" in config:
            config["frame"] = tuple(int(v) for v in config["frame"])
        return gen_dataset(SynthConfig(**config))
    raise SalmetricError(f"{path}: expected a dataset manifest or a synth config")


def _density_task(args):
    image_id, fixations, sigma = args
    return image_id, density_from_fixations(fixations, sigma)


def _cmd_density(args) -> int:
    dataset = sio.read_manifest(args.manifest)
    sigma = dataset.sigma if args.sigma is None else args.sigma
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    tasks = [(rec.id, rec.fixations, sigma) for rec in dataset.images]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = dict(pool.map(_density_task, tasks))
    else:
        results = dict(_density_task(t) for t in tasks)
    for image_id in sorted(results):
        sio.write_map(results[image_id].grid, out / f"{image_id}.smap")
    return 0


def _cmd_evaluate(args) -> int:
    dataset = sio.read_manifest(args.manifest)
    pred_dir = Path(args.pred)
    predictions = {}
    for rec in dataset.images:
        for suffix in (".smap", ".pgm"):
            candidate = pred_dir / f"{rec.id}{suffix}"
            if candidate.exists():
                predictions[rec.id] = sio.read_map(candidate)
                break
        else:
            raise MissingPredictionError(f"no prediction file for image {rec.id!r} in {pred_dir}")
    config = EvalConfig(
        metrics=tuple(_comma_list(args.metrics)),
        seed=args.seed,
        n_splits=args.splits,
        k=args.k,
        sigma=args.sigma,
        tie_break=args.tie_break,
        fn_fast=args.fn_fast,
        cc_threshold=args.cc_threshold,
    )
    report = evaluate_all(dataset, predictions, config, jobs=args.jobs)
    sio.write_report(report, args.out)
    return 0


def _cmd_negatives(args) -> int:
    dataset = sio.read_manifest(args.manifest)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    drawn = []
    for rec in dataset.images:
        seed = derive_seed(args.seed, "negatives", rec.id)
        if args.sampler == "shuffled":
            negatives = negatives_shuffled(rec.id, dataset, seed)
        elif args.sampler == "fn":
            negatives = negatives_farthest(rec.id, dataset, args.k, seed=seed)
        else:
            negatives = negatives_farthest_fast(
                rec.id, dataset, args.k, cc_threshold=args.cc_threshold, seed=seed
            )
        drawn.append({"id": rec.id, "fixations": [[x, y] for x, y in negatives.coords]})
    width, height = dataset.frame
    doc = {
        "name": f"{dataset.name}-negatives-{args.sampler}",
        "width": width,
        "height": height,
        "sigma": dataset.sigma,
        "images": drawn,
    }
    sio.dump_json(doc, out / "negatives.json")
    return 0


def _cmd_quality(args) -> int:
    dataset = sio.read_manifest(args.manifest)
    triples = quality_report(
        dataset,
        samplers=_comma_list(args.samplers),
        seed=args.seed,
        sigma=args.sigma,
        measure=args.measure,
    )
    doc = {
        "config": {"seed": args.seed, "sigma": dataset.sigma if args.sigma is None else args.sigma,
                   "measure": args.measure},
        "samplers": {label: asdict(triple) for label, triple in triples.items()},
    }
    sio.dump_json(doc, args.out)
    return 0


def _cmd_synth(args) -> int:
    config = _load_synth_config(args.config)
    dataset = gen_dataset(config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    sio.write_manifest(dataset, out / "manifest.json")
    for mode in _comma_list(args.predictors):
        mode_dir = out / f"pred_{mode}"
        mode_dir.mkdir(exist_ok=True)
        for rec in dataset.images:
            pred = gen_prediction(rec, mode, dataset.sigma)
            sio.write_map(pred, mode_dir / f"{rec.id}.smap")
    return 0


def _cmd_sweep(args) -> int:
    dataset = _load_dataset_or_synth(args.dataset)
    table = sigma_sweep(
        dataset,
        sigma_train=[float(s) for s in _comma_list(args.sigmas)],
        sigma_gt=args.sigma_gt,
        metrics=tuple(_comma_list(args.metrics)),
        seed=args.seed,
        n_splits=args.splits,
        k=args.k,
    )
    doc = {
        "sigma_gt": table.sigma_gt,
        "sigmas": list(table.sigmas),
        "metrics": {
            m: {"scores": list(table.scores[m]), "deviation": table.deviation[m]}
            for m in table.scores
        },
    }
    sio.dump_json(doc, args.out)
    return 0


def _cmd_smooth(args) -> int:
    grid = sio.read_map(args.map)
    if args.mode == "global":
        smoothed = tie_break_global(grid)
    else:
        smoothed = tie_break_noise(grid, args.seed)
    sio.write_map(smoothed, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="salmetric",
        description="Evaluate fixation-prediction maps against eye-fixation ground truth.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("density", help="write per-image fixation densities")
    p.add_argument("manifest")
    p.add_argument("--sigma", type=float, default=None, help="blur width; defaults to the dataset's")
    p.add_argument("--out", required=True, help="output directory for .smap files")
    p.add_argument("--jobs", type=int, default=_default_jobs())
    p.set_defaults(func=_cmd_density)

    p = sub.add_parser("evaluate", help="score prediction maps and write a report")
    p.add_argument("manifest")
    p.add_argument("--pred", required=True, help="directory of <id>.smap or <id>.pgm files")
    p.add_argument("--metrics", default=",".join(ALL_METRICS))
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--splits", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sigma", type=float, default=None)
    p.add_argument("--tie-break", choices=("global", "noise", "off"), default="global")
    p.add_argument("--fn-fast", action="store_true")
    p.add_argument("--cc-threshold", type=float, default=0.0)
    p.add_argument("--out", required=True, help="report file")
    p.add_argument("--jobs", type=int, default=_default_jobs())
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("negatives", help="draw one negative set per image")
    p.add_argument("manifest")
    p.add_argument("--sampler", choices=("shuffled", "fn", "fn-fast"), required=True)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cc-threshold", type=float, default=0.0)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_negatives)

    p = sub.add_parser("quality", help="compare negative samplers")
    p.add_argument("manifest")
    p.add_argument("--samplers", default="shuffled,fn:5")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sigma", type=float, default=None)
    p.add_argument("--measure", choices=("cc", "auc"), default="cc")
    p.add_argument("--out", required=True, help="report file")
    p.set_defaults(func=_cmd_quality)

    p = sub.add_parser("synth", help="generate a synthetic dataset and predictor maps")
    p.add_argument("--config", required=True, help="JSON synth config")
    p.add_argument("--predictors", default="oracle",
                   help=f"comma list from {', '.join(PREDICTOR_MODES)}")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("sweep", help="score the oracle predictor across blur widths")
    p.add_argument("dataset", help="dataset manifest or synth config")
    p.add_argument("--sigmas", default="10,20,30,40,50")
    p.add_argument("--sigma-gt", type=float, default=None)
    p.add_argument("--metrics", default="cc,nss,auc_judd",
                   help=f"comma list from {', '.join(SWEEP_METRICS)}")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--splits", type=int, default=100)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--out", required=True, help="table file")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("smooth", help="tie-break a quantized map")
    p.add_argument("map")
    p.add_argument("--mode", choices=("global", "noise"), default="global")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output map file")
    p.set_defaults(func=_cmd_smooth)
    return parser


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except SalmetricError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
