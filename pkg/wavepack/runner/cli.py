import argparse
import csv
import logging
import os
import sys
import time
from dataclasses import replace
from typing import Dict, List, Optional, Sequence

import numpy as np

import wavepack
from wavepack.base.define import BoundaryMode, ChannelPolicy, FeatureType, PacketOrdering
from wavepack.base.exception import DatasetError, FormatError, InvariantError
from wavepack.base.order import frequency_grid, freq_order_labels, natural_order_labels
from wavepack.classify.model import LinearModel
from wavepack.classify.norm import apply_norm, fit_norm
from wavepack.classify.trainer import EvalResult, evaluate, train
from wavepack.classify.weight_map import export_weight_map, save_weight_map_csv
from wavepack.datasets.image_io import load_image
from wavepack.datasets.manifest import scan_dataset
from wavepack.datasets.synthetic import write_synthetic_dataset
from wavepack.runner.callbacks.history_writer import HistoryWriter, write_run_info
from wavepack.runner.callbacks.print_progress import PrintProgress
from wavepack.runner.config import RunConfig, load_config_file
from wavepack.runner.features import FeatureSpec, extract_features, flatten_features, image_packets, load_image_checked
from wavepack.runner.pool import get_thread_count, parallel_map
from wavepack.stats.packet_stats import (
    CurveRow,
    PacketStats,
    accumulate_stats,
    packet_curve,
    save_curve_csv,
    save_heatmap_csv,
    stats_difference,
)
from wavepack.transform.matrix import (
    analysis_matrix_1d,
    analysis_matrix_2d,
    synthesis_matrix_1d,
    synthesis_matrix_2d,
    wavelet_packet_matrix_2d,
)
from wavepack.transform.packets import wpt_2d
from wavepack.utils.common import (
    is_package_installed,
    logger_file,
    logger_print,
    remove_file_handlers,
    remove_handlers,
    to_str_float,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_USAGE = 2
EXIT_IO = 3

STATS_CHUNK = 64  # images per partial PacketStats


# ---------------------------------
# arguments
# ---------------------------------
def _add_common(p: argparse.ArgumentParser) -> None:
    S = argparse.SUPPRESS
    p.add_argument("--config", default=None, help="key = value file; flags take precedence")
    p.add_argument("--log-level", dest="log_level", default=S)
    p.add_argument("--threads", type=int, default=S)
    p.add_argument("--quiet", action="store_true", help="do not echo the resolved config")


def _add_transform(p: argparse.ArgumentParser, level_name: str = "level") -> None:
    S = argparse.SUPPRESS
    p.add_argument("--filter", "--wavelet", dest="wavelet", default=S)
    p.add_argument(f"--{level_name}", dest=level_name, type=int, default=S)
    p.add_argument("--mode", choices=BoundaryMode.get_names(), default=S)


def _build_parser() -> argparse.ArgumentParser:
    S = argparse.SUPPRESS
    parser = argparse.ArgumentParser(prog="wavepack", description="boundary wavelet packets and packet classifiers")
    parser.add_argument("--version", action="version", version=wavepack.__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="filter-bank and operator invariant suite")
    _add_common(p)
    p.add_argument("--filter", "--wavelet", dest="filters", action="append", default=None, help="repeatable; default all builtin")
    p.add_argument("--size", type=int, default=S)
    p.add_argument("--levels", type=int, default=S)
    p.add_argument("--dims", default="1,2", help="1, 2 or 1,2")

    p = sub.add_parser("transform", help="export an operator as CSV")
    _add_common(p)
    _add_transform(p, "levels")
    p.add_argument("--size", type=int, default=S)
    p.add_argument("--width", type=int, default=None, help="2D width (default: size)")
    p.add_argument("--dims", type=int, choices=[1, 2], default=1)
    p.add_argument("--synthesis", action="store_true")
    p.add_argument("--packet", action="store_true", help="full 2D packet operator")
    p.add_argument("--out", default=S, help="CSV path")
    p.add_argument("--pattern", default=None, help="sparsity pattern image path (.pbm/.png)")

    p = sub.add_parser("packets", help="image(s) -> WPK1 files")
    _add_common(p)
    _add_transform(p)
    p.add_argument("--data", default=S, help="image file or directory")
    p.add_argument("--ordering", choices=PacketOrdering.get_names(), default=S)
    p.add_argument("--out", default=S)
    p.add_argument("--csv", action="store_true", help="also write long-form CSV")
    p.add_argument("--ln", action="store_true", help="store ln(|x| + eps)")

    p = sub.add_parser("stats", help="per-class packet statistics")
    _add_common(p)
    _add_transform(p)
    p.add_argument("--data", default=S)
    p.add_argument("--ordering", choices=PacketOrdering.get_names(), default=S)
    p.add_argument("--channel-policy", dest="channel_policy", choices=ChannelPolicy.get_names(), default=S)
    p.add_argument("--out", default=S)

    p = sub.add_parser("train", help="linear classifier over seeds")
    _add_common(p)
    _add_transform(p)
    p.add_argument("--data", default=S)
    p.add_argument("--features", choices=FeatureType.get_names(), default=S)
    p.add_argument("--epochs", type=int, default=S)
    p.add_argument("--batch-size", dest="batch_size", type=int, default=S)
    p.add_argument("--lr", type=float, default=S)
    p.add_argument("--seed", dest="seeds", default=S, help="0..4, 0,2,3 or 1")
    p.add_argument("--split-seed", dest="split_seed", type=int, default=S)
    p.add_argument("--symmetric-init", dest="symmetric_init", action="store_const", const=True, default=S)
    p.add_argument("--progress", action="store_true", help="print per-epoch progress")
    p.add_argument("--out", default=S)

    p = sub.add_parser("evaluate", help="accuracy and confusion matrix of a saved model")
    _add_common(p)
    p.add_argument("--data", default=S)
    p.add_argument("--model", default=S)
    p.add_argument("--split", choices=["train", "val", "test"], default="test")
    p.add_argument("--split-seed", dest="split_seed", type=int, default=S)
    p.add_argument("--out", default=None, help="directory for confusion.csv")

    p = sub.add_parser("labels", help="packet labels")
    _add_common(p)
    p.add_argument("--level", type=int, default=S)
    p.add_argument("--ordering", choices=PacketOrdering.get_names(), default=S)
    p.add_argument("--grid", action="store_true", help="2D frequency layout")

    p = sub.add_parser("synthesize", help="write the smooth / noisy synthetic dataset")
    _add_common(p)
    p.add_argument("--out", default=S)
    p.add_argument("--count", type=int, default=150, help="images per class")
    p.add_argument("--size", dest="image_size", type=int, default=64)
    p.add_argument("--seed", dest="seeds", default=S)
    return parser


_NOT_CONFIG = ("command", "config", "quiet", "filters", "dims", "width", "synthesis", "packet", "pattern", "csv", "ln", "progress", "split", "count", "grid", "image_size")


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """defaults < config file < flags"""
    config = RunConfig()
    explicit = set()
    if getattr(args, "config", None):
        values = load_config_file(args.config)
        config.update(values)
        explicit.update(k.replace("-", "_") for k in values)
    flags = {k: v for k, v in vars(args).items() if k not in _NOT_CONFIG and v is not None}
    config.update(flags)
    explicit.update(flags)
    args.explicit_keys = explicit
    config.assert_params()
    return config


def _echo(config: RunConfig, args) -> None:
    if not args.quiet:
        for line in config.echo_lines():
            print(line)


# ---------------------------------
# subcommands
# ---------------------------------
def cmd_verify(args, config: RunConfig) -> int:
    from wavepack.test.verify import run_suite

    dims = [int(d) for d in str(args.dims).split(",") if d.strip() != ""]
    if any(d not in (1, 2) for d in dims):
        raise ValueError(f"dims must be 1 and/or 2 ({args.dims})")
    results = run_suite(args.filters, config.size, config.levels, dims)
    for r in results:
        print(r.to_str())
    op = [r.residual for r in results if r.check == "synth_analysis"]
    if len(op) > 0:
        print(f"max |S*A - I| = {max(op):.3e}")
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_OK if len(failed) == 0 else EXIT_INVARIANT


def cmd_transform(args, config: RunConfig) -> int:
    if getattr(args, "out", None) is None:
        raise ValueError("--out is required")
    n = config.size
    if args.packet:
        op = wavelet_packet_matrix_2d(config.wavelet, n, args.width or n, config.levels, config.mode)
        if args.synthesis:
            op = op.T
    elif args.dims == 1:
        func = synthesis_matrix_1d if args.synthesis else analysis_matrix_1d
        op = func(config.wavelet, n, config.levels, config.mode)
    else:
        func = synthesis_matrix_2d if args.synthesis else analysis_matrix_2d
        op = func(config.wavelet, n, args.width or n, config.levels, config.mode)

    os.makedirs(os.path.dirname(os.path.abspath(config.out)), exist_ok=True)
    op.save_csv(config.out)
    if args.pattern:
        op.save_pattern(args.pattern)
    print(f"shape {op.rows}x{op.cols}, nnz {op.nnz}: {config.out}")
    return EXIT_OK


def _list_images(path: str, extensions: Sequence[str]) -> List[str]:
    if os.path.isfile(path):
        return [path]
    if not os.path.isdir(path):
        raise DatasetError(f"not found: {path}")
    extensions = tuple(e.lower() for e in extensions)
    found = []
    for d, _, files in os.walk(path):
        for fn in files:
            if os.path.splitext(fn)[1].lower() in extensions:
                found.append(os.path.join(d, fn))
    if len(found) == 0:
        raise DatasetError(f"no images in {path}")
    return sorted(found)


def cmd_packets(args, config: RunConfig) -> int:
    paths = _list_images(config.data, config.extensions)
    root = config.data if os.path.isdir(config.data) else os.path.dirname(config.data)
    spec = FeatureSpec(FeatureType.packet, config.wavelet, config.level, config.mode)

    def _run(path: str) -> str:
        img = load_image(path)
        if args.ln:
            packets = image_packets(img, spec, ChannelPolicy.per_channel)
        else:
            packets = wpt_2d(img, spec.wavelet, spec.level, spec.mode)
        packets = packets.to_ordering(config.ordering)
        stem = os.path.splitext(os.path.relpath(path, root))[0]
        dst = os.path.join(config.out, stem + ".wpk")
        os.makedirs(os.path.dirname(dst), exist_ok=True)
        packets.save(dst)
        if args.csv:
            packets.save_csv(os.path.join(config.out, stem + ".csv"))
        return dst

    t0 = time.time()
    written = parallel_map(_run, paths, config.threads)
    print(f"{len(written)} packet files written to {config.out} ({time.time() - t0:.1f}s)")
    return EXIT_OK


def class_stats(paths: Sequence[str], spec: FeatureSpec, config: RunConfig, image_size=None) -> PacketStats:
    """Partial Welford results over fixed-size chunks on the pool, merged in order."""
    chunks = [paths[i : i + STATS_CHUNK] for i in range(0, len(paths), STATS_CHUNK)]

    def _chunk(chunk: Sequence[str]) -> PacketStats:
        return accumulate_stats(
            (image_packets(load_image_checked(p, image_size), spec, config.channel_policy) for p in chunk),
            config.channel_policy,
        )

    partials = parallel_map(_chunk, chunks, config.threads)
    stats = partials[0]
    for p in partials[1:]:
        stats = stats.merge(p)
    return stats.to_ordering(config.ordering)


def cmd_stats(args, config: RunConfig) -> int:
    manifest = scan_dataset(config.data, config.extensions, config.split_seed)
    spec = FeatureSpec(FeatureType.packet, config.wavelet, config.level, config.mode)
    os.makedirs(config.out, exist_ok=True)

    all_stats: Dict[str, PacketStats] = {}
    for name in manifest.classes:
        stats = class_stats(manifest.files[name], spec, config, manifest.image_size)
        all_stats[name] = stats
        save_curve_csv(packet_curve(stats, config.ordering), os.path.join(config.out, f"curve_{name}.csv"))
        save_heatmap_csv(stats.mean, os.path.join(config.out, f"mean_{name}.csv"))
        save_heatmap_csv(stats.std, os.path.join(config.out, f"std_{name}.csv"))
        print(f"{name}: {stats.sample_count} images")

    if len(manifest.classes) == 2:
        a, b = (all_stats[n] for n in manifest.classes)
        diff = stats_difference(a, b)
        save_heatmap_csv(diff.mean_abs_diff, os.path.join(config.out, "diff_mean.csv"))
        save_heatmap_csv(diff.std_abs_diff, os.path.join(config.out, "diff_std.csv"))
        rows = [
            CurveRow(ra.packet_index, ra.label, abs(ra.mean - rb.mean), abs(ra.std - rb.std))
            for ra, rb in zip(packet_curve(a, config.ordering), packet_curve(b, config.ordering))
        ]
        save_curve_csv(rows, os.path.join(config.out, "diff_curve.csv"))
    print(f"stats written to {config.out}")
    return EXIT_OK


def _save_confusion_csv(result: EvalResult, classes: List[str], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["true"] + [f"pred_{c}" for c in classes])
        for name, row in zip(classes, result.confusion):
            w.writerow([name] + [int(v) for v in row])


def _mean_std(values: Sequence[float]):
    mean = float(np.mean(values))
    std = float(np.std(values, ddof=1)) if len(values) > 1 else 0.0
    return mean, std


def cmd_train(args, config: RunConfig) -> int:
    os.makedirs(config.out, exist_ok=True)
    logger_file(os.path.join(config.out, "train.log"))
    try:
        return _train(args, config)
    finally:
        remove_file_handlers()


def _train(args, config: RunConfig) -> int:
    manifest = scan_dataset(config.data, config.extensions, config.split_seed)
    manifest.save_csv(os.path.join(config.out, "manifest.csv"))
    spec = FeatureSpec(config.features, config.wavelet, config.level, config.mode)

    feats = {}
    for split in ("train", "val", "test"):
        feats[split] = extract_features(manifest.paths(split), spec, manifest.image_size, config.threads)
    norm = fit_norm(feats["train"], spec.channel_axis)
    xs = {k: flatten_features(apply_norm(v, norm)) for k, v in feats.items()}
    ys = {k: manifest.labels(k) for k in feats}
    channels = feats["train"].shape[spec.channel_axis]

    meta = spec.to_meta()
    meta.update(
        {
            "classes": manifest.classes,
            "image_size": list(manifest.image_size),
            "channels": channels,
            "split_seed": manifest.seed,
            "ratios": list(manifest.ratios),
        }
    )
    accuracies = []
    for seed in config.seeds:
        seed_dir = os.path.join(config.out, f"seed_{seed}")
        callbacks = [HistoryWriter(seed_dir)]
        if args.progress:
            callbacks.append(PrintProgress())
        result = train(
            xs["train"],
            ys["train"],
            xs["val"],
            ys["val"],
            epochs=config.epochs,
            batch_size=config.batch_size,
            seed=seed,
            lr=config.lr,
            classes=len(manifest.classes),
            symmetric_init=config.symmetric_init,
            callbacks=callbacks,
        )
        model = replace(result.model, norm=norm, meta=dict(meta, seed=seed, best_epoch=result.best_epoch))
        model.save(os.path.join(seed_dir, "model.wlm"))

        ev = evaluate(model, xs["test"], ys["test"])
        _save_confusion_csv(ev, manifest.classes, os.path.join(seed_dir, "confusion.csv"))
        if spec.feature_type == FeatureType.packet:
            h, w = manifest.image_size
            s = 2**spec.level
            maps = export_weight_map(model, spec.level, h // s, w // s, channels, PacketOrdering.frequency)
            save_weight_map_csv(maps, spec.level, PacketOrdering.frequency, os.path.join(seed_dir, "weights.csv"))
        accuracies.append(ev.accuracy)
        print(f"seed {seed}: {ev.accuracy * 100:.2f} %")

    with open(os.path.join(config.out, "summary.csv"), "w", encoding="utf-8", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["seed", "accuracy"])
        for seed, acc in zip(config.seeds, accuracies):
            w.writerow([seed, to_str_float(acc)])
    write_run_info(config.out, config.to_dict(), enable_ps=is_package_installed("psutil"))
    mean, std = _mean_std([a * 100 for a in accuracies])
    print(f"{mean:.2f} ± {std:.2f} %")
    return EXIT_OK


def cmd_evaluate(args, config: RunConfig) -> int:
    if config.model == "":
        raise ValueError("--model is required")
    model = LinearModel.load(config.model)
    if model.norm is None:
        raise FormatError(f"model has no normalization statistics: {config.model}")
    spec = FeatureSpec.from_meta(model.meta)
    # training split unless given explicitly
    split_seed = config.split_seed
    if "split_seed" not in getattr(args, "explicit_keys", ()):
        split_seed = int(model.meta.get("split_seed", split_seed))
    ratios = tuple(model.meta.get("ratios", (10, 2, 3)))
    manifest = scan_dataset(config.data, config.extensions, split_seed, ratios)
    logger.info(f"evaluate split_seed={split_seed}, ratios={ratios}")
    if "classes" in model.meta and list(model.meta["classes"]) != manifest.classes:
        raise DatasetError(f"dataset classes {manifest.classes} != model classes {model.meta['classes']}")

    x = extract_features(manifest.paths(args.split), spec, manifest.image_size, config.threads)
    x = flatten_features(apply_norm(x, model.norm))
    ev = evaluate(model, x, manifest.labels(args.split))
    print(f"{args.split} accuracy: {ev.accuracy * 100:.2f} % (loss {ev.loss:.6f})")
    width = max(len(c) for c in manifest.classes)
    for name, row in zip(manifest.classes, ev.confusion):
        print(f"{name:>{width}s} " + " ".join(f"{int(v):6d}" for v in row))
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        _save_confusion_csv(ev, manifest.classes, os.path.join(args.out, "confusion.csv"))
    return EXIT_OK


def cmd_labels(args, config: RunConfig) -> int:
    if args.grid:
        for row in frequency_grid(config.level):
            print(" ".join(row))
        return EXIT_OK
    if config.ordering == PacketOrdering.frequency:
        labels = freq_order_labels(config.level)
    else:
        labels = natural_order_labels(config.level)
    for label in labels:
        print(label)
    return EXIT_OK


def cmd_synthesize(args, config: RunConfig) -> int:
    seed = config.seeds[0]
    paths = write_synthetic_dataset(config.out, args.count, args.image_size, seed)
    print(f"{len(paths)} images written to {config.out}")
    return EXIT_OK


_COMMANDS = {
    "verify": cmd_verify,
    "transform": cmd_transform,
    "packets": cmd_packets,
    "stats": cmd_stats,
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "labels": cmd_labels,
    "synthesize": cmd_synthesize,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    config = resolve_config(args)
    logger_print(config.log_level, enable_log_extra_suppression=True)
    get_thread_count(config.threads)  # validates WAVEPACK_THREADS early
    _echo(config, args)
    try:
        return _COMMANDS[args.command](args, config)
    finally:
        remove_handlers()


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point; maps exceptions to exit codes."""
    try:
        code = run(argv)
    except SystemExit as e:
        code = e.code if isinstance(e.code, int) else EXIT_USAGE
    except InvariantError as e:
        logger.error(f"invariant failure: {e}")
        print(f"error: {e}", file=sys.stderr)
        code = EXIT_INVARIANT
    except (DatasetError, FormatError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        code = EXIT_IO
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        code = EXIT_USAGE
    return code


if __name__ == "__main__":
    sys.exit(main())
