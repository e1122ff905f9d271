"""Command-line front end.

Subcommands: ``parse``, ``benchmark``, ``robustness``, ``efficiency`` and
``generate``. Exit status is 0 on success, 1 on runtime failure and 2 on
usage errors.
"""

from __future__ import annotations

import argparse
import csv
import logging
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import evaluation as ev
from .ingestion import ReadStats, read_records, write_structured, write_templates
from .parsers import ParserKind, PipelineOptions, config_str, make_config, parse
from .parsers.config import ConfigError
from .registry import ENV_VAR, Registry, RegistryError, dataset_section, find_registry, load_registry
from .synthgen import SYNTH_FORMAT, generate_corpus, random_specs, write_corpus

log = logging.getLogger("logbench")

_SIZE = re.compile(r"^\s*(\d+(?:\.\d+)?)\s*([KMG]?B?)?\s*$", re.IGNORECASE)
_UNITS = {"": 1, "B": 1, "K": 1024, "KB": 1024, "M": 1024 ** 2, "MB": 1024 ** 2,
          "G": 1024 ** 3, "GB": 1024 ** 3}


class UsageError(Exception):
    pass


def parse_size(text: str) -> int:
    m = _SIZE.match(text)
    if not m:
        raise UsageError(f"bad size {text!r}")
    return int(float(m.group(1)) * _UNITS[(m.group(2) or "").upper()])


def parse_kv(items, what="--config"):
    out = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise UsageError(f"{what} expects key=value, got {item!r}")
        out[key.strip()] = value.strip()
    return out


def split_overrides(flat: dict, kinds) -> dict:
    """Route ``key=v`` to every parser and ``parser.key=v`` to one parser."""
    per_kind = {k: {} for k in kinds}
    for key, value in flat.items():
        if "." in key:
            name, _, param = key.partition(".")
            kind = ParserKind.parse(name)
            if kind in per_kind:
                per_kind[kind][param] = value
        else:
            for kind in kinds:
                per_kind[kind][key] = value
    return per_kind


def parse_grid(items, kinds) -> dict:
    axes = {k: {} for k in kinds}
    for item in items or ():
        key, sep, values = item.partition("=")
        if not sep:
            raise UsageError(f"--grid expects key=v1,v2,..., got {item!r}")
        vals = [v.strip() for v in values.split(",") if v.strip()]
        if not vals:
            raise UsageError(f"--grid {item!r} has no values")
        if "." in key:
            name, _, param = key.partition(".")
            targets = [ParserKind.parse(name)]
        else:
            targets, param = list(kinds), key
        for kind in targets:
            if kind in axes:
                axes[kind][param.strip()] = vals
    return {k: ev.expand_grid(a) for k, a in axes.items() if a}


def _kinds(args):
    if not args.parser:
        raise UsageError("at least one --parser is required")
    return [ParserKind.parse(p) for p in args.parser]


def _registry(args) -> Registry:
    path = find_registry(args.registry)
    if path is None:
        raise UsageError(f"no registry given (use --registry or ${ENV_VAR})")
    if not path.exists():
        raise UsageError(f"registry {path} does not exist")
    return load_registry(path)


def _datasets(args, reg):
    if not args.dataset:
        raise UsageError("at least one --dataset is required")
    return [reg.dataset(name) for name in args.dataset]


def _options(args, reg, ds, workers=None) -> PipelineOptions:
    return PipelineOptions(masks=reg.masks_for(ds), dedup=args.dedup, partition=args.partition,
                           workers=workers if workers is not None else args.workers)


def _write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _aligned(header, rows) -> str:
    table = [list(map(str, header))] + [list(map(str, r)) for r in rows]
    widths = [max(len(r[i]) for r in table) for i in range(len(header))]
    lines = []
    for n, row in enumerate(table):
        lines.append("  ".join(cell.ljust(widths[i]) if i == 0 else cell.rjust(widths[i])
                               for i, cell in enumerate(row)).rstrip())
        if n == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_parse(args) -> int:
    reg = _registry(args)
    kinds = _kinds(args)
    if len(kinds) != 1:
        raise UsageError("parse takes exactly one --parser")
    kind = kinds[0]
    datasets = _datasets(args, reg)
    overrides = split_overrides(parse_kv(args.config), kinds)[kind]
    configs = [reg.parser_config(ds, kind, overrides) for ds in datasets]
    out = _out_dir(args)
    for ds, config in zip(datasets, configs):
        stats = ReadStats()
        start = time.perf_counter()
        records = list(read_records(ds, stats))
        result = parse(kind, config, records, _options(args, reg, ds))
        elapsed = time.perf_counter() - start
        stem = f"{ds.name}_{kind.value}"
        write_structured(result.assignments, result.table, out / f"{stem}_structured.csv")
        write_templates(result.table, out / f"{stem}_templates.csv")
        coverage = "full" if result.coverage else f"{len(result.outliers)} outliers"
        print(f"{ds.name} {kind.value}: {len(records)} messages, {len(result.table)} templates, "
              f"coverage {coverage}, {elapsed:.3f}s")
    return 0


def _load_labelled(ds, sample, seed):
    if ds.truth_path is None or not Path(ds.truth_path).exists():
        return None
    truth = ev.load_truth(ds.truth_path)
    records = [r for r in read_records(ds) if r.line_id in truth.templates]
    if sample and len(records) > sample:
        records = ev.sample_messages(records, sample, seed)
    return records, truth.restrict(r.line_id for r in records)


def _accuracy_job(job):
    kind, ds_name, records, truth, options, grid, base, seed = job
    if grid is None:
        return ev.evaluate(kind, make_config(kind, base), records, truth, options, ds_name, seed)
    return ev.sweep_parameters(kind, grid, records, truth, options, ds_name, seed, base)


def _accuracy_results(args, reg, kinds):
    datasets = _datasets(args, reg)
    flat = split_overrides(parse_kv(args.config), kinds)
    grids = parse_grid(args.grid, kinds)
    jobs, names = [], []
    for ds in datasets:
        loaded = _load_labelled(ds, args.sample, args.seed)
        if loaded is None:
            log.warning("dataset %s has no ground truth; skipped", ds.name)
            continue
        records, truth = loaded
        names.append(ds.name)
        options = _options(args, reg, ds, workers=1)
        for kind in kinds:
            base = {**ds.parser_configs.get(kind, {}), **flat[kind]}
            grid = None if args.no_sweep else grids.get(kind, ev.default_grid(kind))
            jobs.append((kind, ds.name, records, truth, options, grid, base, args.seed))
    if not jobs:
        raise UsageError("no dataset with ground truth to evaluate")
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            results = list(pool.map(_accuracy_job, jobs))
    else:
        results = [_accuracy_job(j) for j in jobs]
    return names, results


def accuracy_table(names, kinds, results):
    """Rows of (dataset, [pa per parser]) plus the average row."""
    pa = {(r.dataset, r.parser): r.pa for r in results}
    rows = [(name, [pa[(name, k.value)] for k in kinds]) for name in names]
    averages = [sum(row[1][i] for row in rows) / len(rows) for i in range(len(kinds))]
    return rows, averages


def _mark(value, best) -> str:
    cell = f"{value:.3f}"
    if value >= 0.9:
        cell += "+"
    if value == best:
        cell += "*"
    return cell


def cmd_benchmark(args) -> int:
    reg = _registry(args)
    kinds = _kinds(args)
    out = _out_dir(args)
    names, results = _accuracy_results(args, reg, kinds)
    rows, averages = accuracy_table(names, kinds, results)
    header = ["Dataset"] + [k.value for k in kinds]
    _write_csv(out / "accuracy.csv", header,
               [[name] + [f"{v:.4f}" for v in vals] for name, vals in rows]
               + [["Average"] + [f"{v:.4f}" for v in averages]])
    text_rows = [[name] + [_mark(v, max(vals)) for v in vals] for name, vals in rows]
    text_rows.append(["Average"] + [_mark(v, max(averages)) for v in averages])
    text = _aligned(header, text_rows)
    text += "\n+ PA >= 0.9   * best on the row\n"
    (out / "accuracy.txt").write_text(text, encoding="utf-8")
    _write_csv(out / "runs.csv", ["Dataset", "Parser", "PA", "Templates", "Config", "WallTime"],
               [[r.dataset, r.parser, f"{r.pa:.4f}", r.templates, config_str(r.config),
                 f"{r.wall_time:.3f}"] for r in results])
    sys.stdout.write(text)
    return 0


def cmd_robustness(args) -> int:
    reg = _registry(args)
    kinds = _kinds(args)
    out = _out_dir(args)
    names, results = _accuracy_results(args, reg, kinds)
    summary = ev.robustness_summary(results)
    header = ["Parser", "Min", "Q25", "Median", "Q75", "Max", "Mean", "Datasets"]
    rows = [[p, *(f"{x:.4f}" for x in (s.minimum, s.q25, s.median, s.q75, s.maximum, s.mean)), s.count]
            for p, s in summary.items()]
    _write_csv(out / "robustness_summary.csv", header, rows)
    text = _aligned(header, rows)
    (out / "robustness_summary.txt").write_text(text, encoding="utf-8")
    sys.stdout.write(text)

    if args.sizes:
        sizes = [parse_size(s) for s in args.sizes.split(",")]
        best = {(r.dataset, r.parser): r.config for r in results}
        series = []
        for name in names:
            ds = reg.dataset(name)
            truth = ev.load_truth(ds.truth_path) if ds.truth_path else None
            for kind in kinds:
                points = ev.measure_efficiency(kind, best[(name, kind.value)], ds.path, sizes,
                                               args.budget_secs, ds.log_format, truth,
                                               _options(args, reg, ds, workers=1))
                for p in points:
                    series.append([kind.value, name, p.size, p.messages,
                                   "" if p.pa is None else f"{p.pa:.4f}",
                                   f"{p.wall_time:.3f}", int(p.timed_out)])
        _write_csv(out / "volume.csv",
                   ["Parser", "Dataset", "SizeBytes", "Messages", "PA", "WallTime", "TimedOut"], series)
    return 0


def cmd_efficiency(args) -> int:
    reg = _registry(args)
    kinds = _kinds(args)
    datasets = _datasets(args, reg)
    if not args.sizes:
        raise UsageError("efficiency needs --sizes")
    sizes = [parse_size(s) for s in args.sizes.split(",")]
    flat = split_overrides(parse_kv(args.config), kinds)
    out = _out_dir(args)
    rows = []
    for ds in datasets:
        for kind in kinds:
            config = reg.parser_config(ds, kind, flat[kind])
            points = ev.measure_efficiency(kind, config, ds.path, sizes, args.budget_secs,
                                           ds.log_format, None, _options(args, reg, ds, workers=1),
                                           repeats=args.repeats)
            for p in points:
                rows.append([kind.value, ds.name, p.size, p.messages, f"{p.wall_time:.3f}",
                             int(p.timed_out)])
                print(f"{kind.value} {ds.name} {p.size}B: "
                      + ("timed out" if p.timed_out else f"{p.wall_time:.3f}s"))
    _write_csv(out / "efficiency.csv",
               ["Parser", "Dataset", "SizeBytes", "Messages", "WallTime", "TimedOut"], rows)
    return 0


def cmd_generate(args) -> int:
    out = _out_dir(args)
    if args.registry and Path(args.registry).exists():
        reg = load_registry(args.registry)
        specs = list(reg.templates.values())
        if not specs:
            raise UsageError(f"{args.registry} defines no [template:...] sections")
    else:
        levels = ("INFO", "WARN", "ERROR") if args.levels else ("INFO",)
        specs = random_specs(args.templates, args.seed,
                             lengths=list(range(4, 4 + args.templates)) if args.distinct_lengths else None,
                             levels=levels, pool_size=args.pool_size)
    records, truth = generate_corpus(specs, args.messages, args.seed)
    log_path = out / f"{args.name}.log"
    truth_path = out / f"{args.name}_truth.csv"
    write_corpus(records, log_path)
    ev.write_truth(truth, truth_path)
    reg_path = out / "registry.ini"
    with open(reg_path, "a", encoding="utf-8") as fh:
        fh.write("\n" + dataset_section(args.name, log_path.name, SYNTH_FORMAT, truth_path.name))
    print(f"wrote {len(records)} messages from {len(specs)} templates to {log_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="logbench", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, many=True):
        p.add_argument("--registry", help=f"registry file (default: ${ENV_VAR})")
        p.add_argument("--dataset", action="append", default=[], help="dataset name (repeatable)")
        p.add_argument("--parser", action="append", default=[],
                       help="parser kind: " + ", ".join(k.value for k in ParserKind))
        p.add_argument("--config", action="append", default=[], metavar="KEY=VALUE",
                       help="parameter override, optionally prefixed with the parser name")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default="out")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--dedup", action="store_true", help="deduplicate masked messages")
        p.add_argument("--partition", action="store_true", help="partition by level/component")

    p = sub.add_parser("parse", help="parse datasets and write structured/template CSVs")
    common(p)
    p.set_defaults(func=cmd_parse)

    for name, func, helptext in (("benchmark", cmd_benchmark, "accuracy table over datasets"),
                                 ("robustness", cmd_robustness, "PA distribution and volume series")):
        p = sub.add_parser(name, help=helptext)
        common(p)
        p.add_argument("--grid", action="append", default=[], metavar="KEY=V1,V2",
                       help="sweep axis, optionally prefixed with the parser name")
        p.add_argument("--no-sweep", action="store_true", help="evaluate the configured parameters only")
        p.add_argument("--sample", type=int, default=2000, help="messages sampled per dataset")
        p.add_argument("--sizes", help="comma-separated byte sizes (e.g. 300KB,1MB)")
        p.add_argument("--budget-secs", type=float, default=600.0)
        p.set_defaults(func=func)

    p = sub.add_parser("efficiency", help="parse time against input size")
    common(p)
    p.add_argument("--sizes", help="comma-separated byte sizes (e.g. 300KB,1MB)")
    p.add_argument("--budget-secs", type=float, default=600.0)
    p.add_argument("--repeats", type=int, default=1, help="report the fastest of N runs per size")
    p.set_defaults(func=cmd_efficiency)

    p = sub.add_parser("generate", help="write a synthetic corpus with ground truth")
    p.add_argument("--registry", help="registry whose [template:...] sections to use")
    p.add_argument("--name", default="synthetic")
    p.add_argument("--messages", type=int, default=2000)
    p.add_argument("--templates", type=int, default=20)
    p.add_argument("--distinct-lengths", action="store_true")
    p.add_argument("--levels", action="store_true", help="spread templates over INFO/WARN/ERROR")
    p.add_argument("--pool-size", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="out")
    p.set_defaults(func=cmd_generate)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "workers", 1) < 1:
        ap.error("--workers must be >= 1")
    if getattr(args, "repeats", 1) < 1:
        ap.error("--repeats must be >= 1")
    try:
        return args.func(args)
    except (UsageError, RegistryError, ConfigError) as exc:
        ap.print_usage(sys.stderr)
        print(f"logbench: error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"logbench: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
