"""INI-style dataset registry.

Example::

    [dataset:HDFS]
    path = HDFS_2k.log
    format = <Date> <Time> <Pid> <Level> <Component>: <Content>
    truth = HDFS_2k.log_structured.csv
    masks = hdfs
    drain.st = 0.5

    [masks:hdfs]
    defaults = yes
    block = blk_-?\\d+

    [template:login]
    template = user <*> logged in from <*>
    params = pool:alice|bob, int:1-255
    weight = 3

Relative paths resolve against the registry file's directory. In a
``masks:`` section every key except ``defaults`` is a rule name mapped to a
regular expression; custom rules run before the default set unless
``defaults = no``. Keys of the form ``<parser>.<param>`` in a dataset section
override parser parameters for that dataset.
"""

from __future__ import annotations

import configparser
import os
from pathlib import Path
from typing import Optional

from .ingestion import DatasetDescriptor, compile_format
from .parsers.config import ParserKind, make_config
from .preprocessing import DEFAULT_MASKS, MaskRule
from .synthgen import TemplateSpec, parse_generator

ENV_VAR = "LOGBENCH_REGISTRY"
DATASET_PREFIX = "dataset:"
MASKS_PREFIX = "masks:"
TEMPLATE_PREFIX = "template:"


class RegistryError(ValueError):
    pass


class Registry:
    def __init__(self, datasets=None, mask_sets=None, templates=None, path=None):
        self.datasets: dict[str, DatasetDescriptor] = datasets or {}
        self.mask_sets: dict[str, tuple] = mask_sets or {}
        self.templates: dict[str, TemplateSpec] = templates or {}
        self.path = path

    def dataset(self, name: str) -> DatasetDescriptor:
        try:
            return self.datasets[name]
        except KeyError:
            known = ", ".join(sorted(self.datasets)) or "none"
            raise RegistryError(f"unknown dataset {name!r}; registered: {known}") from None

    def masks_for(self, ds: DatasetDescriptor) -> tuple:
        if not ds.mask_set:
            return DEFAULT_MASKS
        try:
            return self.mask_sets[ds.mask_set]
        except KeyError:
            raise RegistryError(f"dataset {ds.name!r} uses unknown mask set {ds.mask_set!r}") from None

    def parser_config(self, ds: DatasetDescriptor, kind, overrides=None):
        kind = ParserKind.parse(kind)
        params = dict(ds.parser_configs.get(kind, {}))
        params.update(overrides or {})
        return make_config(kind, params)


def _truthy(value: str) -> bool:
    return value.strip().lower() in ("1", "yes", "true", "on")


def load_registry(path) -> Registry:
    path = Path(path)
    cp = configparser.ConfigParser(interpolation=None, delimiters=("=",))
    cp.optionxform = str
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh)
    except configparser.Error as exc:
        raise RegistryError(f"{path}: {exc}") from None
    base = path.parent
    reg = Registry(path=path)

    for section in cp.sections():
        items = dict(cp.items(section))
        if section.startswith(MASKS_PREFIX):
            name = section[len(MASKS_PREFIX):]
            keep_defaults = _truthy(items.pop("defaults", "yes"))
            custom = tuple(MaskRule(k, v) for k, v in items.items())
            reg.mask_sets[name] = custom + (DEFAULT_MASKS if keep_defaults else ())
        elif section.startswith(TEMPLATE_PREFIX):
            name = section[len(TEMPLATE_PREFIX):]
            params = [p for p in items.get("params", "").split(",") if p.strip()]
            reg.templates[name] = TemplateSpec(
                items["template"], [parse_generator(p) for p in params],
                weight=float(items.get("weight", 1.0)),
                level=items.get("level", "INFO"), component=items.get("component", "app"))

    for section in cp.sections():
        if not section.startswith(DATASET_PREFIX):
            continue
        name = section[len(DATASET_PREFIX):]
        items = dict(cp.items(section))
        if "path" not in items:
            raise RegistryError(f"dataset {name!r} has no path")
        configs: dict = {}
        for key in list(items):
            if "." in key:
                kind_name, _, param = key.partition(".")
                kind = ParserKind.parse(kind_name)
                configs.setdefault(kind, {})[param] = items.pop(key)
        ds = DatasetDescriptor(
            name=name,
            path=(base / items["path"]).resolve(),
            log_format=items.get("format", "<Content>"),
            truth_path=(base / items["truth"]).resolve() if items.get("truth") else None,
            mask_set=items.get("masks") or None,
            multiline=_truthy(items.get("multiline", "no")),
            parser_configs=configs,
        )
        compile_format(ds.log_format)
        for kind, params in configs.items():
            make_config(kind, params)
        if ds.mask_set and ds.mask_set not in reg.mask_sets:
            raise RegistryError(f"dataset {name!r} uses unknown mask set {ds.mask_set!r}")
        reg.datasets[name] = ds
    return reg


def find_registry(explicit: Optional[str] = None) -> Optional[Path]:
    candidate = explicit or os.environ.get(ENV_VAR)
    return Path(candidate) if candidate else None


def dataset_section(name: str, path, log_format: str, truth=None, masks=None, **params) -> str:
    """Render one ``[dataset:...]`` section (used when writing generated corpora)."""
    lines = [f"[{DATASET_PREFIX}{name}]", f"path = {path}", f"format = {log_format}"]
    if truth:
        lines.append(f"truth = {truth}")
    if masks:
        lines.append(f"masks = {masks}")
    lines += [f"{k} = {v}" for k, v in params.items()]
    return "\n".join(lines) + "\n"
