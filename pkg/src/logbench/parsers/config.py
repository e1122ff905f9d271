"""Parser kinds and their tunable parameters."""

from __future__ import annotations

import dataclasses
import enum
from dataclasses import dataclass


class ConfigError(ValueError):
    pass


class ParserKind(str, enum.Enum):
    DRAIN = "Drain"
    SPELL = "Spell"
    LENMA = "LenMa"
    IPLOM = "IPLoM"
    AEL = "AEL"
    SLCT = "SLCT"

    @classmethod
    def parse(cls, name: str) -> "ParserKind":
        if isinstance(name, cls):
            return name
        for kind in cls:
            if kind.value.lower() == str(name).lower():
                return kind
        valid = ", ".join(k.value for k in cls)
        raise ConfigError(f"unknown parser {name!r}; valid kinds: {valid}")

    @property
    def online(self) -> bool:
        return self in (ParserKind.DRAIN, ParserKind.SPELL, ParserKind.LENMA)

    @property
    def full_coverage(self) -> bool:
        return self is not ParserKind.SLCT


def _unit(name, value):
    if not 0.0 <= value <= 1.0:
        raise ConfigError(f"{name} must be in [0, 1], got {value}")


@dataclass(frozen=True)
class DrainConfig:
    depth: int = 4
    st: float = 0.4
    max_children: int = 100

    def __post_init__(self):
        if self.depth < 3:
            raise ConfigError(f"depth must be >= 3, got {self.depth}")
        _unit("st", self.st)
        if self.max_children < 1:
            raise ConfigError("max_children must be >= 1")


@dataclass(frozen=True)
class SpellConfig:
    tau: float = 0.5

    def __post_init__(self):
        _unit("tau", self.tau)


@dataclass(frozen=True)
class LenMaConfig:
    sigma: float = 0.9

    def __post_init__(self):
        _unit("sigma", self.sigma)


@dataclass(frozen=True)
class IPLoMConfig:
    support: int = 0     # partitions with <= support messages skip steps 2 and 3
    ct: float = 0.35     # skip step 3 when the constant-column fraction reaches this
    lower: float = 0.25
    upper: float = 0.9

    def __post_init__(self):
        if self.support < 0:
            raise ConfigError("support must be >= 0")
        _unit("ct", self.ct)
        _unit("lower", self.lower)
        _unit("upper", self.upper)
        if self.lower > self.upper:
            raise ConfigError("lower bound exceeds upper bound")


@dataclass(frozen=True)
class AELConfig:
    merge: float = 0.5   # max fraction of disagreeing constant positions within a bin

    def __post_init__(self):
        _unit("merge", self.merge)


@dataclass(frozen=True)
class SLCTConfig:
    support: int = 2
    promote_outliers: bool = False

    def __post_init__(self):
        if self.support < 1:
            raise ConfigError(f"support must be >= 1, got {self.support}")


CONFIG_TYPES = {
    ParserKind.DRAIN: DrainConfig,
    ParserKind.SPELL: SpellConfig,
    ParserKind.LENMA: LenMaConfig,
    ParserKind.IPLOM: IPLoMConfig,
    ParserKind.AEL: AELConfig,
    ParserKind.SLCT: SLCTConfig,
}


def _coerce(ftype, raw):
    if not isinstance(raw, str):
        return ftype(raw) if ftype is not bool else bool(raw)
    if ftype is bool:
        lowered = raw.strip().lower()
        if lowered in ("1", "true", "yes", "on"):
            return True
        if lowered in ("0", "false", "no", "off"):
            return False
        raise ValueError(raw)
    if ftype is int:
        value = float(raw)
        if value != int(value):
            raise ValueError(raw)
        return int(value)
    return ftype(raw)


def make_config(kind, overrides=None):
    """Build the config for ``kind`` from defaults plus ``overrides``.

    Override values may be strings (as read from flags or files); they are
    coerced to the field type. Unknown keys raise ConfigError.
    """
    kind = ParserKind.parse(kind)
    cls = CONFIG_TYPES[kind]
    types = {f.name: f.type for f in dataclasses.fields(cls)}
    kwargs = {}
    for key, raw in (overrides or {}).items():
        if key not in types:
            raise ConfigError(f"unknown {kind.value} parameter {key!r}; "
                              f"valid: {', '.join(types)}")
        ftype = {"int": int, "float": float, "bool": bool}[types[key]]
        try:
            kwargs[key] = _coerce(ftype, raw)
        except (TypeError, ValueError):
            raise ConfigError(f"{kind.value}.{key}: cannot use {raw!r} as {types[key]}") from None
    return cls(**kwargs)


def config_items(config) -> tuple:
    return tuple((f.name, getattr(config, f.name)) for f in dataclasses.fields(config))


def config_str(config) -> str:
    return " ".join(f"{k}={v}" for k, v in config_items(config))


def kind_of(config) -> ParserKind:
    for kind, cls in CONFIG_TYPES.items():
        if isinstance(config, cls):
            return kind
    raise ConfigError(f"not a parser config: {config!r}")
