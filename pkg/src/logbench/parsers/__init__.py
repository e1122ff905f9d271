from .ael import ael
from .config import (
    AELConfig,
    ConfigError,
    DrainConfig,
    IPLoMConfig,
    LenMaConfig,
    ParserKind,
    SLCTConfig,
    SpellConfig,
    config_items,
    config_str,
    make_config,
)
from .drain import DrainParser
from .iplom import iplom, iplom_partition_by_bijection, iplom_partition_by_position
from .lenma import LenMaParser
from .pipeline import (
    ParseOutput,
    PipelineOptions,
    extract_parameters,
    new_state,
    parse,
    parse_online_step,
    run_core,
)
from .similarity import lcs, length_vector_similarity, seq_similarity
from .slct import slct
from .spell import SpellParser, lcs_template

__all__ = [
    "AELConfig", "ConfigError", "DrainConfig", "IPLoMConfig", "LenMaConfig",
    "ParserKind", "SLCTConfig", "SpellConfig", "config_items", "config_str",
    "make_config", "DrainParser", "SpellParser", "LenMaParser", "ael", "iplom",
    "slct", "iplom_partition_by_bijection", "iplom_partition_by_position",
    "ParseOutput", "PipelineOptions", "extract_parameters", "new_state", "parse",
    "parse_online_step", "run_core", "lcs", "lcs_template",
    "length_vector_similarity", "seq_similarity",
]
