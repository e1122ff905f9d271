"""Registry for the public Loghub 2k labelled samples.

Point ``LOGHUB_DIR`` (or pass a directory) at a folder holding
``<Name>_2k.log`` and ``<Name>_2k.log_structured.csv`` pairs. Only the pairs
actually present are registered.

Formats follow the published sample headers. Optional header parts (such as
a ``[pid]`` suffix on a component) are folded into the preceding field, and
lines that still do not fit fall back to whole-line content.
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Optional

from .ingestion import DatasetDescriptor
from .registry import Registry

ENV_VAR = "LOGHUB_DIR"

FORMATS = {
    "HDFS": "<Date> <Time> <Pid> <Level> <Component>: <Content>",
    "Hadoop": "<Date> <Time> <Level> [<Process>] <Component>: <Content>",
    "Spark": "<Date> <Time> <Level> <Component>: <Content>",
    "Zookeeper": "<Date> <Time> - <Level>  [<Node>:<Component>@<Id>] - <Content>",
    "BGL": "<Label> <Timestamp> <Date> <Node> <Time> <NodeRepeat> <Type> <Component> <Level> <Content>",
    "HPC": "<LogId> <Node> <Component> <State> <Time> <Flag> <Content>",
    "Thunderbird": "<Label> <Timestamp> <Date> <User> <Month> <Day> <Time> <Location> <Component>: <Content>",
    "Windows": "<Date> <Time>, <Level>                  <Component>    <Content>",
    "Linux": "<Month> <Date> <Time> <Level> <Component>: <Content>",
    "Android": "<Date> <Time>  <Pid>  <Tid> <Level> <Component>: <Content>",
    "HealthApp": "<Time>|<Component>|<Pid>|<Content>",
    "Apache": "[<Time>] [<Level>] <Content>",
    "Proxifier": "[<Time>] <Program> - <Content>",
    "OpenSSH": "<Date> <Day> <Time> <Component> sshd[<Pid>]: <Content>",
    "OpenStack": "<Logrecord> <Date> <Time> <Pid> <Level> <Component> [<ADDR>] <Content>",
    "Mac": "<Month>  <Date> <Time> <User> <Component>: <Content>",
}


def loghub_dir(explicit=None) -> Optional[Path]:
    candidate = explicit or os.environ.get(ENV_VAR)
    return Path(candidate) if candidate else None


def loghub_registry(directory) -> Registry:
    """Register every ``<Name>_2k`` sample pair found in ``directory``."""
    directory = Path(directory)
    reg = Registry(path=directory)
    for name, fmt in FORMATS.items():
        log_path = directory / f"{name}_2k.log"
        truth_path = directory / f"{name}_2k.log_structured.csv"
        if log_path.is_file() and truth_path.is_file():
            reg.datasets[name] = DatasetDescriptor(name, log_path, fmt, truth_path)
    return reg
