"""Loader and schema for the property-to-strategy advice map.

The map ships as versioned JSON data; entries link a (dimension, bin set)
to ordered adopt/avoid strategy lists drawn from a closed vocabulary.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .store import PROPERTY_NAMES


@dataclass(frozen=True)
class StrategyEntry:
    property: str
    granularity: str
    dimension: str
    bins: tuple[int, ...]
    adopt: tuple[str, ...]
    avoid: tuple[str, ...]


@dataclass(frozen=True)
class StrategyMap:
    version: int
    vocabulary: frozenset[str]
    entries: tuple[StrategyEntry, ...]

    def matching(self, dimension: str, bin_index: int) -> list[StrategyEntry]:
        return [
            e for e in self.entries if e.dimension == dimension and bin_index in e.bins
        ]


def load_strategy_map(path=None) -> StrategyMap:
    """Load the bundled strategy map, or one from `path` when given."""
    if path is None:
        text = resources.files("tsadvisor.data").joinpath("strategy_map.json").read_text()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    payload = json.loads(text)
    if payload.get("schema") != "strategy-map":
        raise ValueError("not a strategy-map file")
    vocabulary = frozenset(payload["vocabulary"])
    entries = []
    for raw in payload["entries"]:
        entry = StrategyEntry(
            property=raw["property"],
            granularity=raw["granularity"],
            dimension=raw["dimension"],
            bins=tuple(int(b) for b in raw["bins"]),
            adopt=tuple(raw["adopt"]),
            avoid=tuple(raw["avoid"]),
        )
        if entry.dimension not in PROPERTY_NAMES:
            raise ValueError(f"unknown dimension {entry.dimension!r}")
        for name in entry.adopt + entry.avoid:
            if name not in vocabulary:
                raise ValueError(f"strategy {name!r} outside the closed vocabulary")
        entries.append(entry)
    return StrategyMap(int(payload["version"]), vocabulary, tuple(entries))
