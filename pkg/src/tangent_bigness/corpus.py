"""The shipped fixture corpus: configurations, certificates and their place in the hierarchies."""
from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .picard import BubbleConfig, MalformedConfig, SurfaceModel, build_surface


class CorpusError(ValueError):
    """A corpus file is missing or cannot be parsed."""


def default_corpus() -> Path:
    return Path(str(resources.files("tangent_bigness").joinpath("corpus")))


def _root(corpus: str | Path | None) -> Path:
    return Path(corpus) if corpus is not None else default_corpus()


def read_json(path: str | Path):
    """Load JSON, turning decode errors into :class:`CorpusError` with a line number."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CorpusError(f"{path}: {exc.strerror or exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorpusError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def fixture_names(corpus=None) -> list[str]:
    return sorted(p.stem for p in (_root(corpus) / "configs").glob("*.json"))


def certificate_paths(corpus=None) -> list[Path]:
    return sorted((_root(corpus) / "certificates").glob("*.json"))


def resolve_config(ref: str, corpus=None) -> Path:
    """A path to a config file, or the name of a corpus fixture."""
    p = Path(ref)
    if p.suffix == ".json" or p.exists():
        return p
    cand = _root(corpus) / "configs" / f"{ref}.json"
    if cand.exists():
        return cand
    raise CorpusError(f"no configuration file or fixture named {ref!r}")


def load_config(ref: str, corpus=None) -> BubbleConfig:
    data = read_json(resolve_config(ref, corpus))
    if not isinstance(data, dict):
        raise MalformedConfig(f"{ref}: configuration must be a JSON object")
    cfg = BubbleConfig.from_dict(data)
    return cfg


@lru_cache(maxsize=None)
def _surface(path: str) -> SurfaceModel:
    data = read_json(path)
    if not isinstance(data, dict):
        raise MalformedConfig(f"{path}: configuration must be a JSON object")
    return build_surface(BubbleConfig.from_dict(data))


def load_surface(ref: str, corpus=None) -> SurfaceModel:
    return _surface(str(resolve_config(ref, corpus).resolve()))


# line count / (-2)-curve count for every fixture (2A1_8 and five_point are computed, not captioned)
EXPECTED_COUNTS = {
    "five_point": (16, 0),
    "2A1_9": (9, 2),
    "2A1_8": (8, 2),
    "A3_4": (4, 3),
    "2A2": (7, 4),
    "A2+2A1": (8, 4),
    "D4": (6, 4),
    "A4": (6, 4),
    "A3+A1": (7, 4),
    "4A1": (9, 4),
    "A3+2A1": (5, 5),
    "E6": (1, 6),
    "3A2": (3, 6),
    "2A3+A1": (4, 7),
}

# where each fixture sits in the built-in hierarchies
FIXTURE_NODES = {
    "five_point": [("degree4", "empty")],
    "2A1_9": [("degree4", "2A1(9)")],
    "2A1_8": [("degree4", "2A1(8)")],
    "A3_4": [("degree4", "A3(4)")],
    "2A2": [("degree3", "2A2")],
    "A2+2A1": [("degree3", "A2+2A1")],
    "D4": [("degree3", "D4"), ("cross-degree", "d3:D4")],
    "A4": [("degree3", "A4")],
    "A3+A1": [("degree3", "A3+A1")],
    "4A1": [("degree3", "4A1")],
    "A3+2A1": [("degree3", "A3+2A1")],
    "E6": [("degree3", "E6")],
    "3A2": [("degree3", "3A2")],
    "2A3+A1": [("cross-degree", "d2:2A3+A1")],
}

# facts imported from outside the certificate machinery
EXTERNAL_FACTS = {
    "degree3": [("3A2", "Big", "type 3A2 cubic surfaces are toric; toric tangent bundles are big")],
}
