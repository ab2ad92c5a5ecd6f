"""Analogy mapping between two domains of entities, driven by relation phrases.

The native engine lives in ``relmap._relmap``; this module wraps it with dict
results and a packaged copy of the default stoplist.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Sequence

from . import _relmap
from ._relmap import (
    ConfigError,
    EmbeddingUnavailableError,
    InputError,
    InvalidEntityError,
    ParseError,
    RelmapError,
    SourceUnavailableError,
    normalize_entity,
    solution_space_size,
)

__all__ = [
    "ConfigError",
    "EmbeddingUnavailableError",
    "Engine",
    "InputError",
    "InvalidEntityError",
    "ParseError",
    "RelmapError",
    "SourceUnavailableError",
    "normalize_entity",
    "phrase_similarity",
    "solution_space_size",
]

_PACKAGED_STOPLIST = Path(__file__).with_name("data") / "stoplist.txt"


def _stoplist_path(stoplist: str | Path | None) -> str:
    if stoplist is not None:
        return str(stoplist)
    return str(_PACKAGED_STOPLIST) if _PACKAGED_STOPLIST.exists() else ""


def phrase_similarity(a: str, b: str, threshold: float = 0.2, stoplist: str | Path | None = None) -> float:
    """Thresholded cosine of two relation phrases under the local hashed embedder."""
    return _relmap.phrase_similarity(a, b, threshold, _stoplist_path(stoplist))


class Engine:
    """Maps base entities onto target entities using recorded or live relations."""

    def __init__(
        self,
        snapshot: str | Path | None = None,
        sources: str | Path | None = None,
        disable: Iterable[str] = (),
        beam: int = 20,
        sim_threshold: float = 0.2,
        cluster_threshold: float = 0.5,
        top_k: int = 3,
        threads: int = 1,
        stoplist: str | Path | None = None,
        live: bool = False,
    ) -> None:
        self._native = _relmap.Engine(
            snapshot=str(snapshot or ""),
            sources=str(sources or ""),
            disable=list(disable),
            beam=beam,
            sim_threshold=sim_threshold,
            cluster_threshold=cluster_threshold,
            top_k=top_k,
            threads=threads,
            stoplist=_stoplist_path(stoplist),
            live=live,
        )

    @property
    def source_ids(self) -> list[str]:
        return list(self._native.source_ids)

    def map(self, base: Sequence[str], target: Sequence[str]) -> dict:
        """Ranked mappings, best first."""
        return json.loads(self._native.map_json(list(base), list(target)))

    def best(self, base: Sequence[str], target: Sequence[str]) -> dict[str, str]:
        top = self.map(base, target)["mappings"][0]
        return {p["base"]: p["target"] for p in top["pairs"]}

    def explain(self, b1: str, b2: str, t1: str, t2: str) -> dict:
        return json.loads(self._native.explain_json(b1, b2, t1, t2))

    def suggest(self, base: Sequence[str], target: Sequence[str], entity: str) -> list[dict]:
        return json.loads(self._native.suggest_json(list(base), list(target), entity))

    def evaluate(self, problems: str | Path, ablate: str | None = None) -> dict:
        return json.loads(self._native.evaluate_json(str(problems), ablate or ""))

    def save_snapshot(self, path: str | Path) -> None:
        self._native.save_snapshot(str(path))
