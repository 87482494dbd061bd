"""Shipped graphs: completions, their apex vertices and decompletions."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .graph import Graph, canonical_form, decompletion, is_primitive_divergent, parse_edge_list


class CatalogError(RuntimeError):
    pass


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    completion: Graph | None
    decompletion: Graph | None
    apex: str | None
    provenance: str
    aliases: tuple[str, ...] = ()
    run: bool = True
    documented: dict = field(default_factory=dict, compare=False)


def _read(filename: str) -> str:
    return resources.files("c2inv").joinpath("data").joinpath(filename).read_text()


def _load_entry(raw: dict) -> CatalogEntry:
    if not raw.get("run", True):
        return CatalogEntry(raw["name"], None, None, None, raw["provenance"], run=False,
                            documented=raw.get("documented", {}))
    K = parse_edge_list(_read(raw["completion"]))
    G = parse_edge_list(_read(raw["decompletion"]))
    apex = raw["apex"]
    if decompletion(K, apex) != G:
        raise CatalogError(f"{raw['name']}: decompletion file is not the completion minus {apex}")
    ok, rebuilt = is_primitive_divergent(G)
    if not ok:
        raise CatalogError(f"{raw['name']}: not primitive divergent")
    if canonical_form(rebuilt) != canonical_form(K):
        raise CatalogError(f"{raw['name']}: reconstructed completion differs from the shipped one")
    return CatalogEntry(raw["name"], K, G, apex, raw["provenance"], tuple(raw.get("aliases", ())))


@lru_cache(maxsize=1)
def catalog() -> tuple[CatalogEntry, ...]:
    """All entries, validated at load; a failing entry is a startup error."""
    data = json.loads(_read("catalog.json"))
    return tuple(_load_entry(raw) for raw in data["entries"])


def catalog_version() -> int:
    return json.loads(_read("catalog.json"))["version"]


def get_entry(name: str) -> CatalogEntry:
    for entry in catalog():
        if name == entry.name or name in entry.aliases:
            return entry
    raise KeyError(name)


def resolve_graph(name_or_path: str) -> tuple[str, Graph]:
    """Catalog name (or alias) to its decompletion, else an edge-list file path."""
    try:
        entry = get_entry(name_or_path)
    except KeyError:
        path = Path(name_or_path)
        if not path.exists():
            names = ", ".join(e.name for e in catalog() if e.run)
            raise CatalogError(f"{name_or_path!r} is neither a catalog graph ({names}) nor a file") from None
        return path.stem, parse_edge_list(path.read_text())
    if not entry.run:
        raise CatalogError(f"{entry.name} is documentation only: {entry.provenance}")
    return entry.name, entry.decompletion


def emit(directory: Path) -> list[Path]:
    """Write every runnable entry's completion and decompletion edge lists."""
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for entry in catalog():
        if not entry.run:
            continue
        for suffix, g in (("completion", entry.completion), ("decompletion", entry.decompletion)):
            path = directory / f"{entry.name}.{suffix}.edges"
            path.write_text(f"# {entry.name} {suffix}: {entry.provenance}\n" + g.to_text())
            written.append(path)
    return written
