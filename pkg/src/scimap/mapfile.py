"""Map serialization: the item table, the network file, and viewer JSON.

The map file is a TSV node table (one row per item: position, cluster,
weights, overlay score); edges live in a companion network file of
1-based "i<TAB>j<TAB>strength" triples; ``write_json`` emits the single
document the viewer consumes. Map-file numbers use repr so a read after
a write restores every field exactly; JSON numbers carry 12 significant
digits. All output is locale-independent with '.' as the decimal
separator.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import IO, TYPE_CHECKING

from .errors import SchemaMismatch

if TYPE_CHECKING:
    from .pipeline import PipelineConfig

__all__ = [
    "ItemNode",
    "ItemMap",
    "MAP_HEADER",
    "write_map_file",
    "read_map_file",
    "write_json",
    "save_map",
    "load_map",
]

MAP_HEADER = (
    "id\tlabel\tx\ty\tcluster\tweight<Occurrences>\tweight<Links>"
    "\tweight<Total link strength>\tscore<Avg. pub. date>"
)


@dataclass(frozen=True)
class ItemNode:
    id: int
    label: str
    x: float
    y: float
    cluster: int
    occurrences: int
    links: int
    total_link_strength: int
    score: float | None


@dataclass(frozen=True)
class ItemMap:
    """Final product: positions, clusters, weights, and overlay scores,
    index-aligned across all pipeline stages, plus the configuration that
    produced them."""

    nodes: tuple[ItemNode, ...]
    edges: tuple[tuple[int, int, int], ...]  # 1-based ids, i < j
    config: "PipelineConfig | None" = None
    record_count: int = 0
    score_low: float | None = None
    score_high: float | None = None

    def node_by_id(self, node_id: int) -> ItemNode | None:
        if 1 <= node_id <= len(self.nodes):
            return self.nodes[node_id - 1]
        return None

    def neighbors_of(self, node_id: int) -> list[tuple[ItemNode, int]]:
        """(neighbor, strength) pairs sorted by descending strength then id."""
        out = []
        for i, j, strength in self.edges:
            if i == node_id:
                out.append((self.nodes[j - 1], strength))
            elif j == node_id:
                out.append((self.nodes[i - 1], strength))
        out.sort(key=lambda pair: (-pair[1], pair[0].id))
        return out


def write_map_file(item_map: ItemMap, stream: IO[str]) -> None:
    stream.write(MAP_HEADER + "\n")
    for node in item_map.nodes:
        score = "" if node.score is None else repr(node.score)
        stream.write(
            f"{node.id}\t{node.label}\t{node.x!r}\t{node.y!r}\t{node.cluster}"
            f"\t{node.occurrences}\t{node.links}\t{node.total_link_strength}\t{score}\n"
        )


def read_map_file(stream: IO[str]) -> ItemMap:
    """Parse a map file back into an ItemMap (node table only)."""
    header = stream.readline().rstrip("\r\n")
    if header != MAP_HEADER:
        raise SchemaMismatch(f"unexpected map header: {header!r}")
    nodes = []
    for lineno, line in enumerate(stream, start=2):
        line = line.rstrip("\r\n")
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 9:
            raise SchemaMismatch(f"map line {lineno}: expected 9 columns, got {len(parts)}")
        nodes.append(
            ItemNode(
                id=int(parts[0]),
                label=parts[1],
                x=float(parts[2]),
                y=float(parts[3]),
                cluster=int(parts[4]),
                occurrences=int(parts[5]),
                links=int(parts[6]),
                total_link_strength=int(parts[7]),
                score=float(parts[8]) if parts[8] else None,
            )
        )
    return ItemMap(nodes=tuple(nodes), edges=())


def _format_float(value: float) -> str:
    if value != value or value in (float("inf"), float("-inf")):
        raise ValueError("non-finite numbers cannot be serialized")
    text = format(value, ".12g")
    if "e" not in text and "E" not in text and "." not in text:
        text += ".0"
    return text


def _emit(value) -> str:
    if value is None:
        return "null"
    if value is True:
        return "true"
    if value is False:
        return "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return _format_float(value)
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(_emit(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ",".join(f"{json.dumps(k)}:{_emit(v)}" for k, v in value.items()) + "}"
    raise TypeError(f"cannot serialize {type(value)!r}")


def _config_dict(item_map: ItemMap) -> dict:
    config = item_map.config
    out: dict = {}
    if config is not None:
        out.update(
            {
                "unit": config.unit.value,
                "min_occurrences": config.min_occurrences,
                "resolution": config.resolution,
                "seed": config.seed,
                "restarts": config.restarts,
                "max_iterations": config.max_iterations,
                "rel_tolerance": config.rel_tolerance,
                "jitter_epsilon": config.jitter_epsilon,
            }
        )
    out["record_count"] = item_map.record_count
    out["score_low"] = item_map.score_low
    out["score_high"] = item_map.score_high
    return out


def write_json(item_map: ItemMap) -> bytes:
    """Single JSON document {nodes, edges, config} with stable key order."""
    node_objs = [
        {
            "id": node.id,
            "label": node.label,
            "x": node.x,
            "y": node.y,
            "cluster": node.cluster,
            "weight_occurrences": node.occurrences,
            "weight_links": node.links,
            "weight_total_link_strength": node.total_link_strength,
            "score_avg_pub_date": node.score,
        }
        for node in item_map.nodes
    ]
    edge_objs = [
        {"source": i, "target": j, "strength": strength}
        for i, j, strength in item_map.edges
    ]
    doc = {"nodes": node_objs, "edges": edge_objs, "config": _config_dict(item_map)}
    return _emit(doc).encode("utf-8")


def save_map(item_map: ItemMap, directory: str | Path, basename: str = "map") -> list[Path]:
    """Write the full bundle: node table, network file, and JSON document."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    map_path = directory / f"{basename}_map.txt"
    net_path = directory / f"{basename}_network.txt"
    json_path = directory / f"{basename}.json"
    with open(map_path, "w", encoding="utf-8", newline="\n") as fh:
        write_map_file(item_map, fh)
    with open(net_path, "w", encoding="utf-8", newline="\n") as fh:
        for i, j, strength in item_map.edges:
            fh.write(f"{i}\t{j}\t{strength}\n")
    json_path.write_bytes(write_json(item_map))
    return [map_path, net_path, json_path]


def load_map(directory: str | Path, basename: str = "map") -> ItemMap:
    """Read a bundle written by :func:`save_map` back into an ItemMap."""
    from .pipeline import PipelineConfig

    directory = Path(directory)
    with open(directory / f"{basename}_map.txt", encoding="utf-8") as fh:
        partial = read_map_file(fh)

    edges = []
    net_path = directory / f"{basename}_network.txt"
    if net_path.exists():
        with open(net_path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                parts = line.split("\t")
                if len(parts) != 3:
                    raise SchemaMismatch("network file: expected 3 columns")
                edges.append((int(parts[0]), int(parts[1]), int(parts[2])))

    config = None
    record_count = 0
    score_low = None
    score_high = None
    json_path = directory / f"{basename}.json"
    if json_path.exists():
        doc = json.loads(json_path.read_text("utf-8"))
        raw = dict(doc.get("config", {}))
        record_count = raw.pop("record_count", 0)
        score_low = raw.pop("score_low", None)
        score_high = raw.pop("score_high", None)
        if raw:
            config = PipelineConfig.from_dict(raw)
    return ItemMap(
        nodes=partial.nodes,
        edges=tuple(edges),
        config=config,
        record_count=record_count,
        score_low=score_low,
        score_high=score_high,
    )
