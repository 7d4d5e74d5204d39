"""Thresholded co-occurrence networks.

Nodes are unit labels (keywords, authors, or countries) whose document
count reaches the build threshold; the edge weight between two labels is
the number of records containing both. Counting is per-document: a record
contributes at most 1 to any label or pair, no matter how often it lists
them. Node strengths ``w`` and the total edge weight ``m`` are derived
from the edges and kept recomputable exactly.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import IO, Iterable

from .corpus import BibRecord, UnitKind, extract_units
from .errors import EmptyNetwork, SchemaMismatch

__all__ = [
    "NetworkNode",
    "CooccurrenceNetwork",
    "count_occurrences",
    "build_network",
    "largest_component",
    "write_network_file",
    "read_network_file",
]


@dataclass(frozen=True)
class NetworkNode:
    label: str
    occurrences: int
    record_ids: frozenset[str]


@dataclass(frozen=True)
class CooccurrenceNetwork:
    """Symmetric integer-weighted network over one unit kind.

    ``edges`` maps index pairs (i, j) with i < j to the co-occurrence count
    c_ij >= 1; there are no self-edges. ``w[i]`` is the total link strength
    of node i and ``m`` half the sum of all strengths.
    """

    unit: UnitKind
    nodes: tuple[NetworkNode, ...]
    edges: dict[tuple[int, int], int]

    def __post_init__(self):
        for (i, j), c in self.edges.items():
            if not 0 <= i < j < len(self.nodes):
                raise ValueError(f"bad edge index pair ({i}, {j})")
            if c < 1:
                raise ValueError(f"edge ({i}, {j}) has non-positive weight {c}")

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def w(self) -> tuple[int, ...]:
        strengths = [0] * len(self.nodes)
        for (i, j), c in self.edges.items():
            strengths[i] += c
            strengths[j] += c
        return tuple(strengths)

    @property
    def m(self) -> int:
        return sum(self.edges.values())

    def label_index(self) -> dict[str, int]:
        return {node.label: i for i, node in enumerate(self.nodes)}

    def neighbors(self, i: int) -> list[tuple[int, int]]:
        """(neighbor index, strength) pairs of node i, ascending by index."""
        out = []
        for (a, b), c in self.edges.items():
            if a == i:
                out.append((b, c))
            elif b == i:
                out.append((a, c))
        out.sort()
        return out


def count_occurrences(records: Iterable[BibRecord], unit: UnitKind) -> dict[str, int]:
    """Document counts per label: each record contributes at most 1."""
    counts: dict[str, int] = {}
    for record in records:
        for label in extract_units(record, unit):
            counts[label] = counts.get(label, 0) + 1
    return counts


def build_network(
    records: Iterable[BibRecord], unit: UnitKind, min_occurrences: int = 20
) -> CooccurrenceNetwork:
    """Build the co-occurrence network over labels meeting the threshold.

    Edges are computed only over surviving nodes. Raises
    :class:`EmptyNetwork` if no label reaches ``min_occurrences``.
    """
    if min_occurrences < 1:
        raise ValueError("min_occurrences must be >= 1")
    records = list(records)
    counts = count_occurrences(records, unit)
    labels = sorted(label for label, c in counts.items() if c >= min_occurrences)
    if not labels:
        raise EmptyNetwork(
            f"no {unit.value} occurs in at least {min_occurrences} records"
        )
    index = {label: i for i, label in enumerate(labels)}

    support: dict[int, set[str]] = {i: set() for i in range(len(labels))}
    edges: dict[tuple[int, int], int] = {}
    for record in records:
        present = sorted(
            index[label] for label in extract_units(record, unit) if label in index
        )
        for i in present:
            support[i].add(record.id)
        for a in range(len(present)):
            for b in range(a + 1, len(present)):
                pair = (present[a], present[b])
                edges[pair] = edges.get(pair, 0) + 1

    nodes = tuple(
        NetworkNode(label, counts[label], frozenset(support[index[label]]))
        for label in labels
    )
    return CooccurrenceNetwork(unit=unit, nodes=nodes, edges=edges)


def largest_component(
    net: CooccurrenceNetwork,
) -> tuple[CooccurrenceNetwork, list[str]]:
    """Restrict to the connected component with the most nodes.

    Ties go to the component containing the lexicographically smallest
    label. Returns the restricted network and the dropped labels.
    """
    n = net.n
    adjacency: dict[int, list[int]] = {i: [] for i in range(n)}
    for (i, j) in net.edges:
        adjacency[i].append(j)
        adjacency[j].append(i)

    seen = [False] * n
    components: list[list[int]] = []
    for start in range(n):
        if seen[start]:
            continue
        queue = deque([start])
        seen[start] = True
        members = []
        while queue:
            node = queue.popleft()
            members.append(node)
            for nb in adjacency[node]:
                if not seen[nb]:
                    seen[nb] = True
                    queue.append(nb)
        components.append(sorted(members))

    def rank(component: list[int]) -> tuple[int, str]:
        smallest = min(net.nodes[i].label for i in component)
        return (-len(component), smallest)

    keep = min(components, key=rank)
    if len(keep) == n:
        return net, []

    keep_set = set(keep)
    remap = {old: new for new, old in enumerate(keep)}
    nodes = tuple(net.nodes[i] for i in keep)
    edges = {
        (remap[i], remap[j]): c
        for (i, j), c in net.edges.items()
        if i in keep_set and j in keep_set
    }
    dropped = sorted(net.nodes[i].label for i in range(n) if i not in keep_set)
    return CooccurrenceNetwork(unit=net.unit, nodes=nodes, edges=edges), dropped


def write_network_file(net_or_edges, stream: IO[str]) -> None:
    """Export edges as "i<TAB>j<TAB>strength" triples, 1-based ids, no header."""
    if isinstance(net_or_edges, CooccurrenceNetwork):
        edges = net_or_edges.edges
    else:
        edges = net_or_edges
    for (i, j) in sorted(edges):
        stream.write(f"{i + 1}\t{j + 1}\t{edges[(i, j)]}\n")


def write_node_table(net: CooccurrenceNetwork, stream: IO[str]) -> None:
    """Companion node table: "id<TAB>label<TAB>occurrences"."""
    for i, node in enumerate(net.nodes):
        stream.write(f"{i + 1}\t{node.label}\t{node.occurrences}\n")


def read_network_file(stream: IO[str]) -> dict[tuple[int, int], int]:
    """Parse "i<TAB>j<TAB>strength" triples back to a 0-based edge map."""
    edges: dict[tuple[int, int], int] = {}
    for lineno, line in enumerate(stream, start=1):
        line = line.strip()
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise SchemaMismatch(f"network line {lineno}: expected 3 columns")
        i, j, c = int(parts[0]) - 1, int(parts[1]) - 1, int(parts[2])
        edges[(min(i, j), max(i, j))] = c
    return edges
