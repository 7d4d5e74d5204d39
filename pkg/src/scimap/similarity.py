"""Association-strength normalization of the co-occurrence matrix.

The similarity between items i and j is

    s_ij = 2 * m * c_ij / (w_i * w_j)

which is proportional to the ratio between the observed number of their
co-occurrences and the number expected if occurrences were independent.
Entries are stored sparsely: s_ij = 0 exactly when c_ij = 0, so the
sparsity pattern equals the network's edge pattern.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO

from .errors import DegenerateNetwork
from .network import CooccurrenceNetwork

__all__ = ["SimilarityMatrix", "association_strength", "write_similarity_tsv"]


@dataclass(frozen=True)
class SimilarityMatrix:
    """Symmetric sparse similarity matrix; entries keyed (i, j) with i < j."""

    n: int
    entries: dict[tuple[int, int], float]

    def get(self, i: int, j: int) -> float:
        if i == j:
            return 0.0
        key = (i, j) if i < j else (j, i)
        return self.entries.get(key, 0.0)

    def max_entry(self) -> float:
        return max(self.entries.values(), default=0.0)


def association_strength(net: CooccurrenceNetwork) -> SimilarityMatrix:
    """Normalize co-occurrence counts into association strengths.

    Requires m > 0 and every w_i > 0 (isolated nodes are removed upstream
    by the largest-component restriction); raises
    :class:`DegenerateNetwork` otherwise.
    """
    w = net.w
    m = net.m
    if m <= 0:
        raise DegenerateNetwork("total edge weight m is zero")
    for i, wi in enumerate(w):
        if wi <= 0:
            raise DegenerateNetwork(f"node {net.nodes[i].label!r} has zero strength")
    entries = {
        (i, j): 2.0 * m * c / (w[i] * w[j]) for (i, j), c in net.edges.items()
    }
    return SimilarityMatrix(n=net.n, entries=entries)


def write_similarity_tsv(sims: SimilarityMatrix, stream: IO[str]) -> None:
    """Debug dump: "i<TAB>j<TAB>s" triples with 1-based ids."""
    for (i, j), s in sorted(sims.entries.items()):
        stream.write(f"{i + 1}\t{j + 1}\t{s!r}\n")
