import numpy as np
import pytest

from scimap.corpus import BibRecord
from scimap.similarity import SimilarityMatrix


def random_connected_similarity(rng: np.random.Generator, n: int) -> SimilarityMatrix:
    """Random sparse connected similarity matrix: a random spanning tree
    plus extra edges, weights uniform in (0.05, 2)."""
    entries = {}
    for i in range(1, n):
        j = int(rng.integers(0, i))
        entries[(j, i)] = float(rng.uniform(0.05, 2.0))
    extra = int(rng.integers(0, max(1, n)))
    for _ in range(extra):
        a, b = sorted(int(v) for v in rng.integers(0, n, 2))
        if a != b:
            entries[(a, b)] = float(rng.uniform(0.05, 2.0))
    return SimilarityMatrix(n, entries)


TOPIC_POOLS = (
    ("unit testing", "mocking", "test doubles", "coverage"),
    ("fuzzing", "symbolic execution", "crash triage", "coverage"),
    ("model checking", "temporal logic", "symbolic execution"),
)

AUTHOR_POOL = (
    "Ada Lovelace", "Alan Turing", "Grace Hopper", "Edsger Dijkstra",
    "Barbara Liskov", "Tony Hoare",
)

AFFILIATION_POOL = (
    "Chalmers, Gothenburg, Sweden",
    "MIT, Cambridge, United States",
    "Univ. Luxembourg, Luxembourg",
    "KAIST, Daejeon, South Korea",
)


def synthetic_corpus(n_records: int = 40, seed: int = 5) -> list[BibRecord]:
    """Deterministic corpus with loose topical communities and mixed years."""
    rng = np.random.default_rng(seed)
    records = []
    for i in range(n_records):
        pool = TOPIC_POOLS[int(rng.integers(0, len(TOPIC_POOLS)))]
        size = int(rng.integers(2, min(4, len(pool)) + 1))
        keywords = tuple(rng.choice(pool, size=size, replace=False))
        year = int(rng.integers(2005, 2021)) if rng.random() > 0.1 else None
        n_auth = int(rng.integers(1, 4))
        authors = tuple(rng.choice(AUTHOR_POOL, size=n_auth, replace=False))
        affil = AFFILIATION_POOL[int(rng.integers(0, len(AFFILIATION_POOL)))]
        records.append(
            BibRecord(
                id=f"r{i}",
                title=f"Study {i}",
                authors=authors,
                affiliations=(affil,),
                countries=frozenset({affil.rsplit(",", 1)[-1].strip().lower()}),
                keywords=frozenset(keywords),
                pub_year=year,
                citations=int(rng.integers(0, 100)),
            )
        )
    return records


@pytest.fixture
def rng():
    return np.random.default_rng(20240901)


@pytest.fixture
def corpus():
    return synthetic_corpus()
