"""Bibliographic CSV ingestion.

Parses CSV exports (RFC-4180 quoting, header row required) into validated
:class:`BibRecord` objects and extracts the analysis units used downstream:
keywords, author names, and affiliation countries. Countries are derived
from the last comma-separated segment of each affiliation string via a
bundled gazetteer; segments that match nothing are logged and dropped,
never guessed.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from typing import IO, Iterable, Iterator

from .errors import MalformedRow, MissingColumn

logger = logging.getLogger(__name__)

__all__ = [
    "BibRecord",
    "UnitKind",
    "CorpusSchema",
    "Gazetteer",
    "ParsedCorpus",
    "canonicalize_label",
    "parse_corpus",
    "extract_units",
    "default_gazetteer",
    "write_ndjson",
    "read_ndjson",
]


def canonicalize_label(raw: str) -> str:
    """Lowercase, trim, and collapse internal whitespace runs.

    An empty result signals a droppable label.
    """
    return " ".join(raw.split()).lower()


class UnitKind(str, Enum):
    """The three kinds of analysis units a network can be built over."""

    KEYWORD = "keyword"
    AUTHOR = "author"
    COUNTRY = "country"


@dataclass(frozen=True)
class BibRecord:
    """One publication.

    ``keywords`` and ``countries`` are canonical sets; ``pub_year`` may be
    absent (the record still participates in network building but is
    excluded from overlay averaging).
    """

    id: str
    title: str
    authors: tuple[str, ...]
    affiliations: tuple[str, ...]
    countries: frozenset[str]
    keywords: frozenset[str]
    pub_year: int | None
    pub_month: int | None = None
    venue: str = ""
    citations: int = 0

    def __post_init__(self):
        for kw in self.keywords:
            if not kw or kw != canonicalize_label(kw):
                raise ValueError(f"keyword not canonical: {kw!r}")
        if self.pub_year is not None and not 1900 <= self.pub_year <= 2100:
            raise ValueError(f"pub_year out of range: {self.pub_year}")
        if self.pub_month is not None and not 1 <= self.pub_month <= 12:
            raise ValueError(f"pub_month out of range: {self.pub_month}")
        if self.citations < 0:
            raise ValueError("citations must be non-negative")

    def to_json_dict(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "authors": list(self.authors),
            "affiliations": list(self.affiliations),
            "countries": sorted(self.countries),
            "keywords": sorted(self.keywords),
            "pub_year": self.pub_year,
            "pub_month": self.pub_month,
            "venue": self.venue,
            "citations": self.citations,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "BibRecord":
        return cls(
            id=d["id"],
            title=d["title"],
            authors=tuple(d["authors"]),
            affiliations=tuple(d["affiliations"]),
            countries=frozenset(d["countries"]),
            keywords=frozenset(d["keywords"]),
            pub_year=d["pub_year"],
            pub_month=d.get("pub_month"),
            venue=d.get("venue", ""),
            citations=d.get("citations", 0),
        )


class Gazetteer:
    """Country lookup: canonical names plus alias mapping.

    Aliases cover official long forms and historical names, mapped to the
    modern name of the place (e.g. "west germany" resolves to "germany").
    """

    def __init__(self, canonical: Iterable[str], aliases: dict[str, str] | None = None):
        self.canonical = frozenset(canonicalize_label(c) for c in canonical)
        self.aliases = {
            canonicalize_label(k): canonicalize_label(v) for k, v in (aliases or {}).items()
        }
        unknown = set(self.aliases.values()) - self.canonical
        if unknown:
            raise ValueError(f"alias targets not in canonical set: {sorted(unknown)}")

    def lookup(self, segment: str) -> str | None:
        """Resolve a raw affiliation tail to a canonical country, or None."""
        name = canonicalize_label(segment).rstrip(".")
        if name in self.canonical:
            return name
        return self.aliases.get(name)


def default_gazetteer() -> Gazetteer:
    data = json.loads(resources.files("scimap").joinpath("countries.json").read_text("utf-8"))
    return Gazetteer(data["canonical"], data["aliases"])


@dataclass(frozen=True)
class CorpusSchema:
    """Maps schema roles to CSV column names (Scopus export defaults)."""

    authors: str = "Authors"
    keywords: str = "Author Keywords"
    year: str = "Year"
    affiliations: str = "Affiliations"
    title: str = "Title"
    citations: str = "Cited by"
    doi: str = "DOI"
    venue: str = "Source title"
    month: str | None = None
    keyword_delimiter: str = ";"
    author_delimiter: str = ";"
    affiliation_delimiter: str = ";"

    REQUIRED = ("authors", "keywords", "year", "affiliations")


@dataclass
class ParsedCorpus:
    """Sequence of parsed records plus parse bookkeeping.

    Behaves as a sequence of :class:`BibRecord`; rows skipped for lacking
    keywords and malformed rows are counted so callers can report them.
    """

    records: list[BibRecord] = field(default_factory=list)
    skipped_no_keywords: int = 0
    malformed_rows: list[tuple[int, str]] = field(default_factory=list)

    def __iter__(self) -> Iterator[BibRecord]:
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)

    def __getitem__(self, idx):
        return self.records[idx]


def _split_field(raw: str, delimiter: str) -> list[str]:
    return [part for part in (p.strip() for p in raw.split(delimiter)) if part]


def _parse_year(raw: str) -> int | None:
    raw = raw.strip()
    if not raw:
        return None
    try:
        year = int(float(raw))
    except ValueError:
        return None
    return year if 1900 <= year <= 2100 else None


def _parse_citations(raw: str) -> int:
    raw = raw.strip()
    if not raw:
        return 0
    try:
        return max(0, int(float(raw)))
    except ValueError:
        return 0


def derive_countries(affiliations: Iterable[str], gazetteer: Gazetteer) -> frozenset[str]:
    """Gazetteer lookup on the last comma-separated segment of each affiliation."""
    found = set()
    for affil in affiliations:
        if not affil.strip():
            continue
        tail = affil.rsplit(",", 1)[-1]
        country = gazetteer.lookup(tail)
        if country is None:
            logger.warning("unrecognized affiliation tail dropped: %r", tail.strip())
        else:
            found.add(country)
    return frozenset(found)


def _as_text_stream(csv_source: bytes | str | IO) -> IO[str]:
    if isinstance(csv_source, bytes):
        return io.StringIO(csv_source.decode("utf-8-sig"))
    if isinstance(csv_source, str):
        return io.StringIO(csv_source.lstrip("\ufeff"))
    if isinstance(csv_source, (io.RawIOBase, io.BufferedIOBase)):
        return io.TextIOWrapper(csv_source, encoding="utf-8-sig")
    if not hasattr(csv_source, "read"):
        raise TypeError(f"cannot read CSV from {type(csv_source)!r}")
    return csv_source  # already a text stream


def parse_corpus(
    csv_source: bytes | str | IO,
    schema: CorpusSchema = CorpusSchema(),
    gazetteer: Gazetteer | None = None,
    strict: bool = False,
) -> ParsedCorpus:
    """Parse a bibliographic CSV export into validated records.

    One record per data row with a non-empty keyword field; rows lacking
    keywords are counted and skipped. Rows with unbalanced quoting raise
    :class:`MalformedRow` in strict mode and are otherwise counted, logged
    with their row number, and skipped. Order-preserving and deterministic.
    """
    if gazetteer is None:
        gazetteer = default_gazetteer()
    stream = _as_text_stream(csv_source)
    reader = csv.reader(stream, strict=True)

    try:
        header = next(reader)
    except StopIteration:
        raise MissingColumn("header", "<empty file>")
    except csv.Error as exc:
        raise MalformedRow(1, str(exc))
    col_index = {name: i for i, name in enumerate(header)}

    for role in CorpusSchema.REQUIRED:
        column = getattr(schema, role)
        if column not in col_index:
            raise MissingColumn(role, column)

    def cell(row: list[str], column: str | None) -> str:
        if column is None:
            return ""
        idx = col_index.get(column)
        if idx is None or idx >= len(row):
            return ""
        return row[idx]

    result = ParsedCorpus()
    seen_ids: set[str] = set()
    row_number = 1  # header consumed
    while True:
        try:
            row = next(reader)
        except StopIteration:
            break
        except csv.Error as exc:
            row_number = reader.line_num
            if strict:
                raise MalformedRow(row_number, str(exc))
            logger.warning("skipping malformed row %d: %s", row_number, exc)
            result.malformed_rows.append((row_number, str(exc)))
            continue
        row_number = reader.line_num
        if not any(c.strip() for c in row):
            continue

        keywords = frozenset(
            kw
            for kw in (
                canonicalize_label(k)
                for k in _split_field(cell(row, schema.keywords), schema.keyword_delimiter)
            )
            if kw
        )
        if not keywords:
            result.skipped_no_keywords += 1
            continue

        affiliations = tuple(
            _split_field(cell(row, schema.affiliations), schema.affiliation_delimiter)
        )
        authors = tuple(_split_field(cell(row, schema.authors), schema.author_delimiter))
        doi = cell(row, schema.doi).strip()
        record_id = doi if doi and doi not in seen_ids else f"row{row_number}"
        seen_ids.add(record_id)

        month = _parse_month(cell(row, schema.month)) if schema.month else None
        result.records.append(
            BibRecord(
                id=record_id,
                title=cell(row, schema.title).strip(),
                authors=authors,
                affiliations=affiliations,
                countries=derive_countries(affiliations, gazetteer),
                keywords=keywords,
                pub_year=_parse_year(cell(row, schema.year)),
                pub_month=month,
                venue=cell(row, schema.venue).strip(),
                citations=_parse_citations(cell(row, schema.citations)),
            )
        )
    return result


def _parse_month(raw: str) -> int | None:
    raw = raw.strip()
    if not raw:
        return None
    try:
        month = int(raw)
    except ValueError:
        return None
    return month if 1 <= month <= 12 else None


def extract_units(record: BibRecord, kind: UnitKind) -> frozenset[str]:
    """Analysis units of one record; a unit occurs at most once per record."""
    if kind is UnitKind.KEYWORD:
        return record.keywords
    if kind is UnitKind.AUTHOR:
        return frozenset(
            name for name in (canonicalize_label(a) for a in record.authors) if name
        )
    if kind is UnitKind.COUNTRY:
        return record.countries
    raise ValueError(f"unknown unit kind: {kind!r}")


def write_ndjson(records: Iterable[BibRecord], stream: IO[str]) -> None:
    """Write the internal corpus cache: one JSON record per line."""
    for record in records:
        stream.write(json.dumps(record.to_json_dict(), ensure_ascii=False, sort_keys=True))
        stream.write("\n")


def read_ndjson(stream: IO[str]) -> list[BibRecord]:
    records = []
    for line in stream:
        line = line.strip()
        if line:
            records.append(BibRecord.from_json_dict(json.loads(line)))
    return records
