"""Command-line driver.

Subcommands: ingest (CSV -> corpus cache), clean (apply a thesaurus),
map (build and save a map bundle), export (derived artifacts from a
bundle), serve (local curation service). Usage errors exit 2; data
errors exit 1 with a one-line "error: <Type>: <message>" on stderr.
Identical invocations produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .corpus import CorpusSchema, UnitKind, parse_corpus, read_ndjson, write_ndjson
from .errors import ScimapError
from .layout import write_iteration_log
from .mapfile import load_map, save_map
from .overlay import density_field, emerging_filter, write_pgm
from .pipeline import PipelineConfig, build_item_map
from .thesaurus import apply_thesaurus, parse_thesaurus

UNIT_NAMES = {
    "keywords": UnitKind.KEYWORD,
    "authors": UnitKind.AUTHOR,
    "countries": UnitKind.COUNTRY,
}
BASENAME_PREFIX = {
    UnitKind.KEYWORD: "topics",
    UnitKind.AUTHOR: "authors",
    UnitKind.COUNTRY: "country",
}


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _nonneg_float(text: str) -> float:
    value = float(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scimap", description="Co-word science mapping toolkit"
    )
    parser.add_argument("--version", action="version", version=f"scimap {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="parse a bibliographic CSV into a corpus cache")
    p_ingest.add_argument("csv", type=Path, help="CSV export file")
    p_ingest.add_argument("--out", type=Path, required=True, help="corpus cache (NDJSON)")
    p_ingest.add_argument("--strict", action="store_true", help="fail on malformed rows")
    for role in ("authors", "keywords", "year", "affiliations", "title",
                 "citations", "doi", "venue", "month"):
        p_ingest.add_argument(f"--col-{role}", dest=f"col_{role}", default=None,
                              help=f"CSV column for the {role} role")
    p_ingest.set_defaults(func=cmd_ingest)

    p_clean = sub.add_parser("clean", help="apply thesaurus rules to a corpus cache")
    p_clean.add_argument("--corpus", type=Path, required=True)
    p_clean.add_argument("--thesaurus", type=Path, required=True)
    p_clean.add_argument("--out", type=Path, required=True)
    p_clean.set_defaults(func=cmd_clean)

    p_map = sub.add_parser("map", help="build a map bundle from a corpus cache")
    _add_pipeline_flags(p_map)
    p_map.add_argument("--corpus", type=Path, required=True)
    p_map.add_argument("--thesaurus", type=Path, default=None)
    p_map.add_argument("--out-dir", type=Path, required=True)
    p_map.add_argument("--basename", default=None,
                       help="bundle basename (default: <unit prefix><threshold>)")
    p_map.add_argument("--iteration-log", type=Path, default=None,
                       help="write the layout descent audit CSV here")
    p_map.set_defaults(func=cmd_map)

    p_export = sub.add_parser("export", help="derive reports from a saved map bundle")
    p_export.add_argument("--map-dir", type=Path, required=True)
    p_export.add_argument("--basename", required=True)
    p_export.add_argument("--emerging", type=Path, default=None,
                          help="write labels with score above --cutoff here")
    p_export.add_argument("--cutoff", type=float, default=None,
                          help="fractional-year cutoff for the emerging report")
    p_export.add_argument("--density", type=Path, default=None,
                          help="write the density field here")
    p_export.add_argument("--density-format", choices=("pgm", "json"), default="pgm")
    p_export.add_argument("--grid-resolution", type=_positive_int, default=128)
    p_export.add_argument("--bandwidth", type=float, default=None)
    p_export.set_defaults(func=cmd_export)

    p_serve = sub.add_parser("serve", help="serve the map and curation endpoints")
    _add_pipeline_flags(p_serve)
    p_serve.add_argument("--data-dir", type=Path, default=None,
                         help="directory with corpus.ndjson (default: $SCIMAP_DATA_DIR)")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8765)
    p_serve.add_argument("--frontend", type=Path, default=None,
                         help="directory of static viewer files to serve at /")
    p_serve.set_defaults(func=cmd_serve)

    return parser


def _add_pipeline_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--unit", choices=sorted(UNIT_NAMES), default="keywords")
    parser.add_argument("--min-occurrences", type=_positive_int, default=20)
    parser.add_argument("--resolution", type=_nonneg_float, default=1.0)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--restarts", type=_positive_int, default=10)


def _pipeline_config(args) -> PipelineConfig:
    return PipelineConfig(
        unit=UNIT_NAMES[args.unit],
        min_occurrences=args.min_occurrences,
        resolution=args.resolution,
        seed=args.seed,
        restarts=args.restarts,
    )


def cmd_ingest(args) -> int:
    overrides = {}
    for role, attr in (
        ("authors", "col_authors"), ("keywords", "col_keywords"), ("year", "col_year"),
        ("affiliations", "col_affiliations"), ("title", "col_title"),
        ("citations", "col_citations"), ("doi", "col_doi"), ("venue", "col_venue"),
        ("month", "col_month"),
    ):
        value = getattr(args, attr)
        if value is not None:
            overrides[role] = value
    schema = CorpusSchema(**overrides) if overrides else CorpusSchema()

    with open(args.csv, "rb") as fh:
        parsed = parse_corpus(fh, schema=schema, strict=args.strict)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        write_ndjson(parsed.records, fh)
    print(
        f"parsed {len(parsed.records)} records "
        f"(skipped {parsed.skipped_no_keywords} without keywords, "
        f"{len(parsed.malformed_rows)} malformed)"
    )
    return 0


def cmd_clean(args) -> int:
    with open(args.corpus, encoding="utf-8") as fh:
        records = read_ndjson(fh)
    with open(args.thesaurus, "rb") as fh:
        rules = parse_thesaurus(fh.read())
    curated, report = apply_thesaurus(records, rules)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        write_ndjson(curated, fh)
    print(
        f"kept {len(curated)} of {len(records)} records "
        f"(merged {report.merged_labels} labels, removed {report.removed_terms} terms, "
        f"dropped {report.removed_records} records)"
    )
    return 0


def cmd_map(args) -> int:
    with open(args.corpus, encoding="utf-8") as fh:
        records = read_ndjson(fh)
    if args.thesaurus is not None:
        with open(args.thesaurus, "rb") as fh:
            rules = parse_thesaurus(fh.read())
        records, _ = apply_thesaurus(records, rules)

    config = _pipeline_config(args)
    item_map = build_item_map(records, config)
    basename = args.basename or f"{BASENAME_PREFIX[config.unit]}{config.min_occurrences}"
    paths = save_map(item_map, args.out_dir, basename)

    if args.iteration_log is not None:
        # Re-run the layout stage alone to capture the descent trace.
        from .network import build_network, largest_component
        from .similarity import association_strength
        from .layout import optimize_layout

        net, _ = largest_component(build_network(records, config.unit, config.min_occurrences))
        if net.n >= 2:
            layout = optimize_layout(association_strength(net), config.layout_config())
            with open(args.iteration_log, "w", encoding="utf-8", newline="\n") as fh:
                write_iteration_log(layout, fh)

    for path in paths:
        print(f"wrote {path}")
    return 0


def cmd_export(args) -> int:
    item_map = load_map(args.map_dir, args.basename)
    wrote_something = False

    if args.emerging is not None:
        if args.cutoff is None:
            print("error: UsageError: --emerging requires --cutoff", file=sys.stderr)
            return 2
        scores = {n.label: n.score for n in item_map.nodes}
        selected = emerging_filter(scores, args.cutoff)
        rows = sorted(
            ((scores[label], label) for label in selected),
            key=lambda pair: (-pair[0], pair[1]),
        )
        with open(args.emerging, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("label\tscore\n")
            for score, label in rows:
                fh.write(f"{label}\t{score!r}\n")
        print(f"wrote {args.emerging} ({len(rows)} labels above {args.cutoff})")
        wrote_something = True

    if args.density is not None:
        positions = [(n.x, n.y) for n in item_map.nodes]
        weights = [n.occurrences for n in item_map.nodes]
        field = density_field(
            positions, weights,
            grid_resolution=args.grid_resolution, bandwidth=args.bandwidth,
        )
        with open(args.density, "w", encoding="utf-8", newline="\n") as fh:
            if args.density_format == "pgm":
                write_pgm(field, fh)
            else:
                from .mapfile import _emit

                fh.write(_emit({
                    "bounds": list(field.bounds),
                    "bandwidth": field.bandwidth,
                    "grid": [list(map(float, row)) for row in field.grid],
                }))
                fh.write("\n")
        print(f"wrote {args.density}")
        wrote_something = True

    if not wrote_something:
        print("error: UsageError: nothing to export (use --emerging or --density)",
              file=sys.stderr)
        return 2
    return 0


def cmd_serve(args) -> int:
    import os

    from .server import MapService, run_server

    data_dir = args.data_dir or os.environ.get("SCIMAP_DATA_DIR")
    if data_dir is None:
        print("error: UsageError: --data-dir or SCIMAP_DATA_DIR is required", file=sys.stderr)
        return 2
    service = MapService(Path(data_dir), _pipeline_config(args))
    run_server(service, host=args.host, port=args.port, frontend_dir=args.frontend)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except ScimapError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: FileNotFound: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
