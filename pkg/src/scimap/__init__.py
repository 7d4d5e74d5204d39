"""Co-word science mapping toolkit.

From bibliographic CSV exports to curated co-occurrence networks,
similarity-preserving 2-D layouts, cluster assignments, overlay scores,
and serialized interactive maps.
"""

from .clustering import ClusterAssignment, cluster, partition_quality
from .corpus import (
    BibRecord,
    CorpusSchema,
    Gazetteer,
    UnitKind,
    canonicalize_label,
    default_gazetteer,
    extract_units,
    parse_corpus,
    read_ndjson,
    write_ndjson,
)
from .layout import (
    Layout,
    LayoutConfig,
    canonical_transform,
    mean_pairwise_distance,
    optimize_layout,
    stress,
)
from .mapfile import ItemMap, ItemNode, load_map, read_map_file, save_map, write_json, write_map_file
from .network import (
    CooccurrenceNetwork,
    build_network,
    count_occurrences,
    largest_component,
)
from .overlay import (
    DensityField,
    OverlayScores,
    average_pub_date,
    compute_overlay_scores,
    density_field,
    emerging_filter,
)
from .pipeline import PipelineConfig, build_item_map, curation_round
from .similarity import SimilarityMatrix, association_strength
from .thesaurus import (
    Action,
    CleanupReport,
    RuleSet,
    ThesaurusRule,
    apply_thesaurus,
    parse_thesaurus,
)

__version__ = "0.1.0"
