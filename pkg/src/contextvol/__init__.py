"""Context volatility of terms in time-stamped document collections.

Build per-time-slice matrices of statistically significant co-occurrences,
rank every term's co-occurrents per slice, and score how much those ranks
move over a back-looking window. The library also ships the comparison
metrics (relative frequency, tf-idf, topic salience) and a small CLI.
"""

from .cooccurrence import (
    ContingencyCounts,
    CoocConfig,
    SliceCoocMatrix,
    build_corpus_matrices,
    build_slice_matrix,
    count_slice_cooccurrences,
    dice_score,
    export_context_graph,
    llr_score,
    mi_score,
    poisson_score,
)
from .corpus import (
    DocTopicTable,
    Document,
    SlicedCorpus,
    TimeSlice,
    assign_time_slices,
    export_documents,
    filter_by_date_range,
    filter_by_topic_share,
    ingest_documents,
)
from .metrics import (
    FrequencySeries,
    TopicSalienceSeries,
    min_max_align,
    relative_frequency_series,
    series_correlation,
    tf_idf,
    topic_salience_series,
)
from .preprocess import (
    PruningConfig,
    Vocabulary,
    build_vocabulary,
    segment_and_tokenize,
    tokenize_corpus,
)
from .volatility import (
    RankMatrix,
    SliceRankIndex,
    VolatilityConfig,
    VolatilitySeries,
    build_rank_matrix,
    context_volatility,
    interquartile_range,
    slice_ranks,
    top_volatile_terms,
    volatility_series,
)

__version__ = "0.1.0"

__all__ = [
    "ContingencyCounts",
    "CoocConfig",
    "DocTopicTable",
    "Document",
    "FrequencySeries",
    "PruningConfig",
    "RankMatrix",
    "SliceCoocMatrix",
    "SliceRankIndex",
    "SlicedCorpus",
    "TimeSlice",
    "TopicSalienceSeries",
    "Vocabulary",
    "VolatilityConfig",
    "VolatilitySeries",
    "assign_time_slices",
    "build_corpus_matrices",
    "build_rank_matrix",
    "build_slice_matrix",
    "build_vocabulary",
    "context_volatility",
    "count_slice_cooccurrences",
    "dice_score",
    "export_context_graph",
    "export_documents",
    "filter_by_date_range",
    "filter_by_topic_share",
    "ingest_documents",
    "interquartile_range",
    "llr_score",
    "mi_score",
    "min_max_align",
    "poisson_score",
    "relative_frequency_series",
    "segment_and_tokenize",
    "series_correlation",
    "slice_ranks",
    "tf_idf",
    "tokenize_corpus",
    "top_volatile_terms",
    "topic_salience_series",
    "volatility_series",
]
