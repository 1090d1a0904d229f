"""Semantic relatedness between thesaurus senses, words, and texts.

The measure scores a sense pair by the best connecting path in a typed,
weighted thesaurus graph (product of edge weights, scaled by sense
depths), lifts that to word pairs through the lexicon, and to text
pairs through TF-IDF-weighted best matching.  Includes an evaluation
harness for word-similarity, synonym-choice, word-analogy, sentence
similarity and paraphrase tasks, plus a binary store of precomputed
pair values.
"""

from .thesaurus import (
    ADJECTIVE,
    ADVERB,
    DEFAULT_CATEGORY_WEIGHTS,
    DepthTable,
    EDGE_TYPES,
    INVERSE_TYPE,
    NOUN,
    SenseId,
    ThesaurusError,
    ThesaurusGraph,
    VERB,
    WeightConfig,
    build_graph,
    compute_depths,
    load_thesaurus,
    senses_of,
)
from .pathfinder import (
    ICTable,
    SemanticPath,
    SenseRelatedness,
    baseline_similarity,
    brute_force_relatedness,
    compactness,
    load_ic_table,
    max_relatedness,
    path_elaboration,
    relatedness_to_targets,
)
from .termrel import CacheMismatchError, TermPairScore, term_relatedness
from .textrel import (
    CorpusStats,
    TextPairScore,
    TokenizedText,
    best_match,
    build_corpus_stats,
    default_stopwords,
    harmonic_mean,
    lexical_relevance,
    load_df_table,
    load_stopwords,
    preprocess,
    text_relatedness,
    tf_idf,
    zeta,
)
from .tasks import (
    ChoiceQuestion,
    EvalReport,
    analogy_answer,
    analogy_scores,
    classification_metrics,
    evaluate_analogy,
    evaluate_paraphrase,
    evaluate_sentence_similarity,
    evaluate_synonym_choice,
    evaluate_word_similarity,
    fisher_z_test,
    paraphrase_decide,
    rank_correlations,
    synonym_choice,
    tune_threshold,
    tune_threshold_from_scores,
)
from .store import CacheReport, PairCache, StoreError, precompute, verify_cache

__version__ = "0.1.0"
