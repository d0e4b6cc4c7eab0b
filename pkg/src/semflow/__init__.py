"""semflow: characterize documents by the flow between their semantic fields.

Pipeline: ingest plain-text books, average word vectors into sentence
vectors, link sentences into a k-NN similarity network, detect communities
(semantic fields), model the sentence-order community transitions as a
Markov chain, count 2-/3-node chain motifs, and classify documents from the
motif features.
"""

from .classify import (
    CLASSIFIERS,
    CVReport,
    LabeledDataset,
    evaluate,
    run_cv,
    significance,
    stratified_folds,
    train_predict,
)
from .community import KERNEL, Partition, louvain, louvain_trace, modularity
from .corpus import (
    Document,
    Sentence,
    ingest_document,
    load_stopwords,
    read_manifest,
    segment_sentences,
    strip_boilerplate,
    tokenize_filter,
)
from .embed import (
    EmbeddingStore,
    SentenceVector,
    SyntheticStore,
    embed_document,
    load_store,
    sentence_vector,
    synthetic_store,
)
from .markov import (
    CommunitySequence,
    MarkovChain,
    build_markov,
    community_sequence,
    prune,
)
from .motifs import (
    CATALOG,
    SIMPLIFIED_UNWEIGHTED,
    SIMPLIFIED_WEIGHTED,
    STRATEGIES,
    UNWEIGHTED,
    FeatureVector,
    MotifClass,
    canonical_class,
    census,
)
from .simnet import SimilarityGraph, cosine, knn_graph, min_k_connected

__version__ = "0.1.0"
