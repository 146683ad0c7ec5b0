"""Unsupervised metaphor interpretation via WordNet-constrained masked-LM scoring."""

from .morph import (
    ExceptionTable,
    InflectionTag,
    bundled_exception_table,
    expand_forms,
    inflect,
    lemmatize_verb,
    load_exception_table,
    match_inflection,
)
from .paraphrase import (
    Candidate,
    CandidateSet,
    NoCandidatesError,
    ParaphraseFailure,
    ParaphraseResult,
    TargetVerb,
    build_candidate_set,
    make_target,
    paraphrase_all,
    select_paraphrase,
)
from .scoring import (
    BackendKind,
    BackendUnavailableError,
    CandidatePieces,
    EmptyInputError,
    PieceCountMismatchError,
    ScoredCandidate,
    Scorer,
    ScorerBackend,
    make_scorer,
    rank,
)
from .wordnet import (
    CandidateLemma,
    DanglingHypernymError,
    KnowledgeBase,
    MalformedLineError,
    MissingFileError,
    Origin,
    Synset,
    UnknownLemmaError,
    load_wordnet,
)
from .wordpiece import (
    MaskedContext,
    SequenceTooLongError,
    SpanOutOfBoundsError,
    Vocab,
    basic_tokenize,
    build_masked_context,
    load_vocab,
    tokenize,
)

__version__ = "0.1.0"
