"""Analytics engine for coded student-LLM conversation corpora."""

from .model import (
    BloomLevel,
    CodeCategory,
    CodeDefinition,
    CodeSchema,
    Conversation,
    Corpus,
    EMPTY_CODE_ID,
    ExperienceLevel,
    FilterCriteria,
    Selection,
    Student,
    SUMMARY_CATEGORIES,
    Task,
    Turn,
)
from .corpus import (
    BackgroundDistributions,
    CorpusError,
    CorpusParseError,
    CorpusValidationError,
    apply_filter,
    background_distributions,
    load_corpus,
    load_corpus_path,
    serialize_corpus,
)
from .irr import IrrInputError, compute_irr, read_irr_csv
from .metrics import TokenDistribution, information_gain, relevance_fallback, tokenize
from .correlate import (
    CorrelationReport,
    DegenerateSeriesError,
    correlation_suite,
    kendall_tau_b,
    pearson,
    spearman,
)
from .patterns import (
    EmptySelectionError,
    MiningParams,
    Pattern,
    PatternCatalog,
    PatternKind,
    extract_sequences,
    extract_sets,
    match_pattern,
    mine_patterns,
    sort_patterns,
)
from .tree import (
    HighlightSet,
    InteractionTree,
    LeafTag,
    TreeEdge,
    TreeNode,
    build_tree,
    highlight_paths,
    prune_tree,
    serialize_tree,
)
from .summary import (
    GroupingMode,
    GroupSummary,
    MemberRow,
    UnknownGroupKeyError,
    group_members,
    member_rows,
    sort_members,
    summarize_group,
    summary_document,
)

# the fixture generator lives in convo_miner.fixture; it is not re-exported
# here so `python -m convo_miner.fixture` runs without a double-import warning

__version__ = "0.1.0"
