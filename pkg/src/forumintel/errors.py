"""Exception types raised across the pipeline."""


class ForumIntelError(Exception):
    """Base class for all pipeline errors."""


# -- ingestion ------------------------------------------------------------

class MalformedRecord(ForumIntelError):
    """A raw dump record could not be parsed."""


class MissingAttribute(MalformedRecord):
    """A raw record lacks a required attribute (title or main text)."""


class UnparseableDate(ForumIntelError):
    """No accepted date format matches the created-at value."""


class IoFailure(ForumIntelError):
    """A dump or artifact file could not be read or written."""


class EmptyCorpus(ForumIntelError):
    """An operation received a corpus with zero usable posts."""


# -- labeling -------------------------------------------------------------

class EmptyDataset(ForumIntelError):
    """No post passed the labeling rule."""


class UnknownPostId(ForumIntelError):
    """A label decision references a post id absent from the corpus."""


class IncompleteReview(ForumIntelError):
    """Strict labeling requires decisions for every queued post."""


# -- vectorization / training ----------------------------------------------

class EmptyVocabulary(ForumIntelError):
    """Vocabulary construction produced no terms."""


class InsufficientCorpus(ForumIntelError):
    """Embedding training needs a non-empty token stream."""


class SingleClassInput(ForumIntelError):
    """Supervised training requires both classes to be present."""


class DimensionMismatch(ForumIntelError):
    """Feature width does not match what the model was trained on."""


class DegenerateSplit(ForumIntelError):
    """A train/test split would leave one side empty."""


class VocabularyMismatch(ForumIntelError):
    """A model artifact was built against a different vocabulary."""


# -- topics ----------------------------------------------------------------

class DegenerateK(ForumIntelError):
    """More topics requested than tokens available."""


class MismatchedN(ForumIntelError):
    """Topic summaries use different top-N sizes and cannot be compared."""


# -- evaluation -------------------------------------------------------------

class EmptyInput(ForumIntelError):
    """An aggregate was requested over zero samples."""


class LengthMismatch(ForumIntelError):
    """Prediction and truth sequences have different lengths."""


# -- serving ----------------------------------------------------------------

class PortBusy(ForumIntelError):
    """The requested listen port is already in use."""


class CorpusMissing(ForumIntelError):
    """The review service needs an annotated corpus that is not present."""


class ConfigError(ForumIntelError):
    """A run configuration value is invalid or a referenced file is missing."""


class StageMismatch(ForumIntelError):
    """An artifact was produced by a run with a different configuration."""
