"""Exception types shared across the toolkit."""


class ToolkitError(Exception):
    """Base class for all domain errors raised by symbench."""


class LexiconError(ToolkitError):
    """Lexicon file malformed or unusable."""


class ParseError(ToolkitError):
    """Rendered text does not conform to the expected grammar."""


class GenerationError(ToolkitError):
    """Scenario sampling failed (vocabulary too small, rejection bound hit, ...)."""


class ScoringError(ToolkitError):
    """Dataset/prediction files disagree or are malformed."""
