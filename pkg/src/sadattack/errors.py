"""Exception hierarchy shared across the package."""


class SadError(Exception):
    """Base class for every error raised by sadattack."""


class GlyphTableError(SadError):
    """A glyph table failed its construction-time consistency checks."""


class InvalidPlan(SadError):
    """A substitution plan cannot be applied to the sentence it targets."""


class EmptyOriginal(SadError):
    """Fragmentation ratio requested against an empty original tokenization."""


class EmptyReference(SadError):
    """BLEU or chrF requested against an empty reference."""


class ZeroBaseline(SadError):
    """The original translation scores zero, so a relative drop is undefined."""


class MissingReference(SadError):
    """A translation success check needs a reference and none is allowed."""


class TargetUnavailable(SadError):
    """The target model could not be reached after all retries."""


class MalformedResponse(SadError):
    """The target answered, but the expected field was not in the response."""
