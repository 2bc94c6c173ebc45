"""Exception hierarchy shared across the engine."""


class TutorError(Exception):
    """Base class for all engine errors."""


class UnknownMonadError(TutorError):
    pass


class UnknownReferenceError(TutorError):
    pass


class InvertedRangeError(TutorError):
    pass


class UnmappedTenseError(TutorError):
    """An opener or tense has no digit in the active clause-code table."""


class EmptyScopeError(TutorError):
    """An exercise scope matches nothing after filters."""


class ShapeMismatchError(TutorError):
    """A submission's shape does not match the question kind."""


class EmptySessionError(TutorError):
    pass


class NoAnswersError(TutorError):
    pass


class SchemaVersionError(TutorError):
    pass


class LogWriteError(TutorError):
    pass


class UnknownSessionError(TutorError):
    pass


class OutOfOrderError(TutorError):
    """A submission targets a question that is not the session cursor."""


class AuthError(TutorError):
    pass
