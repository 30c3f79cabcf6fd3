"""Exception hierarchy shared by every module."""


class AttDelError(Exception):
    """Base class for all toolkit errors."""


class ParseError(AttDelError, ValueError):
    def __init__(self, message: str, pos: int | None = None):
        self.pos = pos
        where = f" at position {pos}" if pos is not None else ""
        super().__init__(f"{message}{where}")


class UnknownName(ParseError):
    pass


class NotAConjunction(AttDelError, ValueError):
    pass


class Contradictory(AttDelError, ValueError):
    pass


class NotPropositional(AttDelError, ValueError):
    pass


class NotApplicable(AttDelError):
    pass


class EmptyAnnouncement(AttDelError, ValueError):
    pass


class InconsistentDefaults(AttDelError, ValueError):
    pass


class PreconditionsNotDistinct(AttDelError, ValueError):
    pass


class NotSingleAgent(AttDelError, ValueError):
    pass


class FragmentViolation(AttDelError, ValueError):
    pass


class EnumerationCapExceeded(AttDelError):
    pass


class TooLarge(AttDelError, ValueError):
    pass


class MissingDefaults(AttDelError, ValueError):
    pass


class UnsupportedEventTerm(AttDelError, ValueError):
    pass
