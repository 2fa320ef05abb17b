"""Exception hierarchy.

``UserError`` subclasses are caused by bad input (exit code 1 on the CLI);
``InconsistencyError`` signals that an internal mathematical check failed
(exit code 2).
"""


class CellkitError(Exception):
    pass


class UserError(CellkitError):
    pass


class RankError(UserError, ValueError):
    pass


class WordError(UserError, ValueError):
    pass


class RankMismatchError(UserError, ValueError):
    pass


class BasisMismatchError(UserError, ValueError):
    pass


class KLCacheError(UserError):
    """Base for KL cache load failures."""


class KLCacheParseError(KLCacheError):
    pass


class KLCacheRankError(KLCacheError, RankMismatchError):
    pass


class KLCacheInvariantError(KLCacheError):
    pass


class SeedFormatError(UserError):
    pass


class InconsistencyError(CellkitError):
    pass


class ConflictError(InconsistencyError):
    """Positive and negative statuses derived for the same left cell."""

    def __init__(self, message, first=None, second=None):
        super().__init__(message)
        self.first = first
        self.second = second
