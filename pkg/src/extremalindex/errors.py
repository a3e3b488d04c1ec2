"""Exception hierarchy shared by the estimators, oracles and experiment runner."""


class ExtremalIndexError(ValueError):
    """Base class for every error raised by this package."""


class InvalidSeries(ExtremalIndexError):
    pass


class InvalidDirection(ExtremalIndexError):
    pass


class InvalidRank(ExtremalIndexError):
    pass


class SchemeMismatch(ExtremalIndexError):
    pass


class LevelTooDeep(ExtremalIndexError):
    """Requested order statistic lies beyond the observations in use."""


class EstimatorError(ExtremalIndexError):
    """Degenerate block statistics; the offending level is kept for diagnostics."""

    def __init__(self, message, level=None):
        super().__init__(message)
        self.level = level


class AllBlocksExceed(EstimatorError):
    pass


class NoExceedances(EstimatorError):
    pass


class NoRoot(ExtremalIndexError):
    pass


class InvalidVariance(ExtremalIndexError):
    pass


class CellEmpty(ExtremalIndexError):
    pass
