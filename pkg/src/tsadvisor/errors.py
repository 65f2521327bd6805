"""Exception hierarchy shared by every module."""


class TsAdvisorError(Exception):
    """Base class for all domain errors raised by this package."""


class ParseError(TsAdvisorError):
    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class EmptyInput(TsAdvisorError):
    pass


class TooShort(TsAdvisorError):
    pass


class PeriodTooLarge(TsAdvisorError):
    pass


class NotPositiveDefinite(TsAdvisorError):
    pass


class DuplicateMeasurement(TsAdvisorError):
    pass


class NegativeMetric(TsAdvisorError):
    pass


class MissingProfile(TsAdvisorError):
    pass


class EmptyStore(TsAdvisorError):
    pass


class HistoryTooShort(TsAdvisorError):
    pass
