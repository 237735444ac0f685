"""Exception types raised across the package."""


class BibnovError(Exception):
    """Base class for all package errors."""


class MissingField(BibnovError):
    def __init__(self, field: str):
        super().__init__(f"missing required field: {field}")
        self.field = field


class MalformedYear(BibnovError):
    pass


class MalformedRecord(BibnovError):
    pass


class EmptyRecord(BibnovError):
    """Record has neither references nor keywords; skipped, never fatal."""


class IoFailure(BibnovError):
    pass


class NoValidRecords(BibnovError):
    pass


class NoDocuments(BibnovError):
    pass


class EmptyGraph(BibnovError):
    pass


class WindowOutOfRange(BibnovError):
    pass


class DimensionMismatch(BibnovError):
    pass


class DuplicateId(BibnovError):
    pass


class InsufficientReferences(BibnovError):
    """Fewer than two references resolve to embedding vectors; scoring skips the document."""


class UnknownDocument(BibnovError):
    pass


class CorpusTooLarge(BibnovError):
    pass


class NoScores(BibnovError):
    pass


class NoOverlap(BibnovError):
    pass


class InvalidParams(BibnovError):
    pass
