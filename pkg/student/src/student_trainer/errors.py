"""Exception hierarchy for the student trainer."""


class StudentError(Exception):
    """Base class for all errors raised by this package."""


class ManifestError(StudentError):
    """A training manifest is unreadable or violates its constraints."""


class DataError(StudentError):
    """A silver, labels or corpus file is malformed or inconsistent."""
