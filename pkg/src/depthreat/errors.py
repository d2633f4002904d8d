"""Exception types raised across the package."""


class DepthreatError(Exception):
    """Base class for all errors raised by this package."""


class MalformedVersionError(DepthreatError):
    """A version string does not follow strict semver syntax."""


class RangeParseError(DepthreatError):
    """Base for errors raised while parsing a range expression."""


class MalformedRangeError(RangeParseError):
    """A range expression is syntactically invalid."""


class UnsupportedSpecifierError(RangeParseError):
    """A dependency specifier is not a semver range (git URL, tarball,
    dist-tag, ...). Kept distinct so callers can count and exclude these."""


class FormatError(DepthreatError):
    """An input file does not match its documented schema.

    Carries optional line/column context from the underlying JSON decoder.
    """

    def __init__(self, message, *, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class DuplicateReleaseError(FormatError):
    """The same (package, version) pair appears twice in a registry dump."""


class DuplicateAdvisoryIdError(FormatError):
    """Two advisories share an id."""


class UnknownPackageError(DepthreatError):
    """A package name is absent from the release index."""


class NetworkError(DepthreatError):
    """The registry endpoint could not be reached."""


class PackumentNotFoundError(DepthreatError):
    """The registry endpoint returned 404 for a package."""


class MetadataParseError(DepthreatError):
    """A packument is missing required structure."""


class ManifestParseError(DepthreatError):
    """A manifest file is not JSON or has the wrong shape."""


class NotARepositoryError(DepthreatError):
    """The path given for history extraction is not a git repository."""


class NoManifestHistoryError(DepthreatError):
    """No commit in the repository ever touched the manifest."""


class NoSnapshotBeforeError(DepthreatError):
    """The requested instant precedes the first manifest snapshot."""


class DegenerateLifespanError(DepthreatError):
    """Lifespan segmentation requires first < last."""


class EmptySampleError(DepthreatError):
    """A statistical test received an empty sample."""
