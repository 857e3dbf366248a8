"""Exception hierarchy shared by all artfeat modules."""


class ArtfeatError(Exception):
    """Base class for every error raised by this package."""


# --- image feature errors -------------------------------------------------

class ImageTooSmallError(ArtfeatError):
    """Edge detection needs at least a 3x3 raster."""


class NoChromaticPixelsError(ArtfeatError):
    """Hue variance is undefined when every pixel is achromatic."""


class DomainError(ArtfeatError):
    """A value lies outside its mathematical domain (e.g. channel not in [0,1])."""


class ImageDecodeError(ArtfeatError):
    """An image file could not be decoded as PNG or JPEG."""


# --- regression errors ----------------------------------------------------

class SpecError(ArtfeatError):
    """A model specification is malformed (unknown term, duplicate, bad reference)."""


class NonPositiveValueError(ArtfeatError):
    """A log transform was asked for a value <= 0; names the record and field."""

    def __init__(self, record_id: str, field: str):
        self.record_id = record_id
        self.field = field
        super().__init__(f"record {record_id!r}: {field} must be > 0 for the log transform")


class CollinearColumnsError(ArtfeatError):
    """Design columns are exact linear combinations of earlier columns."""

    def __init__(self, columns, detail: str = ""):
        self.columns = tuple(columns)
        message = "collinear design columns: " + ", ".join(self.columns)
        if detail:
            message += f" ({detail})"
        super().__init__(message)


class RankDeficientError(ArtfeatError):
    """The design matrix is rank deficient; names the dependent column."""

    def __init__(self, column: str):
        self.column = column
        super().__init__(f"rank-deficient design: column {column!r} is linearly dependent")


# --- corpus errors ----------------------------------------------------------

class SchemaError(ArtfeatError):
    """A corpus file has a missing/unknown column or another file-level defect."""


class RowError(ArtfeatError):
    """A single malformed corpus row; carries the row index and field."""

    def __init__(self, row: int, field: str, message: str):
        self.row = row
        self.field = field
        super().__init__(f"row {row}: field {field!r}: {message}")


class UnknownVariableError(ArtfeatError):
    """A summary/regression variable name is not known to the corpus."""


class OutOfRangeError(ArtfeatError):
    """A year falls outside the classifier's covered range."""


class InvalidPlantSpecError(ArtfeatError):
    """A synthetic-corpus plant specification is malformed."""
