"""Exception and warning types shared across the pipeline."""


class PipelineError(Exception):
    """Base class for every error raised by this package."""


# --- ingestion ---------------------------------------------------------------

class MissingFile(PipelineError):
    def __init__(self, path):
        super().__init__(f"input file not found: {path}")
        self.path = str(path)


class MissingLabelColumn(PipelineError):
    def __init__(self, column, header):
        super().__init__(f"label column {column!r} not in header {header}")
        self.column = column


class NonNumericCell(PipelineError):
    def __init__(self, row, column, text):
        super().__init__(f"non-numeric value {text!r} at row {row}, column {column!r}")
        self.row = row
        self.column = column
        self.text = text


class RaggedRow(PipelineError):
    def __init__(self, row, expected, got):
        super().__init__(f"row {row} has {got} fields, expected {expected}")
        self.row = row


# --- preprocessing / stats ----------------------------------------------------

class ColumnCountMismatch(PipelineError):
    def __init__(self, expected, got):
        super().__init__(f"expected {expected} columns, got {got}")


class TooFewRows(PipelineError):
    def __init__(self, needed, got):
        super().__init__(f"need at least {needed} rows, got {got}")


class DegenerateColumnWarning(UserWarning):
    """A column has zero spread; it is kept but excluded from the check."""


# --- numeric kernels ----------------------------------------------------------

class NotSymmetric(PipelineError):
    def __init__(self, deviation):
        super().__init__(f"matrix is not symmetric (relative deviation {deviation:.3e})")


class NoConvergence(PipelineError):
    def __init__(self, sweeps):
        super().__init__(f"eigensolver did not converge after {sweeps} sweeps")
        self.sweeps = sweeps


class RankDeficient(PipelineError):
    def __init__(self, requested, available):
        super().__init__(
            f"requested {requested} components but only {available} survive rank reduction"
        )


class BadComponentCount(PipelineError):
    def __init__(self, m, d):
        super().__init__(f"component count {m} outside valid range 1..{d}")


# --- classifiers ---------------------------------------------------------------

class SingleClassTraining(PipelineError):
    def __init__(self):
        super().__init__("training data contains fewer than 2 classes")


class DimensionMismatch(PipelineError):
    def __init__(self, expected, got):
        super().__init__(f"input has {got} columns, model expects {expected}")


class NonFiniteInput(PipelineError):
    def __init__(self, where=""):
        super().__init__(f"non-finite values in input{' (' + where + ')' if where else ''}")


# --- evaluation ------------------------------------------------------------------

class ClassTooSmall(PipelineError):
    def __init__(self, class_index, size, needed):
        super().__init__(
            f"class {class_index} has {size} instances, need at least {needed}"
        )
        self.class_index = class_index


class BadK(PipelineError):
    def __init__(self, k):
        super().__init__(f"fold count must be >= 2, got {k}")


class LengthMismatch(PipelineError):
    def __init__(self, n_true, n_pred):
        super().__init__(f"y_true has {n_true} entries, y_pred has {n_pred}")


class GridCellError(PipelineError):
    """Wraps a failure inside the evaluation grid with its (form, model) context."""

    def __init__(self, form, model, cause):
        super().__init__(f"grid cell ({form}, {model}) failed: {cause}")
        self.form = form
        self.model = model
        self.cause = cause


# --- serialization -----------------------------------------------------------------

class BadEnvelope(PipelineError):
    def __init__(self, reason):
        super().__init__(f"cannot load serialized object: {reason}")
