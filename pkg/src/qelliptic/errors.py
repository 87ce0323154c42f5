"""Exception types shared across the package."""


class QellipticError(Exception):
    """Base class for package errors."""


class ValidationError(QellipticError):
    """Invalid input data: malformed tables, cochains, specs, or arguments."""


class InternalDefectError(QellipticError):
    """A structural guarantee failed; indicates a defect, not bad input."""
