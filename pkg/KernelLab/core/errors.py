"""Exception hierarchy shared by every KernelLab module."""

from typing import List, Optional, Tuple


class KernelLabError(Exception):
    """Base class for all errors raised by KernelLab."""


class FieldMismatchError(KernelLabError):
    """Two values from different scalar fields met in one computation."""


class NotAComplexError(KernelLabError):
    """A composite that must vanish does not (g·f ≠ 0, d² ≠ 0, non-chain maps)."""


class ObjectMismatchError(KernelLabError):
    """Sources and targets do not line up."""


class MissingStructureError(KernelLabError):
    """Monoidal, braiding or duality data was requested but is absent."""


class WindowError(KernelLabError):
    """A computation left its declared window (word length, degrees, dots)."""


class DotBudgetError(WindowError):
    """A composite carries more dots than the dot budget of the window."""


class LatticeLimitError(KernelLabError):
    """Sieve or topology enumeration grew beyond the configured limit."""


class SignConventionError(KernelLabError):
    """Internal: a differential assembled from sign rules does not square to zero."""


class CategoryFileError(KernelLabError):
    """Parse or validation errors in a category description file."""

    def __init__(self, errors: List[Tuple[Optional[int], str]], path: Optional[str] = None):
        self.errors = list(errors)
        self.path = path
        super().__init__(self._format())

    def _format(self) -> str:
        where = f"{self.path}: " if self.path else ""
        lines = []
        for line_no, message in self.errors:
            if line_no is None:
                lines.append(f"{where}{message}")
            else:
                lines.append(f"{where}line {line_no}: {message}")
        return "\n".join(lines) if lines else f"{where}invalid category file"


class FactorizationError(KernelLabError):
    """A morphism that must factor through another one does not."""
