"""Exception types shared across the package."""


class CapExceeded(RuntimeError):
    """A configured resource cap (oracle n, decomposition terms, tuple count,
    dense-table variables) would be exceeded."""


class InvariantViolation(RuntimeError):
    """An internal consistency check failed; indicates a bug or an input that
    violated a caller-checked precondition."""
