class InvariantViolation(RuntimeError):
    """Raised when an algorithm detects that one of its own guarantees broke.

    This is distinct from ValueError (bad caller input): seeing this exception
    means either a buggy component was plugged in (e.g. a non-compliant
    black-box carving) or there is a bug in this library.
    """
