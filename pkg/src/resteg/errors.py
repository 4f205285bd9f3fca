"""Exception hierarchy for the resteg package.

Every error raised by the library derives from RestegError so callers can
catch one base class at the CLI boundary.
"""


class RestegError(Exception):
    pass


# --- file format errors -----------------------------------------------------

class MalformedHeader(RestegError):
    pass


class MaxvalUnsupported(RestegError):
    pass


class TruncatedData(RestegError):
    pass


class BadMagic(RestegError):
    pass


class BadDims(RestegError):
    pass


class NonFiniteValue(RestegError):
    pass


# --- geometry / plumbing errors ---------------------------------------------

class ImageTooSmall(RestegError):
    pass


class CountMismatch(RestegError):
    pass


class DimMismatch(RestegError):
    pass


class WrongKind(RestegError):
    pass


class LengthMismatch(RestegError):
    pass


# --- codec errors -------------------------------------------------------------

class RegisterLengthMismatch(RestegError):
    pass


class PayloadTooLarge(RestegError):
    pass


class CapacityExceeded(RestegError):
    pass


class ConfigError(RestegError):
    pass


class FrameUnderflow(RestegError):
    """Route exhausted before the framed payload was fully recovered.

    Signals a corrupted stego image or a configuration mismatch between the
    embedding and extraction endpoints.
    """


# --- metric errors -------------------------------------------------------------

class NoPositives(RestegError):
    pass


class DegenerateTruth(RestegError):
    pass


class TooFewSamples(RestegError):
    pass


class EmptyInput(RestegError):
    pass
