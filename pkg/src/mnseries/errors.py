"""Exception types shared across the package."""


class MNError(Exception):
    """Base class for every error raised by mnseries."""


class EmptySupport(MNError):
    pass


class ZeroHasNoSupport(MNError):
    pass


class GuaranteeTooCoarse(MNError):
    pass


class ZeroInversion(MNError, ZeroDivisionError):
    pass


class NotASubgroup(MNError):
    pass


class MalformedCertificate(MNError):
    pass


class DeepeningCapExceeded(MNError):
    """The Magnus comparator hit its degree cap on two distinct words.

    For distinct reduced words this cannot happen mathematically, so reaching
    it means either the cap is too small for the inputs or there is a bug.
    """


class ParseError(MNError):
    def __init__(self, message, text="", position=0):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.text = text
        self.position = position
