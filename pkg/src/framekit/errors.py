"""Exception hierarchy shared by all framekit modules."""


class FramekitError(Exception):
    """Base class for every error raised by framekit."""


class DimensionMismatch(FramekitError, ValueError):
    pass


class NoInclusion(FramekitError):
    """Range inclusion fails, so no factorization or majorization constant exists."""


class NotSelfAdjoint(FramekitError, ValueError):
    pass


class NotKFrame(FramekitError):
    pass


class ZeroK(FramekitError):
    """The operator is zero; the lower K-frame bound is unconstrained."""


class NotAFrame(FramekitError):
    pass


class NotMFrame(NotKFrame):
    pass


class CharacterizationMismatch(FramekitError):
    """The semidefinite and range-inclusion tests disagree (numerical breakdown)."""


class PreconditionError(FramekitError):
    pass


class PropositionViolation(FramekitError):
    """A consequence that the theory guarantees did not hold on this input."""


class UnknownProperty(FramekitError, KeyError):
    pass


class InvalidSpec(FramekitError, ValueError):
    pass
