"""Exception hierarchy.

Input faults (bad tables, bad descriptors, mismatched shapes) derive from
:class:`InputError`; theorem or consistency violations derive from
:class:`VerificationError`.  The CLI maps the former to exit code 2 and the
latter to exit code 1.
"""


class CayleyParityError(Exception):
    pass


class InputError(CayleyParityError):
    pass


class VerificationError(CayleyParityError):
    pass


class NotAGroup(InputError):
    def __init__(self, reason):
        super().__init__(reason)
        self.reason = reason


class BadAction(InputError):
    pass


class Overflow(InputError):
    pass


class BadDescriptor(InputError):
    pass


class NotInverseCompatible(InputError):
    pass


class NotSubscheme(InputError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class IdentityInConnectionSet(InputError):
    pass


class InapplicableOrder(InputError):
    pass


class CapExceeded(InputError):
    pass


class NonIntegralScheme(CayleyParityError):
    pass


class Singular(CayleyParityError):
    pass


class SplitFailure(CayleyParityError):
    pass


class NonSimpleSpectrum(VerificationError):
    pass


class LiftFailure(VerificationError):
    pass


class FrameQuotientMismatch(VerificationError):
    pass


class NotInteger(VerificationError):
    pass


class NotOdd(VerificationError):
    pass


class NotEquitable(VerificationError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class TheoremViolation(VerificationError):
    def __init__(self, msg, payload=None):
        super().__init__(msg)
        self.payload = payload


class SpectrumMismatch(VerificationError):
    pass
