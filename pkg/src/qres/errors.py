"""Exception hierarchy shared by all qres modules."""


class QresError(Exception):
    """Base class for all errors raised by qres."""


class ScopeError(QresError):
    """The input is well formed but outside what the engine handles.

    Typical causes are a blow-up center that is not rational, a
    non-isolated singularity, or a surface that is neither superisolated
    nor of Yomdin-Le type.  The CLI maps this to exit code 2.
    """


class VerificationError(QresError):
    """Two independent computations of the same invariant disagree.

    The CLI maps this to exit code 3.
    """
