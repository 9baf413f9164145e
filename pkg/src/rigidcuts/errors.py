"""Exception hierarchy shared by all modules.

The CLI maps these to exit codes: ParameterError -> 2, DeskScaleError -> 3,
ContractError -> 1.
"""


class RigidCutsError(Exception):
    pass


class ParameterError(RigidCutsError, ValueError):
    """An argument is outside the documented domain."""


class DeskScaleError(RigidCutsError):
    """The instance is too large for exact computation."""


class ContractError(RigidCutsError):
    """A documented precondition or postcondition does not hold."""


class UnsupportedPatternError(ParameterError):
    """A pattern constant is undefined for the given pattern graph."""
