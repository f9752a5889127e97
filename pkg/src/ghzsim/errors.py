"""Exception hierarchy shared by the whole package.

Every failure mode that callers are expected to handle derives from
SimulationError.  The CLI maps these onto process exit codes, so the split
between configuration problems, pulse-search failures and internal contract
violations is part of the public interface.
"""


class SimulationError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(SimulationError):
    """A run configuration is malformed or physically inconsistent."""


class UnphysicalNetworkError(ConfigError):
    """Capacitance values describe a network with no valid electrostatics.

    Raised when a required capacitance is non-positive or when the effective
    determinant of the network is not positive, which would make the inverse
    capacitance matrix ill-defined.
    """


class DegenerateControlError(ConfigError):
    """A control target cannot be met because the control matrix is singular."""


class InfeasiblePulseError(SimulationError):
    """No pulse satisfying the requested timing constraints exists in bounds."""


class ContractViolationError(SimulationError):
    """An internal invariant or documented precondition was violated."""


class GateChargeRangeWarning(UserWarning):
    """Solved gate charges fall outside the physical window [0, 1]."""
