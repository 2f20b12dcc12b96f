"""Exception types raised by the simulator."""


class SomaSimError(Exception):
    """Base class for simulator errors."""


class InvalidNeuronId(SomaSimError, IndexError):
    pass


class NotGridAdjacent(SomaSimError, ValueError):
    pass


class EdgeNotAlive(SomaSimError, ValueError):
    pass


class NoActiveComponent(SomaSimError, ValueError):
    pass


class DimensionMismatch(SomaSimError, ValueError):
    pass


class OutOfBounds(SomaSimError, ValueError):
    pass


class ConfigError(SomaSimError):
    """Configuration validation failure.

    ``problems`` is a list of ``(field_path, message)`` pairs so callers can
    report every bad field at once rather than the first one only.
    """

    def __init__(self, problems):
        if isinstance(problems, tuple):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(f"{path}: {msg}" for path, msg in self.problems))
