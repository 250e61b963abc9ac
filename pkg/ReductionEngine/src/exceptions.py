"""
Exception hierarchy for the reduction engine.

Argument problems derive from ``ValueError`` as well, so callers that only
know the builtin type still catch them.
"""

from typing import List, Optional


class ReductionEngineError(Exception):
    """Base class for every error raised by the engine."""


class DimensionMismatchError(ReductionEngineError, ValueError):
    """Vectors and matrices of an OuMv query disagree in dimension."""


class GraphUpdateError(ReductionEngineError, ValueError):
    """An edge update would break simplicity or address a missing edge."""


class InvalidMatchingError(ReductionEngineError, ValueError):
    """A matching is not involutive or uses a non-edge."""


class ExpansionCapError(ReductionEngineError):
    """Exhaustive expansion requested on a graph above the configured cap."""


class ExpanderGenerationError(ReductionEngineError):
    """No certified expander was found within the retry budget."""


class GadgetConstructionError(ReductionEngineError, ValueError):
    """A gadget cannot be built with the requested parameters."""


class PowerLawParameterError(ReductionEngineError, ValueError):
    """Power-law parameters outside the domain a construction supports."""


class HostTooSmallError(ReductionEngineError):
    """The power-law host cannot free the degree classes the reduction needs."""

    def __init__(self, message: str, required_nodes: int):
        super().__init__(f"{message} (grow the host to at least {required_nodes} nodes)")
        self.required_nodes = required_nodes


class AdapterError(ReductionEngineError):
    """A dynamic-algorithm adapter failed while applying updates or answering."""


class OracleMismatchError(ReductionEngineError):
    """A decoded bit disagrees with the brute-force OuMv oracle."""

    def __init__(self, message: str, instance_text: str = "",
                 update_prefix: Optional[List[str]] = None):
        super().__init__(message)
        self.instance_text = instance_text
        self.update_prefix = list(update_prefix or [])

    def repro(self) -> str:
        """Minimal reproduction: the instance followed by the update-log prefix."""
        lines = [self.instance_text.rstrip("\n"), "# updates"]
        lines.extend(self.update_prefix)
        return "\n".join(lines) + "\n"


class ConfigError(ReductionEngineError, ValueError):
    """Unknown key or unparsable value in a harness configuration."""
