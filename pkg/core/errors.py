# core/errors.py
"""
Error hierarchy shared by the simulator modules
"""

from typing import Optional


class LZSError(Exception):
    """Base class for all simulator errors"""


class DegenerateGeometryError(LZSError, ValueError):
    """Two diabatic levels are parallel and never cross"""


class CrossingNotFoundError(LZSError, KeyError):
    """A crossing pair was requested that the qubit does not declare"""

    def __str__(self) -> str:
        # KeyError quotes its argument; keep the plain message
        return str(self.args[0]) if self.args else ""


class DomainError(LZSError, ValueError):
    """Argument outside the documented domain of an operation"""


class DegenerateSystemError(LZSError, ArithmeticError):
    """Rate equations without a unique stationary state"""


class StepSizeError(LZSError, ValueError):
    """Integration step violates the stability precondition"""


class ConvergenceError(LZSError, RuntimeError):
    """Integration did not reach the stationary state within its step budget"""


class ConfigError(LZSError, ValueError):
    """Invalid run configuration or application setting"""

    def __init__(self, message: str, key: Optional[str] = None,
                 line: Optional[int] = None):
        self.key = key
        self.line = line

        location = []
        if key is not None:
            location.append(f"key '{key}'")
        if line is not None:
            location.append(f"line {line}")

        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)
