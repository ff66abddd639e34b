"""An interpreter for a functional language with first-class effect
instances, deep handlers, multi-shot continuations and resources."""

from .errors import EffError
from .session import Session, run_string

__version__ = "0.1.0"

__all__ = ["EffError", "Session", "run_string", "__version__"]
