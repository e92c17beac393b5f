"""Quantum discord and weak-measurement super discord for two-qubit X-states."""
from superdiscord._backend import BACKEND
from superdiscord.states import XStateParams

__version__ = "0.1.0"

__all__ = ["BACKEND", "XStateParams", "__version__"]
