"""Small cancellation presentations and explicit left-orders on free groups."""

__version__ = "0.1.0"
