"""Geography-aware clustering and grouping of mobile nodes for federated learning."""

__version__ = "0.1.0"
