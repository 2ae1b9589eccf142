"""HiTailor: transformation, recommendation and visualization of hierarchical tables."""

__version__ = "0.1.0"
