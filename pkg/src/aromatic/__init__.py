"""Aromatic trees, their operads and associated complexes, with exact arithmetic."""

__version__ = "0.1.0"
