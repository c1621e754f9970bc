"""Computational idempotent-semiring algebra: presentations, spectra, polytopes and skeleta."""

__version__ = "0.1.0"
