"""Corpus pipeline and evaluation battery for low-resource machine translation."""

__version__ = "0.1.0"
