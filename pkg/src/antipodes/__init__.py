"""Exact tools for higher-rank antipodal point sets.

Decide and certify antipodality with rational LP, build larger sets from
perfect hash codes, and measure everything against the exact size,
volume, and growth-rate bounds.  All arithmetic is exact; no floats
enter any verdict.
"""

__version__ = "0.1.0"
