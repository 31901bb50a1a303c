"""Certified computations around simplicial volume, scl and computable reals.

Subpackages and modules:

- :mod:`simvol.exact` -- rationals and dyadic-interval enclosures
- :mod:`simvol.urm` -- register machines and enumeration of r.e. sets
- :mod:`simvol.computable` -- one-sided computable reals as bound streams
- :mod:`simvol.scl` -- rotation numbers, scl and the alpha_n sequence
- :mod:`simvol.fields` -- multiquadratic fields and relation searches
- :mod:`simvol.l1` -- simplicial complexes, homology and l1-norm certificates
"""
from __future__ import annotations

__version__ = "0.1.0"
