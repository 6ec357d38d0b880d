"""Exact-arithmetic workbench for a rank-one quantum affine algebra:
finite-dimensional modules, induced-module truncations, Sugawara
operators, spectral-parameter braidings, coinvariant spaces, and
q-difference equations."""

__version__ = "0.1.0"
