"""Exact workbench for finite category theory: Kan extensions, presheaf
exponentials and dependent products, and finite certificates for adjunction
properties (Frobenius, semi-left-exactness, stable units, exponential ideals,
local connectedness)."""

__version__ = "0.1.0"
