"""latdisc: lattice-point discrepancy toolkit."""

__version__ = "0.1"

__all__ = ["__version__"]
