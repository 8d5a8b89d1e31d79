"""Exact certificates for (non-)bigness of tangent bundles of weak del Pezzo surfaces."""

__version__ = "0.1.0"
