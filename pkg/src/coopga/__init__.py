"""Cooperative task-space modeling and control with conformal geometric algebra."""

from .algebra import Multivector, MultivectorJacobian, embed_point, extract_point

__all__ = ["Multivector", "MultivectorJacobian", "embed_point", "extract_point"]

__version__ = "0.1.0"
