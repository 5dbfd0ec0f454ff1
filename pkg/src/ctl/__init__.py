"""Exact verification of cotorsion pairs over bound quiver algebras."""

__version__ = "0.1.0"
