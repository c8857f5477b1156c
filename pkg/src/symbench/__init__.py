"""Deterministic generator and scoring harness for symbolic reasoning
scenarios: container manipulation, grid-map navigation, and their composite.
"""

__version__ = "0.1.0"
