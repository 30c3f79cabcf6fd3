"""Model checking for attention-based dynamic epistemic logic."""

__version__ = "0.1.0"
