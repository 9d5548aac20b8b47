"""Interpolation by sums of exponentials with nodes on rays.

Library plus CLI for deciding solvability of exponential-sum interpolation
(nodes on a finite system of rays, exponents from a prescribed unbounded
set), solving the finite-truncation systems when the criterion holds, and
demonstrating the explicit obstructions when it fails.
"""

__version__ = "0.1.0"

from . import exponents, expoly, geometry, growth, interp, nodes, scenario  # noqa: F401
