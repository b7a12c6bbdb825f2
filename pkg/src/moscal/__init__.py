"""moscal: multi-objective (MI)LP scalarization with warm-starting.

Weighted-sum and augmented epsilon-constraint methods over a built-in
bounded-variable simplex / branch-and-bound core, with subproblem
ordering strategies, infeasibility propagation, and brute-force Pareto
oracles for verification.
"""

from ._core import available_kernels, kernel_name, set_kernel

__version__ = "0.1.0"

__all__ = ["available_kernels", "kernel_name", "set_kernel", "__version__"]
