"""Low-rank tensor recovery: trace-norm models, solvers, and certificates.

Tensors cross the boundary as numpy arrays in Fortran (first-index-fastest)
element order; mode indices are 0-based.
"""

from lrtr._core import *  # noqa: F401,F403
from lrtr._core import __doc__  # noqa: F401
