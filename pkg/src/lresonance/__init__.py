"""Central values of quadratic Dirichlet L-functions and the resonance method.

Exact integer kernels (``arith``), special functions (``specfun``), contour
kernels (``kernels``), central values (``lcentral``), the resonator and its
twisted moments (``resonator``, ``moments``) and numeric identity checks
(``identities``).
"""

__version__ = "0.1.0"
