"""Local invariants of quotient rings at the origin and a perturbation lab.

Layers, bottom up: ``kernel`` (prime-field polynomials), ``groebner``
(Buchberger engine, ideal and module calculus, local standard bases),
``homology`` (resolutions, Ext, local cohomology lengths), ``invariants``
(Hilbert-Samuel data, Buchsbaum invariant, hdeg, reductions), ``lab``
(bounds and randomized perturbation trials) and ``cli``.
"""

__version__ = "0.1.0"

from .kernel import Poly, PolyRing, RingSpec  # noqa: F401
from .lab import Instance, compute_bounds  # noqa: F401
