"""Bilinear recurrences and their sigma-function solutions.

Modules:

* ``algebra``: exact rationals, polynomials, Laurent division, linear algebra
* ``recurrence``: Somos-4 / Somos-k, elliptic divisibility sequences, identities
* ``weierstrass``: periods, sigma, zeta, wp and the Abel map (mpmath)
* ``solver``: from Somos-4 data to a curve and a sigma closed form
* ``genus2``: Mumford divisors, Cantor arithmetic, the order-8 recurrence
* ``schur``: symbolic identities in the cusp limit ``y^2 = 4x^5``
* ``henon_heiles``: Lax matrix and Backlund map of the case (ii) system
* ``cli``: the ``somos-sigma`` command
"""

from .algebra import MultiPoly, RationalFunction, UPoly
from .errors import SomosSigmaError
from .recurrence import SequenceWindow, Somos4Problem, SomosKSpec

__version__ = "0.1.0"

__all__ = ["MultiPoly", "RationalFunction", "UPoly", "SomosSigmaError", "SequenceWindow", "Somos4Problem", "SomosKSpec"]
