"""Physical constants pinned to exact CODATA/SI values.

All downstream results that carry SI units derive from these numbers, so
regression goldens stay bit-stable across environments.
"""

import numpy as np

TWOPI = 2.0 * np.pi

HBAR = 1.054_571_817e-34  # J·s
ELEMENTARY_CHARGE = 1.602_176_634e-19  # C
ATOMIC_MASS = 1.660_539_066_60e-27  # kg
BOLTZMANN = 1.380_649e-23  # J/K
