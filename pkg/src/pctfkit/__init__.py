"""Pointed monoids, their cyclic nerves and descent checks over fans."""

__version__ = "0.1.0"

from .homology import Coefficients, homology, induced_map, mv_acyclicity, omega_homology, stabilize
from .monoid import AffineMonoid, Ideal, PctfMonoid, ZERO
from .nerve import ncy_component, ncy_slice, subdivide
from .saturation import conductor, normalize, seminormalize
from .toric import Cone, Fan, cech, make_square, verify_L312, verify_square

__all__ = [
    "AffineMonoid", "Coefficients", "Cone", "Fan", "Ideal", "PctfMonoid", "ZERO", "cech",
    "conductor", "homology", "induced_map", "make_square", "mv_acyclicity", "ncy_component",
    "ncy_slice", "normalize", "omega_homology", "seminormalize", "stabilize", "subdivide",
    "verify_L312", "verify_square",
]
