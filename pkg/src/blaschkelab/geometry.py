"""Hyperbolic geometry of the unit disk.

The two Mobius maps used throughout (the involution interchanging 0 and z,
and its unimodular normalization) together with the pseudohyperbolic and
hyperbolic metrics.  All values are plain complex numbers / floats; the
``DiskPoint`` wrapper exists to make the interior guard explicit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateInputError

# Points at least this close to the circle are rejected as "interior".
INTERIOR_GUARD = 1e-12
DEGENERATE_DENOMINATOR = 1e-14
# Points this close to 0 are folded into the origin-zero order of a product.
ORIGIN_FOLD = 1e-14


@dataclass(frozen=True)
class DiskPoint:
    """A point of the unit disk.

    Interior points must satisfy |value| < 1 - 1e-12; anything closer to the
    circle is rejected unless constructed with ``boundary=True``, because
    evaluation there is ill-conditioned and should fail loudly.
    """

    value: complex
    boundary: bool = False

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))
        r = abs(self.value)
        if self.boundary:
            if r > 1.0 + INTERIOR_GUARD:
                raise ValueError(f"boundary-flagged point outside closed disk: |z| = {r}")
        elif r >= 1.0 - INTERIOR_GUARD:
            raise ValueError(
                f"interior point requires |z| < 1 - 1e-12, got |z| = {r:.17g}; "
                "flag boundary=True for circle points"
            )

    def __complex__(self) -> complex:
        return self.value


def as_complex(z) -> complex:
    """Unwrap a DiskPoint (or accept a raw complex) without any guard."""
    return z.value if isinstance(z, DiskPoint) else complex(z)


def interior_value(z) -> complex:
    """Unwrap and enforce the interior guard."""
    w = as_complex(z)
    if abs(w) >= 1.0 - INTERIOR_GUARD:
        raise ValueError(f"point must be interior (|z| < 1 - 1e-12), got |z| = {abs(w):.17g}")
    return w


def mobius(z, w) -> complex:
    """The involution (z - w) / (1 - conj(z) w) interchanging 0 and z.

    Holomorphic in w and an isometry of the pseudohyperbolic metric; the
    modulus agrees with the variant that conjugates w instead.
    """
    zz = interior_value(z)
    ww = as_complex(w)
    if abs(ww) > 1.0 + INTERIOR_GUARD:
        raise ValueError(f"second argument must satisfy |w| <= 1, got {abs(ww)}")
    den = 1.0 - zz.conjugate() * ww
    if abs(den) < DEGENERATE_DENOMINATOR:
        raise DegenerateInputError(f"mobius denominator {abs(den):.3e} below 1e-14")
    return (zz - ww) / den


def normalized_mobius(z, w) -> complex:
    """(conj(z)/|z|) (z - w) / (1 - conj(z) w): the unimodular-normalized factor.

    Undefined at z = 0; callers wanting the origin factor use the convention
    that the prefactor is -1, i.e. the factor degenerates to w itself.
    """
    zz = as_complex(z)
    ww = as_complex(w)
    r = abs(zz)
    if r == 0.0:
        raise ValueError("normalized_mobius requires z != 0 (origin factor is w itself)")
    den = 1.0 - zz.conjugate() * ww
    if abs(den) < DEGENERATE_DENOMINATOR:
        raise DegenerateInputError(f"normalized_mobius denominator {abs(den):.3e} below 1e-14")
    return (zz.conjugate() / r) * (zz - ww) / den


def pseudo_distance(z, w) -> float:
    """Pseudohyperbolic distance rho(z, w) = |(z - w)/(1 - conj(z) w)|."""
    zz = interior_value(z)
    ww = interior_value(w)
    return abs((zz - ww) / (1.0 - zz.conjugate() * ww))


def hyper_distance(z, w) -> float:
    """Hyperbolic distance beta(z, w) = log((1 + rho)/(1 - rho))."""
    return beta_from_rho(pseudo_distance(z, w))


def beta_from_rho(rho: float) -> float:
    if not 0.0 <= rho < 1.0:
        raise ValueError(f"rho must lie in [0, 1), got {rho}")
    # log1p keeps full precision for rho near 0 and near 1
    return math.log1p(rho) - math.log1p(-rho)


def rho_from_beta(beta: float) -> float:
    if beta < 0.0:
        raise ValueError(f"beta must be nonnegative, got {beta}")
    return math.tanh(beta / 2.0)
