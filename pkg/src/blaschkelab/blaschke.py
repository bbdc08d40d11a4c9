"""Finite (partial) Blaschke products represented by their zero lists.

A product is lambda * z^m * prod_n [(conj(z_n)/|z_n|) (z_n - z)/(1 - conj(z_n) z)]^mult_n.
Everything here is exact for finite lists; "infinite" fixtures are generators
truncated by the caller, with the discarded tail reported through
``blaschke_condition_sum``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ConstructionExhaustedError, IllConditionedBoundaryError, ResolutionError
from .geometry import INTERIOR_GUARD, ORIGIN_FOLD, as_complex, interior_value
from .gridfn import BoundaryGridFunction, circle_nodes

BOUNDARY_ZERO_GUARD = 1e-10
ZERO_HIT = 1e-14
RADIUS_SCAN_FLOOR = 1e-10
_JENSEN_GRID_CAP = 1 << 20


@dataclass(frozen=True)
class ZeroList:
    """Zeros with multiplicities, a unimodular normalization, and the origin order.

    ``zeros`` excludes 0; the zero at the origin is carried by ``m``.
    """

    zeros: tuple[tuple[complex, int], ...] = ()
    lam: complex = 1.0 + 0.0j
    m: int = 0

    def __post_init__(self):
        object.__setattr__(self, "zeros", tuple((complex(z), int(k)) for z, k in self.zeros))
        object.__setattr__(self, "lam", complex(self.lam))
        if abs(abs(self.lam) - 1.0) > 1e-12:
            raise ValueError(f"normalization must be unimodular, got |lambda| = {abs(self.lam)}")
        if self.m < 0:
            raise ValueError("origin order m must be nonnegative")
        for z, k in self.zeros:
            if k < 1:
                raise ValueError(f"multiplicity must be positive, got {k}")
            if abs(z) == 0.0:
                raise ValueError("zeros at the origin go into m, not the zero list")
            if abs(z) >= 1.0 - INTERIOR_GUARD:
                raise ValueError(f"zero must be interior (|z| < 1 - 1e-12), got |z| = {abs(z):.17g}")

    @classmethod
    def from_points(cls, points: Iterable[complex], lam: complex = 1.0) -> "ZeroList":
        """Build a list from raw points, folding near-origin points into m."""
        m = 0
        grouped: dict[complex, int] = {}
        for p in points:
            z = as_complex(p)
            if abs(z) < ORIGIN_FOLD:
                m += 1
            else:
                grouped[z] = grouped.get(z, 0) + 1
        return cls(tuple(grouped.items()), lam, m)

    @property
    def degree(self) -> int:
        return self.m + sum(k for _, k in self.zeros)

    def expanded_points(self, include_origin: bool = True) -> list[complex]:
        """Zeros repeated by multiplicity; the origin zero first, m times."""
        pts: list[complex] = [0.0j] * self.m if include_origin else []
        for z, k in self.zeros:
            pts.extend([z] * k)
        return pts

    def max_modulus(self) -> float:
        return max((abs(z) for z, _ in self.zeros), default=0.0)

    def is_normalized(self) -> bool:
        return abs(self.lam - 1.0) <= 1e-12

    def to_json(self) -> dict:
        return {
            "zeros": [{"re": z.real, "im": z.imag, "mult": k} for z, k in self.zeros],
            "lambda": {"re": self.lam.real, "im": self.lam.imag},
            "m": self.m,
        }

    @classmethod
    def from_json(cls, data: dict) -> "ZeroList":
        zeros = tuple((complex(e["re"], e["im"]), int(e["mult"])) for e in data["zeros"])
        lam = complex(data["lambda"]["re"], data["lambda"]["im"])
        return cls(zeros, lam, int(data["m"]))


@dataclass(frozen=True)
class SingularShiftSpec:
    """Parameters of the Mobius shift of the atomic singular function exp((z+1)/(z-1))."""

    alpha: complex
    k_min: int
    k_max: int

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        if self.alpha == 0:
            raise ValueError("shift parameter must be nonzero")
        if not abs(self.alpha) < 1.0:
            raise ValueError(f"shift parameter must be in the open disk, got |alpha| = {abs(self.alpha)}")
        if self.k_max < self.k_min:
            raise ValueError("empty index range")


def evaluate(b: ZeroList, z) -> complex:
    """Value of the product at an interior point; exact 0 within 1e-14 of a zero."""
    w = interior_value(z)
    for zn, _ in b.zeros:
        if abs(w - zn) <= ZERO_HIT:
            return 0.0j
    if b.m > 0 and abs(w) <= ZERO_HIT:
        return 0.0j
    return _evaluate_unchecked(b, w)


def _evaluate_unchecked(b: ZeroList, w: complex) -> complex:
    out = b.lam * w**b.m
    for zn, k in b.zeros:
        out *= ((zn.conjugate() / abs(zn)) * (zn - w) / (1.0 - zn.conjugate() * w)) ** k
    return out


def evaluate_grid(b: ZeroList, points: np.ndarray) -> np.ndarray:
    """Vectorized product evaluation; callers keep points away from the poles."""
    w = np.asarray(points, dtype=np.complex128)
    out = np.full(w.shape, b.lam, dtype=np.complex128)
    if b.m > 0:
        out *= w**b.m
    for zn, k in b.zeros:
        out *= ((zn.conjugate() / abs(zn)) * (zn - w) / (1.0 - zn.conjugate() * w)) ** k
    return out


def eval_boundary(b: ZeroList, grid_size: int) -> BoundaryGridFunction:
    """Boundary trace on the uniform circle grid.

    Zeros within 1e-10 of the circle make the trace ill-conditioned and raise.
    """
    if b.max_modulus() >= 1.0 - BOUNDARY_ZERO_GUARD:
        raise IllConditionedBoundaryError(
            f"a zero lies within 1e-10 of the circle (max |z_n| = {b.max_modulus():.17g})"
        )
    return BoundaryGridFunction(evaluate_grid(b, circle_nodes(grid_size)))


def derivative(b: ZeroList, z) -> complex:
    """Exact derivative of the finite product (product rule at the zeros)."""
    w = interior_value(z)
    facs: list[tuple[complex, complex, int]] = []
    if b.m > 0:
        facs.append((w, 1.0 + 0.0j, b.m))
    for zn, k in b.zeros:
        pref = zn.conjugate() / abs(zn)
        den = 1.0 - zn.conjugate() * w
        facs.append((pref * (zn - w) / den, pref * (abs(zn) ** 2 - 1.0) / den**2, k))

    vanishing = [(i, k) for i, (val, _, k) in enumerate(facs) if abs(val) <= ZERO_HIT]
    if not vanishing:
        prod = b.lam
        logsum = 0.0j
        for val, der, k in facs:
            prod *= val**k
            logsum += k * der / val
        return prod * logsum
    if len(vanishing) == 1 and vanishing[0][1] == 1:
        j = vanishing[0][0]
        out = b.lam * facs[j][1]
        for i, (val, _, k) in enumerate(facs):
            if i != j:
                out *= val**k
        return out
    # total vanishing order >= 2
    return 0.0j


def derivative_grid(b: ZeroList, points: np.ndarray) -> np.ndarray:
    """Vectorized derivative via the logarithmic derivative, with a scalar
    fallback at points that hit a zero."""
    w = np.asarray(points, dtype=np.complex128)
    prod = np.full(w.shape, b.lam, dtype=np.complex128)
    logsum = np.zeros(w.shape, dtype=np.complex128)
    near_zero = np.zeros(w.shape, dtype=bool)
    if b.m > 0:
        near_zero |= np.abs(w) <= 1e-12
        safe = np.where(near_zero, 1.0, w)
        prod = prod * w**b.m
        logsum += b.m / safe
    for zn, k in b.zeros:
        pref = zn.conjugate() / abs(zn)
        den = 1.0 - zn.conjugate() * w
        val = pref * (zn - w) / den
        tiny = np.abs(val) <= 1e-12
        near_zero |= tiny
        val_safe = np.where(tiny, 1.0, val)
        prod = prod * val**k
        logsum += k * (pref * (abs(zn) ** 2 - 1.0) / den**2) / val_safe
    out = prod * logsum
    if np.any(near_zero):
        flat = out.reshape(-1)
        pts = w.reshape(-1)
        for idx in np.nonzero(near_zero.reshape(-1))[0]:
            flat[idx] = derivative(b, pts[idx])
        out = flat.reshape(w.shape)
    return out


def blaschke_condition_sum(b: ZeroList) -> float:
    """Sum of multiplicity * (1 - |z_n|); the origin zero contributes m * 1."""
    return float(b.m) + sum(k * (1.0 - abs(z)) for z, k in b.zeros)


def jensen_zero_count(b: ZeroList, r: float, start_grid: int = 1024) -> int:
    """Number of zeros in the disk of radius r, from circle quadrature of log|b|.

    The log-mean of a single normalized factor over the circle |z| = r is
    log max(|z_n|, r), so the quadrature equals n_r log r plus the log-moduli
    of the listed zeros outside; dividing out the tail isolates the count.
    The grid doubles until the value stabilizes within 0.25 of an integer.
    """
    if not 0.0 < r < 1.0:
        raise ValueError(f"radius must be in (0, 1), got {r}")
    tail = 0.0
    for z, k in b.zeros:
        if abs(abs(z) - r) <= 1e-6:
            raise ValueError(f"zero at |z| = {abs(z):.17g} too close to the circle |z| = {r}")
        if abs(z) >= r:
            tail += k * math.log(abs(z))

    n = start_grid
    prev_count = None
    while n <= _JENSEN_GRID_CAP:
        vals = evaluate_grid(b, r * circle_nodes(n))
        q = float(np.mean(np.log(np.abs(vals))))
        est = (q - tail) / math.log(r)
        count = round(est)
        if abs(est - count) < 0.25 and (prev_count is None or prev_count == count):
            if prev_count == count:
                return count
            prev_count = count
        else:
            prev_count = None
        n *= 2
    raise ResolutionError(
        f"quadrature did not stabilize within 0.25 of an integer below {_JENSEN_GRID_CAP} points"
    )


def little_bloch_seminorm(b: ZeroList, r: float, n: int = 2048) -> float:
    """max over |z| = r of (1 - |z|^2) |b'(z)|."""
    if not 0.0 < r < 1.0:
        raise ValueError(f"radius must be in (0, 1), got {r}")
    pts = r * circle_nodes(n)
    return float(((1.0 - r * r) * np.abs(derivative_grid(b, pts))).max())


def bloch_cnbp_tension(u: ZeroList, b: ZeroList, r: float, n: int = 2048) -> float:
    """max over |w| = r of |u(w)| (1 - |b(w)|): the vanishing-product diagnostic."""
    if not 0.0 < r < 1.0:
        raise ValueError(f"radius must be in (0, 1), got {r}")
    pts = r * circle_nodes(n)
    return float((np.abs(evaluate_grid(u, pts)) * (1.0 - np.abs(evaluate_grid(b, pts)))).max())


def singular_shift_zeros(spec: SingularShiftSpec) -> ZeroList:
    """Zeros of (alpha - s)/(1 - conj(alpha) s) for s(z) = exp((z+1)/(z-1)).

    Solving s(z) = alpha: z_k = (w_k + 1)/(w_k - 1) with w_k = Log alpha + 2 pi i k.
    """
    log_alpha = cmath.log(spec.alpha)
    points = []
    for k in range(spec.k_min, spec.k_max + 1):
        w = log_alpha + 2j * math.pi * k
        z = (w + 1.0) / (w - 1.0)
        s_val = cmath.exp((z + 1.0) / (z - 1.0))
        if abs(s_val - spec.alpha) >= 1e-10:
            raise ResolutionError(f"zero candidate for k = {k} misses the level by {abs(s_val - spec.alpha):.3e}")
        points.append(z)
    return ZeroList.from_points(points)


@dataclass(frozen=True)
class FloatingFactorization:
    """Result of the alternating-annuli factorization b = b1 * b2."""

    z1: ZeroList
    z2: ZeroList
    radii: tuple[float, ...]
    targets: tuple[float, ...]
    # (radius index k, factor name, target beta_k, sampled circle min)
    checks: tuple[tuple[int, str, float, float], ...]


def _circle_min(zeros: Sequence[tuple[complex, int]], r: float, n: int = 4096, m: int = 0) -> float:
    if not zeros and m == 0:
        return 1.0
    b = ZeroList(tuple(zeros), m=m)
    return float(np.abs(evaluate_grid(b, r * circle_nodes(n))).min())


def floating_factorization(
    b: ZeroList, beta_seq: Sequence[float], scan_ratio: float = 0.85, n_circle: int = 4096
) -> FloatingFactorization:
    """Split the zeros into two products whose moduli clear the targets on
    alternating checkpoint circles.

    Radii are placed one at a time: candidate circles scan a geometric grid in
    1 - r, and r_k is the first candidate where (a) the zeros at or below the
    previous radius clear sqrt(beta_k) on the circle |z| = r_k, and (b) the
    zeros at or beyond r_k clear sqrt(beta_{k-1}) on the previous circle.  The
    two square roots multiply into the full target for the annulus-excluded
    product, which each factor dominates.  Targets past the end of beta_seq
    repeat its last entry.
    """
    betas = list(beta_seq)
    if not betas:
        raise ValueError("need at least one target")
    if any(not 0.0 < t < 1.0 for t in betas):
        raise ValueError("targets must lie in (0, 1)")
    if any(b2 <= b1 for b1, b2 in zip(betas, betas[1:])):
        raise ValueError("targets must be strictly increasing")

    pts = [(z, k) for z, k in b.zeros]
    if not pts and b.m == 0:
        return FloatingFactorization(ZeroList(), ZeroList(), (), (), ())
    max_mod = b.max_modulus()
    moduli = sorted(abs(z) for z, _ in pts)

    def target(k: int) -> float:  # k is 1-based
        return betas[min(k - 1, len(betas) - 1)]

    def below(cut: float) -> list[tuple[complex, int]]:
        return [(z, k) for z, k in pts if abs(z) <= cut]

    def at_or_beyond(cut: float) -> list[tuple[complex, int]]:
        return [(z, k) for z, k in pts if abs(z) >= cut]

    radii: list[float] = []
    targets: list[float] = []
    while not radii or radii[-1] <= max_mod:
        k = len(radii) + 1
        beta_k = target(k)
        prev_r = radii[-1] if radii else 0.0
        prev_beta = targets[-1] if targets else None
        gap = 0.5 if not radii else (1.0 - prev_r) * scan_ratio
        found = None
        while gap >= RADIUS_SCAN_FLOOR:
            cand = 1.0 - gap
            if cand > prev_r and all(abs(cand - mod) > 1e-9 for mod in moduli):
                ok = _circle_min(below(prev_r), cand, n_circle, m=b.m) > math.sqrt(beta_k) if radii else True
                if ok and prev_beta is not None:
                    ok = _circle_min(at_or_beyond(cand), prev_r, n_circle) > math.sqrt(prev_beta)
                if ok:
                    found = cand
                    break
            gap *= scan_ratio
        if found is None:
            raise ConstructionExhaustedError(
                f"no radius below 1 - {RADIUS_SCAN_FLOOR} clears target {beta_k} at step {k}",
                radii_placed=len(radii),
            )
        radii.append(found)
        targets.append(beta_k)
        if len(radii) > 4 * (len(pts) + len(betas)) + 8:
            raise ConstructionExhaustedError("radius placement did not terminate", radii_placed=len(radii))

    # Annulus j = (r_j, r_{j+1}): j = 1,2 mod 4 belongs to b2, j = 3,0 mod 4 to b1.
    z1_pts: list[tuple[complex, int]] = []
    z2_pts: list[tuple[complex, int]] = []
    for z, k in pts:
        mod = abs(z)
        if mod <= radii[0]:
            z1_pts.append((z, k))
            continue
        j = max(i + 1 for i in range(len(radii)) if radii[i] < mod)
        (z2_pts if j % 4 in (1, 2) else z1_pts).append((z, k))

    z1 = ZeroList(tuple(z1_pts), m=b.m)
    z2 = ZeroList(tuple(z2_pts))

    checks: list[tuple[int, str, float, float]] = []
    for idx in range(1, len(radii) + 1):
        if idx >= 6 and idx % 4 == 2:
            checks.append(
                (idx, "b1", targets[idx - 1], _circle_min(tuple(z1.zeros), radii[idx - 1], n_circle, m=z1.m))
            )
        elif idx >= 4 and idx % 4 == 0:
            checks.append((idx, "b2", targets[idx - 1], _circle_min(tuple(z2.zeros), radii[idx - 1], n_circle)))
    return FloatingFactorization(z1, z2, tuple(radii), tuple(targets), tuple(checks))
