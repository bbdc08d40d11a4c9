"""Carleson measures attached to zero sets.

The zero-displacement measure mu_b, a dyadic-box estimator standing in for
the Carleson norm (documented absolute-constant slack, default 8), the
interpolation constant, hyperbolically-separated splitting, and the modulus
infimum away from the zero set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .blaschke import ZeroList, derivative, evaluate_grid
from .errors import RegionEmptyError
from .geometry import beta_from_rho, hyper_distance, rho_from_beta

#: Absolute-constant slack between the dyadic-box estimator and the duality
#: Carleson norm; every acceptance check involving the norm carries it.
BOX_NORM_SLACK = 8.0


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finitely many weighted atoms in the disk."""

    atoms: tuple[tuple[complex, complex], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple((complex(z), complex(w)) for z, w in self.atoms))
        for z, _ in self.atoms:
            if abs(z) >= 1.0:
                raise ValueError(f"atom must lie in the open disk, got |z| = {abs(z)}")

    def total_variation(self) -> float:
        return sum(abs(w) for _, w in self.atoms)

    def scaled(self, c: complex) -> "DiscreteMeasure":
        return DiscreteMeasure(tuple((z, c * w) for z, w in self.atoms))

    def restricted(self, r: float) -> "DiscreteMeasure":
        return DiscreteMeasure(tuple((z, w) for z, w in self.atoms if abs(z) <= r))

    def to_json(self) -> dict:
        return {
            "atoms": [
                {"re": z.real, "im": z.imag, "w_re": w.real, "w_im": w.imag} for z, w in self.atoms
            ]
        }

    @classmethod
    def from_json(cls, data: dict) -> "DiscreteMeasure":
        return cls(
            tuple(
                (complex(a["re"], a["im"]), complex(a["w_re"], a["w_im"])) for a in data["atoms"]
            )
        )


@dataclass(frozen=True)
class CarlesonBox:
    """The box {r e^{i theta} : 1 - L <= r < 1, |theta - center| <= L/2}."""

    arc_center: float
    arc_length: float

    def __post_init__(self):
        if not 0.0 < self.arc_length <= 2.0 * math.pi:
            raise ValueError(f"arc length must be in (0, 2 pi], got {self.arc_length}")

    def contains(self, z: complex) -> bool:
        if 1.0 - abs(z) > self.arc_length:
            return False
        d = (math.atan2(z.imag, z.real) - self.arc_center) % (2.0 * math.pi)
        if d > math.pi:
            d -= 2.0 * math.pi
        return abs(d) <= self.arc_length / 2.0


def mu_b(zeros: ZeroList) -> DiscreteMeasure:
    """One atom of weight mult * (1 - |z|) per zero; the origin contributes m * 1."""
    atoms: list[tuple[complex, complex]] = []
    if zeros.m > 0:
        atoms.append((0.0j, complex(zeros.m)))
    for z, k in zeros.zeros:
        atoms.append((z, complex(k * (1.0 - abs(z)))))
    return DiscreteMeasure(tuple(atoms))


def box_carleson_norm(mu: DiscreteMeasure, max_depth: int) -> float:
    """sup over dyadic boxes of side 2^-d, d = 0..max_depth, of |mu|(Q) / side.

    Monotone nondecreasing in max_depth; for a finite measure the sup
    stabilizes once 2^-depth drops below min(1 - |z_j|).
    """
    if max_depth < 1:
        raise ValueError(f"max_depth must be at least 1, got {max_depth}")
    if not mu.atoms:
        return 0.0
    z = np.array([a for a, _ in mu.atoms])
    w = np.array([abs(v) for _, v in mu.atoms])
    depth_in = 1.0 - np.abs(z)
    angles = np.mod(np.angle(z), 2.0 * math.pi)
    best = 0.0
    for d in range(0, max_depth + 1):
        side = 2.0**-d
        mask = depth_in <= side
        if not np.any(mask):
            break
        n_arcs = int(np.ceil(2.0 * math.pi / side))
        idx = np.minimum((angles[mask] / side).astype(int), n_arcs - 1)
        masses = np.bincount(idx, weights=w[mask], minlength=n_arcs)
        best = max(best, float(masses.max()) / side)
    return best


def suggested_box_depth(mu: DiscreteMeasure) -> int:
    """Depth past which the box norm of this finite measure is stable."""
    gaps = [1.0 - abs(z) for z, _ in mu.atoms if abs(z) > 0.0]
    if not gaps:
        return 1
    return max(1, int(math.ceil(math.log2(1.0 / min(gaps)))) + 1)


@dataclass(frozen=True)
class InterpolationConstant:
    """min_n (1 - |z_n|^2) |b'(z_n)|, with the classical product identity cross-check."""

    value: float
    degenerate: bool
    derivative_route: float
    product_route: float


def interpolation_constant(zeros: ZeroList) -> InterpolationConstant:
    """Uniform separation constant of a simple zero list.

    Computed two independent ways: through |b'| at each zero and through the
    product of pseudohyperbolic distances; the routes agree to 1e-10 for
    nondegenerate input.  A repeated zero yields value 0 with the degenerate
    flag set.
    """
    if zeros.m > 1 or any(k > 1 for _, k in zeros.zeros):
        return InterpolationConstant(0.0, True, 0.0, 0.0)
    pts = zeros.expanded_points()
    if not pts:
        raise ValueError("empty zero list has no interpolation constant")
    n = len(pts)
    rho = np.ones((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            r = abs((pts[i] - pts[j]) / (1.0 - pts[j].conjugate() * pts[i]))
            rho[i, j] = rho[j, i] = r
    prod_route = []
    for i in range(n):
        mask = np.arange(n) != i
        prod_route.append(float(np.prod(rho[i][mask])))
    product_value = min(prod_route)
    if product_value == 0.0:
        return InterpolationConstant(0.0, True, 0.0, 0.0)

    deriv_route = min(
        (1.0 - abs(p) ** 2) * abs(derivative(zeros, p)) for p in pts
    )
    if abs(deriv_route - product_value) > 1e-10 * max(1.0, product_value):
        raise AssertionError(
            f"independent routes disagree: derivative {deriv_route!r} vs product {product_value!r}"
        )
    return InterpolationConstant(product_value, False, deriv_route, product_value)


def separation_split(zeros: ZeroList, s: float) -> list[ZeroList]:
    """Greedy first-fit (by decreasing modulus) partition into classes that are
    pairwise hyperbolically separated by at least s."""
    if s <= 0.0:
        raise ValueError(f"separation must be positive, got {s}")
    pts = sorted(zeros.expanded_points(), key=lambda z: (-abs(z), math.atan2(z.imag, z.real)))
    classes: list[list[complex]] = []
    for p in pts:
        for cls in classes:
            if all(hyper_distance(p, q) >= s for q in cls):
                cls.append(p)
                break
        else:
            classes.append([p])
    return [ZeroList.from_points(cls) for cls in classes]


def minimum_separated_classes(points: Sequence[complex], s: float) -> int:
    """Brute-force minimum number of pairwise >= s separated classes (n <= ~12)."""
    n = len(points)
    if n == 0:
        return 0
    conflict = [[hyper_distance(points[i], points[j]) < s for j in range(n)] for i in range(n)]

    def feasible(k: int) -> bool:
        color = [-1] * n

        def assign(i: int) -> bool:
            if i == n:
                return True
            # symmetry reduction: a fresh color may only be the next unused one
            limit = min(k - 1, max(color[:i], default=-1) + 1)
            for c in range(limit + 1):
                if any(color[j] == c and conflict[i][j] for j in range(i)):
                    continue
                color[i] = c
                if assign(i + 1):
                    return True
                color[i] = -1
            return False

        return assign(0)

    for k in range(1, n + 1):
        if feasible(k):
            return k
    return n


@dataclass(frozen=True)
class AlphaEstimate:
    """Sampled infimum of |b| over {beta(z, Z(b)) > r}, with its resolution."""

    value: float
    r: float
    cell_beta: float
    edge_gap: float
    n_samples: int
    argmin: complex


def alpha_b(
    zeros: ZeroList,
    r: float,
    cell_beta: float = 0.1,
    edge_gap: float = 1e-4,
    max_points: int = 20_000_000,
) -> AlphaEstimate:
    """min |b| over a hyperbolically quasi-uniform sample of the far-from-zeros
    region, restricted to |z| <= 1 - edge_gap.

    An upper bound for the true infimum over the sampled region; nondecreasing
    in r at fixed resolution.
    """
    if r <= 0.0:
        raise ValueError(f"threshold must be positive, got {r}")
    pts = np.array(zeros.expanded_points())
    if pts.size == 0:
        raise ValueError("alpha functional needs at least one zero")
    beta_max = beta_from_rho(1.0 - edge_gap)
    n_rings = int(math.ceil(beta_max / cell_beta))
    best = math.inf
    best_at = 0.0j
    total = 0
    for i in range(n_rings + 1):
        beta_i = min(i * cell_beta, beta_max)
        rad = rho_from_beta(beta_i)
        n_i = max(8, int(math.ceil(2.0 * math.pi * math.sinh(beta_i) / cell_beta))) if beta_i > 0 else 1
        total += n_i
        if total > max_points:
            raise ValueError(
                f"sampling budget {max_points} exceeded; coarsen cell_beta or edge_gap"
            )
        ring = rad * np.exp(2j * math.pi * np.arange(n_i) / n_i)
        sep = np.abs((ring[:, None] - pts[None, :]) / (1.0 - np.conj(pts)[None, :] * ring[:, None]))
        beta_to_set = 2.0 * np.arctanh(np.minimum(sep.min(axis=1), 1.0 - 1e-16))
        keep = ring[beta_to_set > r]
        if keep.size == 0:
            continue
        vals = np.abs(evaluate_grid(zeros, keep))
        j = int(vals.argmin())
        if vals[j] < best:
            best = float(vals[j])
            best_at = complex(keep[j])
    if not math.isfinite(best):
        raise RegionEmptyError(f"no sample point satisfies beta(z, Z) > {r} within |z| <= 1 - {edge_gap}")
    return AlphaEstimate(best, r, cell_beta, edge_gap, total, best_at)
