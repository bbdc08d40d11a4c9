"""Functions sampled on a uniform grid of the unit circle.

Carries boundary traces and the analysis kernels acting on them: harmonic
conjugation (the -i sgn(n) Fourier multiplier), a dyadic-arc BMO estimator,
the normalized L2 norm, and winding numbers of sampled curves.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np

MIN_GRID = 8


@dataclass(frozen=True)
class BoundaryGridFunction:
    """Samples at the n-th roots of unity e^{2 pi i j / n}, j = 0..n-1.

    Real-valued functions are stored with a float dtype, complex ones with a
    complex dtype; the dtype is the real-valuedness flag.
    """

    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.asarray(self.samples)
        if arr.ndim != 1 or arr.size < MIN_GRID:
            raise ValueError(f"need a 1-d grid of at least {MIN_GRID} samples, got shape {arr.shape}")
        if not np.iscomplexobj(arr):
            arr = arr.astype(np.float64)
        else:
            arr = arr.astype(np.complex128)
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "samples", arr)

    @property
    def n(self) -> int:
        return self.samples.size

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.samples)

    def thetas(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.n) / self.n

    def nodes(self) -> np.ndarray:
        """The grid points e^{i theta_j} on the circle."""
        return np.exp(1j * self.thetas())

    def mean(self) -> complex:
        return complex(self.samples.mean())

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "samples": [{"re": float(s.real), "im": float(s.imag)} for s in self.samples],
        }

    @classmethod
    def from_json(cls, data: dict) -> "BoundaryGridFunction":
        vals = np.array([complex(s["re"], s["im"]) for s in data["samples"]])
        if np.all(vals.imag == 0.0):
            vals = vals.real
        return cls(vals)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["theta", "re", "im"])
            for theta, s in zip(self.thetas(), self.samples):
                writer.writerow([repr(float(theta)), repr(float(np.real(s))), repr(float(np.imag(s)))])

    def write_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, sort_keys=True)


def circle_nodes(n: int) -> np.ndarray:
    if n < MIN_GRID:
        raise ValueError(f"grid size must be at least {MIN_GRID}, got {n}")
    return np.exp(2j * np.pi * np.arange(n) / n)


def harmonic_conjugate(f: BoundaryGridFunction) -> BoundaryGridFunction:
    """Discrete harmonic conjugate: multiplier -i sgn(n), zero mean.

    Input must be real-valued.  The Nyquist bin (even grids) is dropped; grid
    functions produced by the toolkit are band-limited well below it.
    """
    if not f.is_real:
        raise ValueError("harmonic conjugate is defined here for real-valued grid functions")
    coeffs = np.fft.rfft(f.samples)
    coeffs *= -1j
    coeffs[0] = 0.0
    if f.n % 2 == 0:
        coeffs[-1] = 0.0
    return BoundaryGridFunction(np.fft.irfft(coeffs, n=f.n))


def l2_norm(f: BoundaryGridFunction) -> float:
    """Normalized grid L2 norm (mean of |f|^2)^(1/2)."""
    return float(np.sqrt(np.mean(np.abs(f.samples) ** 2)))


def bmo_norm_estimate(f: BoundaryGridFunction) -> float:
    """Max mean oscillation over dyadic arcs of length >= 4 grid cells.

    A lower bound for the true BMO seminorm within grid resolution; constants
    are translation invariant by construction.
    """
    x = f.samples
    n = f.n
    best = 0.0
    depth = 0
    while n >> depth >= 4 and (n % (1 << depth)) == 0:
        arcs = x.reshape(1 << depth, n >> depth)
        means = arcs.mean(axis=1, keepdims=True)
        osc = np.abs(arcs - means).mean(axis=1)
        best = max(best, float(osc.max()))
        depth += 1
    return best


def winding_number(values: np.ndarray) -> int:
    """Winding number around 0 of a closed sampled curve (last point wraps to first).

    Requires consecutive phase steps below pi; callers must sample densely
    enough for that to hold.
    """
    v = np.asarray(values)
    if np.any(np.abs(v) == 0.0):
        raise ValueError("curve passes through 0; winding number undefined")
    ratios = np.roll(v, -1) / v
    total = float(np.angle(ratios).sum() / (2.0 * np.pi))
    k = round(total)
    if abs(total - k) > 0.1:
        raise ValueError(f"winding sum {total} not close to an integer; sample more densely")
    return k
