"""Descriptors and samplers for compact subsets of a plane algebraic curve.

Every constant computed downstream is taken against a SampledSet, a finite
point cloud on the curve.  Sublevel-set descriptors sample only the
distinguished boundary (the sup of |p| along the one-dimensional analytic
set is attained there), which keeps sample counts small.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .polyring import BivarPoly

RESIDUAL_REL = 1e-10
MIN_RESOLUTION = 16


class SamplingError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Descriptors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Z1Disk:
    """K = {z in A : |z1| <= r}; sampled on the circle |z1| = r."""

    r: float
    resolution: int = 1024

    def __post_init__(self):
        _check_resolution(self.resolution)
        if self.r <= 0:
            raise ValueError("radius must be positive")


@dataclass(frozen=True)
class Z2Interval:
    """K = {z in A : z2 in [lo, hi]}; all z1 branches are lifted."""

    lo: float
    hi: float
    resolution: int = 1024

    def __post_init__(self):
        _check_resolution(self.resolution)
        if not self.lo < self.hi:
            raise ValueError("interval requires lo < hi")


@dataclass(frozen=True)
class AbsV1V2Torus:
    """K = {z in A : |v1| = r1, |v2| = r2} for a degree-2 curve."""

    r1: float
    r2: float
    resolution: int = 1024

    def __post_init__(self):
        _check_resolution(self.resolution)
        if self.r1 <= 0 or self.r2 <= 0:
            raise ValueError("radii must be positive")


@dataclass(frozen=True)
class BidiskTrace:
    """K = A intersected with {|z1| <= r1, |z2| <= r2}; boundary circles."""

    r1: float
    r2: float
    resolution: int = 1024

    def __post_init__(self):
        _check_resolution(self.resolution)
        if self.r1 <= 0 or self.r2 <= 0:
            raise ValueError("radii must be positive")


@dataclass(frozen=True)
class ParamCurve:
    """Explicit parametrization table: rows (t, z1, z2), already on A."""

    rows: tuple  # of (float, complex, complex)
    resolution: int = field(default=0)

    def __post_init__(self):
        if len(self.rows) < 1:
            raise ValueError("parametrization table is empty")
        object.__setattr__(self, "resolution", len(self.rows))


@dataclass(frozen=True)
class PointCloud:
    """Explicit list of (z1, z2) points, validated against the curve."""

    points: tuple  # of (complex, complex)
    resolution: int = field(default=0)

    def __post_init__(self):
        if len(self.points) < 1:
            raise ValueError("point cloud is empty")
        object.__setattr__(self, "resolution", len(self.points))


def _check_resolution(res):
    if res < MIN_RESOLUTION:
        raise ValueError(f"resolution must be >= {MIN_RESOLUTION}")


# ---------------------------------------------------------------------------
# SampledSet
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SampledSet:
    points: np.ndarray          # shape (N, 2), complex
    descriptor: object
    curve: object
    max_residual: float

    def __post_init__(self):
        if len(self.points) == 0:
            raise SamplingError("empty set")

    def __len__(self):
        return len(self.points)

    @property
    def z1(self):
        return self.points[:, 0]

    @property
    def z2(self):
        return self.points[:, 1]


def _dedupe(points):
    seen = set()
    out = []
    for p in points:
        key = (round(p[0].real, 12), round(p[0].imag, 12),
               round(p[1].real, 12), round(p[1].imag, 12))
        if key not in seen:
            seen.add(key)
            out.append(p)
    return out


def _finish(curve, desc, points):
    points = _dedupe(points)
    if not points:
        raise SamplingError("empty set")
    arr = np.array(points, dtype=complex)
    res = np.abs(curve.evaluate(arr[:, 0], arr[:, 1]))
    zmax = float(np.max(np.abs(arr)))
    bound = RESIDUAL_REL * (1.0 + zmax ** curve.d)
    max_res = float(np.max(res))
    if max_res >= bound:
        raise SamplingError(
            f"sample residual {max_res:.3e} exceeds bound {bound:.3e}"
        )
    return SampledSet(points=arr, descriptor=desc, curve=curve, max_residual=max_res)


def _poly_in_z2(curve, z1):
    """Coefficients of z2 -> P(z1, z2), descending, leading trimmed."""
    degs = {}
    for (a, b), c in curve.defining.terms.items():
        degs[b] = degs.get(b, 0j) + c * z1 ** a
    bmax = max(degs)
    coeffs = np.array([degs.get(b, 0j) for b in range(bmax, -1, -1)], dtype=complex)
    return np.trim_zeros(coeffs, "f")

def _poly_in_z1(curve, z2):
    degs = {}
    for (a, b), c in curve.defining.terms.items():
        degs[a] = degs.get(a, 0j) + c * z2 ** b
    amax = max(degs)
    coeffs = np.array([degs.get(a, 0j) for a in range(amax, -1, -1)], dtype=complex)
    return np.trim_zeros(coeffs, "f")


def _newton_polish(curve, z1, z2, on="z2"):
    """One Newton step on the lifted coordinate; skipped near branch points."""
    terms = curve.defining.terms
    val = curve.defining(z1, z2)
    if on == "z2":
        dv = sum(b * c * z1 ** a * z2 ** (b - 1) for (a, b), c in terms.items() if b)
    else:
        dv = sum(a * c * z1 ** (a - 1) * z2 ** b for (a, b), c in terms.items() if a)
    if abs(dv) < 1e-8:
        return z1, z2
    if on == "z2":
        return z1, z2 - val / dv
    return z1 - val / dv, z2


def _lift_circle(curve, radius, n_angles, axis):
    """Lift the circle |z_axis| = radius through the curve, all branches.

    Retries an angle at a half-step offset when the lifted residual fails
    (the discriminant-hit case); errors out after three retries.
    """
    pts = []
    step = 2.0 * np.pi / n_angles
    zmax_guess = max(1.0, radius * 4.0)
    tol = RESIDUAL_REL * (1.0 + zmax_guess ** curve.d)
    for i in range(n_angles):
        theta = i * step
        for attempt in range(4):
            z = radius * np.exp(1j * theta)
            if axis == "z1":
                roots = np.roots(_poly_in_z2(curve, z))
                cand = [(_newton_polish(curve, z, w, on="z2")) for w in roots]
            else:
                roots = np.roots(_poly_in_z1(curve, z))
                cand = [(_newton_polish(curve, w, z, on="z1")) for w in roots]
            ok = [
                (p1, p2)
                for (p1, p2) in cand
                if abs(curve.defining(p1, p2)) < tol
            ]
            if len(ok) == len(cand) and cand:
                pts.extend(ok)
                break
            theta += step / 2.0
        else:
            raise SamplingError("root lifting failed after 3 retries")
    return pts


def sample(curve, desc):
    """Discretize the set described by desc on the given curve."""
    if isinstance(desc, Z1Disk):
        n_angles = max(MIN_RESOLUTION, desc.resolution // max(curve.d, 1))
        pts = _lift_circle(curve, desc.r, n_angles, axis="z1")
        return _finish(curve, desc, pts)

    if isinstance(desc, Z2Interval):
        # Chebyshev-Lobatto parameter grid: clusters at the endpoints and is
        # nested under doubling of the resolution.
        mid = 0.5 * (desc.lo + desc.hi)
        half = 0.5 * (desc.hi - desc.lo)
        nseg = max(MIN_RESOLUTION, desc.resolution // max(curve.d, 1))
        xs = mid + half * np.cos(np.pi * np.arange(nseg + 1) / nseg)
        pts = []
        for x in xs:
            roots = np.roots(_poly_in_z1(curve, complex(x)))
            for w in roots:
                pts.append(_newton_polish(curve, w, complex(x), on="z1"))
        return _finish(curve, desc, pts)

    if isinstance(desc, AbsV1V2Torus):
        curve.require_directional("torus descriptor")
        if curve.d != 2:
            raise SamplingError("torus descriptor requires a degree-2 curve")
        v1, v2 = curve.dirbasis
        # v1, v2 are linear homogeneous; invert the coordinate change
        M = np.array(
            [[v1.coeff(1, 0), v1.coeff(0, 1)], [v2.coeff(1, 0), v2.coeff(0, 1)]],
            dtype=complex,
        )
        Minv = np.linalg.inv(M)
        pts = []
        ts = 2.0 * np.pi * np.arange(desc.resolution) / desc.resolution
        for t in ts:
            c = desc.r1 * np.exp(1j * t)
            # P restricted to the line v1 = c, as a polynomial in w = v2
            zc = Minv @ np.array([c, 0.0])
            zw = Minv @ np.array([0.0, 1.0])
            coeffs = {}
            for (a, b), cf in curve.defining.terms.items():
                # (zc1 + w*zw1)^a (zc2 + w*zw2)^b expanded via convolution
                pa = np.polynomial.polynomial.polypow([zc[0], zw[0]], a) if a else np.array([1.0 + 0j])
                pb = np.polynomial.polynomial.polypow([zc[1], zw[1]], b) if b else np.array([1.0 + 0j])
                conv = np.convolve(pa, pb) * cf
                for k, v in enumerate(conv):
                    coeffs[k] = coeffs.get(k, 0j) + v
            kmax = max(coeffs)
            poly = np.array([coeffs.get(k, 0j) for k in range(kmax, -1, -1)])
            poly = np.trim_zeros(poly, "f")
            if len(poly) <= 1:
                continue
            for w in np.roots(poly):
                if abs(abs(w) - desc.r2) <= 1e-6 * max(1.0, desc.r2):
                    z = Minv @ np.array([c, w])
                    pts.append((complex(z[0]), complex(z[1])))
        if not pts:
            raise SamplingError("empty set")
        return _finish(curve, desc, pts)

    if isinstance(desc, BidiskTrace):
        half = max(MIN_RESOLUTION // 2, desc.resolution // 2)
        pts = []
        for p1, p2 in _lift_circle(curve, desc.r1, half, axis="z1"):
            if abs(p2) <= desc.r2 * (1.0 + 1e-9):
                pts.append((p1, p2))
        for p1, p2 in _lift_circle(curve, desc.r2, half, axis="z2"):
            if abs(p1) <= desc.r1 * (1.0 + 1e-9):
                pts.append((p1, p2))
        if not pts:
            raise SamplingError("empty set")
        return _finish(curve, desc, pts)

    if isinstance(desc, ParamCurve):
        pts = [(complex(z1), complex(z2)) for (_, z1, z2) in desc.rows]
        return _finish(curve, desc, pts)

    if isinstance(desc, PointCloud):
        pts = [(complex(z1), complex(z2)) for (z1, z2) in desc.points]
        return _finish(curve, desc, pts)

    raise TypeError(f"unknown set descriptor {type(desc).__name__}")


def sup_norm(p, K):
    """max |p| over the sampled points (a lower bound for the true sup)."""
    if isinstance(p, BivarPoly):
        vals = p(K.z1, K.z2)
    else:
        vals = np.asarray(p)
    if np.size(vals) == 0:
        return 0.0
    return float(np.max(np.abs(vals)))


# ---------------------------------------------------------------------------
# Point cloud text format
# ---------------------------------------------------------------------------

def write_point_cloud(path, points):
    """Four float columns: re z1, im z1, re z2, im z2.  '#' comments."""
    with open(path, "w") as fh:
        fh.write("# re_z1 im_z1 re_z2 im_z2\n")
        for z1, z2 in points:
            fh.write(
                f"{z1.real:.17g} {z1.imag:.17g} {z2.real:.17g} {z2.imag:.17g}\n"
            )


def read_point_cloud(path):
    pts = []
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            cols = line.split()
            if len(cols) != 4:
                raise ValueError(f"expected 4 columns, got {len(cols)}: {line!r}")
            a, b, c, d = (float(x) for x in cols)
            pts.append((complex(a, b), complex(c, d)))
    return pts
