"""Named example curves and a seeded generator of valid random ones."""

from __future__ import annotations

import numpy as np

from .polyring import BivarPoly, curve_new


def hyperbola(gamma=1.0):
    """The curve z1^2 - z2^2 = gamma.  Directions -1 and +1."""
    return curve_new(BivarPoly({(2, 0): 1.0, (0, 2): -1.0, (0, 0): -gamma}))


def coordinate_hyperbola(eps):
    """The relaxed curve z1*z2 = eps, asymptotic to both coordinate axes."""
    if eps == 0:
        raise ValueError("eps must be nonzero")
    return curve_new(BivarPoly({(1, 1): 1.0, (0, 0): -eps}), relaxed=True)


def random_valid_curve(d, seed, coeff_scale=0.3):
    """Seeded random degree-d curve satisfying all construction hypotheses.

    Directions are jittered d-th roots of unity with moduli near 1: the
    normal-form reduction multiplies coefficients by |lambda|^2-type
    factors per degree and the directional-basis coefficients by inverse
    separations, so curves with extreme or crowded slopes make the
    degree-12 change of basis numerically singular even though they are
    perfectly valid inputs.
    """
    if d < 2:
        raise ValueError("need d >= 2")
    rng = np.random.default_rng(seed)
    phase = rng.uniform(0.0, 2.0 * np.pi)
    lams = []
    for k in range(d):
        r = rng.uniform(0.9, 1.15)
        jitter = rng.uniform(-0.6, 0.6) * np.pi / (2 * d)
        lam = r * np.exp(1j * (2.0 * np.pi * k / d + phase + jitter))
        lams.append(lam)
    lead = BivarPoly.constant(1.0)
    for lam in lams:
        lead = lead * BivarPoly({(0, 1): 1.0, (1, 0): -lam})
    lower = {}
    for n in range(d):
        for b in range(n + 1):
            if rng.uniform() < 0.6:
                c = coeff_scale * (rng.normal() + 1j * rng.normal())
                lower[(n - b, b)] = c
    lower[(0, 0)] = lower.get((0, 0), 0j) + 1.0  # keep the curve off its cone
    return curve_new(lead + BivarPoly(lower))
