"""Vandermonde determinants, greedy point selection, transfinite diameters.

V_n is the maximal modulus of det[b_j(zeta_k)] over n-point configurations;
the n-th point of a greedy (Leja) sequence maximizes the determinant given
the earlier picks, which lower-bounds the true sup but shares its n-th root
asymptotics in practice.  Diameter estimates are the l_n-th roots of the
greedy V at completed degree blocks, with l_n the sum of basis degrees.

Working columns are generated in Newton form: the column of a basis
element is its parent element's remainder column times a degree-one
generator (z1, z2 or a directional v_k), then eliminated against the steps
since the parent.  This change of basis is unit-triangular, so determinant
bookkeeping is exact, and it sidesteps the catastrophic cancellation that
kills raw Vandermonde columns beyond degree ~40 on sets of capacity != 1.
All determinant work happens in log-modulus space; raw determinants
overflow doubles around degree ten.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .polyring import basis_enumerate, basis_through_degree
from .chebyshev import basis_values

NEG_INF = float("-inf")


def log_vdm(curve, basis_id, pts):
    """log |det [b_j(zeta_k)]| for the first len(pts) basis elements.

    Computed by pivoted LU (slogdet accumulates log |pivot|); a singular
    configuration returns the -inf sentinel.
    """
    pts = np.asarray(pts, dtype=complex)
    if pts.ndim != 2 or len(pts) < 1:
        raise ValueError("need a nonempty list of points")
    m = len(pts)
    elems = basis_enumerate(curve, basis_id, m)

    class _K:  # minimal point-holder for basis_values
        z1 = pts[:, 0]
        z2 = pts[:, 1]
        points = pts

    M = basis_values(curve, elems, _K).T  # rows: basis, cols: points
    sign, logdet = np.linalg.slogdet(M)
    if sign == 0:
        return NEG_INF
    return float(logdet)


def _parent_recipe(shape):
    """(parent shape, generator tag) of a basis element, or None for 1."""
    if shape[0] == "monomial":
        _, a, b = shape
        if a == 0 and b == 0:
            return None
        if a > 0:
            return ("monomial", a - 1, b), ("z1",)
        return ("monomial", 0, b - 1), ("z2",)
    _, r, k, q = shape
    if r > 0:
        return ("dir", r - 1, k, q), ("z1",)
    if q > 1:
        return ("dir", 0, k, q - 1), ("v", k)
    return ("monomial", 0, 0), ("v", k)


@dataclass
class LejaRun:
    """Incremental greedy Fekete state over a fixed candidate set.

    leja_extend mutates the run in place and returns it.
    """

    curve: object
    basis_id: str
    candidates: object            # SampledSet
    selected: list = field(default_factory=list)    # candidate indices
    points: list = field(default_factory=list)      # (z1, z2) pairs
    log_vdm: list = field(default_factory=list)     # cumulative after each pick
    increments: list = field(default_factory=list)
    diam_estimates: list = field(default_factory=list)  # (degree, estimate)
    _elems: list = field(default_factory=list, repr=False)
    _W: list = field(default_factory=list, repr=False)       # remainder columns
    _pivots: list = field(default_factory=list, repr=False)  # (row, value)
    _step_of: dict = field(default_factory=dict, repr=False)  # shape -> step
    _gens: dict = field(default_factory=dict, repr=False)     # generator values
    _used: np.ndarray = field(default=None, repr=False)

    def _generator_values(self, tag):
        if tag in self._gens:
            return self._gens[tag]
        K = self.candidates
        if tag == ("z1",):
            vals = np.asarray(K.z1, dtype=complex)
        elif tag == ("z2",):
            vals = np.asarray(K.z2, dtype=complex)
        else:
            _, k = tag
            vals = self.curve.dirbasis[k - 1](K.z1, K.z2)
        self._gens[tag] = vals
        return vals

    def _new_column(self, el):
        recipe = _parent_recipe(el.shape)
        if recipe is None:
            return np.ones(len(self.candidates.points), dtype=complex)
        parent_shape, gen = recipe
        src = self._step_of[parent_shape]
        col = self._generator_values(gen) * self._W[src]
        for k in range(src, len(self._W)):
            i_k, p_k = self._pivots[k]
            col = col - self._W[k] * (col[i_k] / p_k)
        return col


def leja_start(curve, K, basis_id):
    run = LejaRun(curve=curve, basis_id=basis_id, candidates=K)
    run._used = np.zeros(len(K.points), dtype=bool)
    return run


def leja_extend(run, count):
    """Greedily append `count` points, updating diameter estimates.

    Each pick maximizes the modulus of the Vandermonde determinant of the
    selected points given the earlier ones; ties resolve to the lowest
    candidate index (np.argmax).  Raises if every remaining candidate
    yields a singular configuration.
    """
    n_cand = len(run.candidates.points)
    target = len(run.selected) + count
    if target > n_cand:
        raise ValueError("candidate set exhausted")
    if target > len(run._elems):
        run._elems = basis_enumerate(run.curve, run.basis_id, target)
    for step in range(len(run.selected), target):
        el = run._elems[step]
        col = run._new_column(el)
        run._step_of[el.shape] = step
        scores = np.where(run._used, 0.0, np.abs(col))
        i = int(np.argmax(scores))
        if scores[i] == 0.0:
            raise RuntimeError("degenerate candidate set")
        piv = col[i]
        run._W.append(col)
        run._pivots.append((i, piv))
        run._used[i] = True
        run.selected.append(i)
        run.points.append(tuple(run.candidates.points[i]))
        inc = float(np.log(np.abs(piv)))
        run.increments.append(inc)
        run.log_vdm.append((run.log_vdm[-1] if run.log_vdm else 0.0) + inc)
        # diameter estimate at completed degree blocks
        m = step + 1
        elems = run._elems
        if m == len(elems) or elems[m].degree > elems[m - 1].degree:
            degree = elems[m - 1].degree
            if degree >= 1:
                l_n = sum(e.degree for e in elems[:m])
                run.diam_estimates.append((degree, float(np.exp(run.log_vdm[-1] / l_n))))
    return run


def block_counts(curve, basis_id, degree):
    """(m_n, l_n): number of basis elements of degree <= n and degree sum."""
    elems = basis_through_degree(curve, basis_id, degree)
    return len(elems), sum(el.degree for el in elems)


def transfinite_diameter(curve, K, basis_id, n_max, run=None):
    """Diameter estimate at degree n_max; returns (estimate, run).

    The raw block values V_{m_n}^{1/l_n} approach the limit only like
    exp(O(m log m)/l_n) because of the m!-type volume factor, which the
    limit theory divides out; the returned estimate is the slope of log V
    between degrees n_max/2 and n_max, which cancels that factor at finite
    depth.  The raw per-block values remain available on the run.
    """
    if n_max < 2:
        raise ValueError("need n_max >= 2")
    m_n, _ = block_counts(curve, basis_id, n_max)
    if m_n > len(K.points):
        raise ValueError(
            f"candidate set has {len(K.points)} points, need {m_n} for degree {n_max}"
        )
    if run is None:
        run = leja_start(curve, K, basis_id)
    missing = m_n - len(run.selected)
    if missing > 0:
        leja_extend(run, missing)
    ests = dict(run.diam_estimates)
    if n_max not in ests:
        raise RuntimeError("no completed degree block at n_max")
    n_lo = max(1, n_max // 2)
    while n_lo not in ests and n_lo < n_max:
        n_lo += 1
    if n_lo == n_max:
        return ests[n_max], run
    _, l_hi = block_counts(curve, basis_id, n_max)
    _, l_lo = block_counts(curve, basis_id, n_lo)
    slope = (l_hi * np.log(ests[n_max]) - l_lo * np.log(ests[n_lo])) / (l_hi - l_lo)
    return float(np.exp(slope)), run


@dataclass
class VnTauRecord:
    index: int
    ratio: float          # V_n / V_{n-1}
    bound: float          # n * tau_n^{deg b_n} (before slack)
    passed: bool


def vn_tau_check(run, tau_solves, slack=0.05):
    """Check V_n / V_{n-1} <= n * tau_n^deg(b_n) * (1 + slack) per index.

    The greedy V is only a lower bound of the true sup, so violations
    beyond the slack indicate bugs rather than theory failures.
    """
    out = []
    for j, solve in enumerate(tau_solves, start=1):
        if j > len(run.increments):
            break
        spec = solve.spec
        if not (isinstance(spec, tuple) and spec[0] == "tau" and spec[1] == run.basis_id):
            raise ValueError("tau sequence does not align with the run's basis")
        if spec[2] != j:
            raise ValueError("tau sequence does not align with the run's basis")
        ratio = float(np.exp(run.increments[j - 1]))
        bound = j * solve.norm
        out.append(VnTauRecord(j, ratio, bound, ratio <= bound * (1.0 + slack)))
    return out


def weighted_tau_mean(tau_sub):
    """Weighted geometric mean (prod tau_nu^nu)^(1/sum nu).

    tau_sub holds (nu, tau) pairs; a zero tau makes the mean 0 by the
    -inf log convention.
    """
    if not tau_sub:
        raise ValueError("empty tau list")
    wsum = sum(nu for nu, _ in tau_sub)
    acc = 0.0
    for nu, tau in tau_sub:
        if tau <= 0.0:
            return 0.0
        acc += nu * np.log(tau)
    return float(np.exp(acc / wsum))
