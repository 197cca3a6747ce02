"""Monic polynomial classes and discrete complex minimax solves.

A class fixes a leading term (a power of a homogeneous polynomial, possibly
multiplied by another one, or a graded-basis element) and leaves all lower
terms free.  T_n values are the n-th roots of the minimal sup norms over a
SampledSet, n being the degree of the leading term in the coordinate ring;
constants are estimated from sequences of such solves.

The minimax subproblem min_c max_i |f_i + (G c)_i| is solved by Lawson
iteration: a weighted least squares step followed by the multiplicative
weight update w <- w * |r|^gamma, with gamma damped from 1 to 0.5 when the
max modulus increases.  The weighted L2 value of each iterate is a valid
lower bound for the discrete minimax, which gives a two-sided stopping
criterion.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import polyring
from .polyring import (
    BASIS_C,
    BASIS_S,
    BivarPoly,
    _grevlex_key,
    basis_through_degree,
    normal_form,
    pow_mod,
)

LOT_FULL = "full"
LOT_S = "basisS"
LOT_C = "basisC"


class ClassSpecError(ValueError):
    pass


def _require_homogeneous(p, name):
    if p.is_zero:
        raise ClassSpecError(f"{name} must be nonzero")
    degs = {a + b for (a, b) in p.terms}
    if len(degs) != 1:
        raise ClassSpecError(f"{name} must be homogeneous")


def _canonical_scale(p):
    """Divide out the coefficient of the grevlex-largest monomial.

    Multiplying the prefactor of a class by a constant does not change its
    Chebyshev constant; canonicalizing makes the finite-n values literally
    invariant as well.
    """
    top = max(p.terms, key=_grevlex_key)
    return p * (1.0 / p.coeff(*top))


@dataclass(frozen=True)
class MQ:
    """Powers of a homogeneous Q with free lower-order terms."""

    q: BivarPoly

    def __post_init__(self):
        _require_homogeneous(self.q, "Q")

    lot_mode = LOT_FULL

    def describe(self):
        return f"M({self.q.short()})"


@dataclass(frozen=True)
class MRQ:
    """R * Q^n with free lower-order terms; R is scale-canonicalized."""

    r: BivarPoly
    q: BivarPoly

    def __post_init__(self):
        _require_homogeneous(self.r, "R")
        _require_homogeneous(self.q, "Q")

    lot_mode = LOT_FULL

    def describe(self):
        return f"M_{self.r.short()}({self.q.short()})"


@dataclass(frozen=True)
class Zk:
    """Leading z2^k z1^n, lower terms free in the graded S ordering."""

    k: int

    def __post_init__(self):
        if self.k < 0:
            raise ClassSpecError("k must be >= 0")

    lot_mode = LOT_S

    def describe(self):
        return f"Z({self.k})"


@dataclass(frozen=True)
class Mz1jVk:
    """Leading z1^j v_k^n with all lower-degree terms free."""

    j: int
    k: int

    lot_mode = LOT_FULL

    def describe(self):
        return f"M_z1^{self.j}(v{self.k})"


@dataclass(frozen=True)
class TildeMl:
    """Leading z1^l v_j^n, lower terms free in the graded C ordering."""

    l: int
    j: int

    lot_mode = LOT_C

    def describe(self):
        return f"Mt_z1^{self.l}(v{self.j})"


@dataclass
class SolverOptions:
    max_iter: int = 500
    tol: float = 1e-8
    ridge: float = 1e-12

    def validated(self):
        if self.max_iter < 1 or self.tol <= 0 or self.ridge <= 0:
            raise ValueError("solver options must be positive")
        return self


@dataclass
class ChebSolve:
    spec: object
    n: int                      # class parameter
    total_degree: int           # degree of the leading term in C[A]
    minimizer: BivarPoly
    norm: float
    tn: float
    iterations: int
    converged: bool
    ridge_used: bool = False
    gap: float = 0.0            # certified optimality gap: norm - lower bound
    coeffs: np.ndarray = field(default=None, repr=False)


# ---------------------------------------------------------------------------
# Class parametrization
# ---------------------------------------------------------------------------

def _zk_leading(curve, k, n):
    """(k+1)-th element of the degree-(n+k) block of S, globally indexed.

    On a curve with the standard reduction this is the monomial z2^k z1^n;
    the block form is what generalizes to relaxed curves.
    """
    prefix = basis_through_degree(curve, BASIS_S, n + k)
    block = [el for el in prefix if el.degree == n + k]
    if k >= len(block):
        raise ClassSpecError(f"no position {k} in the degree-{n + k} block of S")
    return block[k], prefix


def class_parametrize(curve, spec, n):
    """Leading polynomial and free basis of the class at parameter n.

    Returns (leading, free) where free is the list of BasisElement whose
    span, added to the leading term, exhausts the class at that degree.
    """
    if n < 1:
        raise ClassSpecError("class parameter must be >= 1")
    d = curve.d

    if isinstance(spec, MQ):
        leading = pow_mod(curve, spec.q, n)
    elif isinstance(spec, MRQ):
        leading = normal_form(curve, _canonical_scale(spec.r) * pow_mod(curve, spec.q, n))
    elif isinstance(spec, Zk):
        if spec.k > d - 1:
            raise ClassSpecError(f"k must be <= d-1 = {d - 1}")
        el, prefix = _zk_leading(curve, spec.k, n)
        return el.poly, prefix[: el.index - 1]
    elif isinstance(spec, Mz1jVk):
        curve.require_directional("directional classes")
        if not 0 <= spec.j <= d - 2:
            raise ClassSpecError(f"j must satisfy 0 <= j <= d-2 = {d - 2}")
        if not 1 <= spec.k <= d:
            raise ClassSpecError("direction index out of range")
        leading = normal_form(
            curve,
            BivarPoly.monomial(spec.j, 0) * pow_mod(curve, curve.dirbasis[spec.k - 1], n),
        )
    elif isinstance(spec, TildeMl):
        curve.require_directional("directional classes")
        if not 0 <= spec.l <= d - 2:
            raise ClassSpecError(f"l must satisfy 0 <= l <= d-2 = {d - 2}")
        if not 1 <= spec.j <= d:
            raise ClassSpecError("direction index out of range")
        degree = n * (d - 1) + spec.l
        prefix = basis_through_degree(curve, BASIS_C, degree)
        # position of z1^l v_j^n inside its degree block is j
        block_start = next(i for i, el in enumerate(prefix) if el.degree == degree)
        el = prefix[block_start + spec.j - 1]
        assert el.shape == ("dir", spec.l, spec.j, n)
        return el.poly, prefix[: el.index - 1]
    else:
        raise TypeError(f"unknown class spec {type(spec).__name__}")

    if leading.is_zero:
        raise ClassSpecError("leading term reduces to zero in the coordinate ring")
    total = int(leading.degree)
    free = basis_through_degree(curve, BASIS_S, total - 1) if total >= 1 else []
    return leading, free


def _leading_values(curve, spec, n, K):
    """Evaluate the class leading term at the sample points in product form.

    Product-form evaluation avoids the cancellation incurred by expanding
    high powers; values agree with the normal form on the curve.
    """
    z1, z2 = K.z1, K.z2
    if isinstance(spec, MQ):
        return spec.q(z1, z2) ** n
    if isinstance(spec, MRQ):
        return _canonical_scale(spec.r)(z1, z2) * spec.q(z1, z2) ** n
    if isinstance(spec, Mz1jVk):
        return (z1 ** spec.j) * curve.dirbasis[spec.k - 1](z1, z2) ** n
    if isinstance(spec, TildeMl):
        return (z1 ** spec.l) * curve.dirbasis[spec.j - 1](z1, z2) ** n
    if isinstance(spec, Zk):
        el, _ = _zk_leading(curve, spec.k, n)
        return el.poly(z1, z2)
    raise TypeError(f"unknown class spec {type(spec).__name__}")


def basis_values(curve, elements, K):
    """Design matrix of basis elements at the sample points (N x m)."""
    z1, z2 = K.z1, K.z2
    pow1 = {}
    pow2 = {}
    vvals = {}

    def p1(a):
        if a not in pow1:
            pow1[a] = z1 ** a
        return pow1[a]

    def p2(b):
        if b not in pow2:
            pow2[b] = z2 ** b
        return pow2[b]

    cols = np.empty((len(K.points), len(elements)), dtype=complex)
    for i, el in enumerate(elements):
        if el.shape[0] == "monomial":
            _, a, b = el.shape
            cols[:, i] = p1(a) * p2(b)
        else:
            _, r, k, q = el.shape
            if (k, q) not in vvals:
                vvals[(k, q)] = curve.dirbasis[k - 1](z1, z2) ** q
            cols[:, i] = p1(r) * vvals[(k, q)]
    return cols


# ---------------------------------------------------------------------------
# Lawson minimax
# ---------------------------------------------------------------------------

def _wls_solve(A, b, ridge):
    """Least squares via QR with a ridge fallback on rank deficiency."""
    if A.shape[1] == 0:
        return np.zeros(0, dtype=complex), False
    Q, R = np.linalg.qr(A)
    diag = np.abs(np.diag(R))
    if diag.size and np.min(diag) > 1e-14 * np.max(diag):
        c = np.linalg.solve(R, Q.conj().T @ b)
        return c, False
    G = A.conj().T @ A
    tau = ridge * max(np.max(np.abs(np.diag(G))), 1e-300)
    c = np.linalg.solve(G + tau * np.eye(A.shape[1]), A.conj().T @ b)
    return c, True


def minimax_solve(leading, free_basis, K, opts=None, *, curve=None,
                  leading_values=None, basis_matrix=None, spec=None, n=None):
    """Chebyshev polynomial of the affine family leading + span(free_basis).

    leading is a BivarPoly in normal form; free_basis a list of
    BasisElement.  Returns a ChebSolve whose minimizer never does worse
    than the pure leading term and whose tn is norm ** (1/total_degree).
    """
    opts = (opts or SolverOptions()).validated()
    npts = len(K.points)
    m = len(free_basis)
    if m > npts:
        raise ValueError(f"free basis ({m}) must not exceed the sample ({npts})")

    f = leading_values
    if f is None:
        f = leading(K.z1, K.z2)
    f = np.asarray(f, dtype=complex)
    G = basis_matrix
    if G is None:
        G = basis_values(curve, free_basis, K) if m else np.zeros((npts, 0), dtype=complex)

    scales = np.ones(m)
    if m:
        scales = np.max(np.abs(G), axis=0)
        scales[scales == 0] = 1.0
        G = G / scales

    w = np.full(npts, 1.0 / npts)
    gamma = 1.0
    best_ub = float(np.max(np.abs(f)))  # c = 0 candidate
    best_c = np.zeros(m, dtype=complex)
    lb = 0.0
    prev_ub = np.inf
    ridge_used = False
    iterations = 0
    converged = False

    for it in range(1, opts.max_iter + 1):
        iterations = it
        sw = np.sqrt(w)
        c, used = _wls_solve(G * sw[:, None], -f * sw, opts.ridge)
        ridge_used = ridge_used or used
        r = f + (G @ c if m else 0.0)
        absr = np.abs(r)
        ub = float(np.max(absr))
        lb = max(lb, float(np.sqrt(np.sum(w * absr ** 2))))
        if ub < best_ub:
            best_ub = ub
            best_c = c
        if best_ub <= lb * (1.0 + opts.tol) or best_ub == 0.0:
            converged = True
            break
        if ub > prev_ub * (1.0 + 1e-12):
            gamma = 0.5  # damp on oscillation
        prev_ub = ub
        w = w * absr ** gamma
        total = np.sum(w)
        if total <= 0.0 or not np.isfinite(total):
            converged = best_ub <= lb * (1.0 + opts.tol)
            break
        w /= total

    coeffs = best_c * (1.0 / scales) if m else best_c
    minimizer = leading
    for cval, el in zip(coeffs, free_basis):
        if cval != 0:
            minimizer = minimizer + el.poly * cval

    total_degree = int(leading.degree)
    tn = best_ub ** (1.0 / total_degree) if total_degree > 0 else float("nan")
    return ChebSolve(
        spec=spec,
        n=n if n is not None else 0,
        total_degree=total_degree,
        minimizer=minimizer,
        norm=best_ub,
        tn=tn,
        iterations=iterations,
        converged=converged,
        ridge_used=ridge_used,
        gap=max(best_ub - lb, 0.0),
        coeffs=coeffs,
    )


# ---------------------------------------------------------------------------
# Sequences and constants
# ---------------------------------------------------------------------------

def chebyshev_solve(curve, spec, K, n, opts=None):
    """One minimax solve for the class at parameter n."""
    leading, free = class_parametrize(curve, spec, n)
    fvals = _leading_values(curve, spec, n, K)
    G = basis_values(curve, free, K) if free else None
    return minimax_solve(
        leading, free, K, opts, curve=curve, leading_values=fvals,
        basis_matrix=G, spec=spec, n=n,
    )


def chebyshev_sequence(curve, spec, K, n_range, opts=None):
    """One solve per class parameter; failed parameters are skipped with a
    warning so the rest of a sweep survives."""
    n_range = list(n_range)
    if not n_range:
        raise ValueError("empty parameter range")
    if any(b <= a for a, b in zip(n_range, n_range[1:])):
        raise ValueError("parameter range must be increasing")
    out = []
    for n in n_range:
        try:
            out.append(chebyshev_solve(curve, spec, K, n, opts))
        except (ClassSpecError, ValueError) as exc:
            warnings.warn(f"solve at n={n} failed: {exc}")
    if not out:
        raise RuntimeError("every solve in the sequence failed")
    return out


def tau_sequence(curve, K, basis_id, count, opts=None):
    """tau solves for the first `count` positions of a graded basis.

    Position j's class is {b_j + span(b_1..b_{j-1})}; its norm equals
    tau_j raised to deg(b_j).  Position 1 has degree 0 and carries no tn.
    """
    elems = polyring.basis_enumerate(curve, basis_id, count)
    G = basis_values(curve, elems, K)
    out = []
    for j, el in enumerate(elems, start=1):
        if el.degree == 0:
            norm = float(np.max(np.abs(G[:, 0])))
            out.append(
                ChebSolve(
                    spec=("tau", basis_id, j),
                    n=j,
                    total_degree=0,
                    minimizer=el.poly,
                    norm=norm,
                    tn=float("nan"),
                    iterations=0,
                    converged=True,
                )
            )
            continue
        solve = minimax_solve(
            el.poly,
            elems[: j - 1],
            K,
            opts,
            curve=curve,
            leading_values=G[:, j - 1],
            basis_matrix=G[:, : j - 1],
            spec=("tau", basis_id, j),
            n=j,
        )
        out.append(solve)
    return out


@dataclass
class ConstantEstimate:
    spec: object
    values: list                # (n, tn) pairs
    estimate: float
    method: str                 # "infRule" or "tailMean"
    lower: float
    upper: float
    reliable: bool


def constant_estimate(seq, spec=None):
    """Estimate the Chebyshev constant from a sequence of solves.

    Classes closed under multiplication (powers of a single Q) have
    norm log-subadditivity, so the limit is the inf and min(tn) is used.
    Other classes follow log tn = log T + C/deg closely; the tail (last
    ceil(third)) is fit to that model and the intercept reported, which
    removes the O(1/deg) bias a plain tail mean keeps.  The raw tail min
    and max are reported as bounds; the extrapolated estimate may sit
    slightly below the tail when C > 0.
    """
    if len(seq) < 3:
        raise ValueError("need at least 3 solves to estimate a constant")
    spec = spec if spec is not None else seq[0].spec
    values = [(s.n, s.tn) for s in seq]
    if isinstance(spec, MQ):
        method = "infRule"
        estimate = min(s.tn for s in seq)
        tail = seq
    else:
        method = "tailMean"
        ntail = -((-len(seq)) // 3)  # ceil(len/3)
        tail = seq[-ntail:]
        logs = np.array([np.log(s.tn) if s.tn > 0 else -np.inf for s in tail])
        if np.any(~np.isfinite(logs)):
            estimate = 0.0
        else:
            gmean = float(np.exp(np.mean(logs)))
            degs = np.array([float(s.total_degree) for s in tail])
            if len(tail) >= 2 and len(set(degs)) >= 2:
                A = np.stack([np.ones_like(degs), 1.0 / degs], axis=1)
                (intercept, slope), *_ = np.linalg.lstsq(A, logs, rcond=None)
                estimate = float(np.exp(intercept))
                # guard against ill-fitting tails: fall back to the mean
                if not (0.7 * gmean <= estimate <= 1.3 * gmean):
                    estimate = gmean
            else:
                estimate = gmean
    lower = min(s.tn for s in tail)
    upper = max(s.tn for s in tail)
    reliable = all(s.converged for s in tail)
    return ConstantEstimate(
        spec=spec,
        values=values,
        estimate=float(estimate),
        method=method,
        lower=float(lower),
        upper=float(upper),
        reliable=reliable,
    )


def directional_constants(curve, K, max_degree, opts=None):
    """Estimates of T(K, lam_k) for every direction, via powers of v_k."""
    curve.require_directional("directional constants")
    d = curve.d
    n_top = max(3, max_degree // (d - 1))
    out = []
    for k in range(1, d + 1):
        seq = chebyshev_sequence(curve, MQ(curve.dirbasis[k - 1]), K, range(1, n_top + 1), opts)
        out.append(constant_estimate(seq))
    return out


def descending_direction_order(curve, estimates):
    """Permutation of direction indices by descending T estimate.

    Ties are broken by ascending phase of the direction, which keeps the
    relabeling deterministic.
    """
    keyed = []
    for idx, est in enumerate(estimates):
        lam = curve.directions[idx]
        keyed.append((-est.estimate, float(np.angle(lam)), idx))
    return [idx for _, _, idx in sorted(keyed)]


# ---------------------------------------------------------------------------
# Comparison report
# ---------------------------------------------------------------------------

@dataclass
class Assertion:
    name: str
    kind: str      # "eq" within rel tol, "le" with slack
    lhs: float
    rhs: float
    tol: float
    passed: bool
    note: str = ""


@dataclass
class ComparisonReport:
    assertions: list
    table: list    # rows (class label, n, norm, tn)

    @property
    def all_passed(self):
        return all(a.passed for a in self.assertions)

    def failures(self):
        return [a for a in self.assertions if not a.passed]


def _assert_eq(name, lhs, rhs, tol, note=""):
    denom = max(abs(rhs), 1e-300)
    return Assertion(name, "eq", float(lhs), float(rhs), tol,
                     abs(lhs - rhs) <= tol * denom, note)


def _assert_le(name, lhs, rhs, slack, note=""):
    return Assertion(name, "le", float(lhs), float(rhs), slack,
                     lhs <= rhs * (1.0 + slack) + 1e-300, note)


EQ_TOL = 0.10        # equality of constants, relative
INEQ_SLACK = 0.02    # inequalities, discretization slack
EXACT_TOL = 1e-9     # finite-n scale invariances


def comparison_report(curve, K, max_n, opts=None, tol_scale=1.0):
    """Numerical check of the relations between the Chebyshev constants.

    Covers the prefactor scale laws, the product and sum comparisons, the
    identification of the directional constants with the z1-power classes,
    and the matching of the S-ordering constants with the directional ones
    under the descending labeling (including their monotonicity).
    """
    curve.require_directional("comparison report")
    d = curve.d
    eq_tol = EQ_TOL * tol_scale
    ineq = INEQ_SLACK * tol_scale
    exact = EXACT_TOL * tol_scale
    asserts = []
    table = []

    def run_seq(spec, n_range):
        seq = chebyshev_sequence(curve, spec, K, n_range, opts)
        for s in seq:
            table.append((spec.describe(), s.n, s.norm, s.tn))
        return seq

    # directional constants and their ordering
    dir_ests = directional_constants(curve, K, max_n, opts)
    for k, est in enumerate(dir_ests, start=1):
        for n, tn in est.values:
            table.append((f"M(v{k})", n, float("nan"), tn))
    order = descending_direction_order(curve, dir_ests)
    t_sorted = [dir_ests[i].estimate for i in order]

    # S-ordering constants
    z_ests = []
    for k in range(d):
        n_range = range(1, max(4, max_n - k) + 1)
        seq = run_seq(Zk(k), n_range)
        z_ests.append(constant_estimate(seq))

    for k in range(1, d + 1):
        asserts.append(
            _assert_eq(
                f"S-ordering constant {k - 1} matches direction constant rank {k}",
                z_ests[k - 1].estimate,
                t_sorted[k - 1],
                eq_tol,
            )
        )
    asserts.append(
        _assert_eq(
            "first S-ordering constant equals the largest directional constant",
            z_ests[0].estimate,
            max(e.estimate for e in dir_ests),
            eq_tol,
        )
    )
    for k in range(1, d):
        asserts.append(
            _assert_le(
                f"S-ordering constants non-increasing at {k}",
                z_ests[k].estimate,
                z_ests[k - 1].estimate,
                ineq,
            )
        )

    # directional constant as a z1-power class with prefactor v_k
    for k in range(1, d + 1):
        n_range = range(1, max(4, max_n - (d - 1)) + 1)
        seq = run_seq(MRQ(curve.dirbasis[k - 1], BivarPoly.monomial(1, 0)), n_range)
        est = constant_estimate(seq)
        asserts.append(
            _assert_eq(
                f"v{k}-prefactor z1-power class matches direction constant {k}",
                est.estimate,
                dir_ests[k - 1].estimate,
                eq_tol,
            )
        )

    # monomial prefactors of total degree <= d-2 leave the constant alone
    for k in range(1, d + 1):
        for j1 in range(d - 1):
            for j2 in range(d - 1 - j1):
                pref = BivarPoly.monomial(j1, j2)
                n_top = max(3, max_n // (d - 1))
                seq = run_seq(MRQ(pref, curve.dirbasis[k - 1]), range(1, n_top + 1))
                est = constant_estimate(seq)
                asserts.append(
                    _assert_eq(
                        f"monomial prefactor z1^{j1} z2^{j2} keeps direction constant {k}",
                        est.estimate,
                        dir_ests[k - 1].estimate,
                        eq_tol,
                    )
                )

    # scale laws at every n on identical samples
    z1m = BivarPoly.monomial(1, 0)
    base = run_seq(MRQ(BivarPoly.monomial(0, 1), z1m), range(1, 7))
    scaled_r = run_seq(MRQ(BivarPoly.monomial(0, 1) * 3.0, z1m), range(1, 7))
    for s0, s1 in zip(base, scaled_r):
        asserts.append(
            _assert_eq(
                f"prefactor scale drops out at n={s0.n}",
                s1.tn,
                s0.tn,
                exact,
            )
        )
    lam = 2j
    base_q = run_seq(MRQ(BivarPoly.constant(1.0), z1m), range(1, 7))
    scaled_q = run_seq(MRQ(BivarPoly.constant(1.0), z1m * lam), range(1, 7))
    for s0, s1 in zip(base_q, scaled_q):
        asserts.append(
            _assert_eq(
                f"base scale multiplies tn by |lambda| at n={s0.n}",
                s1.tn,
                abs(lam) * s0.tn,
                exact,
            )
        )

    # product prefactor never increases the constant
    r1 = BivarPoly.monomial(0, 1)
    r2 = BivarPoly.monomial(1, 0)
    e_r1 = constant_estimate(run_seq(MRQ(r1, z1m), range(1, max(4, max_n - 1) + 1)))
    e_r1r2 = constant_estimate(run_seq(MRQ(r1 * r2, z1m), range(1, max(4, max_n - 2) + 1)))
    asserts.append(
        _assert_le("product prefactor does not increase the constant",
                   e_r1r2.estimate, e_r1.estimate, ineq)
    )

    # absorbing a power of the base into the prefactor changes nothing
    e_rq = constant_estimate(run_seq(MRQ(r1 * z1m, z1m), range(1, max(4, max_n - 2) + 1)))
    asserts.append(
        _assert_eq("prefactor absorbed into the base keeps the constant",
                   e_rq.estimate, e_r1.estimate, eq_tol)
    )

    # sum of equal-degree prefactors: finite-n bound with the 2^(1/deg) factor
    e_r2 = run_seq(MRQ(r2, z1m), range(1, 7))
    e_r1n = base  # same class as MRQ(z2, z1) above
    e_sum = run_seq(MRQ(r1 + r2, z1m), range(1, 7))
    for s_sum, s_a, s_b in zip(e_sum, e_r1n, e_r2):
        bound = 2.0 ** (1.0 / s_sum.total_degree) * max(s_a.tn, s_b.tn)
        asserts.append(
            _assert_le(
                f"sum prefactor bound at n={s_sum.n}",
                s_sum.tn,
                bound,
                ineq,
            )
        )

    return ComparisonReport(assertions=asserts, table=table)
