"""Command-line front end: config handling, experiments, reports.

Subcommands: curve-info, sample, cheb, robin, tfd, extremal, verify.
Exit codes: 0 pass, 1 assertion failure, 2 invalid input, 3 numerical
non-convergence.  Reports are plain text with tab-separated records and
fixed float formatting, so identical configs produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import polyring, sets
from .polyring import BASIS_C, BASIS_S, BivarPoly, CurveError, curve_new, poly_from_records
from .sets import (
    AbsV1V2Torus,
    BidiskTrace,
    PointCloud,
    SamplingError,
    Z1Disk,
    Z2Interval,
    read_point_cloud,
    sample,
    write_point_cloud,
)
from .chebyshev import (
    MQ,
    Assertion,
    Mz1jVk,
    SolverOptions,
    TildeMl,
    Zk,
    _assert_eq,
    chebyshev_sequence,
    comparison_report,
    directional_constants,
    tau_sequence,
)
from .transfinite import leja_start, leja_extend, transfinite_diameter, vn_tau_check, block_counts
from .extremal import OracleError, oracle_eval, probe_points, robin_constants, vk_max

CONFIG_SCHEMA = "curvecheb.config/1"

EXIT_OK = 0
EXIT_ASSERT = 1
EXIT_INVALID = 2
EXIT_NONCONVERGED = 3


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    curve_terms: list
    set_spec: dict
    resolution: int = 1024
    n_max: int = 8
    solver: SolverOptions = field(default_factory=SolverOptions)
    seed: int = 0
    out_dir: str | None = None
    relaxed: bool = False
    directions: list | None = None   # labels for relaxed-mode Robin constants

    @classmethod
    def from_file(cls, path):
        try:
            with open(path) as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        if doc.get("schema") != CONFIG_SCHEMA:
            raise ConfigError(f"unexpected config schema {doc.get('schema')!r}")
        curve = doc.get("curve")
        if not isinstance(curve, dict):
            raise ConfigError("config needs a curve entry")
        if "path" in curve:
            terms = polyring.curve_records(polyring.read_curve(
                Path(path).parent / curve["path"]))
        else:
            terms = curve.get("terms")
        if not terms:
            raise ConfigError("curve has no terms")
        set_spec = doc.get("set")
        if not isinstance(set_spec, dict) or "kind" not in set_spec:
            raise ConfigError("config needs a set entry with a kind")
        solver = doc.get("solver", {})
        opts = SolverOptions(
            max_iter=int(solver.get("max_iter", 500)),
            tol=float(solver.get("tol", 1e-8)),
            ridge=float(solver.get("ridge", 1e-12)),
        )
        cfg = cls(
            curve_terms=terms,
            set_spec=set_spec,
            resolution=int(doc.get("resolution", 1024)),
            n_max=int(doc.get("n_max", 8)),
            solver=opts,
            seed=int(doc.get("seed", 0)),
            out_dir=doc.get("out_dir"),
            relaxed=bool(doc.get("relaxed", False)),
            directions=doc.get("directions"),
        )
        cfg.validate()
        return cfg

    def validate(self):
        if self.resolution < sets.MIN_RESOLUTION:
            raise ConfigError(f"resolution must be >= {sets.MIN_RESOLUTION}")
        if self.n_max < 1:
            raise ConfigError("n_max must be positive")
        if self.seed < 0:
            raise ConfigError("seed must be nonnegative")
        try:
            self.solver.validated()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def build_curve(self):
        return curve_new(poly_from_records(self.curve_terms), relaxed=self.relaxed)

    def build_descriptor(self, base_dir="."):
        spec = dict(self.set_spec)
        kind = spec.pop("kind")
        res = int(spec.pop("resolution", self.resolution))
        try:
            if kind == "z1disk":
                return Z1Disk(r=float(spec["r"]), resolution=res)
            if kind == "z2interval":
                return Z2Interval(lo=float(spec["lo"]), hi=float(spec["hi"]), resolution=res)
            if kind == "absv1v2torus":
                return AbsV1V2Torus(r1=float(spec["r1"]), r2=float(spec["r2"]), resolution=res)
            if kind == "bidisktrace":
                return BidiskTrace(r1=float(spec["r1"]), r2=float(spec["r2"]), resolution=res)
            if kind == "pointcloud":
                pts = read_point_cloud(Path(base_dir) / spec["path"])
                return PointCloud(points=tuple(pts))
        except (KeyError, ValueError, OSError) as exc:
            raise ConfigError(f"bad set descriptor: {exc}") from exc
        raise ConfigError(f"unknown set kind {kind!r}")

    def direction_labels(self):
        if self.directions is None:
            return None
        out = []
        for item in self.directions:
            if item is None:
                out.append(None)
            else:
                out.append(complex(item[0], item[1]))
        return out


def _fmt(x):
    if x is None:
        return "nan"
    if isinstance(x, complex):
        return f"{x.real:.12g}{x.imag:+.12g}j"
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "-inf" if x < 0 else "inf"
        return f"{x:.12g}"
    return str(x)


def _write_lines(path, lines):
    with open(path, "w") as fh:
        fh.write("\n".join(lines))
        fh.write("\n")


def parse_class_spec(curve, text):
    """Parse a class spec string.

    Grammar: mv:K (powers of v_K), zk:K, mz1j:J,K, mtilde:L,J, mz1
    (powers of z1).
    """
    name, _, args = text.partition(":")
    name = name.strip().lower()
    try:
        if name == "mv":
            k = int(args)
            return MQ(curve.dirbasis[k - 1])
        if name == "mz1":
            return MQ(BivarPoly.monomial(1, 0))
        if name == "zk":
            return Zk(int(args))
        if name == "mz1j":
            j, k = (int(x) for x in args.split(","))
            return Mz1jVk(j, k)
        if name == "mtilde":
            l, j = (int(x) for x in args.split(","))
            return TildeMl(l, j)
    except (ValueError, IndexError, TypeError, AttributeError) as exc:
        raise ConfigError(f"bad class spec {text!r}: {exc}") from exc
    raise ConfigError(f"unknown class spec {text!r}")


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_curve_info(cfg, out):
    curve = cfg.build_curve()
    lines = ["curve degree\t" + str(curve.d),
             "lead coeff\t" + _fmt(curve.lead_coeff),
             "relaxed\t" + str(curve.relaxed).lower()]
    for i, lam in enumerate(curve.directions, start=1):
        lines.append(f"direction {i}\t{_fmt(complex(lam))}")
    if curve.dirbasis is not None:
        for i, v in enumerate(curve.dirbasis, start=1):
            recs = polyring.curve_records(v)
            body = " ".join(f"({r['a']},{r['b']})={_fmt(complex(r['re'], r['im']))}" for r in recs)
            lines.append(f"v{i}\t{body}")
        table = polyring.cjk_table(curve)
        for j in range(curve.d):
            row = " ".join(_fmt(complex(c)) for c in table.entries[j])
            lines.append(f"cjk row {j}\t{row}")
    print("\n".join(lines))
    if out:
        _write_lines(Path(out) / "curve_info.txt", lines)
    return EXIT_OK


def cmd_sample(cfg, out):
    curve = cfg.build_curve()
    K = sample(curve, cfg.build_descriptor())
    print(f"sampled {len(K)} points, max residual {K.max_residual:.3e}")
    if out:
        write_point_cloud(Path(out) / "sample.txt", [tuple(p) for p in K.points])
    return EXIT_OK


def cmd_cheb(cfg, out, class_text, n_min, n_max, allow_unconverged):
    curve = cfg.build_curve()
    spec = parse_class_spec(curve, class_text)
    if n_max is None:
        n_max = cfg.n_max
    if n_min > n_max:
        raise ConfigError("empty parameter range")
    K = sample(curve, cfg.build_descriptor())
    seq = chebyshev_sequence(curve, spec, K, range(n_min, n_max + 1), cfg.solver)
    lines = ["class\tn\tnorm\ttn"]
    for s in seq:
        lines.append(f"{spec.describe()}\t{s.n}\t{_fmt(s.norm)}\t{_fmt(s.tn)}")
    print("\n".join(lines))
    if out:
        _write_lines(Path(out) / "cheb_table.tsv", lines)
    if not allow_unconverged and any(not s.converged for s in seq):
        print("non-convergence in at least one solve", file=sys.stderr)
        return EXIT_NONCONVERGED
    return EXIT_OK


def cmd_robin(cfg, out):
    curve = cfg.build_curve()
    K = sample(curve, cfg.build_descriptor())
    rep = robin_constants(curve, K, cfg.n_max, cfg.solver,
                          directions=cfg.direction_labels())
    lines = ["direction\trho\tT\tvia\tdiscrepancy\treliable"]
    for e in rep.per_direction:
        lam = _fmt(complex(e.lam)) if e.lam is not None else "-"
        lines.append(f"{lam}\t{_fmt(e.rho)}\t{_fmt(e.t_estimate)}\t{e.via}"
                     f"\t{_fmt(e.discrepancy)}\t{str(e.reliable).lower()}")
    lines.append("ordering\t" + " ".join(str(i + 1) for i in rep.ordering))
    lines.append("strictly increasing\t" + str(rep.strict).lower())
    print("\n".join(lines))
    if out:
        _write_lines(Path(out) / "robin.tsv", lines)
    return EXIT_OK


def cmd_tfd(cfg, out, basis):
    curve = cfg.build_curve()
    K = sample(curve, cfg.build_descriptor())
    est, run = transfinite_diameter(curve, K, basis, cfg.n_max)
    lines = ["step\tre_z1\tim_z1\tre_z2\tim_z2\tincrement\tdegree\testimate"]
    ests = dict(run.diam_estimates)
    for i, (idx, pt) in enumerate(zip(run.selected, run.points), start=1):
        deg = run._elems[i - 1].degree
        dest = _fmt(ests.get(deg)) if (i == len(run.points) or run._elems[i].degree > deg) else ""
        lines.append(
            f"{i}\t{_fmt(pt[0].real)}\t{_fmt(pt[0].imag)}\t{_fmt(pt[1].real)}"
            f"\t{_fmt(pt[1].imag)}\t{_fmt(run.increments[i - 1])}\t{deg}\t{dest}"
        )
    lines.append(f"diameter estimate\t{_fmt(est)}")
    print(f"basis {basis} degree {cfg.n_max}: diameter estimate {est:.6g}")
    if out:
        _write_lines(Path(out) / f"tfd_{basis}.tsv", lines)
    return EXIT_OK


def cmd_extremal(cfg, out, n):
    curve = cfg.build_curve()
    K = sample(curve, cfg.build_descriptor())
    n = n or cfg.n_max
    pts = probe_points(curve, [1.5, 2.5, 4.0], 48)
    rep = vk_max(curve, K, n, pts, cfg.solver)
    lines = ["re_z1\tim_z1\tre_z2\tim_z2\tV_max\tV_tilde_max\toracle\tgap"]
    for i in range(len(pts)):
        orac = rep.oracle[i] if rep.oracle is not None else float("nan")
        fam = rep.max_families[i]
        gap = abs(fam - orac) if rep.oracle is not None else float("nan")
        lines.append(
            f"{_fmt(pts[i, 0].real)}\t{_fmt(pts[i, 0].imag)}\t{_fmt(pts[i, 1].real)}"
            f"\t{_fmt(pts[i, 1].imag)}\t{_fmt(float(rep.max_vk[i]))}"
            f"\t{_fmt(float(rep.max_tilde[i]))}\t{_fmt(float(orac))}\t{_fmt(float(gap))}"
        )
    print("\n".join(lines[: min(6, len(lines))]))
    if rep.gap_families is not None:
        print(f"sup gap vs oracle: {rep.gap_families:.3e}")
    if out:
        _write_lines(Path(out) / "extremal_grid.tsv", lines)
    return EXIT_OK


def cmd_verify(cfg, out, tol_scale):
    curve = cfg.build_curve()
    K = sample(curve, cfg.build_descriptor())
    assertions = []
    table_lines = ["class\tn\tnorm\ttn"]

    if curve.dirbasis is not None:
        rep = comparison_report(curve, K, cfg.n_max, cfg.solver, tol_scale=tol_scale)
        assertions.extend(rep.assertions)
        for label, n, norm, tn in rep.table:
            table_lines.append(f"{label}\t{n}\t{_fmt(norm)}\t{_fmt(tn)}")

        dir_ests = directional_constants(curve, K, cfg.n_max, cfg.solver)
        product = float(np.prod([e.estimate for e in dir_ests])) ** (1.0 / curve.d)
        depth = max(cfg.n_max, 24)
        m_needed, _ = block_counts(curve, BASIS_S, depth)
        if m_needed <= len(K.points):
            dS, _ = transfinite_diameter(curve, K, BASIS_S, depth)
            dC, _ = transfinite_diameter(curve, K, BASIS_C, depth)
            assertions.append(_assert_eq("diameter agrees between orderings", dS, dC,
                                         0.10 * tol_scale))
            assertions.append(_assert_eq("diameter matches directional product (S)",
                                         dS, product, 0.15 * tol_scale))
            assertions.append(_assert_eq("diameter matches directional product (C)",
                                         dC, product, 0.15 * tol_scale))

    # tau ratio inequality along the S ordering
    depth_tau = min(cfg.n_max, 8)
    m_tau, _ = block_counts(curve, BASIS_S, depth_tau)
    run = leja_start(curve, K, BASIS_S)
    leja_extend(run, m_tau)
    taus = tau_sequence(curve, K, BASIS_S, m_tau, cfg.solver)
    slack = 0.05 * tol_scale
    for rec in vn_tau_check(run, taus, slack=slack):
        assertions.append(Assertion(
            name=f"determinant ratio bound at index {rec.index}",
            kind="le", lhs=rec.ratio, rhs=rec.bound, tol=slack,
            passed=rec.ratio <= rec.bound * (1.0 + slack) + 1e-300,
        ))

    robin = robin_constants(curve, K, cfg.n_max, cfg.solver,
                            directions=cfg.direction_labels())
    for i, e in enumerate(robin.per_direction, start=1):
        assertions.append(Assertion(
            name=f"robin constant finite for direction {i}",
            kind="le", lhs=abs(e.rho), rhs=50.0, tol=0.0,
            passed=math.isfinite(e.rho),
        ))
        if math.isfinite(e.discrepancy):
            bound = 5e-2 * tol_scale
            assertions.append(Assertion(
                name=f"robin cross-check for direction {i}",
                kind="le", lhs=e.discrepancy, rhs=bound, tol=0.0,
                passed=e.discrepancy <= bound,
            ))

    try:
        pts = probe_points(curve, [1.5, 2.5, 4.0], 48)
        oracle_eval(K.descriptor, pts, curve=curve)
        rep = vk_max(curve, K, cfg.n_max, pts, cfg.solver, robin=robin)
        bound = 5e-2 * tol_scale
        assertions.append(Assertion(
            name="families max matches the closed form",
            kind="le", lhs=rep.gap_families, rhs=bound, tol=0.0,
            passed=rep.gap_families <= bound,
        ))
    except OracleError:
        pass

    lines = ["name\tkind\tlhs\trhs\ttol\tverdict"]
    for a in assertions:
        lines.append(f"{a.name}\t{a.kind}\t{_fmt(a.lhs)}\t{_fmt(a.rhs)}"
                     f"\t{_fmt(a.tol)}\t{'pass' if a.passed else 'FAIL'}")
    n_fail = sum(1 for a in assertions if not a.passed)
    lines.append(f"total\t{len(assertions)}\tfailed\t{n_fail}\t\t"
                 + ("pass" if n_fail == 0 else "FAIL"))
    print("\n".join(lines))
    if out:
        _write_lines(Path(out) / "verify_report.txt", lines)
        _write_lines(Path(out) / "verify_table.tsv", table_lines)
    return EXIT_OK if n_fail == 0 else EXIT_ASSERT


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="path to a JSON run config")
    common.add_argument("--n-max", type=int, default=None)
    common.add_argument("--resolution", type=int, default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--relaxed", action="store_true", default=None)
    common.add_argument("--out", default=None, help="output directory for report files")
    common.add_argument("--allow-unconverged", action="store_true")

    p = argparse.ArgumentParser(prog="curvecheb",
                                description="Chebyshev constants and extremal "
                                            "functions on plane algebraic curves")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("curve-info", parents=[common])
    sub.add_parser("sample", parents=[common])
    c = sub.add_parser("cheb", parents=[common])
    c.add_argument("--class", dest="class_text", required=True)
    c.add_argument("--n-min", type=int, default=1)
    sub.add_parser("robin", parents=[common])
    t = sub.add_parser("tfd", parents=[common])
    t.add_argument("--basis", choices=[BASIS_S, BASIS_C], default=BASIS_S)
    e = sub.add_parser("extremal", parents=[common])
    e.add_argument("--n", type=int, default=None)
    v = sub.add_parser("verify", parents=[common])
    v.add_argument("--tolerance-scale", type=float, default=1.0)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig.from_file(args.config)
        if args.n_max is not None:
            cfg.n_max = args.n_max
        if args.resolution is not None:
            cfg.resolution = args.resolution
        if args.seed is not None:
            cfg.seed = args.seed
        if args.relaxed:
            cfg.relaxed = True
        cfg.validate()
        out = args.out
        if out is None and cfg.out_dir is not None:
            out = cfg.out_dir
        if out:
            Path(out).mkdir(parents=True, exist_ok=True)

        if args.command == "curve-info":
            return cmd_curve_info(cfg, out)
        if args.command == "sample":
            return cmd_sample(cfg, out)
        if args.command == "cheb":
            return cmd_cheb(cfg, out, args.class_text, args.n_min, args.n_max,
                            args.allow_unconverged)
        if args.command == "robin":
            return cmd_robin(cfg, out)
        if args.command == "tfd":
            return cmd_tfd(cfg, out, args.basis)
        if args.command == "extremal":
            return cmd_extremal(cfg, out, args.n)
        if args.command == "verify":
            return cmd_verify(cfg, out, args.tolerance_scale)
        raise ConfigError(f"unknown command {args.command!r}")
    except (ConfigError, CurveError, SamplingError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
