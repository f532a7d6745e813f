"""Command-line surface for the full pipeline.

Subcommands wrap one module operation each; `realize` chains them into
the end-to-end construction: solve on the Heisenberg surface, transfer
to the sphere, and verify the complex-tangent locus numerically.

Exit codes: 0 success, 1 input error, 2 numeric non-convergence,
3 verification failure.
"""

import argparse
import hashlib
import json
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .algebra import GaussianRational, parse_poly
from .cr import (
    HEISENBERG,
    SPHERE,
    apply_cr,
    solve_heisenberg,
    torus_knot_source,
)
from .errors import CrknotsError, NoCurveFound, NonConvergence, PolyParseError
from .numgeom import (
    NumericPoly,
    TracedCurve,
    choose_pole,
    get_surface,
    linking_number,
    project_to_variety,
    sample_surface,
    stereo_project,
    tangency_defect,
    tangent_frame,
    trace_curve,
)
from .transfer import (
    RigidMotionH,
    apply_cr_punctured,
    eval_map,
    move_knot,
    pullback_numerator,
    transfer_to_sphere,
)

DEFAULT_STEP = 0.01
DEFAULT_SEEDS = 64
DEFAULT_SAMPLES = 1000


def _read_poly_arg(text, form="ambient"):
    if text.startswith("@"):
        with open(text[1:]) as fh:
            text = fh.read().strip()
    return parse_poly(text, form)


def _operator(surface):
    return SPHERE if surface == "sphere" else HEISENBERG


def _emit(pairs, porcelain):
    for key, value in pairs:
        if isinstance(value, float):
            value = f"{value:.9e}"
        if porcelain:
            print(f"{key}\t{value}")
        else:
            print(f"{key}: {value}")


# -- verification ---------------------------------------------------------


def verify_embedding(f, surface_kind, samples=DEFAULT_SAMPLES, seed=0,
                     variety_seeds=50):
    """Two-sided numeric check of the complex-tangency criterion.

    On-variety: Newton-project seeds onto {L f = 0} on the surface and
    measure the tangency defect there (should vanish).  Off-variety:
    random samples where |L f| exceeds 0.1 * (1 + |x|^deg) must show a
    defect bounded away from zero.
    """
    surface = get_surface(surface_kind)
    op = _operator(surface_kind)
    g = apply_cr(op, f)
    fn = NumericPoly(f)
    stats = {
        "surface": surface_kind,
        "samples": samples,
        "seed": seed,
        "cr_image": g.format(),
    }
    on_defects = []
    if g.is_zero:
        # holomorphic degenerate case: every point is a complex tangent
        for x in sample_surface(surface, samples, seed):
            on_defects.append(tangency_defect(tangent_frame(surface, fn, x)))
        stats["variety_points"] = len(on_defects)
        stats["max_defect_on_variety"] = max(on_defects)
        stats["off_variety_points"] = 0
        stats["min_defect_off_variety"] = None
        return stats
    gn = NumericPoly(g)
    for x in sample_surface(surface, variety_seeds, seed + 1):
        try:
            z, w = project_to_variety(surface, gn, x)
        except CrknotsError:
            continue
        on_defects.append(tangency_defect(tangent_frame(surface, fn, (z, w))))
    deg = max(g.degree(), 0)
    off_defects = []
    for x in sample_surface(surface, samples, seed):
        z, w = x
        norm = np.sqrt(abs(z) ** 2 + abs(w) ** 2)
        if abs(gn.val(z, w)) > 0.1 * (1 + norm**deg):
            off_defects.append(
                tangency_defect(tangent_frame(surface, fn, x))
            )
    stats["variety_points"] = len(on_defects)
    stats["max_defect_on_variety"] = max(on_defects) if on_defects else None
    stats["off_variety_points"] = len(off_defects)
    stats["min_defect_off_variety"] = min(off_defects) if off_defects else None
    return stats


# -- realization ----------------------------------------------------------


def _pole_decay(lq, eps_values, n_angles=16):
    """Max |L(transfer)| on the sphere circle at each |1 - w| = eps."""
    out = []
    for eps in eps_values:
        w = 1.0 - eps
        rz = np.sqrt(max(1.0 - w * w, 0.0))
        vals = [
            abs(lq.eval(rz * np.exp(1j * th), w))
            for th in np.linspace(0, 2 * np.pi, n_angles, endpoint=False)
        ]
        out.append(max(vals))
    return np.array(out)


def realize(g, r, seed=0, step=DEFAULT_STEP, seeds=DEFAULT_SEEDS,
            samples=DEFAULT_SAMPLES, match_points=200):
    """End-to-end knot realization report for the curve {g = 0} on H.

    Solves L_H(f) = g, transfers the graph function to the sphere with
    exponent r, traces the knot on the Heisenberg side, maps it through
    phi and matches it against the zero locus of the transferred CR
    image, and measures the decay order at the puncture.
    """
    if r < 2:
        raise ValueError("transfer requires r >= 2 for a C^1 embedding")
    report = {
        "input": g.format(),
        "input_sha256": hashlib.sha256(g.format().encode()).hexdigest(),
        "version": __version__,
        "r": r,
        "seed": seed,
        "step": step,
    }
    f = solve_heisenberg(g)
    report["solved"] = f.format()
    report["n"] = f.degree()
    lq = apply_cr_punctured(transfer_to_sphere(f, r))
    hsurf = get_surface("heisenberg")
    ssurf = get_surface("sphere")
    curve = trace_curve(hsurf, g, step=step, seeds=seeds, seed=seed)
    report["components"] = len(curve.components)
    report["closed_flags"] = [bool(c[1]) for c in curve.components]
    # match the phi-image of the traced knot against the sphere-side locus
    num = NumericPoly(lq.num)
    worst = 0.0
    for pts, _ in curve.components:
        stride = max(1, len(pts) // match_points)
        for p in pts[::stride]:
            z, w = complex(p[0], p[1]), complex(p[2], p[3])
            fz, fw = eval_map("phi", z, w)
            try:
                qz, qw = project_to_variety(ssurf, num, (fz, fw))
            except CrknotsError:
                worst = np.inf
                continue
            moved = np.hypot(abs(qz - fz), abs(qw - fw))
            worst = max(worst, float(moved))
    report["match_max_distance"] = worst
    # decay order of the CR image at the puncture (0, 1)
    eps = np.logspace(-4, -1, 13)
    decay = _pole_decay(lq, eps)
    slope = float(np.polyfit(np.log(eps), np.log(decay), 1)[0])
    report["pole_slope"] = slope
    tiny = _pole_decay(lq, [1e-6])[0]
    ref = _pole_decay(lq, [0.1])[0]
    report["pole_value_ratio"] = float(tiny / ref) if ref else 0.0
    # defect statistics of the Heisenberg graph embedding
    fn = NumericPoly(f)
    on = []
    for pts, _ in curve.components:
        stride = max(1, len(pts) // 50)
        for p in pts[::stride]:
            on.append(
                tangency_defect(
                    tangent_frame(hsurf, fn, (complex(p[0], p[1]),
                                              complex(p[2], p[3])))
                )
            )
    report["max_defect_on_variety"] = float(max(on))
    gn = NumericPoly(g)
    deg = max(g.degree(), 0)
    off = []
    for z, w in sample_surface(hsurf, samples, seed):
        norm = np.sqrt(abs(z) ** 2 + abs(w) ** 2)
        if abs(gn.val(z, w)) > 0.1 * (1 + norm**deg):
            off.append(tangency_defect(tangent_frame(hsurf, fn, (z, w))))
    report["min_defect_off_variety"] = float(min(off)) if off else None
    report["ok"] = bool(
        report["match_max_distance"] < 1e-5
        and slope >= r - 1.1
        and report["max_defect_on_variety"] < 1e-6
    )
    return report, curve


# -- subcommand handlers --------------------------------------------------


def _cmd_solve_h(args):
    f = solve_heisenberg(_read_poly_arg(args.poly))
    print(f.format())
    return 0


def _cmd_apply(args):
    f = _read_poly_arg(args.poly)
    print(apply_cr(_operator(args.surface), f).format())
    return 0


def _cmd_torus(args):
    if args.p < 1 or args.q < 1:
        print("error: torus parameters must be positive", file=sys.stderr)
        return 1
    src = torus_knot_source(args.p, args.q)
    image = apply_cr(SPHERE, src)
    pairs = [("source", src.format()), ("cr_image", image.format())]
    if args.trace:
        curve = trace_curve(
            get_surface("sphere"), image, step=args.step,
            seeds=args.samples or DEFAULT_SEEDS, seed=args.seed,
        )
        pairs.append(("components", len(curve.components)))
        pairs.append(
            ("closed", " ".join(str(bool(c[1])) for c in curve.components))
        )
        if len(curve.components) == 2 and all(c[1] for c in curve.components):
            allpts = np.vstack([c[0] for c in curve.components])
            pole = choose_pole(allpts, seed=args.seed)
            lk = linking_number(
                stereo_project(curve.components[0][0], pole),
                stereo_project(curve.components[1][0], pole),
            )
            pairs.append(("linking", float(lk)))
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(curve.to_json())
            pairs.append(("out", args.out))
    _emit(pairs, args.porcelain)
    return 0


def _cmd_pullback(args):
    q, m, n = pullback_numerator(_read_poly_arg(args.poly))
    _emit([("q", q.format()), ("M", m), ("N", n)], args.porcelain)
    return 0


def _cmd_trace(args):
    g = _read_poly_arg(args.poly)
    curve = trace_curve(
        get_surface(args.surface), g, step=args.step,
        seeds=args.samples or DEFAULT_SEEDS, seed=args.seed,
    )
    pairs = [("components", len(curve.components))]
    for i, (pts, closed) in enumerate(curve.components):
        pairs.append((f"component_{i}", f"points={len(pts)} closed={bool(closed)}"))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(curve.to_json())
        pairs.append(("out", args.out))
    _emit(pairs, args.porcelain)
    return 0


def _cmd_link(args):
    with open(args.curve1) as fh:
        ca = TracedCurve.from_json(fh.read())
    with open(args.curve2) as fh:
        cb = TracedCurve.from_json(fh.read())

    def first_closed(tc, path):
        for pts, closed in tc.components:
            if closed:
                return pts
        raise NonConvergence(f"no closed component in {path}")

    p1 = first_closed(ca, args.curve1)
    p2 = first_closed(cb, args.curve2)
    pole = choose_pole(np.vstack([p1, p2]), seed=args.seed)
    lk = linking_number(stereo_project(p1, pole), stereo_project(p2, pole))
    _emit([("linking", float(lk))], args.porcelain)
    return 0


def _parse_rational_list(text, n):
    parts = [Fraction(p) for p in text.split(",")]
    if len(parts) != n:
        raise ValueError(f"expected {n} comma-separated rationals")
    return parts


def _cmd_move(args):
    g = _read_poly_arg(args.poly)
    a = GaussianRational(0)
    t = Fraction(0)
    R = None
    if args.translate:
        x, y, u = _parse_rational_list(args.translate, 3)
        a, t = GaussianRational(x, y), u
    if args.rotation:
        vals = _parse_rational_list(args.rotation, 9)
        R = (tuple(vals[0:3]), tuple(vals[3:6]), tuple(vals[6:9]))
    moved = move_knot(g, RigidMotionH(a=a, t=t, R=R))
    print(moved.format())
    return 0


def _cmd_verify(args):
    f = _read_poly_arg(args.poly)
    stats = verify_embedding(
        f, args.surface, samples=args.samples or DEFAULT_SAMPLES,
        seed=args.seed,
    )
    pairs = [(k, v if v is not None else "-") for k, v in stats.items()]
    _emit(pairs, args.porcelain)
    return 0


def _cmd_realize(args):
    g = _read_poly_arg(args.poly)
    if args.r < 2:
        print(
            "error: r must be >= 2 (continuity of the embedding's "
            "derivative at the puncture)",
            file=sys.stderr,
        )
        return 1
    report, curve = realize(
        g, args.r, seed=args.seed, step=args.step,
        seeds=args.samples or DEFAULT_SEEDS,
    )
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(report, fh, indent=1)
    pairs = []
    for k, v in report.items():
        if k == "closed_flags":
            v = " ".join(str(b) for b in v)
        pairs.append((k, v if v is not None else "-"))
    _emit(pairs, args.porcelain)
    return 0 if report["ok"] else 3


def build_parser():
    ap = argparse.ArgumentParser(
        prog="crknots",
        description="Knots as complex tangents: solve, transfer, trace, verify.",
    )
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, surface=False):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--step", type=float, default=DEFAULT_STEP)
        p.add_argument("--samples", type=int, default=None)
        p.add_argument("--out", default=None)
        p.add_argument("--porcelain", action="store_true")
        if surface:
            p.add_argument(
                "--surface", choices=["sphere", "heisenberg"],
                default="sphere",
            )

    p = sub.add_parser("solve-h", help="invert the Heisenberg CR operator")
    p.add_argument("poly")
    p.set_defaults(func=_cmd_solve_h)

    p = sub.add_parser("apply", help="apply a surface CR operator")
    p.add_argument("poly")
    common(p, surface=True)
    p.set_defaults(func=_cmd_apply)

    p = sub.add_parser("torus", help="torus knot/link construction")
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    p.add_argument("--trace", action="store_true")
    common(p)
    p.set_defaults(func=_cmd_torus)

    p = sub.add_parser("pullback", help="clear denominators of p o phi")
    p.add_argument("poly")
    common(p)
    p.set_defaults(func=_cmd_pullback)

    p = sub.add_parser("trace", help="trace the zero curve on a surface")
    p.add_argument("poly")
    common(p, surface=True)
    p.set_defaults(func=_cmd_trace)

    p = sub.add_parser("link", help="Gauss linking number of two curve files")
    p.add_argument("curve1")
    p.add_argument("curve2")
    common(p)
    p.set_defaults(func=_cmd_link)

    p = sub.add_parser("move", help="rigid motion of a Heisenberg knot")
    p.add_argument("poly")
    p.add_argument("--translate", help="x,y,u rationals", default=None)
    p.add_argument("--rotation", help="9 rationals, row-major orthogonal",
                   default=None)
    p.set_defaults(func=_cmd_move)

    p = sub.add_parser("verify", help="two-sided tangency verification")
    p.add_argument("poly")
    common(p, surface=True)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("realize", help="end-to-end knot realization report")
    p.add_argument("poly")
    p.add_argument("--r", type=int, default=2)
    common(p)
    p.set_defaults(func=_cmd_realize)

    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (PolyParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (NonConvergence, NoCurveFound) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CrknotsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
