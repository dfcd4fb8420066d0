"""Command-line harness: CSV data (plus SVG previews) for every experiment.

Exit codes: 0 success, 1 input error, 2 numerical failure.
"""
from __future__ import annotations

import argparse
import ast
import csv
import io
import math
import operator
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import svg
from .bounds import CompositionMode, composition_upper_bound, rotation_lower_bound_sq
from .measures import DiscreteMeasure, Moments2, from_points, moments, pushforward
from .ot import NumericalError, emd, emd2
from .shapes import (GAUSSIAN_COVS, Gaussian, Shape, ShapeId, analytic_moments,
                     make_shape, project_psd)
from .symmat import SymMat2
from .transforms import composition_map, rotation
from .wassmap import circle_fit, distance_matrix, mds

EXIT_OK, EXIT_INPUT, EXIT_NUMERICAL = 0, 1, 2
GAUSSIAN = "gaussian"


class InputError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------- parsing

_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
        ast.Div: operator.truediv, ast.Pow: operator.pow}


def parse_number(text: str) -> float:
    """Arithmetic on literals and ``pi`` (``pi/2``, ``2pi``, ``-0.25``)."""
    src = text.strip().lower()
    if not src:
        raise InputError("empty number")
    # allow implicit multiplication such as "2pi"
    for i in range(len(src) - 1, 0, -1):
        if src.startswith("pi", i) and (src[i - 1].isdigit() or src[i - 1] == "."):
            src = src[:i] + "*" + src[i:]

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        raise InputError(f"unsupported expression {text!r}")

    try:
        value = ev(ast.parse(src, mode="eval"))
    except (SyntaxError, ZeroDivisionError, OverflowError) as exc:
        raise InputError(f"cannot parse number {text!r}") from exc
    if not math.isfinite(value):
        raise InputError(f"non-finite number {text!r}")
    return value


@dataclass(frozen=True)
class AngleGrid:
    count: int
    lo: float
    hi: float
    exclusive: bool = False

    def values(self) -> np.ndarray:
        if self.count == 1:
            return np.array([self.lo])
        return np.linspace(self.lo, self.hi, self.count, endpoint=not self.exclusive)


def parse_angles(text: str) -> AngleGrid:
    """``COUNT:MIN:MAX``; a trailing ``)`` makes MAX exclusive."""
    raw = text.strip()
    exclusive = raw.endswith(")")
    if exclusive:
        raw = raw[:-1]
    parts = raw.split(":")
    if len(parts) != 3:
        raise InputError(f"--angles expects COUNT:MIN:MAX, got {text!r}")
    try:
        count = int(parts[0])
    except ValueError as exc:
        raise InputError(f"angle count must be an integer, got {parts[0]!r}") from exc
    if count < 1:
        raise InputError("angle count must be at least 1")
    lo, hi = parse_number(parts[1]), parse_number(parts[2])
    if hi < lo:
        raise InputError("angle MAX must not be below MIN")
    return AngleGrid(count, lo, hi, exclusive)


def parse_pair(text: str, name: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise InputError(f"{name} expects two comma-separated values")
    return parse_number(parts[0]), parse_number(parts[1])


def parse_shape(args) -> ShapeId:
    if args.shape == GAUSSIAN:
        parts = args.cov.split(",")
        if len(parts) != 3:
            raise InputError("--cov expects XX,XY,YY")
        xx, xy, yy = (parse_number(p) for p in parts)
        cov = SymMat2(xx, yy, xy)
        if not cov.is_psd():
            raise InputError("--cov is not positive semidefinite")
        return Gaussian(cov, parse_pair(args.mean, "--mean"), seed=args.seed)
    return Shape(args.shape)


def read_point_cloud(path: str) -> DiscreteMeasure:
    """CSV with header ``x,y`` or ``x,y,w``."""
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            fields = [f.strip() for f in (reader.fieldnames or [])]
            if fields[:2] != ["x", "y"] or fields[2:] not in ([], ["w"]):
                raise InputError(f"{path}: header must be x,y or x,y,w")
            reader.fieldnames = fields
            rows = list(reader)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise InputError(f"{path}: no points")
    try:
        pts = np.array([[float(r["x"]), float(r["y"])] for r in rows])
        w = np.array([float(r["w"]) for r in rows]) if "w" in fields else None
    except (TypeError, ValueError) as exc:
        raise InputError(f"{path}: malformed row") from exc
    if not np.all(np.isfinite(pts)) or (w is not None and not np.all(np.isfinite(w))):
        raise InputError(f"{path}: non-finite values")
    if w is not None and abs(w.sum() - 1.0) > 1e-9:
        raise InputError(f"{path}: weights sum to {w.sum():.12g}, expected 1")
    return from_points(pts, w)


# ---------------------------------------------------------------- output

def fmt(v) -> str:
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return ""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".12g")


def csv_text(header: list[str], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def write_outputs(out: Path, files: dict[str, str]) -> None:
    try:
        out.mkdir(parents=True, exist_ok=True)
        for name, text in files.items():
            (out / name).write_text(text)
    except OSError as exc:
        raise InputError(f"cannot write to {out}: {exc}") from exc


# ---------------------------------------------------------------- commands

def _shape_moments(shape: ShapeId, measure: DiscreteMeasure, which: str) -> Moments2:
    if which == "analytic":
        return analytic_moments(shape)
    m = moments(measure)
    cov = project_psd(m.covariance)
    return Moments2(m.m1, m.m2, cov.xx, cov.yy, cov.xy)


def _tag(shape: ShapeId) -> str:
    return GAUSSIAN if isinstance(shape, Gaussian) else shape.value


def cmd_rotate_bound(args) -> int:
    shape = parse_shape(args)
    thetas = (args.angles or AngleGrid(50, 0.0, math.pi / 2)).values()
    x = make_shape(shape, args.n)
    mom = _shape_moments(shape, x, args.moments)
    rows = []
    for th in thetas:
        w2v = math.sqrt(max(emd2(x, pushforward(x, rotation(th))), 0.0))
        lb = math.sqrt(rotation_lower_bound_sq(mom, th))
        rel = (w2v - lb) / w2v if th != 0.0 and w2v > 0.0 else None
        rows.append((th, w2v, lb, rel))
    text = csv_text(["theta", "w2", "lower_bound", "rel_err"], rows)
    plot = svg.line_plot(thetas, {"w2": [r[1] for r in rows],
                                  "lower bound": [r[2] for r in rows]},
                         title=f"rotation: {_tag(shape)}")
    write_outputs(Path(args.out), {"rotate_bound.csv": text, "rotate_bound.svg": plot})
    return EXIT_OK


def cmd_composition(args) -> int:
    shape = parse_shape(args)
    thetas = (args.angles or AngleGrid(50, 0.0, math.pi / 2)).values()
    alpha = np.array(parse_pair(args.alpha, "--alpha"))
    lam = parse_pair(args.lam, "--lambda")
    if lam[0] <= 0 or lam[1] <= 0:
        raise InputError("--lambda entries must be positive")
    stochastic = isinstance(shape, Gaussian)
    trials = args.trials if stochastic else 1
    if trials < 1:
        raise InputError("--trials must be at least 1")
    w2s = np.zeros((trials, len(thetas)))
    bounds = np.zeros((trials, len(thetas)))
    for t in range(trials):
        spec = Gaussian(shape.cov, shape.mean, shape.seed, t) if stochastic else shape
        x = make_shape(spec, args.n)
        mom = _shape_moments(spec, x, "empirical" if stochastic else args.moments)
        for k, th in enumerate(thetas):
            y = pushforward(x, composition_map(alpha, lam, th))
            w2s[t, k] = math.sqrt(max(emd2(x, y), 0.0))
            bounds[t, k] = composition_upper_bound(mom, alpha, lam, th, args.mode)
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.where(w2s > 0, (bounds - w2s) / w2s, np.nan)
    rows = []
    for k, th in enumerate(thetas):
        finite = rel[:, k][np.isfinite(rel[:, k])]
        rows.append((th, w2s[:, k].mean(), w2s[:, k].std(), bounds[:, k].mean(),
                     finite.mean() if finite.size else None,
                     finite.std() if finite.size else None))
    header = ["theta", "w2_mean", "w2_std", "upper_bound", "rel_err_mean", "rel_err_std"]
    plot = svg.line_plot(thetas, {"w2": w2s.mean(0), "upper bound": bounds.mean(0)},
                         title=f"composition: {_tag(shape)}")
    write_outputs(Path(args.out), {"composition.csv": csv_text(header, rows),
                                   "composition.svg": plot})
    return EXIT_OK


def cmd_wassmap(args) -> int:
    shape = parse_shape(args)
    thetas = (args.angles or AngleGrid(50, 0.0, 2 * math.pi, exclusive=True)).values()
    if len(thetas) < 3:
        raise InputError("wassmap needs at least three angles")
    x = make_shape(shape, args.n)
    if args.metric == "emd":
        family = [pushforward(x, rotation(th)) for th in thetas]
        d = distance_matrix(family, emd2, workers=args.workers)
    else:
        mom = _shape_moments(shape, x, args.moments)
        d = np.array([[rotation_lower_bound_sq(mom, ti, tj) if i != j else 0.0
                       for j, tj in enumerate(thetas)] for i, ti in enumerate(thetas)])
        d = 0.5 * (d + d.T)
    emb = mds(d, k=2)
    center, radius, rms = circle_fit(emb.coords)
    rows = [(i, th, px, py) for i, (th, (px, py)) in enumerate(zip(thetas, emb.coords))]
    summary = csv_text(["center_x", "center_y", "radius", "rms_residual", "neg_eigs"],
                       [(center[0], center[1], radius, rms, emb.n_negative)])
    write_outputs(Path(args.out), {
        "wassmap.csv": csv_text(["index", "theta", "x", "y"], rows),
        "wassmap_summary.csv": summary,
        "wassmap.svg": svg.scatter_plot(emb.coords, title=f"embedding: {_tag(shape)}"),
    })
    return EXIT_OK


def cmd_emd(args) -> int:
    mu = read_point_cloud(args.file_a)
    nu = read_point_cloud(args.file_b)
    if mu.dim != 2 or nu.dim != 2:
        raise InputError("point clouds must be planar")
    plan, cost = emd(mu, nu)
    print(f"w2,{fmt(math.sqrt(max(cost, 0.0)))}")
    print(f"cost,{fmt(cost)}")
    if args.plan:
        rows = zip(plan.rows, plan.cols, plan.mass)
        path = Path(args.plan)
        write_outputs(path.parent if str(path.parent) else Path("."),
                      {path.name: csv_text(["source", "target", "mass"], rows)})
    return EXIT_OK


def cmd_moments(args) -> int:
    shape = parse_shape(args)
    ref = analytic_moments(shape)
    disc = moments(make_shape(shape, args.n))
    print(f"{'moment':<8}{'analytic':>22}{'discretized':>22}{'abs_diff':>22}")
    for key in ("m1", "m2", "a", "b", "c", "e1sq", "e2sq"):
        u, v = getattr(ref, key), getattr(disc, key)
        print(f"{key:<8}{fmt(u):>22}{fmt(v):>22}{fmt(abs(u - v)):>22}")
    return EXIT_OK


# ---------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="w2bounds", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    shapes = [s.value for s in Shape] + [GAUSSIAN]
    s1 = GAUSSIAN_COVS[0]

    def shape_flags(p, n_default=100):
        p.add_argument("--shape", choices=shapes, required=True)
        p.add_argument("--n", type=int, default=n_default, help="atoms per measure")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--cov", default=f"{s1.xx:g},{s1.xy:g},{s1.yy:g}",
                       help="Gaussian covariance XX,XY,YY")
        p.add_argument("--mean", default="0,0", help="Gaussian mean X,Y")

    def grid_flags(p):
        p.add_argument("--angles", type=_argtype(parse_angles), default=None,
                       help="COUNT:MIN:MAX in radians, pi allowed; trailing ')' excludes MAX")
        p.add_argument("--moments", choices=["analytic", "empirical"], default="analytic")
        p.add_argument("--out", default=".", help="output directory")

    p = sub.add_parser("rotate-bound", help="emd vs rotation lower bound over an angle grid")
    shape_flags(p)
    grid_flags(p)
    p.set_defaults(func=cmd_rotate_bound)

    p = sub.add_parser("composition", help="emd vs composition upper bound")
    shape_flags(p)
    grid_flags(p)
    p.add_argument("--alpha", default="0,0")
    p.add_argument("--lambda", dest="lam", default="1,1")
    p.add_argument("--trials", type=int, default=20, help="repetitions for Gaussian shapes")
    p.add_argument("--mode", choices=[m.value for m in CompositionMode],
                   default=CompositionMode.EQUALITY_CASE.value)
    p.set_defaults(func=cmd_composition)

    p = sub.add_parser("wassmap", help="MDS embedding of a rotated family")
    shape_flags(p)
    grid_flags(p)
    p.add_argument("--metric", choices=["emd", "lower-bound"], default="emd")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_wassmap)

    p = sub.add_parser("emd", help="W2 between two point-cloud CSV files")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--plan", default=None, help="write the transport plan CSV here")
    p.set_defaults(func=cmd_emd)

    p = sub.add_parser("moments", help="analytic vs discretized moments")
    shape_flags(p)
    p.set_defaults(func=cmd_moments)
    return parser


def _argtype(fn):
    def wrapped(text):
        try:
            return fn(text)
        except InputError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from exc
    wrapped.__name__ = fn.__name__
    return wrapped


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "n", 1) < 1:
        parser.error("--n must be at least 1")
    try:
        return args.func(args)
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (InputError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
