"""Command-line front end.

    cnrange range B.json
    cnrange crange A.json B.json --n 3
    cnrange certify A.json B.json --n 3
    cnrange check A.json B.json --theorem m1
    cnrange alpha A.json B.json
    cnrange reproduce example1

Exit codes: 0 success (or "equal" / condition holds / preset passed),
1 "unequal" / condition fails / preset failed, 2 "inconclusive",
64 usage or input-format errors, 65 numerical domain errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import xml.etree.ElementTree as ET

import numpy as np

from .crange import Budget, bordered_region, haar_cloud, nakasato_cnr_2x2
from .lab import CASES, CHECKS, EQ_TOL, WITNESS_TOL, _jsonable, alpha_star, certify_equality, reproduce
from .linalg import DEFAULT_SEED, DomainError, MatrixFormatError, as_cmat, load_matrix
from .numrange import DEFAULT_ANGLES, boundary_points, ellipse_2x2, numerical_radius

EX_USAGE = 64
EX_DATAERR = 65
SVG_CLOUD_POINTS = 2000
VERDICT_CODES = {"equal": 0, "unequal": 1, "inconclusive": 2}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(EX_USAGE)


def _positive(kind):
    def conv(text):
        try:
            v = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid value {text!r}")
        if v <= 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text!r}")
        return v

    return conv


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--samples", type=_positive(int), default=100000, help="Haar cloud size")
    common.add_argument("--orbit-samples", type=_positive(int), default=20000, help="orbit samples for regions")
    common.add_argument("--angles", type=_positive(int), default=DEFAULT_ANGLES)
    common.add_argument("--eps-grid", type=_positive(int), default=17, help="number of eps values in [0, 1]")
    common.add_argument("--tol", type=_positive(float), default=EQ_TOL, help="equality tolerance (units of r(A) r(B))")
    common.add_argument("--n", type=int, default=3, help="bordered order")
    common.add_argument("--format", choices=("json", "csv", "svg"), default="json")
    common.add_argument("--out", help="output file (default: stdout)")

    p = _Parser(prog="cnrange", description="Classical and C-numerical ranges of small complex matrices.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    s = sub.add_parser("range", parents=[common], help="W(B)")
    s.add_argument("b")
    for verb, text in (("crange", "W_A(B), bordered when n > 2"), ("certify", "test W_{A+0}(B+0) = W_A(B)"),
                       ("alpha", "largest alpha with alpha W(A) W(B) inside W_A(B)")):
        s = sub.add_parser(verb, parents=[common], help=text)
        s.add_argument("a")
        s.add_argument("b")
    s = sub.add_parser("check", parents=[common], help="evaluate one sufficient or necessary condition")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--theorem", required=True, choices=sorted(CHECKS))
    s = sub.add_parser("reproduce", parents=[common], help="run a named preset")
    s.add_argument("case", choices=CASES)
    return p


def _budget(args) -> Budget:
    return Budget(
        orbit_samples=args.orbit_samples,
        eps_count=args.eps_grid,
        cloud_samples=args.samples,
        angles=args.angles,
    )


# --------------------------------------------------------------------------
# Renderers
# --------------------------------------------------------------------------


def render_json(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2) + "\n"


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}.{i}")
    else:
        yield prefix, obj


def render_csv(obj=None, points=None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if points is not None:
        w.writerow(["x", "y"])
        for z in points:
            w.writerow([repr(float(z.real)), repr(float(z.imag))])
    else:
        w.writerow(["key", "value"])
        for k, v in _flatten(_jsonable(obj)):
            w.writerow([k, v])
    return buf.getvalue()


def _path(points) -> str:
    return " ".join(f"{z.real:.6g},{-z.imag:.6g}" for z in points)


def render_svg(boundary, cloud=None, ellipse=None) -> str:
    """Region boundary, optional cloud subsample and ellipse overlay.

    The view box is the bounding box of everything drawn plus 5% padding;
    the imaginary axis points up.
    """
    layers = [np.asarray(boundary, dtype=complex)]
    if cloud is not None and len(cloud):
        layers.append(np.asarray(cloud, dtype=complex))
    ell = ellipse.boundary(256) if ellipse is not None else None
    if ell is not None:
        layers.append(ell)
    pts = np.concatenate(layers)
    x0, x1 = float(pts.real.min()), float(pts.real.max())
    y0, y1 = float(-pts.imag.max()), float(-pts.imag.min())
    span = max(x1 - x0, y1 - y0, 1e-9)
    pad = 0.05 * span
    w, h = max(x1 - x0, 1e-9) + 2 * pad, max(y1 - y0, 1e-9) + 2 * pad
    stroke = f"{span / 300:.6g}"

    root = ET.Element("svg", {
        "xmlns": "http://www.w3.org/2000/svg",
        "viewBox": f"{x0 - pad:.6g} {y0 - pad:.6g} {w:.6g} {h:.6g}",
        "width": "600",
        "height": f"{600 * h / w:.0f}",
    })
    if cloud is not None and len(cloud):
        g = ET.SubElement(root, "g", {"fill": "#4477aa", "fill-opacity": "0.4"})
        r = f"{span / 400:.6g}"
        for z in cloud:
            ET.SubElement(g, "circle", {"cx": f"{z.real:.6g}", "cy": f"{-z.imag:.6g}", "r": r})
    ET.SubElement(root, "polygon", {
        "points": _path(layers[0]), "fill": "none", "stroke": "black", "stroke-width": stroke,
    })
    if ell is not None:
        ET.SubElement(root, "polygon", {
            "points": _path(ell), "fill": "none", "stroke": "#cc3311",
            "stroke-width": stroke, "stroke-dasharray": f"{span / 100:.6g}",
        })
    return ET.tostring(root, encoding="unicode") + "\n"


def _subsample(cloud, count=SVG_CLOUD_POINTS):
    step = max(1, len(cloud) // count)
    return cloud[::step][:count]


# --------------------------------------------------------------------------
# Verbs
# --------------------------------------------------------------------------


def _range(args):
    b = as_cmat(load_matrix(args.b))
    pts = boundary_points(b, max(args.angles, 8))
    obj = {"order": b.shape[0], "numerical_radius": numerical_radius(b),
           "boundary": [[float(z.real), float(z.imag)] for z in pts]}
    ell = None
    if b.shape[0] == 2:
        ell = ellipse_2x2(b)
        obj["ellipse"] = ell.to_json()
        pts = ell.boundary(args.angles)
    return obj, pts, None, ell, 0


def _crange(args):
    a = as_cmat(load_matrix(args.a), order=2)
    b = as_cmat(load_matrix(args.b), order=2)
    ell = nakasato_cnr_2x2(a, b)
    obj = {"n": args.n, "ellipse": ell.to_json()}
    if args.n == 2:
        return obj, ell.boundary(args.angles), None, ell, 0
    if args.n < 2:
        raise DomainError("n must be at least 2")
    region = bordered_region(a, b, args.n, _budget(args), args.seed)
    obj["region"] = region.to_json()
    cloud = None
    if args.format == "svg":
        cloud = _subsample(haar_cloud(a, b, args.n, args.samples, args.seed))
    return obj, region.vertices(), cloud, ell, 0


def _certify(args):
    a = as_cmat(load_matrix(args.a), order=2)
    b = as_cmat(load_matrix(args.b), order=2)
    cert = certify_equality(a, b, args.n, _budget(args), args.seed,
                            eq_tol=args.tol, witness_tol=max(WITNESS_TOL, 10 * args.tol))
    pts = cloud = ell = None
    if args.format == "svg":
        region = bordered_region(a, b, args.n, _budget(args), args.seed)
        pts = region.vertices()
        cloud = _subsample(haar_cloud(a, b, args.n, args.samples, args.seed))
        ell = nakasato_cnr_2x2(a, b)
    return cert.to_json(), pts, cloud, ell, VERDICT_CODES[cert.verdict]


def _check(args):
    a = as_cmat(load_matrix(args.a), order=2)
    b = as_cmat(load_matrix(args.b), order=2)
    rep = CHECKS[args.theorem](a, b)
    return rep.to_json(), None, None, None, 0 if rep.holds else 1


def _alpha(args):
    a = as_cmat(load_matrix(args.a), order=2)
    b = as_cmat(load_matrix(args.b), order=2)
    return {"alpha_star": alpha_star(a, b)}, None, None, None, 0


def _reproduce(args):
    rep = reproduce(args.case, _budget(args), args.seed)
    return rep, None, None, None, 0 if rep["passed"] else 1


VERBS = {"range": _range, "crange": _crange, "certify": _certify, "check": _check,
         "alpha": _alpha, "reproduce": _reproduce}


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        obj, pts, cloud, ell, code = VERBS[args.verb](args)
        if args.verb == "alpha" and args.format == "json" and args.out is None:
            text = f"{obj['alpha_star']:.6f}\n"
        elif args.format == "json":
            text = render_json(obj)
        elif args.format == "csv":
            text = render_csv(obj, pts)
        else:
            if pts is None:
                raise UsageError(f"--format svg is not available for '{args.verb}'")
            text = render_svg(pts, cloud, ell)
    except (MatrixFormatError, UsageError) as exc:
        sys.stderr.write(f"cnrange: error: {exc}\n")
        return EX_USAGE
    except DomainError as exc:
        sys.stderr.write(f"cnrange: domain error: {exc}\n")
        return EX_DATAERR
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
