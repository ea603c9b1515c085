"""Command-line front end.

Verbs: eval | star | conj | sym | recip | zeros | factor | mult | series |
laurent | singular | cauchy | volume-cauchy | douren | selftest.

Input is a JSON object, either inline or via --input PATH. Quaternions are
always [w, x, y, z] (bare numbers are accepted for reals). Function specs:

    {"poly": [c0, c1, ...]}                  right coefficients, ascending
    {"rational": {"num": [...], "den": [...]}}
    {"douren": "f" | "g" | "h" | "ell" | "m" | "D"}

Output is deterministic JSON (sorted keys) or CSV for table-shaped reports.
Exit codes: 0 success, 2 domain/precondition errors, 3 numeric failures.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import douren as douren_mod
from .algebra import (QPoly, QRational, binom, conj_eval, real_quadratic,
                      recip_eval, reciprocal_poly, star_eval, star_product,
                      sym_eval)
from .domains import preset
from .errors import EmptyInput, ParamOutOfRange, SliceRegularError
from .integral import SymmetricRegion, local_cauchy, volume_cauchy
from .quaternion import QI, QJ, QK, Quaternion, rotate_unit, slice_decompose
from .series import classify_singularity, laurent_coeffs, spherical_coeffs
from .slicefn import SliceFunction, spherical_data
from .zeros import (factor_out_point, factor_out_sphere, multiplicities,
                    poly_zeros, zero_scan)


# ---------------------------------------------------------------------------
# Spec parsing

def parse_quat(v) -> Quaternion:
    if isinstance(v, (int, float)):
        return Quaternion(float(v))
    if isinstance(v, (list, tuple)) and len(v) == 4:
        return Quaternion(*[float(c) for c in v])
    raise ParamOutOfRange("a quaternion must be a number or [w,x,y,z]: %r" % (v,))


def parse_poly(coeffs) -> QPoly:
    return QPoly([parse_quat(c) for c in coeffs])


def parse_function(spec):
    if isinstance(spec, list):
        return parse_poly(spec)
    if not isinstance(spec, dict):
        raise ParamOutOfRange("bad function spec %r" % (spec,))
    if "poly" in spec:
        return parse_poly(spec["poly"])
    if "rational" in spec:
        num = parse_poly(spec["rational"]["num"])
        den = parse_poly(spec["rational"]["den"])
        if den.is_real():
            return QRational(num, den)
        # non-real denominator: interpret as the star quotient den^{-*} * num
        return QRational(star_product(den.conjugate(), num), den.symmetrize())
    if "douren" in spec:
        fx = douren_mod.fixtures()
        name = spec["douren"]
        try:
            return getattr(fx, {"ell": "ell"}.get(name, name))
        except AttributeError:
            raise ParamOutOfRange("unknown fixture %r" % name)
    raise ParamOutOfRange("function spec needs 'poly', 'rational' or 'douren'")


def as_slicefn(f):
    return f if isinstance(f, SliceFunction) else SliceFunction.from_exact(f)


def load_payload(args) -> dict:
    raw = args.input
    if raw is None:
        raise EmptyInput("this verb needs --input (a path or inline JSON)")
    text = raw if raw.lstrip().startswith(("{", "[")) else open(raw).read()
    return json.loads(text)


# ---------------------------------------------------------------------------
# Output

def _jsonify(x):
    if isinstance(x, Quaternion):
        return x.to_json()
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, dict):
        return {k: _jsonify(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonify(v) for v in x]
    return x


def emit(report, args) -> None:
    report = _jsonify(report)
    if args.format == "csv" and isinstance(report, dict) and "rows" in report:
        lines = [",".join(str(c) for c in report.get("columns", []))]
        for row in report["rows"]:
            lines.append(",".join(json.dumps(c, separators=(",", ":"))
                                  if isinstance(c, (list, dict)) else str(c)
                                  for c in row))
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps(report, sort_keys=True, indent=2,
                          separators=(",", ": ")) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def poly_json(p: QPoly):
    return {"coeffs": [c.to_json() for c in p.coeffs]}


# ---------------------------------------------------------------------------
# Verb handlers

def cmd_eval(args):
    data = load_payload(args)
    f = as_slicefn(parse_function(data["function"]))
    rows = []
    for pv in data["probes"]:
        q = parse_quat(pv)
        rows.append([q.to_json(), f(q).to_json()])
    return {"columns": ["probe", "value"], "rows": rows}


def _binary_op(args, op_exact, op_point):
    data = load_payload(args)
    f = parse_function(data["f"])
    g = parse_function(data["g"])
    if isinstance(f, QPoly) and isinstance(g, QPoly):
        return {"product": poly_json(op_exact(f, g))}
    rows = [[parse_quat(p).to_json(),
             op_point(f, g, parse_quat(p)).to_json()]
            for p in data.get("probes", [])]
    return {"columns": ["probe", "value"], "rows": rows}


def cmd_star(args):
    return _binary_op(args, star_product,
                      lambda f, g, q: star_eval(as_slicefn(f), as_slicefn(g), q))


def _unary_op(args, exact_key, op_exact, op_point):
    data = load_payload(args)
    f = parse_function(data["f"] if "f" in data else data["function"])
    if isinstance(f, QPoly):
        out = op_exact(f)
        if isinstance(out, QPoly):
            return {exact_key: poly_json(out)}
        return {exact_key: {"num": poly_json(out.num),
                            "den": poly_json(out.den)}}
    rows = [[parse_quat(p).to_json(), op_point(f, parse_quat(p)).to_json()]
            for p in data.get("probes", [])]
    return {"columns": ["probe", "value"], "rows": rows}


def cmd_conj(args):
    return _unary_op(args, "conjugate", lambda f: f.conjugate(), conj_eval)


def cmd_sym(args):
    return _unary_op(args, "symmetrization", lambda f: f.symmetrize(),
                     sym_eval)


def cmd_recip(args):
    return _unary_op(args, "reciprocal", reciprocal_poly, recip_eval)


def cmd_zeros(args):
    data = load_payload(args)
    f = parse_function(data["function"])
    if isinstance(f, QPoly):
        return poly_zeros(f).to_json()
    if isinstance(f, QRational):
        return poly_zeros(f.num).to_json()
    return zero_scan(f, resolution=data.get("resolution", 0.05)).to_json()


def cmd_factor(args):
    data = load_payload(args)
    f = parse_function(data["function"])
    if "point" in data:
        out = factor_out_point(f, parse_quat(data["point"]))
    else:
        x0, y0 = data["sphere"]
        out = factor_out_sphere(f, float(x0), float(y0))
    if isinstance(out, QPoly):
        return {"quotient": poly_json(out)}
    rows = [[parse_quat(p).to_json(), out(parse_quat(p)).to_json()]
            for p in data.get("probes", [])]
    return {"columns": ["probe", "quotient_value"], "rows": rows}


def cmd_mult(args):
    data = load_payload(args)
    f = parse_function(data["function"])
    p = parse_quat(data["point"])
    classical, spherical, isolated = multiplicities(f, p)
    return {"point": p.to_json(), "classical": classical,
            "spherical": spherical, "isolated": isolated}


def cmd_series(args):
    data = load_payload(args)
    f = parse_function(data["function"])
    x0, y0 = [float(v) for v in data["sphere"]]
    cap = None
    if "cap_point" in data:
        from .domains import cap_component
        fn = as_slicefn(f)
        cap = cap_component(fn.domain, parse_quat(data["cap_point"]))
    s = spherical_coeffs(f, x0, y0, cap=cap,
                         depth=data.get("depth", 32),
                         nodes=data.get("nodes", 1024),
                         window_bottom=data.get("window_bottom", -8))
    out = s.to_json()
    r1, r2 = s.cassini_radii()
    out["cassini_radii"] = [r1, r2 if math.isfinite(r2) else "inf"]
    out["spherical_order"] = s.spherical_order()
    return out


def cmd_laurent(args):
    data = load_payload(args)
    f = parse_function(data["function"])
    window = tuple(data.get("window", (-12, 12)))
    s = laurent_coeffs(f, parse_quat(data["point"]), window=window,
                       radius=data.get("radius"),
                       nodes=data.get("nodes", 2048))
    out = s.to_json()
    out["window"] = list(window)
    out["inner_radius"] = s.inner_radius()
    r2 = s.outer_radius()
    out["outer_radius"] = r2 if math.isfinite(r2) else "inf"
    return out


def cmd_singular(args):
    data = load_payload(args)
    f = parse_function(data["function"])
    rep = classify_singularity(f, parse_quat(data["point"]),
                               window=tuple(data.get("window", (-16, 8))),
                               radius=data.get("radius"),
                               nodes=data.get("nodes", 2048))
    return rep.to_json()


def _parse_region(spec) -> SymmetricRegion:
    if "ball" in spec:
        c, r = spec["ball"]
        return SymmetricRegion.ball(float(c), float(r))
    if "tube" in spec:
        x0, y0, rho = spec["tube"]
        return SymmetricRegion.sphere_shell(float(x0), float(y0), float(rho))
    raise ParamOutOfRange("region spec needs 'ball' or 'tube'")


def _parse_unit(v) -> Quaternion:
    q = parse_quat(v if len(v) == 4 else [0.0] + list(v))
    n = q.im_norm()
    if q.re() != 0.0 or n == 0.0:
        raise ParamOutOfRange("a slice unit must be purely imaginary")
    return q * (1.0 / n)


def cmd_cauchy(args):
    data = load_payload(args)
    f = as_slicefn(parse_function(data["function"]))
    U = _parse_region(data["region"])
    I = _parse_unit(data.get("unit", [0.0, 1.0, 0.0, 0.0]))
    j0 = _parse_unit(data["j0"]) if "j0" in data else None
    nodes = data.get("nodes", 1024)
    rows = []
    for pv in data["probes"]:
        q = parse_quat(pv)
        v = local_cauchy(f, I, U, q, j0=j0, nodes=nodes)
        resid = None
        if f.domain.contains(q):
            d = f(q)
            resid = (v - d).norm() / max(d.norm(), 1.0)
        rows.append([q.to_json(), v.to_json(), resid])
    return {"columns": ["probe", "value", "residual"], "rows": rows}


def cmd_volume_cauchy(args):
    data = load_payload(args)
    f = as_slicefn(parse_function(data["function"]))
    c, r = data["ball"]
    U = SymmetricRegion.ball(float(c), float(r))
    rows = []
    for pv in data["probes"]:
        q = parse_quat(pv)
        v = volume_cauchy(f, U, q,
                          curve_nodes=data.get("curve_nodes", 256),
                          sphere_nodes=data.get("sphere_nodes", 590))
        d = f(q)
        rows.append([q.to_json(), v.to_json(),
                     (v - d).norm() / max(d.norm(), 1.0)])
    return {"columns": ["probe", "value", "residual"], "rows": rows}


# ---------------------------------------------------------------------------
# douren

def cmd_douren(args):
    fx = douren_mod.fixtures()
    if args.grid:
        return _douren_grid(fx, args.grid)
    report = {"caps": _douren_cap_table(fx)}
    if args.caps:
        return report["caps"]
    report["jump"] = _douren_jump(fx)
    report["fixtures"] = _douren_fixture_report(fx)
    return report


def _douren_cap_table(fx):
    rows = []
    for name, cap, unit in (("C+", fx.cap_plus, fx.cfg.base_unit),
                            ("C-", fx.cap_minus, fx.I0)):
        p = Quaternion(-1.0) + unit * 2.0
        d = spherical_data(fx.f, p)
        rows.append([name, [-1.0, 2.0], d.value.to_json(),
                     d.derivative.to_json()])
    return {"columns": ["cap", "sphere", "spherical_value",
                        "spherical_derivative"], "rows": rows}


def _douren_jump(fx, dist: float = 1e-5):
    # approach the cut circle |z - (-1+2I)| = 1 radially from both sides
    I = fx.cfg.base_unit
    inner = Quaternion(-1.0) + I * (2.0 + 1.0 - dist)
    outer = Quaternion(-1.0) + I * (2.0 + 1.0 + dist)
    diff = fx.f(inner) - fx.f(outer)
    return {"approach_distance": dist, "difference": diff.to_json(),
            "argument_jump": diff.norm(),
            "expected": 2.0 * math.pi}


def _douren_fixture_report(fx):
    from .zeros import divides_near, vanishes_on_cap
    p_tilde = Quaternion(-1.0) + fx.I1 * 2.0
    g = fx.g
    return {
        "ghost_divisor_at_far_cap_point": bool(
            divides_near(g, p_tilde, fx.cap_minus)),
        "g_nonzero_there": g(p_tilde).norm() > 1e-3,
        "ell_vanishes_on_C+": bool(vanishes_on_cap(fx.ell, fx.cap_plus)),
        "h_value_scale_near_far_cap": fx.h(
            Quaternion(-1.0) + fx.I1 * 2.000001).norm(),
    }


def _douren_grid(fx, grid: str):
    try:
        nx, ny = [int(v) for v in grid.lower().split("x")]
    except ValueError:
        raise ParamOutOfRange("--grid wants NxM, e.g. 80x60")
    I = fx.cfg.base_unit
    xs = np.linspace(-4.0, 2.0, nx)
    ys = np.linspace(0.05, 4.0, ny)
    rows = []
    for y in ys:
        line = []
        for x in xs:
            q = Quaternion(float(x)) + I * float(y)
            if fx.domain.contains(q):
                line.append(fx.f(q).to_json())
            else:
                line.append(None)
        rows.append(line)
    return {"x": xs.tolist(), "y": ys.tolist(), "unit": I.to_json(),
            "values": rows}


# ---------------------------------------------------------------------------
# selftest: abbreviated acceptance battery

def _rand_poly(rng, terms):
    return QPoly([Quaternion(*row) for row in rng.standard_normal((terms, 4))])


def _check_representation(rng):
    worst = 0.0
    for _ in range(10):
        p = _rand_poly(rng, 5)
        f = SliceFunction.from_exact(p)
        x, y = rng.uniform(-1, 1), rng.uniform(0.2, 2)
        vals = []
        for _ in range(3):
            v = rng.standard_normal(3)
            J = Quaternion(0.0, *(v / np.linalg.norm(v)))
            fJ = p.eval(Quaternion(x) + J * y)
            fK = p.eval(Quaternion(x) - J * y)
            d = (J - (-J)).inverse()
            b = d * (J * fJ - (-J) * fK)
            c = d * (fJ - fK)
            vals.append((b, c / y))
        scale = max(v[0].norm() + v[1].norm() for v in vals) or 1.0
        for i in range(len(vals)):
            for j in range(i):
                worst = max(worst,
                            (vals[i][0] - vals[j][0]).norm() / scale,
                            (vals[i][1] - vals[j][1]).norm() / scale)
    return worst <= 1e-10, "max deviation %.2e" % worst


def _check_reciprocal(rng):
    worst = 0.0
    for _ in range(5):
        p = _rand_poly(rng, 4)
        r = reciprocal_poly(p)
        for _ in range(20):
            q = parse_quat(list(rng.standard_normal(4)))
            if p.symmetrize().eval(q).norm() < 1e-3:
                continue
            num = star_product(p, r.num)
            v = r.den.eval(q).inverse() * num.eval(q)
            worst = max(worst, (v - Quaternion(1.0)).norm())
    return worst <= 1e-9, "max |f*finv - 1| = %.2e" % worst


def _check_zero_collapse():
    p = star_product(binom(QI), binom(QJ))
    rep = poly_zeros(p)
    ok = (len(rep.isolated) == 1 and not rep.spherical
          and (rep.isolated[0].point - QI).norm() < 1e-10)
    return ok, "isolated=%d spherical=%d" % (len(rep.isolated),
                                             len(rep.spherical))


def _check_cauchy(rng):
    U = SymmetricRegion.ball(0.0, 1.0)
    p = _rand_poly(rng, 6)
    f = SliceFunction.from_exact(p)
    worst = 0.0
    for _ in range(10):
        v = rng.standard_normal(4)
        q = Quaternion(*(0.5 * v / np.linalg.norm(v)))
        got = local_cauchy(f, QI, U, q, nodes=512)
        d = p.eval(q)
        worst = max(worst, (got - d).norm() / max(d.norm(), 1.0))
    return worst <= 1e-8, "max residual %.2e" % worst


def _check_douren_caps(fx):
    I = fx.cfg.base_unit
    phi0 = fx.phi0_pbar
    worst = 0.0
    for cap, unit, sgn in ((fx.cap_plus, I, 1.0),
                           (fx.cap_minus, fx.I0, -1.0)):
        d = spherical_data(fx.f, Quaternion(-1.0) + unit * 2.0)
        want_v = (phi0 - I * (sgn * math.pi)) * 0.5
        want_d = (I * phi0 - Quaternion(sgn * math.pi)) * 0.25
        worst = max(worst, (d.value - want_v).norm(),
                    (d.derivative - want_d).norm())
    return worst <= 1e-9, "max cap-data error %.2e" % worst


def _check_jump(fx):
    j = _douren_jump(fx)
    err = abs(j["argument_jump"] - 2.0 * math.pi)
    return err <= 1e-4, "jump error %.2e" % err


def _check_ghosts(fx):
    from .zeros import divides_near, vanishes_on_cap
    p_tilde = Quaternion(-1.0) + fx.I0 * 2.0   # a far-cap point != pbar
    sg = fx.shifted_g(p_tilde)
    ok = (divides_near(sg, p_tilde, fx.cap_plus)
          and sg(p_tilde).norm() > 1e-3
          and vanishes_on_cap(fx.ell, fx.cap_plus))
    return ok, "ghost divisor + ell checks"


def _check_torus(fx):
    I = fx.cfg.base_unit
    worst = 0.0
    for ang in (0.3, 1.2, 2.0):
        J = rotate_unit(I, QJ, ang)
        q = Quaternion(-1.0) + J * 2.0
        want = (I + J) * math.pi
        worst = max(worst, (fx.D(q) - want).norm())
    return worst <= 1e-10, "max |D - pi(I+J)| = %.2e" % worst


def _check_series(rng):
    from .series import eval_series
    p = _rand_poly(rng, 7)
    s = spherical_coeffs(p, 0.3, 1.1)
    worst = 0.0
    for _ in range(10):
        q = Quaternion(*(rng.standard_normal(4) * 0.2)) + Quaternion(0.3, 1.1)
        worst = max(worst, (eval_series(s, q) - p.eval(q)).norm())
    r = laurent_coeffs(reciprocal_poly(binom(Quaternion(0.0, 1.0))),
                       QI, window=(-4, 4))
    a = r.coeffs.get(-1, Quaternion(0.0))
    lerr = (a - Quaternion(1.0)).norm()
    lerr = max(lerr, max((c.norm() for n, c in r.coeffs.items() if n != -1),
                         default=0.0))
    return worst <= 1e-9 and lerr <= 1e-10, (
        "series %.2e laurent %.2e" % (worst, lerr))


def _check_normal_form(rng):
    for _ in range(5):
        x0, y0 = rng.uniform(-1, 1), rng.uniform(0.5, 2)
        m = int(rng.integers(0, 3))
        p = Quaternion(x0, 0.0, 0.0, 0.0) + QI * y0
        n = int(rng.integers(1, 4))
        poly = real_quadratic(x0, y0)
        acc = QPoly([1.0])
        for _ in range(m):
            acc = star_product(acc, poly)
        for k in range(n):
            acc = star_product(acc, binom(p))
        classical, spherical, isolated = multiplicities(acc, p)
        if spherical != 2 * m or isolated != n or classical != m + n:
            return False, "expected (%d,%d,%d) got (%d,%d,%d)" % (
                m + n, 2 * m, n, classical, spherical, isolated)
    return True, "5 normal forms exact"


def _check_singularities(fx):
    p_plus = Quaternion(-1.0) + rotate_unit(fx.cfg.base_unit, QJ, 0.3) * 2.0
    rep = classify_singularity(fx.h, p_plus, nodes=512)
    if rep.kind != "removable":
        return False, "C+ point: %s" % rep.kind
    rep = classify_singularity(fx.h, fx.pbar, nodes=512)
    if rep.kind != "nonremovable" or rep.order != 0:
        return False, "pbar: %s ord %s" % (rep.kind, rep.order)
    far = Quaternion(-1.0) + rotate_unit(fx.cfg.base_unit, QJ, 2.2) * 2.0
    rep = classify_singularity(fx.h, far, nodes=512)
    return (rep.kind == "pole" and rep.order >= 1,
            "C- point: %s ord %s" % (rep.kind, rep.order))


def _check_min_modulus(rng):
    from .zeros import newton_polish_on_slice
    for _ in range(5):
        roots = rng.standard_normal((2, 4))
        p = star_product(binom(Quaternion(*roots[0])),
                         binom(Quaternion(*roots[1])))
        f = SliceFunction.from_exact(p)
        sc = slice_decompose(Quaternion(*roots[0]))
        unit = sc.unit if sc.unit is not None else QI
        z = newton_polish_on_slice(f, complex(sc.x, abs(sc.y)) + 0.01,
                                   unit, iters=30)
        from .quaternion import embed_complex
        if p.eval(embed_complex(z, unit)).norm() > 1e-8:
            return False, "local minimum with |f| = %.2e" % p.eval(
                embed_complex(z, unit)).norm()
    return True, "refined minima vanish"


def cmd_selftest(args):
    rng = np.random.default_rng(args.seed)
    fx = douren_mod.fixtures()
    checks = [
        ("representation-independence", lambda: _check_representation(rng)),
        ("reciprocal-identity", lambda: _check_reciprocal(rng)),
        ("zero-collapse", _check_zero_collapse),
        ("cauchy-reproduction", lambda: _check_cauchy(rng)),
        ("cap-data", lambda: _check_douren_caps(fx)),
        ("branch-jump", lambda: _check_jump(fx)),
        ("ghost-zeros", lambda: _check_ghosts(fx)),
        ("torus-zero-divisor", lambda: _check_torus(fx)),
        ("series-round-trip", lambda: _check_series(rng)),
        ("multiplicity-normal-form", lambda: _check_normal_form(rng)),
        ("singularity-classification", lambda: _check_singularities(fx)),
        ("min-modulus", lambda: _check_min_modulus(rng)),
    ]
    rows = []
    all_ok = True
    for name, fn in checks:
        try:
            ok, note = fn()
        except Exception as exc:  # a crashed check is a failed check
            ok, note = False, "%s: %s" % (type(exc).__name__, exc)
        all_ok = all_ok and ok
        rows.append([name, "pass" if ok else "FAIL", note])
        print("%-28s %s  (%s)" % (name, "pass" if ok else "FAIL", note))
    report = {"columns": ["criterion", "status", "note"], "rows": rows,
              "all_pass": all_ok}
    if args.out:
        emit(report, args)
    return None if all_ok else _Fail(report)


class _Fail:
    def __init__(self, report):
        self.report = report


# ---------------------------------------------------------------------------
# Entry point

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="spec path or inline JSON")
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--jobs", type=int, default=1,
                        help="worker count (advisory)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--grid", help="NxM slice grid for field output")

    ap = argparse.ArgumentParser(
        prog="sliceregular",
        description="calculator/verifier for quaternionic slice regular "
                    "functions on general slice domains")
    sub = ap.add_subparsers(dest="verb", required=True)
    verbs = {
        "eval": cmd_eval, "star": cmd_star, "conj": cmd_conj,
        "sym": cmd_sym, "recip": cmd_recip, "zeros": cmd_zeros,
        "factor": cmd_factor, "mult": cmd_mult, "series": cmd_series,
        "laurent": cmd_laurent, "singular": cmd_singular,
        "cauchy": cmd_cauchy, "volume-cauchy": cmd_volume_cauchy,
    }
    for name, fn in verbs.items():
        sp = sub.add_parser(name, parents=[common])
        sp.set_defaults(handler=fn)
    sp = sub.add_parser("douren", parents=[common])
    sp.add_argument("--caps", action="store_true",
                    help="emit only the cap spherical-data table")
    sp.set_defaults(handler=cmd_douren)
    sp = sub.add_parser("selftest", parents=[common])
    sp.set_defaults(handler=cmd_selftest)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = args.handler(args)
    except SliceRegularError as exc:
        sys.stderr.write(json.dumps(
            {"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return exc.exit_code
    except (KeyError, ValueError, OSError) as exc:
        sys.stderr.write(json.dumps(
            {"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 2
    if isinstance(report, _Fail):
        return 3
    if report is not None:
        emit(report, args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
