"""Laurent and spherical power series, singularity classification.

Two expansion shapes:

* slice Laurent at a point p: f(q) = sum_n (q-p)^{*n} a_n, with star powers
  of (q-p). Restricted to the slice of p these are plain complex powers, so
  the coefficients are contour integrals of the slice restriction.

* spherical series at a sphere x0+y0*S:
  f(q) = sum_n [(q-x0)^2+y0^2]^n (a_{2n} + q a_{2n+1}),
  convergent on Cassini shells of the modulus |(q-x0)^2+y0^2|.

A point with order 0 need not be removable: on a non-symmetric domain the
in-slice restriction can extend holomorphically while no slice regular
extension exists. Removability is therefore decided by a boundedness probe
over a 4-dimensional neighborhood, not by the order alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import QPoly, QRational, binom, real_quadratic, reciprocal_poly
from .domains import sigma_tau_omega
from .errors import (MaxTermsExceeded, NoAnnulus, NotIsolatedSingularity,
                     NumericError, OutsideConvergenceRegion)
from .quaternion import (Quaternion, QI, embed_complex, emb_arr, from_qarr,
                         qmul_arr, slice_decompose)
from .slicefn import SliceFunction, spherical_data

_NOISE = 1e-12


# ---------------------------------------------------------------------------
# Slice Laurent series

@dataclass
class LaurentSeries:
    """f(q) = sum (q-center)^{*n} a_n over the window [nmin, nmax]."""

    center: Quaternion
    coeffs: dict  # n -> Quaternion
    radius: float  # contour radius used for extraction
    nodes: int
    _pow_cache: dict = field(default_factory=dict, repr=False)

    def scale(self) -> float:
        return max((c.norm() for c in self.coeffs.values()), default=0.0)

    def significant(self, noise=_NOISE):
        s = self.scale()
        return sorted(n for n, c in self.coeffs.items() if c.norm() > noise * s)

    def inner_radius(self) -> float:
        """limsup |a_{-m}|^{1/m}; zero when the negative part terminates
        inside the window (a finite principal part converges everywhere)."""
        neg = [n for n in self.significant() if n < 0]
        if not neg or min(neg) > min(self.coeffs) + 1:
            return 0.0
        tail = sorted(neg)[:6]
        return max(self.coeffs[n].norm() ** (1.0 / -n) for n in tail)

    def outer_radius(self) -> float:
        pos = [n for n in self.significant() if n > 0]
        if not pos or max(pos) < max(self.coeffs) - 1:
            return math.inf
        tail = sorted(pos)[-6:]
        r = max(self.coeffs[n].norm() ** (1.0 / n) for n in tail)
        return math.inf if r == 0.0 else 1.0 / r

    def _power(self, n: int):
        """(q-center)^{*n} as an exactly evaluable object (n may be < 0)."""
        got = self._pow_cache.get(n)
        if got is not None:
            return got
        b = binom(self.center)
        p = QPoly([1.0])
        for _ in range(abs(n)):
            p = p.star(b)
        out = p if n >= 0 else reciprocal_poly(p)
        self._pow_cache[n] = out
        return out

    def eval(self, q: Quaternion, region_check: bool = True) -> Quaternion:
        if region_check:
            sig, tau, _ = sigma_tau_omega(q, self.center)
            if not (self.inner_radius() < tau and sig < self.outer_radius()):
                raise OutsideConvergenceRegion(
                    "probe outside the sigma/tau annulus of the series")
        acc = Quaternion()
        for n in sorted(self.coeffs):
            c = self.coeffs[n]
            if c.norm() == 0.0:
                continue
            acc = acc + self._power(n).eval(q) * c
        return acc

    def to_json(self):
        return {"center": self.center.to_json(),
                "radius": self.radius, "nodes": self.nodes,
                "coeffs": {str(n): self.coeffs[n].to_json()
                           for n in sorted(self.coeffs)}}


def _contour_values(f, zc: complex, unit: Quaternion, radius: float,
                    nodes: int):
    theta = 2.0 * math.pi * np.arange(nodes) / nodes
    z = zc + radius * np.exp(1j * theta)
    vals = f.eval_slice_many(z, unit)
    return theta, z, np.atleast_2d(vals)


def _coeff_from_samples(theta, vals, radius, n, unit):
    """a_n = mean of e^{-J n theta} r^{-n} f(samples), kernel on the left."""
    kern = np.exp(-1j * n * theta) * radius ** (-float(n))
    prod = qmul_arr(emb_arr(kern, unit), vals)
    return Quaternion(*prod.mean(axis=0))


def _disk_in_domain(dom, zc, unit, radius, rings=12, spokes=48):
    """True iff the punctured disk of the given radius sits inside the
    domain of the slice.

    Pointwise membership alone can miss a measure-zero cut crossing the
    disk, so when the domain exposes a boundary distance every grid point
    must clear the grid spacing; a cut threading the disk then leaves some
    grid point too close to the boundary.
    """
    spacing = max(2.0 * math.pi * radius / spokes, radius / rings)
    theta = 2.0 * math.pi * np.arange(spokes) / spokes
    for k in range(1, rings + 1):
        r = radius * k / rings
        for t in theta:
            q = embed_complex(zc + r * np.exp(1j * t), unit)
            if not dom.contains(q):
                return False
            if dom.boundary_distance is not None \
                    and dom.boundary_distance(q) < spacing:
                return False
    return True


def _pick_radius(f, zc, unit, radius=None):
    if radius is not None:
        if not _disk_in_domain(f.domain, zc, unit, radius):
            raise NoAnnulus("requested contour leaves the domain")
        return radius
    r = 0.4
    for _ in range(24):
        if _disk_in_domain(f.domain, zc, unit, r):
            return r
        r *= 0.5
    raise NoAnnulus("no punctured disk around the center fits the domain")


def laurent_coeffs(f, p: Quaternion, window=(-12, 12), radius=None,
                   nodes: int = 2048) -> LaurentSeries:
    """Slice-Laurent coefficients of f at p by trapezoid contour quadrature
    in the slice of p (spectrally accurate for analytic restrictions)."""
    from .algebra import _as_slicefn
    f = _as_slicefn(f)
    sc = slice_decompose(p)
    unit = sc.unit if sc.unit is not None else QI
    zc = complex(sc.x, sc.y)
    radius = _pick_radius(f, zc, unit, radius)
    theta, _, vals = _contour_values(f, zc, unit, radius, nodes)
    coeffs = {}
    nmin, nmax = window
    for n in range(nmin, nmax + 1):
        coeffs[n] = _coeff_from_samples(theta, vals, radius, n, unit)
    return LaurentSeries(p, coeffs, radius, nodes)


# ---------------------------------------------------------------------------
# Spherical series

@dataclass
class SphericalSeries:
    """f(q) = sum_n [(q-x0)^2+y0^2]^n (a_{2n} + q a_{2n+1})."""

    x0: float
    y0: float
    pairs: dict  # n -> (a_{2n}, a_{2n+1})
    exact: bool = False  # exact peeling: the negative part is known finite

    def scale(self) -> float:
        return max((a.norm() + b.norm() for a, b in self.pairs.values()),
                   default=0.0)

    def significant(self, noise=_NOISE):
        s = self.scale()
        return sorted(n for n, (a, b) in self.pairs.items()
                      if a.norm() + b.norm() > noise * s)

    def cassini_radii(self):
        """(R1, R2) bounds on the Cassini modulus from coefficient decay.

        A window that ends in insignificant pairs is a terminating series:
        its radius on that side is unconstrained. Otherwise the limsup is
        estimated from the last few significant entries.
        """
        sig = self.significant()
        if not sig:
            return 0.0, math.inf
        have = sorted(self.pairs)
        r1 = 0.0
        if not self.exact and min(sig) < 0 and min(sig) <= min(have) + 1:
            tail = [n for n in sig if n < 0][:6]
            r1 = max((self.pairs[n][0].norm()
                      + self.pairs[n][1].norm()) ** (1.0 / -n) for n in tail)
        if max(sig) <= 0 or max(sig) < max(have):
            return r1, math.inf
        tail = [n for n in sig if n > 0][-6:]
        r = max((self.pairs[n][0].norm()
                 + self.pairs[n][1].norm()) ** (1.0 / n) for n in tail)
        return r1, (math.inf if r == 0.0 else 1.0 / r)

    def spherical_order(self) -> int:
        sig = self.significant()
        m = min(sig) if sig else 0
        return -2 * m if m < 0 else 0

    def eval(self, q: Quaternion, region_check: bool = True) -> Quaternion:
        quad = real_quadratic(self.x0, self.y0)
        u = quad.eval(q)  # lies in the slice of q: commutes with q
        mod = u.norm()
        if region_check:
            r1, r2 = self.cassini_radii()
            if not (r1 < mod < r2) and not (r1 == 0.0 and mod == 0.0):
                if mod <= r1 or mod >= r2:
                    raise OutsideConvergenceRegion(
                        "Cassini modulus %g outside (%g, %g)" % (mod, r1, r2))
        acc = Quaternion()
        last = math.inf
        for n in sorted(self.pairs):
            a, b = self.pairs[n]
            if a.norm() + b.norm() == 0.0:
                continue
            if n >= 0:
                un = ONE_Q if n == 0 else _qpow(u, n)
            else:
                un = _qpow(u.inverse(), -n)
            term = un * (a + q * b)
            acc = acc + term
            last = term.norm()
        sig = self.significant()
        if sig and last > 1e-9 * max(acc.norm(), 1.0) and max(sig) >= 0 \
                and len(sig) > 24:
            raise MaxTermsExceeded("spherical series not converged in the "
                                   "available window")
        return acc

    def to_json(self):
        return {"sphere": [self.x0, self.y0],
                "pairs": {str(n): [a.to_json(), b.to_json()]
                          for n, (a, b) in sorted(self.pairs.items())}}


ONE_Q = Quaternion(1.0)


def _qpow(u: Quaternion, n: int) -> Quaternion:
    out = ONE_Q
    for _ in range(n):
        out = out * u
    return out


def _poly_spherical_pairs(p: QPoly, x0: float, y0: float):
    pairs = {}
    n = 0
    h = p
    while not h.is_zero():
        q, r0, r1 = h.divide_real_quadratic(x0, y0)
        pairs[n] = (r0, r1)
        h = q
        n += 1
    pairs[n] = (Quaternion(), Quaternion())  # terminating sentinel
    return pairs


def _rational_spherical_pairs(f: QRational, x0: float, y0: float,
                              depth: int):
    """Exact recursion on rationals: reduce the denominator by the sphere
    polynomial, then peel pairs with exact division at every step."""
    quad = real_quadratic(x0, y0)
    den = f.den
    shift = 0
    while den.degree >= 2:
        g, r0, r1 = den.divide_real_quadratic(x0, y0)
        if (r0.norm() + r1.norm()) > 1e-12 * (den.scale() or 1.0):
            break
        den, shift = g, shift + 1
    h = QRational(f.num, den, reduce=False)
    pairs = {}
    for k in range(depth):
        n = k - shift
        # exact spherical data: h = den^{-1} num with den nonzero on sphere
        num_b, num_c = h.num.sphere_restriction(x0, y0)
        den_b, den_c = h.den.sphere_restriction(x0, y0)
        # solve affine data of the quotient from two symmetric sphere points
        pJ = Quaternion(x0, y0, 0.0, 0.0)
        pK = Quaternion(x0, -y0, 0.0, 0.0)
        vJ = (den_b + pJ.im() * den_c).inverse() * (num_b + pJ.im() * num_c)
        vK = (den_b + pK.im() * den_c).inverse() * (num_b + pK.im() * num_c)
        J, K = Quaternion(0, 1, 0, 0), Quaternion(0, -1, 0, 0)
        d = (J - K).inverse()
        b = d * (J * vJ - K * vK)
        c = d * (vJ - vK)
        a1 = c / y0
        a0 = b - Quaternion(x0) * a1
        pairs[n] = (a0, a1)
        rem_num = h.num - h.den.star(QPoly([a0, a1]))
        qout, r0, r1 = rem_num.divide_real_quadratic(x0, y0)
        ref = max(h.num.scale(), h.den.scale(), 1e-300)
        if (r0.norm() + r1.norm()) > 1e-7 * ref:
            raise NumericError("spherical recursion residual too large")
        if qout.is_zero():
            pairs[n + 1] = (Quaternion(), Quaternion())  # terminated
            break
        h = QRational(qout, h.den, reduce=False)
    return pairs


def _numeric_spherical_pairs(f: SliceFunction, x0: float, y0: float, cap,
                             depth: int, nodes: int, window_bottom: int):
    """Two-slice contour extraction with sample subtraction.

    Restricted to a slice L_J in the cap, term n of the spherical series
    has leading slice-Laurent order n at z0 = x0+iy0. Extracting the order-n
    coefficient on two slices J, K and solving the 2x2 representation
    system yields (a_{2n}, a_{2n+1}); subtracting the term from the stored
    contour samples keeps the extraction stable at every depth.
    """
    from .domains import cap_component
    if cap is None:
        cap = cap_component(f.domain, Quaternion(x0, y0, 0.0, 0.0))
    J = cap.representative
    K = cap.second_unit(J)
    zc = complex(x0, y0)
    rJ = _pick_radius(f, zc, J, None)
    rK = _pick_radius(f, zc, K, None)
    r = min(rJ, rK)
    thJ, zJ, valsJ = _contour_values(f, zc, J, r, nodes)
    thK, zK, valsK = _contour_values(f, zc, K, r, nodes)
    dinv = (J - K).inverse()
    pairs = {}
    for n in range(window_bottom, depth + 1):
        cJ = _coeff_from_samples(thJ, valsJ, r, n, J)
        cK = _coeff_from_samples(thK, valsK, r, n, K)
        # c = (2 y0)^n J^n (w + J v) with w = a0 + x0 a1, v = y0 a1
        sJ = _unit_pow_inv(J, n) * cJ / (2.0 * y0) ** n
        sK = _unit_pow_inv(K, n) * cK / (2.0 * y0) ** n
        v = dinv * (sJ - sK)
        w = sJ - J * v
        a1 = v / y0
        a0 = w - Quaternion(x0) * a1
        pairs[n] = (a0, a1)
        if a0.norm() + a1.norm() > 0.0:
            valsJ = valsJ - _term_samples(zJ, J, x0, y0, n, a0, a1)
            valsK = valsK - _term_samples(zK, K, x0, y0, n, a0, a1)
    return pairs


def _unit_pow_inv(J: Quaternion, n: int) -> Quaternion:
    """J^{-n} for an imaginary unit J."""
    k = (-n) % 4
    return (ONE_Q, J, Quaternion(-1.0), -J)[k]


def _term_samples(z, unit, x0, y0, n, a0, a1):
    """Samples of [(z-x0)^2+y0^2]^n (a0 + z a1) on the slice L_unit."""
    u = (z - x0) ** 2 + y0 ** 2
    un = u ** float(n) if n >= 0 else (1.0 / u) ** float(-n)
    const = np.broadcast_to(np.array(a0.components()), (z.size, 4))
    lin = qmul_arr(emb_arr(z, unit),
                   np.broadcast_to(np.array(a1.components()), (z.size, 4)))
    return qmul_arr(emb_arr(un, unit), const + lin)


def spherical_coeffs(f, x0: float, y0: float, cap=None, depth: int = 32,
                     nodes: int = 1024, window_bottom: int = -8
                     ) -> SphericalSeries:
    """Spherical series pairs (a_{2n}, a_{2n+1}) at the sphere x0+y0*S.

    Exact peeling for polynomial/rational backing (negative indices arise
    when the rational denominator vanishes on the sphere); two-slice
    contour extraction otherwise.
    """
    if isinstance(f, QPoly):
        return SphericalSeries(x0, y0, _poly_spherical_pairs(f, x0, y0), exact=True)
    if isinstance(f, QRational):
        return SphericalSeries(x0, y0,
                               _rational_spherical_pairs(f, x0, y0, depth),
                               exact=True)
    if isinstance(f, SliceFunction) and f.backing == "polynomial":
        return SphericalSeries(x0, y0,
                               _poly_spherical_pairs(f.payload, x0, y0),
                               exact=True)
    if isinstance(f, SliceFunction) and f.backing == "rational":
        return SphericalSeries(x0, y0,
                               _rational_spherical_pairs(f.payload, x0, y0,
                                                         depth), exact=True)
    pairs = _numeric_spherical_pairs(f, x0, y0, cap, depth, nodes,
                                     window_bottom)
    return SphericalSeries(x0, y0, pairs)


# ---------------------------------------------------------------------------
# Singularity classification

@dataclass
class SingularityReport:
    point: Quaternion
    kind: str  # removable | nonremovable | pole | essential
    order: float  # 0, pole order, or inf for essential
    series: LaurentSeries

    def to_json(self):
        return {"point": self.point.to_json(), "kind": self.kind,
                "order": (self.order if math.isfinite(self.order) else "inf"),
                "noise_floor": _NOISE,
                "coeffs": self.series.to_json()["coeffs"]}


def _bounded_near(f: SliceFunction, p: Quaternion, rng=None) -> bool:
    """Boundedness probe over shrinking 4-dimensional neighborhoods of p.

    Random directions alone can miss a blow-up concentrated along the
    sphere of p (angular offset ~r paired with radial offset ~r^2), which
    is exactly how a cap-level obstruction manifests while the in-slice
    restriction stays bounded. Structured near-sphere probes cover it.
    """
    from .quaternion import perp_unit, rotate_unit
    rng = rng or np.random.default_rng(2024)
    sc = slice_decompose(p)
    sup = []
    for r in (1e-2, 1e-3, 1e-4):
        best = 0.0
        got = 0
        for _ in range(400):
            v = rng.normal(size=4)
            v /= np.linalg.norm(v)
            q = p + Quaternion(*(v * r))
            if f.domain.contains(q):
                best = max(best, f.eval_unchecked(q).norm())
                got += 1
            if got >= 64:
                break
        if sc.unit is not None:
            t1 = perp_unit(sc.unit)
            t2 = sc.unit * t1  # second tangent: unit x t1 as quaternions
            for k in range(8):
                a = 2.0 * math.pi * k / 8.0
                toward = t1 * math.cos(a) + t2 * math.sin(a)
                J = rotate_unit(sc.unit, toward, r)
                for dx, dy in ((r * r, 0.0), (0.0, r * r), (-r * r, 0.0),
                               (0.0, -r * r)):
                    q = Quaternion(sc.x + dx) + J * (sc.y + dy)
                    if f.domain.contains(q):
                        best = max(best, f.eval_unchecked(q).norm())
        sup.append(best)
    # growth by 30x per decade marks a genuine blow-up
    return not (sup[2] > 30.0 * sup[0] + 1e-30 or sup[1] > 30.0 * sup[0])


def classify_singularity(f, p: Quaternion, window=(-16, 8), radius=None,
                         nodes: int = 2048) -> SingularityReport:
    """Classification of the singularity of f at p.

    Pole order comes from the significant negative slice-Laurent window; a
    run of >= 8 consecutive deep coefficients above the noise floor
    (1e-12 x scale) declares an essential singularity. Order 0 is split
    into removable vs nonremovable by the 4D boundedness probe, because on
    non-symmetric domains the restriction can be holomorphic at p while no
    slice regular extension exists.
    """
    from .algebra import _as_slicefn
    f = _as_slicefn(f)
    series = laurent_coeffs(f, p, window=window, radius=radius, nodes=nodes)
    neg = [n for n in series.significant() if n < 0]
    nmin = window[0]
    if neg:
        deep = sorted(neg)
        run = 1
        longest = 1
        for a, b in zip(deep, deep[1:]):
            run = run + 1 if b == a + 1 else 1
            longest = max(longest, run)
        if longest >= 8 and deep[0] <= nmin + 1:
            return SingularityReport(p, "essential", math.inf, series)
        return SingularityReport(p, "pole", float(-deep[0]), series)
    if _bounded_near(f, p):
        return SingularityReport(p, "removable", 0.0, series)
    return SingularityReport(p, "nonremovable", 0.0, series)


def eval_series(series, q: Quaternion, region_check: bool = True) -> Quaternion:
    if isinstance(series, (LaurentSeries, SphericalSeries)):
        return series.eval(q, region_check=region_check)
    raise TypeError("expected LaurentSeries or SphericalSeries")
