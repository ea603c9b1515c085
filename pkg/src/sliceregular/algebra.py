"""The *-algebra of slice regular functions.

Two modes:

* exact polynomial/rational mode: QPoly stores right coefficients
  (f(q) = a0 + q a1 + ... + q^n an) and the regular product is coefficient
  convolution; QRational keeps a quaternionic numerator over a
  slice-preserving real-coefficient denominator, so pointwise division is
  legitimate.

* pointwise mode: the product, conjugate, symmetrization and reciprocal are
  computed at a single point from spherical data (cap-constant value and
  derivative) alone. Nothing ever pairs q with its conjugate point q-bar:
  on a non-symmetric domain q-bar may sit in a different cap, or outside
  the domain altogether.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import (DegeneratePair, DomainMismatch, IdenticallyZero,
                     SymmetrizationZero, ZeroPolynomial)
from .quaternion import (ONE, Quaternion, ZERO, emb_arr, qmul_arr,
                         slice_decompose)

_COEFF_REAL_TOL = 1e-9


def _as_quat(c):
    if isinstance(c, Quaternion):
        return c
    return Quaternion(c)


class QPoly:
    """Quaternionic polynomial with right coefficients, ascending degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [_as_quat(c) for c in coeffs]
        while cs and cs[-1].norm() == 0.0:
            cs.pop()
        self.coeffs = tuple(cs)

    def __repr__(self):
        return "QPoly(%r)" % (list(self.coeffs),)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def is_real(self, tol=_COEFF_REAL_TOL):
        scale = self.scale() or 1.0
        return all(c.im_norm() <= tol * scale for c in self.coeffs)

    def scale(self):
        return max((c.norm() for c in self.coeffs), default=0.0)

    def to_json(self):
        return {"coeffs": [c.to_json() for c in self.coeffs]}

    @classmethod
    def from_json(cls, data):
        return cls([Quaternion.from_json(c) for c in data["coeffs"]])

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, float, Quaternion)):
            other = QPoly([other])
        if not isinstance(other, QPoly):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [ZERO] * (n - len(self.coeffs))
        b = list(other.coeffs) + [ZERO] * (n - len(other.coeffs))
        return QPoly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return QPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, (int, float, Quaternion)):
            other = QPoly([other])
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def right_mul(self, c) -> "QPoly":
        """f(q)·c (coefficients a_n c)."""
        c = _as_quat(c)
        return QPoly([a * c for a in self.coeffs])

    def left_mul_real(self, r: float) -> "QPoly":
        return QPoly([a * float(r) for a in self.coeffs])

    def star(self, other: "QPoly") -> "QPoly":
        """Regular product: coefficient convolution c_k = sum a_i b_{k-i}."""
        if self.is_zero() or other.is_zero():
            return QPoly()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return QPoly(out)

    def conjugate(self) -> "QPoly":
        return QPoly([c.conj() for c in self.coeffs])

    def symmetrize(self) -> "QPoly":
        """f^s = f * f^c; has real coefficients, coerced exactly real."""
        s = self.star(self.conjugate())
        scale = s.scale() or 1.0
        for c in s.coeffs:
            if c.im_norm() > _COEFF_REAL_TOL * scale:
                raise AssertionError("symmetrization produced non-real "
                                     "coefficient %r" % (c,))
        return QPoly([Quaternion(c.w) for c in s.coeffs])

    def real_coeffs(self):
        if not self.is_real():
            raise ValueError("polynomial does not have real coefficients")
        return [c.w for c in self.coeffs]

    # -- evaluation ----------------------------------------------------------

    def eval(self, q: Quaternion) -> Quaternion:
        """Horner from the top: a0 + q(a1 + q(a2 + ...))."""
        q = _as_quat(q)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = q * acc + c
        return acc

    __call__ = eval

    def eval_slice_many(self, z: np.ndarray, unit: Quaternion) -> np.ndarray:
        """Vectorized evaluation at x+y*unit for complex z = x+iy, as (N,4)."""
        z = np.atleast_1d(z).astype(complex)
        out = np.zeros((z.size, 4))
        pw = np.ones_like(z)
        for c in self.coeffs:
            out += qmul_arr(emb_arr(pw, unit),
                            np.broadcast_to(np.array(c.components()),
                                            (z.size, 4)))
            pw = pw * z
        return out

    def cullen(self) -> "QPoly":
        """Exact Cullen derivative a1 + q·2a2 + ... + q^{n-1}·n·a_n."""
        return QPoly([c * float(n) for n, c in enumerate(self.coeffs)][1:])

    # -- division ------------------------------------------------------------

    def divide_right_linear(self, p: Quaternion):
        """Exact right division by (q - p): f = (q-p)*g + r with r constant."""
        if self.is_zero():
            return QPoly(), ZERO
        n = self.degree
        g = [ZERO] * max(n, 0)
        acc = self.coeffs[n]
        for k in range(n - 1, -1, -1):
            g[k] = acc
            acc = self.coeffs[k] + p * acc
        return QPoly(g), acc

    def divide_real_quadratic(self, x0: float, y0: float):
        """Division by the real quadratic (q-x0)^2 + y0^2.

        Returns (quotient, r0, r1) with f = [(q-x0)^2+y0^2]*quotient
        + q·r1 + r0. The divisor is central, so ordinary synthetic
        division is valid.
        """
        b = -2.0 * x0
        c = x0 * x0 + y0 * y0
        a = list(self.coeffs)
        n = len(a)
        quot = [ZERO] * max(n - 2, 0)
        for k in range(n - 1, 1, -1):
            t = a[k]
            quot[k - 2] = t
            a[k - 1] = a[k - 1] - t * b
            a[k - 2] = a[k - 2] - t * c
        r1 = a[1] if n > 1 else ZERO
        r0 = a[0] if n > 0 else ZERO
        return QPoly(quot), r0, r1

    def sphere_restriction(self, x0: float, y0: float):
        """Spherical value and derivative of f on the sphere x0 + y0·S.

        On the sphere, f(q) = q·r1 + r0, so f°_s = x0·r1 + r0 and
        f'_s = r1 (exact).
        """
        _, r0, r1 = self.divide_real_quadratic(x0, y0)
        return Quaternion(x0) * r1 + r0, r1


def qpoly(*coeffs) -> QPoly:
    return QPoly(coeffs)


def binom(p: Quaternion) -> QPoly:
    """The linear polynomial q - p."""
    return QPoly([-_as_quat(p), ONE])


def real_quadratic(x0: float, y0: float) -> QPoly:
    """(q - x0)^2 + y0^2, the minimal real polynomial of the sphere."""
    return QPoly([x0 * x0 + y0 * y0, -2.0 * x0, 1.0])


class QRational:
    """num over a slice-preserving real denominator: f(q) = den(q)^{-1} num(q)."""

    __slots__ = ("num", "den")

    def __init__(self, num: QPoly, den: QPoly, reduce=True):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator polynomial")
        den = QPoly([Quaternion(c) for c in den.real_coeffs()])
        if reduce:
            num, den = _reduce_common_real_factors(num, den)
        # normalize the denominator to be monic
        lead = den.coeffs[-1].w
        self.num = num.left_mul_real(1.0 / lead)
        self.den = den.left_mul_real(1.0 / lead)

    def __repr__(self):
        return "QRational(%r, %r)" % (self.num, self.den)

    def eval(self, q: Quaternion) -> Quaternion:
        d = self.den.eval(q)
        return d.inverse() * self.num.eval(q)

    __call__ = eval

    def eval_slice_many(self, z, unit):
        z = np.atleast_1d(z).astype(complex)
        dv = np.polyval(list(reversed(self.den.real_coeffs())), z)
        nv = self.num.eval_slice_many(z, unit)
        return qmul_arr(emb_arr(1.0 / dv, unit), nv)

    def cullen_eval(self, q: Quaternion) -> Quaternion:
        d = self.den.eval(q)
        dprime = self.den.cullen().eval(q)
        di = d.inverse()
        return (-(di * di) * dprime * self.num.eval(q)
                + di * self.num.cullen().eval(q))

    def star(self, other):
        if isinstance(other, QPoly):
            other = QRational(other, QPoly([1.0]))
        return QRational(self.num.star(other.num), self.den.star(other.den))

    def conjugate(self):
        return QRational(self.num.conjugate(), self.den)

    def symmetrize(self):
        return QRational(self.num.symmetrize(), self.den.star(self.den))

    def reciprocal(self):
        if self.num.is_zero():
            raise IdenticallyZero("reciprocal of the zero function")
        return QRational(self.den.star(self.num.conjugate()),
                         self.num.symmetrize())

    def to_json(self):
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data):
        return cls(QPoly.from_json(data["num"]), QPoly.from_json(data["den"]))


def _reduce_common_real_factors(num: QPoly, den: QPoly, tol=1e-10):
    """Cancel real linear/quadratic factors of den that also divide num."""
    changed = True
    while changed and den.degree >= 1 and not num.is_zero():
        changed = False
        rc = den.real_coeffs()
        roots = np.roots(list(reversed(rc)))
        nscale = num.scale() or 1.0
        for r in roots:
            if abs(r.imag) <= 1e-12:
                p = Quaternion(r.real)
                g, rem = num.divide_right_linear(p)
                if rem.norm() <= tol * nscale:
                    dg, drem = den.divide_right_linear(p)
                    if drem.norm() <= tol * (den.scale() or 1.0):
                        num, den = g, dg
                        changed = True
                        break
            elif r.imag > 1e-12:
                x0, y0 = r.real, r.imag
                g, r0, r1 = num.divide_real_quadratic(x0, y0)
                if (r0.norm() + r1.norm()) <= tol * nscale:
                    dg, d0, d1 = den.divide_real_quadratic(x0, y0)
                    if (d0.norm() + d1.norm()) <= tol * (den.scale() or 1.0):
                        num, den = g, dg
                        changed = True
                        break
    return num, den


# ---------------------------------------------------------------------------
# The Phi kernel and the regular reciprocal

def phi(a: Quaternion, b: Quaternion) -> Quaternion:
    """Phi(a,b) = (|a|² conj(a) + conj(b)·a·conj(b)) / ((|a|²-|b|²)² + (2 re(a conj(b)))²)."""
    a = _as_quat(a)
    b = _as_quat(b)
    na2, nb2 = a.norm2(), b.norm2()
    cross = 2.0 * (a * b.conj()).re()
    den = (na2 - nb2) ** 2 + cross * cross
    if den == 0.0:
        raise DegeneratePair("Phi undefined: |a| = |b| and re(a conj(b)) = 0")
    return (a.conj() * na2 + b.conj() * a * b.conj()) / den


def reciprocal_poly(f: QPoly) -> QRational:
    """f^{-*} = (f^s)^{-1} f^c as an exact rational."""
    if f.is_zero():
        raise ZeroPolynomial("reciprocal of the zero polynomial")
    return QRational(f.conjugate(), f.symmetrize())


# ---------------------------------------------------------------------------
# Pointwise star-calculus from spherical data

def star_eval(f, g, q: Quaternion) -> Quaternion:
    """(f*g)(q) from spherical data: f°g° + im(q)² f'g' + im(q)(f°g' + f'g°)."""
    sc = slice_decompose(q)
    if sc.unit is None:
        return f(q) * g(q)
    fd = f.spherical(q)
    gd = g.spherical(q)
    im = q.im()
    return (fd.value * gd.value + im * im * (fd.derivative * gd.derivative)
            + im * (fd.value * gd.derivative + fd.derivative * gd.value))


def conj_eval(f, q: Quaternion) -> Quaternion:
    """f^c(q) = conj(f°_s) + im(q)·conj(f'_s)."""
    sc = slice_decompose(q)
    if sc.unit is None:
        return f(q).conj()
    fd = f.spherical(q)
    return fd.value.conj() + q.im() * fd.derivative.conj()


def sym_eval(f, q: Quaternion) -> Quaternion:
    """f^s(q) = |f°|² - |im(q) f'|² + 2 im(q) re(f° conj(f'))."""
    sc = slice_decompose(q)
    if sc.unit is None:
        v = f(q)
        return Quaternion(v.norm2())
    fd = f.spherical(q)
    imq = q.im()
    a = fd.value
    b = imq * fd.derivative
    return (Quaternion(a.norm2() - b.norm2())
            + imq * (2.0 * (a * fd.derivative.conj()).re()))


def recip_eval(f, q: Quaternion) -> Quaternion:
    """f^{-*}(q) via the Phi kernel; plain inverse on the real trace."""
    sc = slice_decompose(q)
    if sc.unit is None:
        return f(q).inverse()
    fd = f.spherical(q)
    a = fd.value
    b = fd.derivative * sc.y
    return phi(a, b) - sc.unit * phi(b, a)


def product_point(f, g, p: Quaternion) -> Quaternion:
    """(f*g)(p) = f(p)·g~(f(p)^{-1} p f(p)), g~ rebuilt from g's cap data."""
    fp = f(p)
    sc = slice_decompose(p)
    if sc.unit is None:
        return fp * g(p)
    if fp.norm() == 0.0:
        return ZERO
    moved = fp.inverse() * p * fp
    gd = g.spherical(p)
    return fp * (gd.value + moved.im() * gd.derivative)


def quotient_point(f, g, p: Quaternion) -> Quaternion:
    """(f^{-*}*g)(p) = f~(T_f(p))^{-1} g~(T_f(p)), T_f(p) = f^c(p)^{-1} p f^c(p)."""
    sc = slice_decompose(p)
    if sc.unit is None:
        fp = f(p)
        if fp.norm() == 0.0:
            raise SymmetrizationZero("f vanishes at the real probe")
        return fp.inverse() * g(p)
    fc = conj_eval(f, p)
    if fc.norm() == 0.0:
        raise SymmetrizationZero("f^c vanishes at the probe")
    t = fc.inverse() * p * fc
    fd = f.spherical(p)
    gd = g.spherical(p)
    ft = fd.value + t.im() * fd.derivative
    if ft.norm() == 0.0:
        raise SymmetrizationZero("f^s vanishes at the probe")
    return ft.inverse() * (gd.value + t.im() * gd.derivative)


# ---------------------------------------------------------------------------
# Kind-dispatching wrappers (exact on polynomials/rationals, pointwise on
# general slice functions)

def star_product(f, g):
    if isinstance(f, QPoly) and isinstance(g, QPoly):
        return f.star(g)
    if isinstance(f, (QPoly, QRational)) and isinstance(g, (QPoly, QRational)):
        fr = f if isinstance(f, QRational) else QRational(f, QPoly([1.0]))
        return fr.star(g)
    from .slicefn import SliceFunction, intersect_domains
    f = _as_slicefn(f)
    g = _as_slicefn(g)
    dom = intersect_domains(f.domain, g.domain)
    return SliceFunction(dom, lambda q: star_eval(f, g, q),
                         backing="composite", label="star")


def conjugate(f):
    if isinstance(f, (QPoly, QRational)):
        return f.conjugate()
    from .slicefn import SliceFunction
    f = _as_slicefn(f)
    return SliceFunction(f.domain, lambda q: conj_eval(f, q),
                         backing="composite", label="conj")


def symmetrize(f):
    if isinstance(f, (QPoly, QRational)):
        return f.symmetrize()
    from .slicefn import SliceFunction
    f = _as_slicefn(f)
    return SliceFunction(f.domain, lambda q: sym_eval(f, q),
                         backing="composite", label="sym")


def reciprocal(f):
    if isinstance(f, QPoly):
        return reciprocal_poly(f)
    if isinstance(f, QRational):
        return f.reciprocal()
    from .slicefn import SliceFunction
    f = _as_slicefn(f)
    return SliceFunction(f.domain, lambda q: recip_eval(f, q),
                         backing="composite", label="recip")


def _as_slicefn(f):
    from .slicefn import SliceFunction
    if isinstance(f, SliceFunction):
        return f
    if isinstance(f, (QPoly, QRational)):
        return SliceFunction.from_exact(f)
    raise DomainMismatch("cannot interpret %r as a slice function" % (f,))
