"""Exact univariate polynomial and rational-function arithmetic over the rationals.

Coefficients are arbitrary-precision `fractions.Fraction` values stored in
ascending powers of the Laplace variable, so every algebraic operation
(including GCDs and the cancellations they drive) is exact.  Floating point
enters only at the very end, in the numerical root extractor.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational


class ConvergenceError(RuntimeError):
    """An iterative numerical kernel failed to reach its tolerance."""


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str, float, Rational)):
        return Fraction(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact coefficient")


class Poly:
    """Polynomial with exact rational coefficients, ascending powers.

    The zero polynomial stores an empty coefficient tuple and reports
    ``degree is None`` (a sentinel, deliberately not a number).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [_as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> "Poly":
        return cls(())

    @classmethod
    def one(cls) -> "Poly":
        return cls((1,))

    @classmethod
    def s(cls) -> "Poly":
        """The identity polynomial s."""
        return cls((0, 1))

    @classmethod
    def monomial(cls, power: int, coeff=1) -> "Poly":
        if power < 0:
            raise ValueError("power must be nonnegative")
        return cls((0,) * power + (coeff,))

    @classmethod
    def from_roots(cls, roots) -> "Poly":
        """Monic polynomial with the given exact rational roots."""
        p = cls.one()
        for r in roots:
            p = p * cls((-_as_fraction(r), 1))
        return p

    # -- structure ----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self):
        """Degree as an int, or None for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else None

    @property
    def lead(self) -> Fraction:
        """Leading coefficient (0 for the zero polynomial)."""
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == Poly((other,))
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    # -- arithmetic ---------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly((other,))
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] += c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return Poly.zero()
        a, b = self.coeffs, other.coeffs
        if len(a) == 1:
            return Poly(tuple(a[0] * c for c in b))
        if len(b) == 1:
            return Poly(tuple(b[0] * c for c in a))
        # Accumulate the convolution in plain integers (denominators cleared
        # up front); one Fraction normalization per output coefficient beats
        # one per inner product term by a wide margin at large coefficients.
        da = db = 1
        for c in a:
            da = da * c.denominator // math.gcd(da, c.denominator)
        for c in b:
            db = db * c.denominator // math.gcd(db, c.denominator)
        ai = [int(c * da) for c in a]
        bi = [int(c * db) for c in b]
        out = [0] * (len(ai) + len(bi) - 1)
        for i, ca in enumerate(ai):
            if ca:
                for j, cb in enumerate(bi):
                    out[i + j] += ca * cb
        scale = da * db
        return Poly(tuple(Fraction(c, scale) for c in out))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = Poly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def divrem(self, other: "Poly") -> tuple["Poly", "Poly"]:
        """Exact division with remainder: self = q*other + r, deg r < deg other."""
        other = self._coerce(other)
        if other is None or other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        if self.is_zero:
            return Poly.zero(), Poly.zero()
        rem = list(self.coeffs)
        dlen = len(other.coeffs)
        lead = other.coeffs[-1]
        qlen = len(rem) - dlen + 1
        if qlen <= 0:
            return Poly.zero(), Poly(rem)
        q = [Fraction(0)] * qlen
        for k in range(qlen - 1, -1, -1):
            coef = rem[k + dlen - 1] / lead
            q[k] = coef
            if coef:
                for j, c in enumerate(other.coeffs):
                    rem[k + j] -= coef * c
        return Poly(q), Poly(rem[: dlen - 1])

    def __floordiv__(self, other):
        return self.divrem(other)[0]

    def __mod__(self, other):
        return self.divrem(other)[1]

    def derivative(self) -> "Poly":
        return Poly(tuple(k * c for k, c in enumerate(self.coeffs) if k))

    def monic(self) -> "Poly":
        if self.is_zero:
            raise ValueError("the zero polynomial has no monic form")
        lc = self.lead
        if lc == 1:
            return self
        return Poly(tuple(c / lc for c in self.coeffs))

    def __call__(self, x):
        """Horner evaluation; exact for Rational arguments, complex otherwise."""
        if isinstance(x, (int, Fraction)):
            acc = Fraction(0)
            for c in reversed(self.coeffs):
                acc = acc * x + c
            return acc
        z = complex(x)
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + complex(c)
        return acc

    # -- presentation and serialization --------------------------------

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if self.is_zero:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            if k == 0:
                term = str(c)
            else:
                sk = "s" if k == 1 else f"s^{k}"
                term = sk if c == 1 else (f"-{sk}" if c == -1 else f"{c}*{sk}")
            parts.append(term)
        out = parts[0]
        for term in parts[1:]:
            out += f" - {term[1:]}" if term.startswith("-") else f" + {term}"
        return out

    def to_strings(self) -> list[str]:
        """Coefficients as exact "p/q" (or integer) strings, ascending powers."""
        return [str(c) for c in self.coeffs]

    @classmethod
    def from_strings(cls, items) -> "Poly":
        return cls(tuple(Fraction(str(t)) for t in items))


def _int_coeffs(p: Poly) -> list[int]:
    """Clear denominators: integer coefficient list, ascending."""
    den = 1
    for c in p.coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return [int(c * den) for c in p.coeffs]


def _int_primitive(v: list[int]) -> list[int]:
    while v and v[-1] == 0:
        v.pop()
    if not v:
        return v
    g = 0
    for c in v:
        g = math.gcd(g, c)
    if g > 1:
        v = [c // g for c in v]
    return v


def _int_prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder of integer polynomials (ascending coefficients)."""
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    while True:
        while a and a[-1] == 0:
            a.pop()
        da = len(a) - 1
        if not a or da < db:
            return a
        top = a[-1]
        a = [lb * x for x in a]
        shift = da - db
        for i in range(db + 1):
            a[shift + i] -= top * b[i]


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor, Euclid on primitive integer parts.

    Working with pseudo-remainders of primitive integer polynomials keeps the
    coefficient growth of the remainder sequence polynomial instead of the
    exponential blowup naive Euclid over Q suffers.
    """
    if a.is_zero and b.is_zero:
        raise ValueError("gcd(0, 0) is undefined")
    if a.is_zero:
        return b.monic()
    if b.is_zero:
        return a.monic()
    u = _int_primitive(_int_coeffs(a))
    v = _int_primitive(_int_coeffs(b))
    if len(u) < len(v):
        u, v = v, u
    while v:
        u, v = v, _int_primitive(_int_prem(u, v))
    lead = u[-1]
    return Poly(tuple(Fraction(c, lead) for c in u))


def poly_lcm(a: Poly, b: Poly) -> Poly:
    if a.is_zero or b.is_zero:
        raise ValueError("lcm with the zero polynomial is undefined")
    return ((a * b) // poly_gcd(a, b)).monic()


def square_free_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: monic(p) = prod f_i^m_i with each f_i square-free.

    Returns (factor, multiplicity) pairs in increasing multiplicity order.
    Requires characteristic zero, which exact rationals guarantee.
    """
    if p.is_zero:
        raise ValueError("cannot decompose the zero polynomial")
    p = p.monic()
    if p.degree == 0:
        return []
    dp = p.derivative()
    g = poly_gcd(p, dp)
    out = []
    if g.degree == 0:
        return [(p, 1)]
    b = p // g
    c = dp // g
    m = 1
    while b.degree and b.degree > 0:
        d = c - b.derivative()
        f = poly_gcd(b, d) if not d.is_zero else b.monic()
        if f.degree and f.degree > 0:
            out.append((f.monic(), m))
        b = b // f
        c = d // f
        m += 1
    return out


# ---------------------------------------------------------------------------
# Rational functions


def _as_poly(x) -> Poly:
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction)):
        return Poly((x,))
    raise TypeError(f"cannot use {type(x).__name__} as a polynomial")


class RatFunc:
    """Reduced fraction of two exact polynomials with a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num = _as_poly(num)
        den = _as_poly(den)
        if den.is_zero:
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero:
            self.num = Poly.zero()
            self.den = Poly.one()
            return
        g = poly_gcd(num, den)
        if g.degree and g.degree > 0:
            num, den = num // g, den // g
        lc = den.lead
        if lc != 1:
            inv = 1 / lc
            num = num * inv
            den = den * inv
        self.num = num
        self.den = den

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> "RatFunc":
        return cls(0)

    @classmethod
    def one(cls) -> "RatFunc":
        return cls(1)

    @classmethod
    def constant(cls, c) -> "RatFunc":
        return cls(Poly((c,)))

    @classmethod
    def from_coeffs(cls, num, den=(1,)) -> "RatFunc":
        return cls(Poly(num), Poly(den))

    # -- structure ----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def relative_degree(self):
        """deg(den) - deg(num); None for the zero function."""
        if self.is_zero:
            return None
        return self.den.degree - self.num.degree

    @property
    def is_proper(self) -> bool:
        rd = self.relative_degree
        return rd is None or rd >= 0

    @property
    def is_strictly_proper(self) -> bool:
        rd = self.relative_degree
        return rd is None or rd >= 1

    @property
    def is_constant(self) -> bool:
        return self.is_zero or (self.num.degree == 0 and self.den.degree == 0)

    def __bool__(self):
        return not self.is_zero

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    # -- arithmetic ---------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, (Poly, int, Fraction)):
            return RatFunc(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        # Knuth's fraction addition: split off the common denominator factor
        # first so the constructor's reduction works on small operands.
        g = poly_gcd(self.den, other.den)
        if g.degree == 0:
            return RatFunc(self.num * other.den + other.num * self.den,
                           self.den * other.den)
        da = self.den // g
        db = other.den // g
        return RatFunc(self.num * db + other.num * da, da * other.den)

    __radd__ = __add__

    def __neg__(self):
        out = RatFunc.__new__(RatFunc)
        out.num = -self.num
        out.den = self.den
        return out

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return RatFunc.zero()
        # Cross-cancel before multiplying so products never carry factors
        # that the constructor would immediately strip again.
        an, ad = self.num, self.den
        bn, bd = other.num, other.den
        g1 = poly_gcd(an, bd) if (an.degree and bd.degree) else Poly.one()
        if g1.degree:
            an, bd = an // g1, bd // g1
        g2 = poly_gcd(bn, ad) if (bn.degree and ad.degree) else Poly.one()
        if g2.degree:
            bn, ad = bn // g2, ad // g2
        return RatFunc(an * bn, ad * bd)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.is_zero:
            raise ZeroDivisionError("division by the zero rational function")
        flipped = RatFunc.__new__(RatFunc)
        lc = other.num.lead
        flipped.num = other.den * (1 / lc)
        flipped.den = other.num.monic()
        return self * flipped

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise ValueError("exponent must be an integer")
        if n < 0:
            return RatFunc.one() / self ** (-n)
        out = RatFunc.one()
        for _ in range(n):
            out = out * self
        return out

    def __call__(self, s0):
        """Evaluate at s0.  Exact for Rational points, complex otherwise.

        Raises ZeroDivisionError at (or numerically indistinguishable from)
        a pole.
        """
        if isinstance(s0, (int, Fraction)):
            dv = self.den(s0)
            if dv == 0:
                raise ZeroDivisionError(f"evaluation at pole s = {s0}")
            return self.num(s0) / dv
        z = complex(s0)
        dv = self.den(z)
        scale = sum(abs(complex(c)) * max(1.0, abs(z)) ** k
                    for k, c in enumerate(self.den.coeffs))
        if abs(dv) <= 1e-13 * scale:
            raise ZeroDivisionError(f"evaluation at or near pole s = {s0}")
        return self.num(z) / dv

    def poles(self, tol: float = 1e-10) -> "RootSet":
        if self.den.degree == 0:
            return RootSet((), (), 0.0)
        return poly_roots(self.den, tol)

    def zeros(self, tol: float = 1e-10) -> "RootSet":
        if self.is_zero or self.num.degree == 0:
            return RootSet((), (), 0.0)
        return poly_roots(self.num, tol)

    def __repr__(self):
        return f"RatFunc({self})"

    def __str__(self):
        if self.den == Poly.one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def to_json(self) -> dict:
        return {"num": self.num.to_strings(), "den": self.den.to_strings()}

    @classmethod
    def from_json(cls, obj) -> "RatFunc":
        return cls(Poly.from_strings(obj["num"]), Poly.from_strings(obj["den"]))


# ---------------------------------------------------------------------------
# Numerical root extraction


@dataclass(frozen=True)
class RootSet:
    """Numerically located roots with exact multiplicities.

    residual is the largest magnitude of the polynomial at a reported root,
    normalized by the leading coefficient and the root's magnitude raised to
    the degree, so it is meaningful for large roots.
    """

    roots: tuple[complex, ...]
    multiplicities: tuple[int, ...]
    residual: float

    def __iter__(self):
        return iter(zip(self.roots, self.multiplicities))

    @property
    def total_count(self) -> int:
        return sum(self.multiplicities)

    @property
    def max_real_part(self):
        return max((r.real for r in self.roots), default=None)

    def all_left_of(self, bound: float) -> bool:
        return all(r.real < bound for r in self.roots)


def _horner_c(coeffs: list[complex], z: complex) -> complex:
    acc = 0j
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def _horner_with_noise(coeffs: list[complex], z: complex):
    """Horner value plus the roundoff magnitude bound sum(|c_k| |z|^k)."""
    acc = 0j
    bound = 0.0
    mag = abs(z)
    for c in reversed(coeffs):
        acc = acc * z + c
        bound = bound * mag + abs(c)
    return acc, bound


def _aberth_simple(f: Poly, max_iter: int = 500,
                   phase: float = 0.35) -> list[complex]:
    """Simultaneous Aberth-Ehrlich iteration for a square-free polynomial."""
    n = f.degree
    fc = f.monic()
    coeffs = [complex(c) for c in fc.coeffs]
    if n == 1:
        return [-coeffs[0]]
    dcoeffs = [k * coeffs[k] for k in range(1, n + 1)]
    centroid = -coeffs[n - 1] / n
    # Fujiwara's root bound scales like the actual root magnitudes, unlike
    # the additive Cauchy bound which explodes for wide coefficient ranges
    # and would overflow the very first evaluations.
    radius = 2.0 * max(
        (abs(coeffs[n - k]) / (2.0 if k == n else 1.0)) ** (1.0 / k)
        for k in range(1, n + 1))
    radius = max(radius, 1e-30)
    z = [centroid + radius * cmath.exp(2j * cmath.pi * (k + phase) / n)
         for k in range(n)]
    for _ in range(max_iter):
        converged = True
        for i in range(n):
            pv, noise = _horner_with_noise(coeffs, z[i])
            if abs(pv) <= 4.0 * 2.3e-16 * noise:
                # at the float evaluation noise floor: this arithmetic
                # cannot place the root any better, so leave it be
                continue
            dv = _horner_c(dcoeffs, z[i])
            if not (cmath.isfinite(pv) and cmath.isfinite(dv)):
                z[i] = centroid + (z[i] - centroid) * 0.25
                converged = False
                continue
            if dv == 0:
                z[i] += (0.1 + 0.1j) * (1.0 + abs(z[i]))
                converged = False
                continue
            newton = pv / dv
            ssum = sum(1.0 / (z[i] - z[j]) for j in range(n) if j != i)
            denom = 1.0 - newton * ssum
            w = newton if denom == 0 else newton / denom
            z[i] -= w
            if abs(w) > 1e-12 * (1.0 + abs(z[i])):
                converged = False
        if converged:
            break
    else:
        raise ConvergenceError(
            f"root iteration did not converge within {max_iter} sweeps "
            f"(degree {n})")
    # Newton polish against the same square-free factor.
    for i in range(n):
        for _ in range(3):
            pv, noise = _horner_with_noise(coeffs, z[i])
            dv = _horner_c(dcoeffs, z[i])
            if dv == 0 or abs(pv) <= 4.0 * 2.3e-16 * noise:
                break
            step = pv / dv
            if abs(step) > 0.1 * (1.0 + abs(z[i])):
                break
            z[i] -= step
    return z


def poly_roots(p: Poly, tol: float = 1e-10) -> RootSet:
    """All complex roots of p with multiplicities.

    Exact square-free decomposition (Yun) supplies the multiplicity
    structure, so the Aberth/Newton stage only ever sees simple roots;
    numerically coincident roots within the tol-derived cluster radius are
    merged afterwards as a guard.
    """
    if p.degree is None or p.degree < 1:
        raise ValueError("root extraction needs degree >= 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    roots: list[complex] = []
    mults: list[int] = []
    for factor, m in square_free_decomposition(p):
        try:
            found = _aberth_simple(factor)
        except ConvergenceError:
            # one retry from a rotated starting configuration
            found = _aberth_simple(factor, phase=0.71)
        real_coeffs = True  # Fraction coefficients are always real
        for r in found:
            if real_coeffs and abs(r.imag) <= 1e-9 * (1.0 + abs(r)):
                r = complex(r.real, 0.0)
            roots.append(r)
            mults.append(m)
    # Guard: merge numerically indistinguishable roots.
    merged_roots: list[complex] = []
    merged_mults: list[int] = []
    order = sorted(range(len(roots)), key=lambda i: (roots[i].real, roots[i].imag))
    for i in order:
        r, m = roots[i], mults[i]
        if merged_roots:
            prev = merged_roots[-1]
            cluster = tol ** (1.0 / (merged_mults[-1] + m)) * (1.0 + abs(prev))
            if abs(r - prev) <= cluster:
                merged_mults[-1] += m
                continue
        merged_roots.append(r)
        merged_mults.append(m)
    lead = abs(complex(p.lead))
    deg = p.degree
    fc = [abs(complex(c)) / lead for c in p.coeffs]

    def scaled(r: complex) -> float:
        # |p(r)| against the magnitude sum of its own terms: the float
        # evaluation noise floor, so a converged root scores near eps.
        mag = abs(r)
        total = 0.0
        power = 1.0
        for c in fc:
            total += c * power
            power *= max(mag, 1.0)
        return abs(p(r)) / (lead * total)

    if sum(merged_mults) != deg:
        raise AssertionError("internal error: multiplicities do not sum to "
                             "the degree")
    residual = max(scaled(r) for r in merged_roots)
    if not residual <= max(tol, 1e-9):  # also trips on NaN
        raise ConvergenceError(
            f"root residual {residual:.3e} exceeds tolerance for degree {deg}")
    return RootSet(tuple(merged_roots), tuple(merged_mults), residual)
