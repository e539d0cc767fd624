"""Graded bivariate polynomials and exact fractions for E-functions.

A Hodge-type expression in u, v is rewritten through u^p v^q = u^(p-q) (uv)^q,
so it becomes a sum over integer grades d of u^d * f_d(z) with z = uv and
f_d a WPoly (rational z-exponents, integer grades):

    GradedPoly  =  { d : f_d }               e.g.  uv - g(u+v) + 1
    EFraction   =  GradedPoly / prod_j (z^(b_j) - 1),   b_j > 0 rational

The denominator is kept as a multiset of exponents b_j, never expanded;
addition takes the least common multiset.  The canonical (reduced) form
removes a factor (z^b - 1) whenever it exactly divides every graded component
of the numerator.  Because whole-factor cancellation is not a unique normal
form, value equality is decided by subtracting and testing the numerator for
zero, which is exact and complete.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import PoleAtOne, ScaleMismatch, ZeroDiscrepancyFactor
from .laurent import WPoly, as_fraction, format_fraction, lcm_all


class GradedPoly:
    """Finite sum over integer grades d of u^d * f_d(z), all at one scale."""

    __slots__ = ("t", "g")

    def __init__(self, t: int, grades: dict[int, WPoly] | None = None):
        self.t = t
        self.g: dict[int, WPoly] = {}
        for d, p in (grades or {}).items():
            if p.t != t:
                raise ScaleMismatch("graded component at a different scale")
            if not p.is_zero():
                self.g[d] = p

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, t: int) -> "GradedPoly":
        return cls(t)

    @classmethod
    def const(cls, value: int, t: int) -> "GradedPoly":
        return cls(t, {0: WPoly.const(value, t)})

    @classmethod
    def from_wpoly(cls, p: WPoly) -> "GradedPoly":
        return cls(p.t, {0: p})

    @classmethod
    def uv_monomial(cls, p, q, t: int, coef: int = 1) -> "GradedPoly":
        """coef * u^p v^q with integer p - q; exponents may be rational."""
        p = as_fraction(p)
        q = as_fraction(q)
        d = p - q
        if d.denominator != 1:
            raise ScaleMismatch(f"u^{p} v^{q} has non-integer grade")
        return cls(t, {int(d): WPoly.monomial(q, t, coef)})

    @classmethod
    def curve(cls, genus: int, t: int) -> "GradedPoly":
        """Hodge polynomial of a smooth complete curve: uv - g(u+v) + 1."""
        out = {0: WPoly.const(1, t) + WPoly.monomial(1, t)}
        if genus:
            out[1] = WPoly.const(-genus, t)
            out[-1] = WPoly.monomial(1, t, -genus)
        return cls(t, out)

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.g

    def coeff_origin(self) -> int:
        """Coefficient of u^0 v^0."""
        f = self.g.get(0)
        return f.constant_term() if f is not None else 0

    def collapse(self) -> WPoly:
        """Set u = 1, leaving a single Laurent polynomial in z."""
        total = WPoly.zero(self.t)
        for p in self.g.values():
            total = total + p
        return total

    def degree_u(self) -> Fraction | None:
        """Max u-exponent: for u^d z^e the u-degree is d + e."""
        best = None
        for d, p in self.g.items():
            for e, _ in p.terms():
                val = d + e
                if best is None or val > best:
                    best = val
        return best

    def degree_v(self) -> Fraction | None:
        """Max v-exponent: for u^d z^e the v-degree is e."""
        best = None
        for p in self.g.values():
            m = p.max_exp()
            if m is not None and (best is None or m > best):
                best = m
        return best

    def evaluate(self, u: Fraction, w: Fraction) -> Fraction:
        total = Fraction(0)
        for d, p in self.g.items():
            total += Fraction(u) ** d * p.evaluate(w)
        return total

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other) -> "GradedPoly":
        if isinstance(other, GradedPoly):
            if other.t != self.t:
                raise ScaleMismatch(f"scales {self.t} and {other.t} differ")
            return other
        if isinstance(other, WPoly):
            if other.t != self.t:
                raise ScaleMismatch(f"scales {self.t} and {other.t} differ")
            return GradedPoly.from_wpoly(other)
        if isinstance(other, int):
            return GradedPoly.const(other, self.t)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.g)
        for d, p in other.g.items():
            out[d] = out[d] + p if d in out else p
        return GradedPoly(self.t, out)

    __radd__ = __add__

    def __neg__(self):
        return GradedPoly(self.t, {d: -p for d, p in self.g.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, WPoly)):
            other = self._coerce(other)
        if not isinstance(other, GradedPoly):
            return NotImplemented
        if other.t != self.t:
            raise ScaleMismatch(f"scales {self.t} and {other.t} differ")
        out: dict[int, WPoly] = {}
        for d1, p1 in self.g.items():
            for d2, p2 in other.g.items():
                d = d1 + d2
                prod = p1 * p2
                out[d] = out[d] + prod if d in out else prod
        return GradedPoly(self.t, out)

    __rmul__ = __mul__

    def shifted(self, exp) -> "GradedPoly":
        """Multiply every component by z^exp."""
        return GradedPoly(self.t, {d: p.shifted(exp) for d, p in self.g.items()})

    def inverted(self) -> "GradedPoly":
        """Substitute u -> 1/u, v -> 1/v (grade and exponent negation)."""
        return GradedPoly(self.t, {-d: p.inverted() for d, p in self.g.items()})

    def rescale(self, new_t: int) -> "GradedPoly":
        return GradedPoly(new_t, {d: p.rescale(new_t) for d, p in self.g.items()})

    def __eq__(self, other):
        if isinstance(other, (int, WPoly)):
            other = self._coerce(other)
        if not isinstance(other, GradedPoly):
            return NotImplemented
        if self.t != other.t:
            m = lcm_all([self.t, other.t])
            return self.rescale(m) == other.rescale(m)
        return (self - other).is_zero()

    __hash__ = None

    def __str__(self):
        if not self.g:
            return "0"
        chunks = []
        for d in sorted(self.g):
            body = str(self.g[d])
            chunks.append(body if d == 0 else f"u^{d}*({body})")
        return " + ".join(chunks)

    def to_json(self) -> list[dict]:
        return [{"grade": d, "poly": self.g[d].to_json()} for d in sorted(self.g)]

    @classmethod
    def from_json(cls, data, t: int | None = None) -> "GradedPoly":
        if t is None:
            exps = [as_fraction(item["exp"]) for entry in data for item in entry["poly"]]
            t = lcm_all([e.denominator for e in exps] or [1])
        out = cls.zero(t)
        for entry in data:
            out = out + cls(t, {int(entry["grade"]): WPoly.from_json(entry["poly"], t)})
        return out


def _normalize_factors(t: int, raw_factors) -> tuple[tuple[Fraction, ...], WPoly, int]:
    """Turn raw exponents (possibly negative) into positive denominator
    factors, returning (factors, numerator multiplier, sign).

    Uses 1/(z^a - 1) = -z^(-a) / (z^(-a) - 1) for a < 0.
    """
    factors = []
    mult = WPoly.const(1, t)
    for raw in raw_factors:
        b = as_fraction(raw)
        if b == 0:
            raise ZeroDiscrepancyFactor("factor z^0 - 1 is identically zero")
        if b < 0:
            mult = -mult.shifted(-b)
            b = -b
        factors.append(b)
    return tuple(sorted(factors)), mult, t


class EFraction:
    """Exact value num / prod_j (z^(b_j) - 1) with num a GradedPoly."""

    __slots__ = ("num", "den")

    def __init__(self, num: GradedPoly, den=()):
        self.num = num
        self.den = tuple(sorted(as_fraction(b) for b in den))
        for b in self.den:
            if b <= 0:
                raise ValueError("denominator exponents must be positive")
            if (b * num.t).denominator != 1:
                raise ScaleMismatch(f"factor exponent {b} not representable at scale {num.t}")

    @property
    def t(self) -> int:
        return self.num.t

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_polynomial(cls, num) -> "EFraction":
        if isinstance(num, WPoly):
            num = GradedPoly.from_wpoly(num)
        return cls(num)

    @classmethod
    def build(cls, num: GradedPoly, raw_factors) -> "EFraction":
        """num / prod (z^a - 1) where the a's may be negative (normalized)."""
        factors, mult, _ = _normalize_factors(num.t, raw_factors)
        return cls(num * mult, factors)

    @classmethod
    def zero(cls, t: int) -> "EFraction":
        return cls(GradedPoly.zero(t))

    # -- denominator bookkeeping ---------------------------------------------

    @staticmethod
    def _common_den(fractions: list["EFraction"]) -> tuple[Fraction, ...]:
        need: dict[Fraction, int] = {}
        for f in fractions:
            counts: dict[Fraction, int] = {}
            for b in f.den:
                counts[b] = counts.get(b, 0) + 1
            for b, k in counts.items():
                need[b] = max(need.get(b, 0), k)
        out = []
        for b in sorted(need):
            out.extend([b] * need[b])
        return tuple(out)

    def _scaled_to(self, den: tuple[Fraction, ...]) -> GradedPoly:
        """Numerator after extending this fraction to the given denominator."""
        have = list(self.den)
        num = self.num
        for b in den:
            if b in have:
                have.remove(b)
            else:
                num = num * (WPoly.monomial(b, self.t) - 1)
        if have:
            raise ValueError("target denominator does not contain this one")
        return num

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> "EFraction":
        if isinstance(other, EFraction):
            if other.t != self.t:
                raise ScaleMismatch(f"scales {self.t} and {other.t} differ")
            return other
        if isinstance(other, (int, WPoly, GradedPoly)):
            gp = other if isinstance(other, GradedPoly) else GradedPoly.zero(self.t)._coerce(other)
            return EFraction(gp)
        return NotImplemented

    @classmethod
    def sum(cls, fractions: list["EFraction"]) -> "EFraction":
        """Sum over common denominators, reduced pairwise.

        Balanced pairwise combination keeps intermediate denominators small
        when neighboring summands share factors (as chain strata do), which
        is much cheaper than scaling every term to the full denominator.
        """
        fractions = list(fractions)
        if not fractions:
            raise ValueError("empty sum has no scale")
        t = fractions[0].t
        if any(f.t != t for f in fractions):
            raise ScaleMismatch("summands carry different scales")
        while len(fractions) > 1:
            merged = []
            for i in range(0, len(fractions) - 1, 2):
                pair = fractions[i : i + 2]
                den = cls._common_den(pair)
                merged.append(cls(pair[0]._scaled_to(den) + pair[1]._scaled_to(den), den))
            if len(fractions) % 2:
                merged.append(fractions[-1])
            fractions = merged
        return fractions[0]

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return EFraction.sum([self, other])

    __radd__ = __add__

    def __neg__(self):
        return EFraction(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, WPoly, GradedPoly)):
            return EFraction(self.num * other, self.den)
        if isinstance(other, EFraction):
            if other.t != self.t:
                raise ScaleMismatch(f"scales {self.t} and {other.t} differ")
            return EFraction(self.num * other.num, self.den + other.den)
        return NotImplemented

    __rmul__ = __mul__

    # -- canonical form and equality -------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def reduce(self) -> "EFraction":
        """Canonical form: strip each factor that divides every component.

        Factors are tried largest-first, restarting after each removal, so the
        result is deterministic.
        """
        num = self.num
        den = list(self.den)
        changed = True
        while changed:
            changed = False
            for b in sorted(set(den), reverse=True):
                divisor = WPoly.monomial(b, self.t) - 1
                parts = {}
                for d, p in num.g.items():
                    q = p.try_div(divisor)
                    if q is None:
                        parts = None
                        break
                    parts[d] = q
                if parts is not None:
                    num = GradedPoly(self.t, parts)
                    den.remove(b)
                    changed = True
                    break
        return EFraction(num, den)

    def is_polynomial(self) -> bool:
        return not self.reduce().den

    def as_wpoly(self) -> WPoly:
        """The value as a plain polynomial in z; requires grade 0 only."""
        r = self.reduce()
        if r.den:
            raise ValueError("value is not a polynomial")
        if any(d != 0 for d in r.num.g):
            raise ValueError("value involves u-grades, not a pure function of uv")
        return r.num.collapse()

    # -- the three specializations ------------------------------------------

    def dualize(self) -> "EFraction":
        """(uv)^2 * f(1/u, 1/v), renormalized to positive denominator factors.

        Each (z^b - 1) picks up -z^b under inversion, so the whole fraction
        gains sign (-1)^k and shift z^(2 + sum b_j) on the inverted numerator.
        """
        shift = 2 + sum(self.den, Fraction(0))
        num = self.num.inverted().shifted(shift)
        if len(self.den) % 2:
            num = -num
        return EFraction(num, self.den).reduce()

    def limit_at_one(self) -> Fraction:
        """Exact limit for u, v -> 1 (so w -> 1 after collapsing grades).

        The denominator vanishes to order k = #factors at w = 1, with
        prod_j (w^(m_j) - 1) = (prod m_j)(w-1)^k (1 + O(w-1)); the limit is
        the k-th Taylor coefficient of the collapsed numerator at w = 1 over
        that product.  Earlier Taylor coefficients must vanish (PoleAtOne).
        """
        n = self.num.collapse()
        k = len(self.den)
        fact = 1
        for j in range(1, k + 1):
            fact *= j
        for j in range(k):
            if n.falling_sum(j) != 0:
                raise PoleAtOne(f"(w - 1)^{k} does not divide the numerator")
        denom = fact
        for b in self.den:
            denom *= int(b * self.t)
        return Fraction(n.falling_sum(k), denom)

    def evaluate(self, u: Fraction, w: Fraction) -> Fraction:
        """Exact value at concrete u and w = z^(1/t), for spot checks."""
        num = Fraction(0)
        for d, p in self.num.g.items():
            num += Fraction(u) ** d * p.evaluate(w)
        den = Fraction(1)
        for b in self.den:
            den *= Fraction(w) ** int(b * self.t) - 1
        return num / den

    def degree_u(self) -> Fraction | None:
        d = self.num.degree_u()
        return None if d is None else d - sum(self.den, Fraction(0))

    def degree_v(self) -> Fraction | None:
        d = self.num.degree_v()
        return None if d is None else d - sum(self.den, Fraction(0))

    # -- display / serialization ---------------------------------------------

    def __str__(self):
        r = self.reduce()
        num = str(r.num)
        if not r.den:
            return num
        den = "*".join(f"(z^({format_fraction(b)}) - 1)" for b in r.den)
        return f"({num}) / {den}"

    def __repr__(self):
        return f"EFraction({self})"

    def to_json(self) -> dict:
        return {
            "num": self.num.to_json(),
            "den": [format_fraction(b) for b in self.den],
        }

    @classmethod
    def from_json(cls, data, t: int | None = None) -> "EFraction":
        if t is None:
            exps = [as_fraction(item["exp"]) for entry in data["num"] for item in entry["poly"]]
            exps.extend(as_fraction(b) for b in data["den"])
            t = lcm_all([e.denominator for e in exps] or [1])
        num = GradedPoly.from_json(data["num"], t)
        return cls(num, [as_fraction(b) for b in data["den"]])


# -- standard building blocks -------------------------------------------------

def unit_factor(a, t: int) -> EFraction:
    """(z - 1) / (z^a - 1) for a nonzero rational a."""
    a = as_fraction(a)
    if a == 0:
        raise ZeroDiscrepancyFactor("discrepancy 0 in a bare chain factor")
    num = GradedPoly.from_wpoly(WPoly.monomial(1, t) - 1)
    return EFraction.build(num, [a])


def dual_factor(a, t: int) -> EFraction:
    """(z - 1) / (z^a - 1) - 1 = (z - z^a) / (z^a - 1)."""
    a = as_fraction(a)
    if a == 0:
        raise ZeroDiscrepancyFactor("discrepancy 0 in a bare chain factor")
    num = GradedPoly.from_wpoly(WPoly.monomial(1, t) - WPoly.monomial(a, t))
    return EFraction.build(num, [a])


# -- termwise form of the E-function, used for the value at u = v = 0 --------

@dataclass(frozen=True)
class HodgeTerm:
    """One summand H(E_I) * prod_i ((z-1)/(z^(a_i)-1) - 1)."""

    h: GradedPoly
    exponents: tuple[Fraction, ...]

    def to_efraction(self) -> EFraction:
        out = EFraction.from_polynomial(self.h)
        for a in self.exponents:
            out = out * dual_factor(a, self.h.t)
        return out

    def at_origin(self) -> int:
        value = self.h.coeff_origin()
        for a in self.exponents:
            if a > 0:
                return 0
            if a == 0:
                raise ZeroDiscrepancyFactor("bare factor with zero discrepancy")
            value = -value
        return value


@dataclass(frozen=True)
class ZCorrection:
    """kappa (z-1)^2 / ((z^(a1)-1)(z^(a2)-1)) for a zero-discrepancy curve."""

    kappa: int
    a1: Fraction
    a2: Fraction
    t: int

    def to_efraction(self) -> EFraction:
        sq = (WPoly.monomial(1, self.t) - 1) ** 2
        num = GradedPoly.from_wpoly(sq) * self.kappa
        return EFraction.build(num, [self.a1, self.a2])

    def at_origin(self) -> int:
        return 0


def eval_termwise_at_zero(terms) -> Fraction:
    """Value at u = v = 0 of a sum of unexpanded terms.

    Each factor (z-1)/(z^a-1) - 1 contributes 0 when a > 0 and -1 when a < 0;
    zero-discrepancy corrections vanish; a Hodge polynomial contributes its
    constant coefficient.
    """
    return Fraction(sum(term.at_origin() for term in terms))
