"""Sparse Laurent polynomials in a scaled variable.

Everything downstream works with expressions in z = uv whose exponents are
rationals with a fixed common denominator t (the scale).  Internally we
substitute w = z^(1/t), so that every exponent becomes an integer and exact
division, cancellation of (w - 1) factors, and so on are plain integer-exponent
operations.

A WPoly is

    sum_e  c_e * w^e     with  c_e in Z,  e in Z (negative exponents allowed),

stored as a dict {e: c_e} with no zero coefficients.  The scale t is carried
along; two polynomials only combine when their scales agree (ScaleMismatch
otherwise), since a computation fixes its scale once, as the lcm of the
denominators of all log discrepancies involved.

Values are immutable after construction; all operations return new objects.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from math import gcd

from .errors import InexactDivision, ScaleMismatch


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and 'p/q' strings to an exact Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def format_fraction(x: Fraction) -> str:
    """Reduced 'p/q' string, or just 'p' for integers."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def lcm_all(values) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


def scale_for(exponents) -> int:
    """Least common denominator of a collection of rational exponents, and 1."""
    return lcm_all(as_fraction(e).denominator for e in exponents)


class WPoly:
    """Laurent polynomial over Z in w = z^(1/t), sparse dict representation."""

    __slots__ = ("t", "c")

    def __init__(self, t: int, coeffs: dict[int, int] | None = None):
        if t < 1:
            raise ValueError("scale must be a positive integer")
        self.t = t
        self.c = {e: v for e, v in (coeffs or {}).items() if v != 0}

    # -- constructors --------------------------------------------------

    @classmethod
    def zero(cls, t: int) -> "WPoly":
        return cls(t)

    @classmethod
    def const(cls, value: int, t: int) -> "WPoly":
        return cls(t, {0: value})

    @classmethod
    def monomial(cls, exp, t: int, coef: int = 1) -> "WPoly":
        """coef * z^exp at scale t; exp*t must be an integer."""
        e = as_fraction(exp) * t
        if e.denominator != 1:
            raise ScaleMismatch(f"exponent {exp} is not representable at scale {t}")
        return cls(t, {int(e): coef})

    @classmethod
    def geometric(cls, ratio_exp, count: int, t: int) -> "WPoly":
        """1 + z^a + z^(2a) + ... + z^((count-1)a); the empty sum is 0."""
        step = as_fraction(ratio_exp) * t
        if step.denominator != 1:
            raise ScaleMismatch(f"exponent {ratio_exp} is not representable at scale {t}")
        coeffs: dict[int, int] = {}
        for j in range(count):
            e = int(step) * j
            coeffs[e] = coeffs.get(e, 0) + 1
        return cls(t, coeffs)

    # -- basic queries --------------------------------------------------

    def is_zero(self) -> bool:
        return not self.c

    def is_constant(self) -> bool:
        return all(e == 0 for e in self.c)

    def constant_term(self) -> int:
        return self.c.get(0, 0)

    def coeff(self, exp) -> int:
        e = as_fraction(exp) * self.t
        if e.denominator != 1:
            return 0
        return self.c.get(int(e), 0)

    def terms(self):
        """Yield (exponent as Fraction, coefficient) sorted by exponent."""
        for e in sorted(self.c):
            yield Fraction(e, self.t), self.c[e]

    def max_exp(self) -> Fraction | None:
        return Fraction(max(self.c), self.t) if self.c else None

    def min_exp(self) -> Fraction | None:
        return Fraction(min(self.c), self.t) if self.c else None

    def nonnegative_coefficients(self) -> bool:
        return all(v >= 0 for v in self.c.values())

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other) -> "WPoly":
        if isinstance(other, WPoly):
            if other.t != self.t:
                raise ScaleMismatch(f"scales {self.t} and {other.t} differ")
            return other
        if isinstance(other, int):
            return WPoly.const(other, self.t)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.c)
        for e, v in other.c.items():
            out[e] = out.get(e, 0) + v
        return WPoly(self.t, out)

    __radd__ = __add__

    def __neg__(self):
        return WPoly(self.t, {e: -v for e, v in self.c.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict[int, int] = {}
        for e1, v1 in self.c.items():
            for e2, v2 in other.c.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + v1 * v2
        return WPoly(self.t, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        result = WPoly.const(1, self.t)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shifted(self, exp) -> "WPoly":
        """Multiply by the monomial z^exp."""
        e = as_fraction(exp) * self.t
        if e.denominator != 1:
            raise ScaleMismatch(f"exponent {exp} is not representable at scale {self.t}")
        k = int(e)
        return WPoly(self.t, {e0 + k: v for e0, v in self.c.items()})

    def inverted(self) -> "WPoly":
        """Substitute z -> z^(-1)."""
        return WPoly(self.t, {-e: v for e, v in self.c.items()})

    def rescale(self, new_t: int) -> "WPoly":
        """Re-express at a finer scale; new_t must be a multiple of t."""
        if new_t % self.t != 0:
            raise ScaleMismatch(f"cannot rescale {self.t} -> {new_t}")
        f = new_t // self.t
        return WPoly(new_t, {e * f: v for e, v in self.c.items()})

    # -- exact division --------------------------------------------------

    def divexact(self, other) -> "WPoly":
        q = self.try_div(other)
        if q is None:
            raise InexactDivision("polynomial division is not exact")
        return q

    def try_div(self, other) -> "WPoly | None":
        """Exact quotient self / other in Z[w, w^-1], or None."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return WPoly.zero(self.t)
        # Shift so both have min exponent 0; divisibility is unchanged since
        # w is a unit in the Laurent ring.
        smin = min(self.c)
        omin = min(other.c)
        sh = smin - omin
        num = {e - smin: v for e, v in self.c.items()}
        den = {e - omin: v for e, v in other.c.items()}
        # Divisibility in Z[w] implies divisibility of the integer values, so
        # one evaluation rejects almost every non-multiple before the real
        # division runs.
        dval = sum(v << e for e, v in den.items())
        if dval != 0 and sum(v << e for e, v in num.items()) % dval != 0:
            return None
        dmax = max(den)
        dlead = den[dmax]
        quot: dict[int, int] = {}
        rem = dict(num)
        heap = [-e for e in rem]
        heapq.heapify(heap)
        while rem:
            while heap and -heap[0] not in rem:
                heapq.heappop(heap)
            e = -heap[0]
            if e < dmax:
                return None
            c, r = divmod(rem[e], dlead)
            if r != 0:
                return None
            qe = e - dmax
            quot[qe] = c
            for de, dv in den.items():
                ee = de + qe
                nv = rem.get(ee, 0) - c * dv
                if nv:
                    if ee not in rem:
                        heapq.heappush(heap, -ee)
                    rem[ee] = nv
                else:
                    rem.pop(ee, None)
        return WPoly(self.t, {e + sh: v for e, v in quot.items()})

    # -- evaluation -------------------------------------------------------

    def evaluate(self, w: Fraction) -> Fraction:
        """Exact value at w (w != 0 when negative exponents occur)."""
        total = Fraction(0)
        for e, v in self.c.items():
            total += v * Fraction(w) ** e
        return total

    def at_one(self) -> int:
        return sum(self.c.values())

    def falling_sum(self, k: int) -> int:
        """Sum of c_e * e*(e-1)*...*(e-k+1), i.e. the k-th derivative at w=1
        (times 1), used for exact limits at w = 1."""
        total = 0
        for e, v in self.c.items():
            f = 1
            for i in range(k):
                f *= e - i
            total += v * f
        return total

    # -- comparison and display ------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = WPoly.const(other, self.t)
        if not isinstance(other, WPoly):
            return NotImplemented
        if self.t == other.t:
            return self.c == other.c
        m = lcm_all([self.t, other.t])
        return self.rescale(m).c == other.rescale(m).c

    __hash__ = None

    def __repr__(self):
        return f"WPoly({self})"

    def __str__(self):
        if not self.c:
            return "0"
        parts = []
        for exp, coef in self.terms():
            if exp == 0:
                parts.append(str(coef))
            else:
                zs = "z" if exp == 1 else f"z^({format_fraction(exp)})"
                if coef == 1:
                    parts.append(zs)
                elif coef == -1:
                    parts.append(f"-{zs}")
                else:
                    parts.append(f"{coef}*{zs}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    # -- serialization -----------------------------------------------------

    def to_json(self) -> list[dict[str, str]]:
        return [
            {"exp": format_fraction(exp), "coef": str(coef)}
            for exp, coef in self.terms()
        ]

    @classmethod
    def from_json(cls, data, t: int | None = None) -> "WPoly":
        pairs = [(as_fraction(item["exp"]), int(item["coef"])) for item in data]
        if t is None:
            t = scale_for(e for e, _ in pairs)
        out = cls.zero(t)
        for e, v in pairs:
            out = out + cls.monomial(e, t, v)
        return out
