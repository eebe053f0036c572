"""Exact polynomial arithmetic for the combinatorial layer.

Two small value classes:

* ``LaurentN`` -- integer-coefficient Laurent polynomials in the matrix
  dimension N (exponents may be negative).
* ``UNPoly``   -- polynomials in an auxiliary variable u whose coefficients
  are ``LaurentN``.  These are the coefficient rings of trace polynomials.

Everything here is exact (Python ints / fractions.Fraction); no floats enter
until a value is explicitly evaluated.
"""

from __future__ import annotations

from fractions import Fraction


class LaurentN:
    """sum_e c_e * N^e with integer coefficients c_e and e in Z."""

    __slots__ = ("_c",)

    def __init__(self, coeffs=None):
        c = {}
        if coeffs:
            for e, v in dict(coeffs).items():
                if v:
                    c[int(e)] = c.get(int(e), 0) + v
        self._c = {e: v for e, v in c.items() if v}

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls({0: 1})

    @classmethod
    def monomial(cls, exponent, coeff=1):
        return cls({exponent: coeff})

    def items(self):
        return sorted(self._c.items(), reverse=True)

    def coeff(self, exponent):
        return self._c.get(exponent, 0)

    @property
    def is_zero(self):
        return not self._c

    def leading_exponent(self):
        if not self._c:
            raise ValueError("zero polynomial has no leading exponent")
        return max(self._c)

    def leading_coeff(self):
        return self._c[self.leading_exponent()]

    def __add__(self, other):
        c = dict(self._c)
        for e, v in other._c.items():
            c[e] = c.get(e, 0) + v
        return LaurentN(c)

    def __mul__(self, other):
        if not isinstance(other, LaurentN):
            return LaurentN({e: other * v for e, v in self._c.items()})
        c = {}
        for e1, v1 in self._c.items():
            for e2, v2 in other._c.items():
                c[e1 + e2] = c.get(e1 + e2, 0) + v1 * v2
        return LaurentN(c)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentN({0: other})
        return isinstance(other, LaurentN) and self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __call__(self, n):
        """Evaluate at a concrete dimension; exact if n is int/Fraction."""
        n = Fraction(n)
        return sum((Fraction(v) * n ** e for e, v in self._c.items()), Fraction(0))

    def __float__(self):
        if any(e != 0 for e in self._c):
            raise TypeError("non-constant Laurent polynomial")
        return float(self._c.get(0, 0))

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for e, v in self.items():
            if e == 0:
                term = str(v)
            else:
                mag = f"N^{e}" if e != 1 else "N"
                if v == 1:
                    term = mag
                elif v == -1:
                    term = f"-{mag}"
                else:
                    term = f"{v}*{mag}"
            parts.append(term)
        out = parts[0]
        for term in parts[1:]:
            out += term if term.startswith("-") else "+" + term
        return out

    __repr__ = __str__


class UNPoly:
    """Polynomial in u with LaurentN coefficients: sum_k (LaurentN) u^k."""

    __slots__ = ("_c",)

    def __init__(self, coeffs=None):
        c = {}
        if coeffs:
            for k, p in dict(coeffs).items():
                if isinstance(p, int):
                    p = LaurentN({0: p})
                if not p.is_zero:
                    c[int(k)] = c.get(int(k), LaurentN.zero()) + p
        self._c = {k: p for k, p in c.items() if not p.is_zero}

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def term(cls, coeff, u_exp=0, n_exp=0):
        return cls({u_exp: LaurentN({n_exp: coeff})})

    def items(self):
        return sorted(self._c.items(), reverse=True)

    @property
    def is_zero(self):
        return not self._c

    def __add__(self, other):
        c = dict(self._c)
        for k, p in other._c.items():
            c[k] = c.get(k, LaurentN.zero()) + p
        return UNPoly(c)

    def __eq__(self, other):
        return isinstance(other, UNPoly) and self._c == other._c

    def __hash__(self):
        return hash(frozenset((k, p) for k, p in self._c.items()))

    def __call__(self, u, n):
        u = Fraction(u)
        return sum((p(n) * u ** k for k, p in self._c.items()), Fraction(0))

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for k, p in self.items():
            coeff = str(p)
            if "+" in coeff[1:] or "-" in coeff[1:]:
                coeff = f"({coeff})"
            if k == 0:
                parts.append(coeff)
            else:
                u = "u" if k == 1 else f"u^{k}"
                if coeff == "1":
                    parts.append(u)
                elif coeff == "-1":
                    parts.append(f"-{u}")
                else:
                    parts.append(f"{coeff}*{u}")
        out = parts[0]
        for term in parts[1:]:
            out += term if term.startswith("-") else "+" + term
        return out

    __repr__ = __str__
