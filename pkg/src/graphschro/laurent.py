"""Laurent polynomials with exact (Fraction) or floating coefficients."""

from __future__ import annotations

from fractions import Fraction
from numbers import Number


class LaurentPoly:
    """Finite sum ``sum_n c_n theta**n`` with integer (possibly negative) exponents.

    Coefficients are kept as given, so ``Fraction`` inputs stay exact under
    ``+``, ``-``, ``*`` and division by a scalar.  Zero coefficients are never
    stored.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs=None):
        self._c = {}
        if coeffs:
            for n, c in dict(coeffs).items():
                if c != 0:
                    self._c[int(n)] = c

    @classmethod
    def monomial(cls, n: int, c=1) -> "LaurentPoly":
        return cls({n: c})

    @classmethod
    def constant(cls, c) -> "LaurentPoly":
        return cls({0: c})

    @property
    def coefficients(self) -> dict:
        return dict(sorted(self._c.items()))

    def __getitem__(self, n: int):
        return self._c.get(n, 0)

    @property
    def min_exponent(self):
        return min(self._c) if self._c else None

    @property
    def max_exponent(self):
        return max(self._c) if self._c else None

    def is_zero(self) -> bool:
        return not self._c

    def __call__(self, theta):
        if not self._c:
            return 0
        if theta == 0 and self.min_exponent < 0:
            raise ZeroDivisionError("negative powers at theta=0")
        return sum(c * theta**n for n, c in self._c.items())

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, Number):
            return LaurentPoly.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._c)
        for n, c in other._c.items():
            out[n] = out.get(n, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({n: -c for n, c in self._c.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Number):
            return LaurentPoly({n: c * other for n, c in self._c.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        out = {}
        for n1, c1 in self._c.items():
            for n2, c2 in other._c.items():
                out[n1 + n2] = out.get(n1 + n2, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if not isinstance(scalar, Number):
            return NotImplemented
        if scalar == 0:
            raise ZeroDivisionError("division of a Laurent polynomial by zero")
        if isinstance(scalar, (int, Fraction)):
            scalar = Fraction(scalar)
        return LaurentPoly({n: c / scalar for n, c in self._c.items()})

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def conjugate(self) -> "LaurentPoly":
        return LaurentPoly({n: c.conjugate() for n, c in self._c.items()})

    def reflect(self) -> "LaurentPoly":
        """``p(theta) -> p(1/theta)``."""
        return LaurentPoly({-n: c for n, c in self._c.items()})

    def __repr__(self):
        if not self._c:
            return "LaurentPoly(0)"
        terms = " + ".join(f"({c})*t^{n}" for n, c in sorted(self._c.items()))
        return f"LaurentPoly({terms})"
