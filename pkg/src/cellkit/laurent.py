"""Sparse Laurent polynomials in one variable ``v`` with integer coefficients."""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping, Union

__all__ = ["LaurentPoly", "ZERO", "ONE", "V", "V_INV"]

Scalar = Union[int, "LaurentPoly"]


class LaurentPoly:
    """An element of Z[v, v^-1].

    Stored as a map exponent -> coefficient with no zero coefficients, so two
    equal polynomials always have identical term maps. Instances are
    immutable and hashable.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] | None = None):
        clean: dict[int, int] = {}
        if terms:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for e, c in items:
                if not isinstance(e, int) or not isinstance(c, int):
                    raise TypeError("exponents and coefficients must be integers")
                if c:
                    c = clean.get(e, 0) + c
                    if c:
                        clean[e] = c
                    else:
                        clean.pop(e, None)
        self._terms = clean
        self._hash = None

    @classmethod
    def _wrap(cls, terms: dict[int, int]) -> "LaurentPoly":
        # caller guarantees there are no zero coefficients and gives up ownership
        p = object.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> "LaurentPoly":
        return cls._wrap({exp: coeff} if coeff else {})

    @classmethod
    def coerce(cls, value: Scalar) -> "LaurentPoly":
        if isinstance(value, LaurentPoly):
            return value
        if isinstance(value, int):
            return cls.monomial(0, value)
        raise TypeError(f"cannot convert {type(value).__name__} to LaurentPoly")

    # -- inspection -----------------------------------------------------

    @property
    def terms(self) -> dict[int, int]:
        """A copy of the exponent -> coefficient map."""
        return dict(self._terms)

    def items(self) -> Iterator[tuple[int, int]]:
        """Terms in ascending exponent order."""
        for e in sorted(self._terms):
            yield e, self._terms[e]

    def coeff(self, exp: int) -> int:
        return self._terms.get(exp, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def degrees(self) -> tuple[int, int]:
        """Return ``(mindeg, maxdeg)``; raises ValueError on the zero polynomial."""
        if not self._terms:
            raise ValueError("undefined degree: zero polynomial")
        return min(self._terms), max(self._terms)

    @property
    def mindeg(self) -> int:
        return self.degrees()[0]

    @property
    def maxdeg(self) -> int:
        return self.degrees()[1]

    def is_nonnegative(self) -> bool:
        return all(c > 0 for c in self._terms.values())

    def is_symmetric(self) -> bool:
        """True iff the polynomial is fixed by the bar involution."""
        t = self._terms
        return all(t.get(-e) == c for e, c in t.items())

    # -- ring structure -------------------------------------------------

    def __add__(self, other: Scalar) -> "LaurentPoly":
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        if not other._terms:
            return self
        out = dict(self._terms)
        for e, c in other._terms.items():
            c = out.get(e, 0) + c
            if c:
                out[e] = c
            else:
                del out[e]
        return LaurentPoly._wrap(out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._wrap({e: -c for e, c in self._terms.items()})

    def __sub__(self, other: Scalar) -> "LaurentPoly":
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "LaurentPoly":
        return LaurentPoly.coerce(other) - self

    def __mul__(self, other: Scalar) -> "LaurentPoly":
        if isinstance(other, int):
            if not other:
                return ZERO
            return LaurentPoly._wrap({e: c * other for e, c in self._terms.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out: dict[int, int] = {}
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = ea + eb
                out[e] = out.get(e, 0) + ca * cb
        return LaurentPoly._wrap({e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials are invertible")
            ((e, c),) = self._terms.items()
            if c not in (1, -1):
                raise ValueError("only monomials with unit coefficient are invertible")
            return LaurentPoly.monomial(e * k, c ** -k)
        out = ONE
        for _ in range(k):
            out = out * self
        return out

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``v**k``."""
        if not k:
            return self
        return LaurentPoly._wrap({e + k: c for e, c in self._terms.items()})

    def bar(self) -> "LaurentPoly":
        """The involution v -> v^-1."""
        return LaurentPoly._wrap({-e: c for e, c in self._terms.items()})

    def __call__(self, value):
        return sum(c * value**e for e, c in self._terms.items())

    # -- comparison / hashing -------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.monomial(0, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- text forms -----------------------------------------------------

    def serialize(self) -> str:
        """``exp:coeff`` pairs in ascending exponent order; ``""`` for zero."""
        return ",".join(f"{e}:{c}" for e, c in self.items())

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        """Inverse of :meth:`serialize`. Rejects anything non-canonical."""
        if text == "":
            return ZERO
        terms: dict[int, int] = {}
        last = None
        for chunk in text.split(","):
            e_s, sep, c_s = chunk.partition(":")
            if not sep:
                raise ValueError(f"bad term {chunk!r}")
            try:
                e, c = int(e_s), int(c_s)
            except ValueError:
                raise ValueError(f"bad term {chunk!r}") from None
            if str(e) != e_s or str(c) != c_s:
                raise ValueError(f"non-canonical term {chunk!r}")
            if c == 0:
                raise ValueError(f"zero coefficient in {chunk!r}")
            if last is not None and e <= last:
                raise ValueError("exponents must be strictly ascending")
            terms[e] = c
            last = e
        return cls._wrap(terms)

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in sorted(self._terms.items(), reverse=True):
            if e == 0:
                mono = str(abs(c))
            else:
                var = "v" if e == 1 else f"v^{e}"
                mono = var if abs(c) == 1 else f"{abs(c)}{var}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, mono))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, mono in parts[1:]:
            out += f" {sign} {mono}"
        return out


ZERO = LaurentPoly._wrap({})
ONE = LaurentPoly._wrap({0: 1})
V = LaurentPoly._wrap({1: 1})
V_INV = LaurentPoly._wrap({-1: 1})
