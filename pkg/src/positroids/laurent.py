"""Exact multivariate Laurent polynomials with integer coefficients.

A polynomial lives over an ordered tuple of symbol names; terms map dense
exponent tuples to nonzero ints.  Operands over different symbol tables are
aligned to the union of their tables (in first-seen order).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

Number = Union[int, Fraction]


class DivisionError(ArithmeticError):
    """Raised when an exact division leaves a remainder."""


def _merge_symbols(a: tuple[str, ...], b: tuple[str, ...]) -> tuple[str, ...]:
    if a == b:
        return a
    seen = list(a)
    for s in b:
        if s not in seen:
            seen.append(s)
    return tuple(seen)


class LaurentPolynomial:
    __slots__ = ("symbols", "terms", "_hash")

    def __init__(self, symbols: Iterable[str], terms: Mapping[tuple[int, ...], int] | None = None):
        self.symbols = tuple(symbols)
        n = len(self.symbols)
        clean: dict[tuple[int, ...], int] = {}
        for exp, coeff in (terms or {}).items():
            if len(exp) != n:
                raise ValueError(f"exponent {exp} does not match {n} symbols")
            if coeff:
                clean[tuple(exp)] = clean.get(tuple(exp), 0) + coeff
        self.terms = {e: c for e, c in clean.items() if c}
        self._hash = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def constant(cls, value: int, symbols: Iterable[str] = ()) -> "LaurentPolynomial":
        symbols = tuple(symbols)
        return cls(symbols, {(0,) * len(symbols): value})

    @classmethod
    def variable(cls, name: str, symbols: Iterable[str] | None = None) -> "LaurentPolynomial":
        symbols = tuple(symbols) if symbols is not None else (name,)
        exp = tuple(1 if s == name else 0 for s in symbols)
        if name not in symbols:
            raise ValueError(f"{name} is not among the symbols")
        return cls(symbols, {exp: 1})

    @classmethod
    def monomial(cls, symbols: Iterable[str], exponents: Iterable[int], coeff: int = 1) -> "LaurentPolynomial":
        symbols = tuple(symbols)
        return cls(symbols, {tuple(exponents): coeff})

    # -- alignment ----------------------------------------------------------

    def over(self, symbols: tuple[str, ...]) -> "LaurentPolynomial":
        """Re-express over a (super)set of symbols."""
        if symbols == self.symbols:
            return self
        where = {s: i for i, s in enumerate(symbols)}
        missing = [s for s in self.symbols if s not in where]
        if missing:
            # only allowed when the polynomial does not use them
            for i, s in enumerate(self.symbols):
                if s in missing and any(e[i] for e in self.terms):
                    raise ValueError(f"symbol {s} is used but not in the target table")
        idx = [(where[s], i) for i, s in enumerate(self.symbols) if s in where]
        out = {}
        for exp, c in self.terms.items():
            new = [0] * len(symbols)
            for j, i in idx:
                new[j] = exp[i]
            out[tuple(new)] = c
        return LaurentPolynomial(symbols, out)

    def _align(self, other: "LaurentPolynomial") -> tuple["LaurentPolynomial", "LaurentPolynomial"]:
        if self.symbols == other.symbols:
            return self, other
        syms = _merge_symbols(self.symbols, other.symbols)
        return self.over(syms), other.over(syms)

    def _coerce(self, other) -> "LaurentPolynomial":
        if isinstance(other, LaurentPolynomial):
            return other
        if isinstance(other, int):
            return LaurentPolynomial.constant(other, self.symbols)
        return NotImplemented

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_subtraction_free(self) -> bool:
        """All coefficients positive (and at least one term)."""
        return bool(self.terms) and all(c > 0 for c in self.terms.values())

    def is_polynomial(self) -> bool:
        return all(x >= 0 for e in self.terms for x in e)

    def used_symbols(self) -> tuple[str, ...]:
        return tuple(s for i, s in enumerate(self.symbols) if any(e[i] for e in self.terms))

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._align(other)
        out = dict(a.terms)
        for e, c in b.terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPolynomial(a.symbols, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial(self.symbols, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._align(other)
        out: dict[tuple[int, ...], int] = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPolynomial(a.symbols, out)

    __rmul__ = __mul__

    def __pow__(self, p: int):
        if p < 0:
            if not self.is_monomial():
                raise DivisionError("only monomials have Laurent inverses")
            (e, c), = self.terms.items()
            if c not in (1, -1):
                raise DivisionError("coefficient is not a unit")
            return LaurentPolynomial(self.symbols, {tuple(x * p for x in e): c ** -p})
        result = LaurentPolynomial.constant(1, self.symbols)
        base = self
        while p:
            if p & 1:
                result = result * base
            base = base * base
            p >>= 1
        return result

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.exact_div(other)

    def exact_div(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        """Quotient in the Laurent ring over Z; raises DivisionError on a remainder."""
        a, b = self._align(other)
        if b.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if a.is_zero():
            return a
        if b.is_monomial():
            (eb, cb), = b.terms.items()
            out = {}
            for e, c in a.terms.items():
                q, r = divmod(c, cb)
                if r:
                    raise DivisionError(f"coefficient {c} not divisible by {cb}")
                out[tuple(x - y for x, y in zip(e, eb))] = q
            return LaurentPolynomial(a.symbols, out)
        # shift both to honest polynomials without monomial factors, then long division
        n = len(a.symbols)
        shift_a = [min(e[i] for e in a.terms) for i in range(n)]
        shift_b = [min(e[i] for e in b.terms) for i in range(n)]
        pa = {tuple(x - s for x, s in zip(e, shift_a)): c for e, c in a.terms.items()}
        pb = {tuple(x - s for x, s in zip(e, shift_b)): c for e, c in b.terms.items()}
        lead_b = max(pb)
        lc_b = pb[lead_b]
        rem = dict(pa)
        quot: dict[tuple[int, ...], int] = {}
        while rem:
            lead = max(rem)
            diff = tuple(x - y for x, y in zip(lead, lead_b))
            if any(d < 0 for d in diff):
                raise DivisionError("leading monomial not divisible; remainder is nonzero")
            q, r = divmod(rem[lead], lc_b)
            if r:
                raise DivisionError(f"coefficient {rem[lead]} not divisible by {lc_b}")
            quot[diff] = q
            for e, c in pb.items():
                t = tuple(x + d for x, d in zip(e, diff))
                v = rem.get(t, 0) - q * c
                if v:
                    rem[t] = v
                else:
                    rem.pop(t, None)
        shift = [sa - sb for sa, sb in zip(shift_a, shift_b)]
        return LaurentPolynomial(a.symbols, {tuple(x + s for x, s in zip(e, shift)): c for e, c in quot.items()})

    def divides(self, other: "LaurentPolynomial") -> bool:
        try:
            other.exact_div(self)
        except DivisionError:
            return False
        return True

    # -- evaluation and substitution ---------------------------------------

    def evaluate(self, values: Mapping[str, Number]) -> Fraction:
        total = Fraction(0)
        vals = [Fraction(values[s]) if s in values else None for s in self.symbols]
        for e, c in self.terms.items():
            term = Fraction(c)
            for v, x in zip(vals, e):
                if x:
                    if v is None:
                        raise KeyError("missing value for a used symbol")
                    term *= v ** x
            total += term
        return total

    def substitute(self, images: Mapping[str, "LaurentPolynomial"], symbols: tuple[str, ...] | None = None) -> "LaurentPolynomial":
        """Replace each symbol by a Laurent polynomial (negative powers need monomial images)."""
        if symbols is None:
            symbols = ()
            for img in images.values():
                symbols = _merge_symbols(symbols, img.symbols)
            for s in self.symbols:
                if s not in images:
                    symbols = _merge_symbols(symbols, (s,))
        result = LaurentPolynomial(symbols, {})
        cache: dict[tuple[str, int], LaurentPolynomial] = {}
        for e, c in self.terms.items():
            term = LaurentPolynomial.constant(c, symbols)
            for s, x in zip(self.symbols, e):
                if not x:
                    continue
                key = (s, x)
                if key not in cache:
                    base = images[s] if s in images else LaurentPolynomial.variable(s, symbols)
                    cache[key] = base.over(_merge_symbols(symbols, base.symbols)) ** x
                term = term * cache[key]
            result = result + term
        return result.over(_merge_symbols(symbols, result.symbols))

    # -- comparison and display --------------------------------------------

    def _canonical(self) -> frozenset:
        return frozenset((tuple((s, x) for s, x in zip(self.symbols, e) if x), c) for e, c in self.terms.items())

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPolynomial.constant(other, self.symbols)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        if self.symbols == other.symbols:
            return self.terms == other.terms
        return self._canonical() == other._canonical()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._canonical())
        return self._hash

    def sorted_terms(self) -> list[tuple[tuple[int, ...], int]]:
        """Terms in the documented canonical order: descending lex on exponents."""
        return sorted(self.terms.items(), reverse=True)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            factors = []
            for s, x in zip(self.symbols, e):
                if x == 1:
                    factors.append(s)
                elif x:
                    factors.append(f"{s}^{x}")
            body = "*".join(factors)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{c}*{body}")
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self) -> str:
        return f"LaurentPolynomial({self})"

    def to_json(self) -> dict:
        return {"symbols": list(self.symbols),
                "terms": [[list(e), c] for e, c in self.sorted_terms()]}

    @classmethod
    def from_json(cls, data: Mapping) -> "LaurentPolynomial":
        return cls(data["symbols"], {tuple(e): c for e, c in data["terms"]})


def monomial_exponents(p: LaurentPolynomial) -> tuple[int, ...]:
    if not p.is_monomial():
        raise ValueError(f"{p} is not a monomial")
    (e, _), = p.terms.items()
    return e
