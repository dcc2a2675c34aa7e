"""Hilbert functions, Hilbert series and Krull dimension from lead-term ideals."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

from .ideals import Ideal, groebner_basis


class NotHomogeneous(ValueError):
    pass


def _minimalize(gens: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    gens = sorted(set(gens), key=lambda e: (sum(e), e))
    out: list[tuple[int, ...]] = []
    for g in gens:
        if not any(all(a <= b for a, b in zip(h, g)) for h in out):
            out.append(g)
    return out


def _poly_add(a: list[int], b: list[int]) -> list[int]:
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return out


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _shift(a: list[int], k: int) -> list[int]:
    return [0] * k + a


def _trim(a: list[int]) -> list[int]:
    while len(a) > 1 and a[-1] == 0:
        a = a[:-1]
    return a


def monomial_numerator(gens: list[tuple[int, ...]]) -> list[int]:
    """Numerator ``N(t)`` with ``HS(S/J) = N(t)/(1-t)^n`` for the monomial ideal ``J``.

    Pivot recursion on a variable: ``N(J) = N(J + x) + t * N(J : x)``.
    """
    gens = _minimalize(gens)
    return _trim(_numerator(gens))


def _numerator(gens: list[tuple[int, ...]]) -> list[int]:
    if not gens:
        return [1]
    if any(sum(g) == 0 for g in gens):
        return [0]
    # pairwise coprime generators: product of (1 - t^deg)
    used = [0] * len(gens[0])
    coprime = True
    for g in gens:
        for i, a in enumerate(g):
            if a:
                if used[i]:
                    coprime = False
                    break
                used[i] = 1
        if not coprime:
            break
    if coprime:
        out = [1]
        for g in gens:
            d = sum(g)
            out = _poly_mul(out, [1] + [0] * (d - 1) + [-1])
        return out
    # pivot: the variable occurring in the most generators
    n = len(gens[0])
    counts = [sum(1 for g in gens if g[i]) for i in range(n)]
    v = max(range(n), key=lambda i: (counts[i], -i))
    unit = tuple(1 if i == v else 0 for i in range(n))
    plus = _minimalize([g for g in gens if not g[v]] + [unit])
    colon = _minimalize([g[:v] + (max(g[v] - 1, 0),) + g[v + 1:] for g in gens])
    return _poly_add(_numerator(plus), _shift(_numerator(colon), 1))


@dataclass(frozen=True)
class HilbertData:
    """``HS(S/I) = numerator(t) / (1 - t)^ambient_vars``."""

    numerator: tuple[int, ...]
    ambient_vars: int
    dimension: int
    degree: int
    reduced_numerator: tuple[int, ...]

    def function(self, d: int) -> int:
        """Hilbert function value at ``d`` read off the series."""
        if d < 0:
            return 0
        r = self.ambient_vars
        if r == 0:
            return self.numerator[d] if d < len(self.numerator) else 0
        return sum(c * comb(d - k + r - 1, r - 1) for k, c in enumerate(self.numerator) if d >= k)

    def polynomial(self, d: int) -> Fraction:
        """Hilbert polynomial evaluated at any integer ``d``."""
        D = self.dimension
        if D <= 0:
            return Fraction(0)
        total = Fraction(0)
        for k, c in enumerate(self.reduced_numerator):
            total += c * _binom_poly(d - k + D - 1, D - 1)
        return total

    def to_json(self) -> dict:
        return {
            "ambient_vars": self.ambient_vars,
            "degree": self.degree,
            "dimension": self.dimension,
            "numerator": list(self.numerator),
        }


def _binom_poly(x: int, k: int) -> Fraction:
    # C(x, k) as the polynomial x(x-1)...(x-k+1)/k!, valid for negative x
    num = Fraction(1)
    for i in range(k):
        num *= x - i
    for i in range(2, k + 1):
        num /= i
    return num


def lead_exponents(I: Ideal) -> list[tuple[int, ...]]:
    return [g.leading_monomial() for g in groebner_basis(I)]


def _require_homogeneous(I: Ideal):
    if not I.is_homogeneous():
        raise NotHomogeneous("ideal is not homogeneous")


def hilbert_series(I: Ideal) -> HilbertData:
    _require_homogeneous(I)
    r = I.ring.nvars
    num = monomial_numerator(lead_exponents(I)) if I.gens else [1]
    num = _trim(num)
    if num == [0]:
        return HilbertData((0,), r, -1, 0, (0,))
    red = list(num)
    k = 0
    while sum(red) == 0:
        # divide by (1 - t)
        q = []
        acc = 0
        for c in red[:-1]:
            acc += c
            q.append(acc)
        red = q
        k += 1
    return HilbertData(tuple(num), r, r - k, sum(red), tuple(_trim(red)))


def hilbert_function(I: Ideal, d: int) -> int:
    """``dim_k (S/I)_d``."""
    return hilbert_series(I).function(d)


def standard_monomial_count(I: Ideal, d: int) -> int:
    """Direct count of degree-``d`` monomials outside the lead-term ideal."""
    leads = lead_exponents(I)
    return sum(
        1
        for e in I.ring.monomials_of_degree(d)
        if not any(all(a <= b for a, b in zip(g, e)) for g in leads)
    )


def krull_dimension(I: Ideal) -> int:
    """Largest set of variables containing no lead-monomial support; -1 for the unit ideal."""
    r = I.ring.nvars
    if not I.gens:
        return r
    leads = _minimalize(lead_exponents(I))
    if any(sum(e) == 0 for e in leads):
        return -1
    supports = [sum(1 << i for i, a in enumerate(e) if a) for e in leads]
    # smallest hitting set of the supports
    for size in range(r + 1):
        for hit in combinations(range(r), size):
            mask = sum(1 << i for i in hit)
            if all(s & mask for s in supports):
                return r - size
    return 0
