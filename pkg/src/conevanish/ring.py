"""Polynomial rings, monomial orders, polynomials and ring maps.

Monomials are exponent tuples. For Groebner computations each ring also
packs a monomial into a single int: the high fields hold an integer weight
vector whose lexicographic comparison is the monomial order, the low fields
hold the exponents. Every field is linear in the exponents, so multiplying
monomials is adding packed ints, comparing them is comparing ints, and a
guard bit per field turns divisibility into one subtraction.
"""

from __future__ import annotations

import re
from functools import cached_property

from .field import Field

FIELD_BITS = 16
FIELD_MAX = (1 << (FIELD_BITS - 1)) - 1

_ORDER_RE = re.compile(r"^(grevlex|lex|block\((\d+)\))$")


class RingError(ValueError):
    pass


def _grevlex_rows(lo: int, hi: int, n: int) -> list[tuple[int, ...]]:
    # (deg, deg - e_last, ...) written as nested prefix sums of the block
    rows = []
    for k in range(hi - lo, 0, -1):
        rows.append(tuple(1 if lo <= i < lo + k else 0 for i in range(n)))
    return rows


class PolyRing:
    """``field[vars]`` with a fixed monomial order.

    ``order`` is ``"grevlex"``, ``"lex"`` or ``"block(k)"``; the block order
    compares the first ``k`` variables by grevlex, then the rest by grevlex.
    """

    def __init__(self, field: Field, variables, order: str = "grevlex"):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            dup = next(v for v in variables if variables.count(v) > 1)
            raise RingError(f"duplicate variable {dup!r}")
        m = _ORDER_RE.match(order)
        if not m:
            raise RingError(f"unknown monomial order {order!r}")
        if m.group(2) is not None and not 0 <= int(m.group(2)) <= len(variables):
            raise RingError(f"block size {m.group(2)} exceeds {len(variables)} variables")
        self.field = field
        self.vars = variables
        self.order = order
        self.nvars = len(variables)
        self._index = {v: i for i, v in enumerate(variables)}

    # -- identity ---------------------------------------------------------
    def _key(self):
        return (self.field, self.vars, self.order)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"PolyRing({self})"

    def __str__(self):
        return f"ring {self.field}[{','.join(self.vars)}] {self.order}"

    @property
    def block_size(self) -> int | None:
        m = _ORDER_RE.match(self.order)
        return int(m.group(2)) if m.group(2) is not None else None

    def with_order(self, order: str) -> "PolyRing":
        return PolyRing(self.field, self.vars, order)

    def with_field(self, field: Field) -> "PolyRing":
        return PolyRing(field, self.vars, self.order)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise RingError(f"unknown variable {name!r}") from None

    # -- packing ----------------------------------------------------------
    @cached_property
    def weight_rows(self) -> list[tuple[int, ...]]:
        n = self.nvars
        if self.order == "lex":
            return [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)]
        k = self.block_size
        if k is None:
            return _grevlex_rows(0, n, n)
        return _grevlex_rows(0, k, n) + _grevlex_rows(k, n, n)

    @cached_property
    def _packing(self):
        n = self.nvars
        rows = self.weight_rows
        nfields = len(rows) + n
        # field f occupies bits [FIELD_BITS*(nfields-1-f), ...)
        shifts = [FIELD_BITS * (nfields - 1 - f) for f in range(nfields)]
        units = []
        for i in range(n):
            u = 0
            for f, row in enumerate(rows):
                if row[i]:
                    u += row[i] << shifts[f]
            u += 1 << shifts[len(rows) + i]
            units.append(u)
        guard = 0
        for s in shifts:
            guard |= 1 << (s + FIELD_BITS - 1)
        exp_shifts = shifts[len(rows):]
        return units, guard, exp_shifts

    @property
    def guard(self) -> int:
        return self._packing[1]

    def pack(self, exps) -> int:
        units = self._packing[0]
        m = 0
        for e, u in zip(exps, units):
            if e:
                m += e * u
        return m

    def unpack(self, m: int) -> tuple[int, ...]:
        mask = (1 << FIELD_BITS) - 1
        return tuple((m >> s) & mask for s in self._packing[2])

    def sort_key(self, exps) -> int:
        return self.pack(exps)

    # -- elements -----------------------------------------------------------
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        c = self.field(c)
        return Polynomial(self, {(0,) * self.nvars: c} if c else {})

    def var(self, name: str) -> "Polynomial":
        i = self.index(name)
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): self.field.one})

    def gens(self) -> list["Polynomial"]:
        return [self.var(v) for v in self.vars]

    def monomial(self, exps, coeff=1) -> "Polynomial":
        c = self.field(coeff)
        return Polynomial(self, {tuple(exps): c} if c else {})

    def monomials_of_degree(self, d: int) -> list[tuple[int, ...]]:
        """Exponent vectors of total degree ``d``, in decreasing monomial order."""
        if d < 0:
            return []
        out = list(_compositions(d, self.nvars))
        out.sort(key=self.pack, reverse=True)
        return out

    def __call__(self, src) -> "Polynomial":
        if isinstance(src, Polynomial):
            return src.change_ring(self)
        if isinstance(src, str):
            from .parser import parse_polynomial

            return parse_polynomial(self, src)
        return self.const(src)


def _compositions(d: int, n: int):
    if n == 0:
        if d == 0:
            yield ()
        return
    if n == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for rest in _compositions(d - first, n - 1):
            yield (first,) + rest


def _add_exps(a, b):
    return tuple(x + y for x, y in zip(a, b))


class Polynomial:
    """Immutable sparse polynomial: ``{exponent tuple: nonzero coefficient}``."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = {e: c for e, c in terms.items() if c}
        self._hash = None

    # -- basic protocol -----------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, int):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        from .parser import format_polynomial

        return format_polynomial(self)

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        return self.ring.const(other)

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        p = self.ring.field.p
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            out[e] = v % p if p else v
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.field.p
        return Polynomial(self.ring, {e: (-c % p if p else -c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        p = self.ring.field.p
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _add_exps(e1, e2)
                v = out.get(e, 0) + c1 * c2
                out[e] = v % p if p else v
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> "Polynomial":
        c = self.ring.field(c)
        p = self.ring.field.p
        return Polynomial(self.ring, {e: (v * c % p if p else v * c) for e, v in self.terms.items()})

    # -- structure ----------------------------------------------------------
    def sorted_terms(self) -> list[tuple[tuple[int, ...], object]]:
        """Terms in decreasing monomial order."""
        pack = self.ring.pack
        return sorted(self.terms.items(), key=lambda t: pack(t[0]), reverse=True)

    def leading_term(self):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        pack = self.ring.pack
        e = max(self.terms, key=pack)
        return e, self.terms[e]

    def leading_monomial(self) -> tuple[int, ...]:
        return self.leading_term()[0]

    def leading_coefficient(self):
        return self.leading_term()[1]

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        return self.scale(self.ring.field.inv(self.leading_coefficient()))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def homogeneous_component(self, d: int) -> "Polynomial":
        return Polynomial(self.ring, {e: c for e, c in self.terms.items() if sum(e) == d})

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_coefficient(self):
        return self.terms.get((0,) * self.ring.nvars, self.ring.field.zero)

    def support(self) -> set[str]:
        names = self.ring.vars
        return {names[i] for e in self.terms for i, a in enumerate(e) if a}

    def derivative(self, name: str) -> "Polynomial":
        i = self.ring.index(name)
        p = self.ring.field.p
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                v = c * e[i]
                out[ne] = v % p if p else v
        return Polynomial(self.ring, out)

    def change_ring(self, ring: PolyRing) -> "Polynomial":
        """Reinterpret in ``ring`` by variable name (missing names must not occur)."""
        if ring == self.ring:
            return self
        idx = [ring.index(v) if v in ring._index else None for v in self.ring.vars]
        out = {}
        for e, c in self.terms.items():
            ne = [0] * ring.nvars
            for i, a in enumerate(e):
                if a:
                    if idx[i] is None:
                        raise RingError(f"variable {self.ring.vars[i]!r} not in {ring}")
                    ne[idx[i]] = a
            out[tuple(ne)] = ring.field(c) if ring.field != self.ring.field else c
        return Polynomial(ring, out)

    def substitute(self, values: dict[str, "Polynomial"]) -> "Polynomial":
        """Replace the named variables by polynomials of the same ring."""
        ring = self.ring
        images = []
        for v in ring.vars:
            images.append(_coerce_image(ring, values[v]) if v in values else ring.var(v))
        return _evaluate(self, images, ring)

    def evaluate(self, point):
        """Value at a point given as a sequence of field elements."""
        p = self.ring.field.p
        total = self.ring.field.zero
        for e, c in self.terms.items():
            v = c
            for x, a in zip(point, e):
                if a:
                    v = v * x**a
            total += v
        return total % p if p else total


def _coerce_image(ring, f):
    if isinstance(f, Polynomial):
        if f.ring != ring:
            raise RingError(f"ring mismatch: {f.ring} vs {ring}")
        return f
    return ring.const(f)



def _evaluate(f: Polynomial, images: list[Polynomial], target: PolyRing) -> Polynomial:
    # cache powers of images; sum over terms
    powers: list[dict[int, Polynomial]] = [dict() for _ in images]

    def power(i, k):
        cache = powers[i]
        if k not in cache:
            cache[k] = images[i] ** k
        return cache[k]

    acc: dict = {}
    p = target.field.p
    for e, c in f.sorted_terms():
        term = target.const(c)
        for i, a in enumerate(e):
            if a:
                term = term * power(i, a)
        for te, tc in term.terms.items():
            v = acc.get(te, 0) + tc
            acc[te] = v % p if p else v
    return Polynomial(target, acc)


class RingMap:
    """Field-algebra homomorphism ``source -> target`` given by variable images."""

    def __init__(self, source: PolyRing, target: PolyRing, images):
        images = list(images)
        if source.field != target.field:
            raise RingError("ring map must not change the coefficient field")
        if len(images) != source.nvars:
            raise RingError(f"expected {source.nvars} images, got {len(images)}")
        self.source = source
        self.target = target
        self.images = tuple(
            target(im) if isinstance(im, str) else _coerce_image(target, im) for im in images
        )

    def __call__(self, f: Polynomial) -> Polynomial:
        return apply_ring_map(self, f)

    def __repr__(self):
        pairs = ", ".join(f"{v}->{im}" for v, im in zip(self.source.vars, self.images))
        return f"RingMap({pairs})"

    def is_variable_map(self) -> bool:
        """True when every image is a single variable with coefficient one."""
        one = self.target.field.one
        return all(
            len(im.terms) == 1 and sum(next(iter(im.terms))) == 1 and next(iter(im.terms.values())) == one
            for im in self.images
        )


def apply_ring_map(m: RingMap, f: Polynomial) -> Polynomial:
    if f.ring != m.source:
        raise RingError(f"ring mismatch: polynomial in {f.ring}, map source {m.source}")
    return _evaluate(f, list(m.images), m.target)

