"""Finite algebras as operation tables, homomorphisms, products and the
product combinators (pairing, interchange, symmetry).

Carriers are always ``{0..n-1}``. A pair ``(x, y)`` in ``X x Y`` is encoded
row-major as ``x * |Y| + y``; iterated products nest left to right, which
makes the flat encoding of ``(X x Y) x Z`` and ``X x (Y x Z)`` coincide.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

INDEX = np.int64


class AlgebraError(ValueError):
    """Raised for malformed algebras, signature mismatches and failed
    homomorphism checks. ``witness`` holds offending elements when known."""

    def __init__(self, message: str, witness: Sequence[int] | None = None):
        super().__init__(message)
        self.witness = None if witness is None else [int(w) for w in witness]


@dataclass(frozen=True)
class Signature:
    operations: tuple[tuple[str, int], ...]
    jt: tuple[str, str] | None = None

    def __post_init__(self):
        names = [n for n, _ in self.operations]
        if len(set(names)) != len(names):
            raise AlgebraError(f"duplicate operation names in {names}")
        for name, arity in self.operations:
            if arity < 0:
                raise AlgebraError(f"operation {name!r} has negative arity")
        if self.jt is not None:
            zero, plus = self.jt
            arities = dict(self.operations)
            if arities.get(zero) != 0:
                raise AlgebraError(f"jt zero {zero!r} is not a constant")
            if arities.get(plus) != 2:
                raise AlgebraError(f"jt plus {plus!r} is not a binary operation")

    @property
    def names(self) -> list[str]:
        return [n for n, _ in self.operations]

    def arity(self, name: str) -> int:
        return dict(self.operations)[name]


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=INDEX)
    arr.setflags(write=False)
    return arr


class FiniteAlgebra:
    """An algebra on ``{0..size-1}`` with one table per operation.

    A table for an operation of arity ``k`` is a ``k``-dimensional array of
    shape ``(size,) * k``; constants are 0-dimensional arrays.
    """

    __slots__ = ("signature", "size", "tables", "name", "_key")

    def __init__(self, signature: Signature, size: int,
                 tables: Mapping[str, Iterable], name: str = ""):
        if size < 1:
            raise AlgebraError("carrier must be nonempty")
        self.signature = signature
        self.size = int(size)
        self.name = name
        built = {}
        for op, arity in signature.operations:
            if op not in tables:
                raise AlgebraError(f"missing table for operation {op!r}")
            t = _frozen(tables[op])
            if t.shape != (size,) * arity:
                raise AlgebraError(
                    f"table {op!r} has shape {t.shape}, expected {(size,) * arity}")
            bad = np.argwhere((t < 0) | (t >= size))
            if bad.size:
                raise AlgebraError(
                    f"table {op!r} entry at index {bad[0].tolist()} is outside 0..{size - 1}",
                    bad[0].tolist())
            built[op] = t
        self.tables = built
        self._key = None

    # identity is by content: two algebras with equal tables are the same object
    @property
    def key(self) -> str:
        if self._key is None:
            h = hashlib.sha256()
            h.update(repr((self.signature, self.size)).encode())
            for op in self.signature.names:
                h.update(np.ascontiguousarray(self.tables[op]).tobytes())
            self._key = h.hexdigest()
        return self._key

    def __eq__(self, other):
        return isinstance(other, FiniteAlgebra) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        label = self.name or "algebra"
        return f"<FiniteAlgebra {label} size={self.size}>"

    @property
    def pointed(self) -> bool:
        return self.signature.jt is not None

    @property
    def zero(self) -> int:
        if self.signature.jt is None:
            raise AlgebraError("algebra has no jt designation")
        return int(self.tables[self.signature.jt[0]])

    @property
    def plus(self) -> np.ndarray:
        if self.signature.jt is None:
            raise AlgebraError("algebra has no jt designation")
        return self.tables[self.signature.jt[1]]

    def op(self, name: str, *args: int) -> int:
        return int(self.tables[name][tuple(args)])

    def renamed(self, name: str) -> "FiniteAlgebra":
        return FiniteAlgebra(self.signature, self.size, self.tables, name)

    def jt_unit_violation(self) -> tuple[int, ...] | None:
        """First ``x`` with ``x+0 != x`` or ``0+x != x``, else None."""
        if self.signature.jt is None:
            return None
        z, plus = self.zero, self.plus
        xs = np.arange(self.size)
        bad = np.flatnonzero((plus[xs, z] != xs) | (plus[z, xs] != xs))
        return (int(bad[0]),) if bad.size else None

    def zero_violation(self) -> str | None:
        """Name of an operation not fixing the zero, else None."""
        z = self.zero
        for op, arity in self.signature.operations:
            if arity and int(self.tables[op][(z,) * arity]) != z:
                return op
        return None


@dataclass(frozen=True, eq=False)
class FiniteFunction:
    """A total function ``{0..len(values)-1} -> {0..codomain_size-1}``."""

    values: np.ndarray
    codomain_size: int

    def __post_init__(self):
        v = _frozen(self.values)
        if v.ndim != 1:
            raise AlgebraError("function values must be one-dimensional")
        if v.size and (v.min() < 0 or v.max() >= self.codomain_size):
            raise AlgebraError("function value outside its codomain")
        object.__setattr__(self, "values", v)

    @property
    def domain_size(self) -> int:
        return int(self.values.size)

    def __call__(self, x):
        return self.values[x]

    def __matmul__(self, other: "FiniteFunction") -> "FiniteFunction":
        # self @ other is self after other
        if other.codomain_size != self.domain_size:
            raise AlgebraError(
                f"cannot compose: codomain {other.codomain_size} vs domain {self.domain_size}")
        return FiniteFunction(self.values[other.values], self.codomain_size)

    def __eq__(self, other):
        return (isinstance(other, FiniteFunction)
                and self.codomain_size == other.codomain_size
                and np.array_equal(self.values, other.values))

    def __hash__(self):
        return hash((self.codomain_size, self.values.tobytes()))

    def __repr__(self):
        return f"FiniteFunction({self.values.tolist()}, codomain={self.codomain_size})"

    def is_injective(self) -> bool:
        return np.unique(self.values).size == self.domain_size

    def is_bijective(self) -> bool:
        return self.domain_size == self.codomain_size and self.is_injective()

    def inverse(self) -> "FiniteFunction":
        if not self.is_bijective():
            raise AlgebraError("function is not a bijection")
        inv = np.empty(self.domain_size, dtype=INDEX)
        inv[self.values] = np.arange(self.domain_size)
        return FiniteFunction(inv, self.domain_size)

    def first_collision(self) -> tuple[int, int] | None:
        """Two distinct inputs with the same image, if any."""
        seen: dict[int, int] = {}
        for i, v in enumerate(self.values.tolist()):
            if v in seen:
                return seen[v], i
            seen[v] = i
        return None


def identity(n: int) -> FiniteFunction:
    return FiniteFunction(np.arange(n), n)


def constant(domain_size: int, value: int, codomain_size: int) -> FiniteFunction:
    return FiniteFunction(np.full(domain_size, value), codomain_size)


def first_difference(f: FiniteFunction, g: FiniteFunction) -> int | None:
    if f.domain_size != g.domain_size:
        raise AlgebraError("domain sizes differ")
    diff = np.flatnonzero(f.values != g.values)
    return int(diff[0]) if diff.size else None


def homomorphism_violation(values: np.ndarray, source: FiniteAlgebra,
                           target: FiniteAlgebra) -> tuple[str, list[int]] | None:
    """Operation name and argument tuple where ``values`` fails to commute."""
    if source.signature.operations != target.signature.operations:
        raise AlgebraError("signature mismatch")
    values = np.asarray(values)
    for op, arity in source.signature.operations:
        ts, tt = source.tables[op], target.tables[op]
        lhs = values[ts]
        rhs = tt[np.ix_(*([values] * arity))] if arity else tt
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            return op, bad[0].tolist()
    return None


@dataclass(frozen=True, eq=False)
class Homomorphism:
    underlying: FiniteFunction
    source: FiniteAlgebra
    target: FiniteAlgebra

    def __post_init__(self):
        if self.underlying.domain_size != self.source.size:
            raise AlgebraError("underlying function does not match source size")
        if self.underlying.codomain_size != self.target.size:
            raise AlgebraError("underlying function does not match target size")

    @classmethod
    def checked(cls, values, source: FiniteAlgebra,
                target: FiniteAlgebra) -> "Homomorphism":
        f = FiniteFunction(values, target.size)
        bad = homomorphism_violation(f.values, source, target)
        if bad is not None:
            op, args = bad
            raise AlgebraError(f"not a homomorphism: fails {op} at {args}", args)
        return cls(f, source, target)

    @property
    def values(self) -> np.ndarray:
        return self.underlying.values

    def violation(self):
        return homomorphism_violation(self.values, self.source, self.target)

    def __call__(self, x):
        return self.underlying(x)

    def __matmul__(self, other: "Homomorphism") -> "Homomorphism":
        if other.target != self.source:
            raise AlgebraError("homomorphisms are not composable")
        return Homomorphism(self.underlying @ other.underlying, other.source, self.target)

    def __eq__(self, other):
        return isinstance(other, Homomorphism) and self.underlying == other.underlying

    def __hash__(self):
        return hash(self.underlying)


def identity_hom(X: FiniteAlgebra) -> Homomorphism:
    return Homomorphism(identity(X.size), X, X)


# products

@dataclass(frozen=True, eq=False)
class ProductWitness:
    factors: tuple[FiniteAlgebra, FiniteAlgebra]
    product: FiniteAlgebra
    projections: tuple[Homomorphism, Homomorphism]

    def split(self, w):
        """Decode product elements into ``(x, y)``."""
        ny = self.factors[1].size
        return np.divmod(w, ny)

    def pair(self, x, y):
        return np.asarray(x) * self.factors[1].size + np.asarray(y)


def product(X: FiniteAlgebra, Y: FiniteAlgebra, name: str | None = None) -> ProductWitness:
    if X.signature != Y.signature:
        raise AlgebraError("signature mismatch in product")
    nx, ny = X.size, Y.size
    n = nx * ny
    xs, ys = np.divmod(np.arange(n, dtype=INDEX), ny)
    tables = {}
    for op, arity in X.signature.operations:
        tx, ty = X.tables[op], Y.tables[op]
        if arity == 0:
            tables[op] = int(tx) * ny + int(ty)
        else:
            tables[op] = (tx[np.ix_(*([xs] * arity))] * ny
                          + ty[np.ix_(*([ys] * arity))])
    label = name if name is not None else f"({X.name or '?'} x {Y.name or '?'})"
    P = FiniteAlgebra(X.signature, n, tables, label)
    p1 = Homomorphism(FiniteFunction(xs, nx), P, X)
    p2 = Homomorphism(FiniteFunction(ys, ny), P, Y)
    return ProductWitness((X, Y), P, (p1, p2))


def terminal(sig: Signature) -> FiniteAlgebra:
    return FiniteAlgebra(sig, 1, {op: np.zeros((1,) * a, dtype=INDEX)
                                  for op, a in sig.operations}, "terminal")


def to_terminal(X: FiniteAlgebra) -> Homomorphism:
    return Homomorphism(constant(X.size, 0, 1), X, terminal(X.signature))


def zero_hom(X: FiniteAlgebra, Y: FiniteAlgebra) -> Homomorphism:
    return Homomorphism(constant(X.size, Y.zero, Y.size), X, Y)


def quasi_injections(X: FiniteAlgebra, P: ProductWitness | None = None
                     ) -> tuple[Homomorphism, Homomorphism]:
    """``iota1 = <1, 0>`` and ``iota2 = <0, 1>`` into ``X x X``."""
    if not X.pointed:
        raise AlgebraError("quasi-injections need a jt designation")
    P = P or product(X, X)
    xs = np.arange(X.size)
    z = X.zero
    i1 = FiniteFunction(xs * X.size + z, P.product.size)
    i2 = FiniteFunction(z * X.size + xs, P.product.size)
    for f in (i1, i2):
        bad = homomorphism_violation(f.values, X, P.product)
        if bad is not None:
            raise AlgebraError(
                f"quasi-injection is not a homomorphism: operation {bad[0]!r} "
                f"does not fix zero", bad[1])
    return Homomorphism(i1, X, P.product), Homomorphism(i2, X, P.product)


# combinators; all return plain functions on encoded elements

def pairing(f: FiniteFunction, g: FiniteFunction) -> FiniteFunction:
    if f.domain_size != g.domain_size:
        raise AlgebraError("pairing needs a common domain")
    return FiniteFunction(f.values * g.codomain_size + g.values,
                          f.codomain_size * g.codomain_size)


def cross(f: FiniteFunction, g: FiniteFunction) -> FiniteFunction:
    """``f x g`` on row-major pairs."""
    a, b = np.divmod(np.arange(f.domain_size * g.domain_size, dtype=INDEX), g.domain_size)
    return FiniteFunction(f.values[a] * g.codomain_size + g.values[b],
                          f.codomain_size * g.codomain_size)


def interchange_tau(nx: int, ny: int, nz: int, nw: int) -> FiniteFunction:
    """``((x, y), (z, w)) -> ((x, z), (y, w))``."""
    idx = np.arange(nx * ny * nz * nw, dtype=INDEX)
    left, right = np.divmod(idx, nz * nw)
    x, y = np.divmod(left, ny)
    z, w = np.divmod(right, nw)
    return FiniteFunction((x * nz + z) * (ny * nw) + (y * nw + w), idx.size)


def symmetry_sigma(nx: int, ny: int) -> FiniteFunction:
    x, y = np.divmod(np.arange(nx * ny, dtype=INDEX), ny)
    return FiniteFunction(y * nx + x, nx * ny)


def assoc_alpha(nx: int, ny: int, nz: int) -> FiniteFunction:
    # (X x Y) x Z -> X x (Y x Z) is the identity on row-major codes
    return identity(nx * ny * nz)


def unit_lambda(n: int) -> FiniteFunction:
    # * x X -> X, again the identity on codes
    return identity(n)


def unit_rho(n: int) -> FiniteFunction:
    return identity(n)


def subalgebra(X: FiniteAlgebra, elements: Iterable[int], name: str = ""
               ) -> tuple[FiniteAlgebra, Homomorphism]:
    """Restrict ``X`` to a closed subset; returns it with the inclusion."""
    elems = np.unique(np.asarray(list(elements), dtype=INDEX))
    if elems.size == 0:
        raise AlgebraError("empty subset")
    index = np.full(X.size, -1, dtype=INDEX)
    index[elems] = np.arange(elems.size)
    tables = {}
    for op, arity in X.signature.operations:
        sub = X.tables[op][np.ix_(*([elems] * arity))] if arity else X.tables[op]
        mapped = index[sub]
        bad = np.argwhere(np.atleast_1d(mapped) < 0)
        if bad.size:
            raise AlgebraError(f"subset is not closed under {op!r}",
                               elems[bad[0]].tolist() if arity else [])
        tables[op] = mapped
    S = FiniteAlgebra(X.signature, elems.size, tables, name)
    return S, Homomorphism(FiniteFunction(elems, X.size), S, X)


def relabel(X: FiniteAlgebra, perm: Sequence[int], name: str | None = None) -> FiniteAlgebra:
    """Isomorphic copy in which element ``x`` is renamed ``perm[x]``."""
    p = np.asarray(perm, dtype=INDEX)
    if sorted(p.tolist()) != list(range(X.size)):
        raise AlgebraError("relabelling must be a permutation of the carrier")
    inv = np.empty_like(p)
    inv[p] = np.arange(p.size)
    tables = {}
    for op, arity in X.signature.operations:
        t = X.tables[op]
        tables[op] = p[t[np.ix_(*([inv] * arity))]] if arity else int(p[int(t)])
    return FiniteAlgebra(X.signature, X.size, tables, X.name if name is None else name)


def is_commutative(table: np.ndarray) -> tuple[int, int] | None:
    bad = np.argwhere(table != table.T)
    return tuple(bad[0].tolist()) if bad.size else None


def is_associative(table: np.ndarray) -> tuple[int, int, int] | None:
    n = table.shape[0]
    left = table[table[:, :, None], np.arange(n)[None, None, :]]  # (xy)z
    right = table[np.arange(n)[:, None, None], table[None, :, :]]  # x(yz)
    bad = np.argwhere(left != right)
    return tuple(bad[0].tolist()) if bad.size else None
