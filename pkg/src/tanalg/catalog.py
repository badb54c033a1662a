"""Generators for small test algebras, variety law checks, and the JSON
algebra format."""
from __future__ import annotations

import itertools
import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .algebra import (INDEX, AlgebraError, FiniteAlgebra, Signature,
                      is_associative, is_commutative, product)

GROUP = Signature((("mul", 2), ("inv", 1), ("e", 0)), ("e", "mul"))
MONOID = Signature((("mul", 2), ("e", 0)), ("e", "mul"))
LOOP = Signature((("mul", 2), ("ldiv", 2), ("rdiv", 2), ("e", 0)), ("e", "mul"))
RING = Signature((("add", 2), ("neg", 1), ("zero", 0), ("mul", 2)), ("zero", "add"))

FAMILIES = (
    "cyclic_group", "dihedral", "symmetric", "quaternion8", "klein4",
    "leftzero_monoid_plus_identity", "idempotent_monoid2", "random_jt_magma",
    "nonassoc_loop5", "ring_zn_modmul", "ring_trivial_mul", "direct_product",
)
MAX_SIZE = 64


class ParseError(AlgebraError):
    pass


# law checks; each returns (law, witness) or None

def _identity_violation(t: np.ndarray, e: int):
    xs = np.arange(t.shape[0])
    bad = np.flatnonzero((t[e, xs] != xs) | (t[xs, e] != xs))
    return ("identity", [int(bad[0])]) if bad.size else None


def monoid_law_violation(M: FiniteAlgebra, mul: str = "mul"):
    t = M.tables[mul]
    w = is_associative(t)
    if w is not None:
        return "associativity", list(w)
    return _identity_violation(t, M.zero)


def group_law_violation(G: FiniteAlgebra, mul: str = "mul"):
    bad = monoid_law_violation(G, mul)
    if bad is not None:
        return bad
    t, e = G.tables[mul], G.zero
    xs = np.arange(G.size)
    if "inv" in G.tables:
        inv = G.tables["inv"]
        wrong = np.flatnonzero((t[xs, inv] != e) | (t[inv, xs] != e))
        if wrong.size:
            return "inverse", [int(wrong[0])]
    else:
        missing = np.flatnonzero(~(t == e).any(axis=1))
        if missing.size:
            return "inverse", [int(missing[0])]
    return None


def is_latin(t: np.ndarray) -> bool:
    n = t.shape[0]
    full = np.arange(n)
    return all(np.array_equal(np.sort(t[i]), full) and np.array_equal(np.sort(t[:, i]), full)
               for i in range(n))


def loop_law_violation(Q: FiniteAlgebra, mul: str = "mul"):
    t = Q.tables[mul]
    if not is_latin(t):
        return "latin", []
    bad = _identity_violation(t, Q.zero)
    if bad is not None:
        return bad
    n = Q.size
    x, y = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    if "ldiv" in Q.tables:
        ld = Q.tables["ldiv"]
        wrong = np.argwhere(t[x, ld] != y)         # x (x \ y) = y
        if wrong.size:
            return "ldiv", wrong[0].tolist()
    if "rdiv" in Q.tables:
        rd = Q.tables["rdiv"]
        wrong = np.argwhere(t[rd, y] != x)         # (x / y) y = x
        if wrong.size:
            return "rdiv", wrong[0].tolist()
    return None


def ring_law_violation(R: FiniteAlgebra, mul: str = "mul"):
    add, m = R.tables["add"], R.tables[mul]
    for law, w in (("add commutativity", is_commutative(add)),
                   ("add associativity", is_associative(add)),
                   ("mul associativity", is_associative(m))):
        if w is not None:
            return law, list(w)
    bad = _identity_violation(add, R.zero)
    if bad is not None:
        return bad
    n = R.size
    xs = np.arange(n)
    neg = R.tables["neg"]
    wrong = np.flatnonzero(add[xs, neg] != R.zero)
    if wrong.size:
        return "negation", [int(wrong[0])]
    x, y, z = np.meshgrid(xs, xs, xs, indexing="ij")
    left = np.argwhere(m[x, add[y, z]] != add[m[x, y], m[x, z]])
    if left.size:
        return "left distributivity", left[0].tolist()
    right = np.argwhere(m[add[x, y], z] != add[m[x, z], m[y, z]])
    if right.size:
        return "right distributivity", right[0].tolist()
    return None


def variety_violation(X: FiniteAlgebra):
    """Law check chosen by signature; pointed magmas only need the unit."""
    sig = X.signature
    if sig == GROUP:
        return group_law_violation(X)
    if sig == LOOP:
        return loop_law_violation(X)
    if sig == RING:
        return ring_law_violation(X)
    if sig.jt is not None:
        w = X.jt_unit_violation()
        return ("jt unit", list(w)) if w else None
    return None


# generators

def _group(table: np.ndarray, name: str) -> FiniteAlgebra:
    table = np.asarray(table, dtype=INDEX)
    n = table.shape[0]
    inv = np.argmax(table == 0, axis=1)
    G = FiniteAlgebra(GROUP, n, {"mul": table, "inv": inv, "e": 0}, name)
    bad = group_law_violation(G)
    if bad is not None:
        raise AlgebraError(f"{name} is not a group: {bad}")
    return G


def cyclic_group(n: int) -> FiniteAlgebra:
    x = np.arange(n)
    return _group((x[:, None] + x[None, :]) % n, f"Z{n}")


def dihedral(n: int) -> FiniteAlgebra:
    """Symmetries of the n-gon, order 2n; ``r^i s^j`` is encoded ``i + n j``."""
    size = 2 * n
    t = np.empty((size, size), dtype=INDEX)
    for u, v in itertools.product(range(size), repeat=2):
        a, b = u % n, u // n
        c, d = v % n, v // n
        t[u, v] = (a + (c if b == 0 else -c)) % n + n * ((b + d) % 2)
    return _group(t, f"D{n}")


def symmetric(n: int) -> FiniteAlgebra:
    if not 1 <= n <= 4:
        raise AlgebraError("symmetric groups are capped at n = 4")
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    t = np.array([[index[tuple(p[q[i]] for i in range(n))] for q in perms] for p in perms])
    return _group(t, f"S{n}")


def quaternion8() -> FiniteAlgebra:
    # units 1, i, j, k with sign; element = 2 * unit + (1 if negative)
    unit = {(0, u): (0, u) for u in range(4)}
    unit.update({(u, 0): (0, u) for u in range(4)})
    for u in (1, 2, 3):
        unit[(u, u)] = (1, 0)
    for a, b, c in ((1, 2, 3), (2, 3, 1), (3, 1, 2)):
        unit[(a, b)] = (0, c)
        unit[(b, a)] = (1, c)
    t = np.empty((8, 8), dtype=INDEX)
    for x, y in itertools.product(range(8), repeat=2):
        s, u = unit[(x // 2, y // 2)]
        t[x, y] = 2 * u + (s + x % 2 + y % 2) % 2
    return _group(t, "Q8")


def klein4() -> FiniteAlgebra:
    x = np.arange(4)
    return _group(x[:, None] ^ x[None, :], "Klein4")


def leftzero_monoid_plus_identity() -> FiniteAlgebra:
    """``{e, a, b}`` with ``xy = x`` for ``x, y`` in ``{a, b}``."""
    t = np.array([[0, 1, 2], [1, 1, 1], [2, 2, 2]])
    return FiniteAlgebra(MONOID, 3, {"mul": t, "e": 0}, "LZ3")


def idempotent_monoid2() -> FiniteAlgebra:
    t = np.array([[0, 1], [1, 1]])
    return FiniteAlgebra(MONOID, 2, {"mul": t, "e": 0}, "Idem2")


def random_jt_magma(seed: int, size: int) -> FiniteAlgebra:
    """Random binary table with two-sided unit 0."""
    if not 1 <= size <= MAX_SIZE:
        raise AlgebraError(f"size {size} outside 1..{MAX_SIZE}")
    rng = np.random.default_rng(seed)
    t = rng.integers(0, size, size=(size, size))
    t[0, :] = np.arange(size)
    t[:, 0] = np.arange(size)
    return FiniteAlgebra(MONOID, size, {"mul": t, "e": 0}, f"Mag{size}s{seed}")


def _divisions(t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = t.shape[0]
    ld = np.empty_like(t)
    rd = np.empty_like(t)
    for x in range(n):
        for z in range(n):
            ld[x, t[x, z]] = z          # x \ (xz) = z
            rd[t[z, x], x] = z          # (zx) / x = z
    return ld, rd


def loop_from_table(t: np.ndarray, name: str) -> FiniteAlgebra:
    t = np.asarray(t, dtype=INDEX)
    if not is_latin(t):
        raise AlgebraError(f"{name} is not a Latin square")
    ld, rd = _divisions(t)
    Q = FiniteAlgebra(LOOP, t.shape[0], {"mul": t, "ldiv": ld, "rdiv": rd, "e": 0}, name)
    bad = loop_law_violation(Q)
    if bad is not None:
        raise AlgebraError(f"{name} is not a loop: {bad}")
    return Q


def _normalized_latin_squares(n: int, rng: np.random.Generator):
    """Latin squares with first row and column ``0..n-1``, filled cell by
    cell with symbols tried in a seeded order."""
    t = np.full((n, n), -1, dtype=INDEX)
    t[0, :] = np.arange(n)
    t[:, 0] = np.arange(n)
    cells = [(i, j) for i in range(1, n) for j in range(1, n)]
    orders = [rng.permutation(n) for _ in cells]

    def rec(k: int):
        if k == len(cells):
            yield t.copy()
            return
        i, j = cells[k]
        for v in orders[k]:
            if v in t[i, :j] or v in t[:i, j]:
                continue
            t[i, j] = v
            yield from rec(k + 1)
        t[i, j] = -1

    yield from rec(0)


def nonassoc_loop5(seed: int = 0, order: int = 5) -> tuple[FiniteAlgebra, tuple[int, int, int]]:
    """First nonassociative loop met by a seeded search; returns it with a
    triple ``(x, y, z)`` where ``(xy)z != x(yz)``."""
    if order < 5:
        raise AlgebraError("every loop of order below 5 is a group")
    rng = np.random.default_rng(seed)
    for t in _normalized_latin_squares(order, rng):
        w = is_associative(t)
        if w is not None:
            return loop_from_table(t, f"Loop{order}"), w
    raise AlgebraError(f"no nonassociative loop of order {order}")


def _ring(add: np.ndarray, mul: np.ndarray, name: str) -> FiniteAlgebra:
    add = np.asarray(add, dtype=INDEX)
    neg = np.argmax(add == 0, axis=1)
    R = FiniteAlgebra(RING, add.shape[0], {"add": add, "neg": neg, "zero": 0, "mul": mul}, name)
    bad = ring_law_violation(R)
    if bad is not None:
        raise AlgebraError(f"{name} is not a ring: {bad}")
    return R


def ring_zn_modmul(n: int) -> FiniteAlgebra:
    x = np.arange(n)
    return _ring((x[:, None] + x[None, :]) % n, (x[:, None] * x[None, :]) % n, f"Zn{n}")


def ring_trivial_mul(orders: tuple[int, ...] = (2, 2)) -> FiniteAlgebra:
    """Product of cyclic groups with the zero multiplication."""
    G = cyclic_group(orders[0])
    for k in orders[1:]:
        G = product(G, cyclic_group(k)).product
    name = "Triv(" + "x".join(f"Z{k}" for k in orders) + ")"
    return _ring(G.tables["mul"], np.zeros((G.size, G.size), dtype=INDEX), name)


@dataclass(frozen=True)
class GeneratorSpec:
    family: str
    params: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise AlgebraError(f"unknown family {self.family!r}")


def generate(spec: GeneratorSpec) -> FiniteAlgebra:
    f, p = spec.family, spec.params
    if f == "cyclic_group":
        return cyclic_group(*p)
    if f == "dihedral":
        return dihedral(*p)
    if f == "symmetric":
        return symmetric(*p)
    if f == "quaternion8":
        return quaternion8()
    if f == "klein4":
        return klein4()
    if f == "leftzero_monoid_plus_identity":
        return leftzero_monoid_plus_identity()
    if f == "idempotent_monoid2":
        return idempotent_monoid2()
    if f == "random_jt_magma":
        return random_jt_magma(*p)
    if f == "nonassoc_loop5":
        return nonassoc_loop5(*p)[0]
    if f == "ring_zn_modmul":
        return ring_zn_modmul(*p)
    if f == "ring_trivial_mul":
        return ring_trivial_mul(tuple(p) if p else (2, 2))
    if f == "direct_product":
        parts = [generate(s) for s in p]
        out = parts[0]
        for other in parts[1:]:
            out = product(out, other, name=f"{out.name}x{other.name}").product
        if out.size > MAX_SIZE:
            raise AlgebraError(f"product of size {out.size} exceeds {MAX_SIZE}")
        return out
    raise AlgebraError(f"unknown family {f!r}")


def catalog() -> dict[str, FiniteAlgebra]:
    """The named algebras used by the suite and the tests."""
    C = lambda n: GeneratorSpec("cyclic_group", (n,))
    specs = {
        "Z1": C(1), "Z2": C(2), "Z3": C(3), "Z4": C(4), "Z5": C(5), "Z6": C(6), "Z8": C(8),
        "Klein4": GeneratorSpec("klein4"),
        "S3": GeneratorSpec("symmetric", (3,)),
        "D4": GeneratorSpec("dihedral", (4,)),
        "Q8": GeneratorSpec("quaternion8"),
        "Z2xZ4": GeneratorSpec("direct_product", (C(2), C(4))),
        "LZ3": GeneratorSpec("leftzero_monoid_plus_identity"),
        "Idem2": GeneratorSpec("idempotent_monoid2"),
        "Mag4": GeneratorSpec("random_jt_magma", (7, 4)),
        "Loop5": GeneratorSpec("nonassoc_loop5"),
        "RingZ4": GeneratorSpec("ring_zn_modmul", (4,)),
        "RingZ6": GeneratorSpec("ring_zn_modmul", (6,)),
        "TrivZ2xZ2": GeneratorSpec("ring_trivial_mul", (2, 2)),
        "TrivZ3": GeneratorSpec("ring_trivial_mul", (3,)),
    }
    return {name: generate(s).renamed(name) for name, s in specs.items()}


# JSON format

def to_json(X: FiniteAlgebra) -> dict[str, Any]:
    ops = {op: {"arity": a, "table": X.tables[op].tolist()}
           for op, a in X.signature.operations}
    doc: dict[str, Any] = {"name": X.name, "size": X.size, "operations": ops}
    if X.signature.jt is not None:
        doc["jt"] = {"zero": X.signature.jt[0], "plus": X.signature.jt[1]}
    return doc


def serialize(X: FiniteAlgebra) -> str:
    return json.dumps(to_json(X), separators=(",", ":")) + "\n"


def _check_table(op: str, table, arity: int, n: int, path=()):
    if len(path) == arity:
        if isinstance(table, bool) or not isinstance(table, int):
            raise ParseError(f"operation {op!r} entry at index {list(path)} is not an integer",
                             list(path))
        if not 0 <= table < n:
            raise ParseError(f"operation {op!r} entry at index {list(path)} is {table}, "
                             f"outside 0..{n - 1}", list(path))
        return
    if not isinstance(table, list) or len(table) != n:
        raise ParseError(f"operation {op!r} at index {list(path)} must be a list of length {n}",
                         list(path))
    for i, sub in enumerate(table):
        _check_table(op, sub, arity, n, path + (i,))


def from_json(doc: dict[str, Any], strict_unit: bool = True) -> FiniteAlgebra:
    try:
        n = doc["size"]
        ops = doc["operations"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"missing field {exc}") from None
    if not isinstance(n, int) or n < 1:
        raise ParseError(f"size must be a positive integer, got {n!r}")
    if not isinstance(ops, dict):
        raise ParseError("operations must be an object")
    sig_ops, tables = [], {}
    for op, spec in ops.items():
        if not isinstance(spec, dict) or "arity" not in spec or "table" not in spec:
            raise ParseError(f"operation {op!r} needs arity and table")
        arity = spec["arity"]
        if not isinstance(arity, int) or arity < 0:
            raise ParseError(f"operation {op!r} has bad arity {arity!r}")
        _check_table(op, spec["table"], arity, n)
        sig_ops.append((op, arity))
        tables[op] = spec["table"]
    jt = None
    if doc.get("jt") is not None:
        try:
            jt = (doc["jt"]["zero"], doc["jt"]["plus"])
        except (KeyError, TypeError):
            raise ParseError("jt needs zero and plus") from None
    try:
        X = FiniteAlgebra(Signature(tuple(sig_ops), jt), n, tables, doc.get("name", ""))
    except ParseError:
        raise
    except AlgebraError as exc:
        raise ParseError(str(exc), exc.witness) from None
    bad = X.jt_unit_violation()
    if bad is not None:
        msg = f"jt unit law fails at element {bad[0]}"
        if strict_unit:
            raise ParseError(msg, list(bad))
        warnings.warn(msg)
    return X


def parse(source: str | Path, strict_unit: bool = True) -> FiniteAlgebra:
    """Parse a path or JSON text."""
    text = str(source)
    if isinstance(source, Path) or not text.lstrip().startswith("{"):
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise ParseError(f"cannot read {source}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}",
                         [exc.lineno, exc.colno]) from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    return from_json(doc, strict_unit)


def find_isomorphism(X: FiniteAlgebra, Y: FiniteAlgebra) -> np.ndarray | None:
    """Backtracking search for an isomorphism ``X -> Y`` (tiny carriers)."""
    if X.signature != Y.signature or X.size != Y.size:
        return None
    n = X.size
    ops = [(X.tables[o], Y.tables[o], a) for o, a in X.signature.operations]
    f = np.full(n, -1, dtype=INDEX)
    used = np.zeros(n, dtype=bool)
    for tx, ty, a in ops:
        if a == 0:
            f[int(tx)] = int(ty)
    if (f >= 0).sum() != len(set(f[f >= 0].tolist())):
        return None
    used[f[f >= 0]] = True

    def consistent() -> bool:
        known = np.flatnonzero(f >= 0)
        for tx, ty, a in ops:
            if a == 0:
                continue
            grid = np.ix_(*([known] * a))
            img = f[tx[grid]]
            want = ty[np.ix_(*([f[known]] * a))]
            if np.any((img >= 0) & (img != want)):
                return False
        return True

    def rec() -> bool:
        free = np.flatnonzero(f < 0)
        if free.size == 0:
            return True
        x = free[0]
        for y in np.flatnonzero(~used):
            f[x], used[y] = y, True
            if consistent() and rec():
                return True
            f[x], used[y] = -1, False
        return False

    return f.copy() if consistent() and rec() else None
