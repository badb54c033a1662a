"""Commutative-monoid reflection and abelianization as coequalizers of the
quasi-injections, and the linear assignment ``(L, +, 0, -, nu, eta, omega)``
they induce."""
from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import (INDEX, AlgebraError, FiniteAlgebra, FiniteFunction,
                      Homomorphism, ProductWitness, constant, homomorphism_violation,
                      identity, identity_hom, is_associative, is_commutative,
                      pairing, product, quasi_injections, terminal)
from .congruence import Congruence, generate_congruence, quotient
from .report import (AxiomReport, BudgetExceeded, Check, VerificationError,
                     run_entry)

MODES = ("cmon", "ab", "identity", "terminal")

# table entries allowed when building X x X for a coequalizer
DEFAULT_TABLE_BUDGET = 60_000_000


@dataclass(frozen=True, eq=False)
class CommutativeMonoidWitness:
    algebra: FiniteAlgebra
    plus: np.ndarray
    zero: int

    def violation(self) -> tuple[str, list[int]] | None:
        """First failing monoid diagram with its witness elements."""
        xs = np.arange(self.algebra.size)
        bad = np.flatnonzero((self.plus[xs, self.zero] != xs) | (self.plus[self.zero, xs] != xs))
        if bad.size:
            return "unit", [int(bad[0])]
        w = is_commutative(self.plus)
        if w is not None:
            return "commutativity", list(w)
        w = is_associative(self.plus)
        if w is not None:
            return "associativity", list(w)
        return None


@dataclass(frozen=True, eq=False)
class AbelianGroupWitness:
    monoid: CommutativeMonoidWitness
    neg: np.ndarray

    def violation(self) -> tuple[str, list[int]] | None:
        bad = self.monoid.violation()
        if bad is not None:
            return bad
        xs = np.arange(self.monoid.algebra.size)
        p, z = self.monoid.plus, self.monoid.zero
        wrong = np.flatnonzero((p[xs, self.neg] != z) | (p[self.neg, xs] != z))
        if wrong.size:
            return "inverse", [int(wrong[0])]
        return None


def find_negation(plus: np.ndarray, zero: int) -> np.ndarray:
    """Scan for the unique two-sided inverse of every element."""
    n = plus.shape[0]
    hits = (plus == zero) & (plus.T == zero)
    neg = np.empty(n, dtype=INDEX)
    for a in range(n):
        found = np.flatnonzero(hits[a])
        if found.size == 0:
            raise VerificationError("inverse", f"element {a} has no inverse", [a])
        if found.size > 1:
            raise VerificationError("inverse", f"element {a} has several inverses "
                                    f"{found.tolist()}", [a, *found.tolist()])
        neg[a] = found[0]
    return neg


@dataclass(frozen=True, eq=False)
class ReflectionResult:
    input: FiniteAlgebra
    reflected: FiniteAlgebra
    monoid: CommutativeMonoidWitness
    group: AbelianGroupWitness | None
    unit: Homomorphism
    coequalizer_projection: Homomorphism | None
    mode: str
    congruence: Congruence | None = None

    @property
    def plus(self) -> np.ndarray:
        return self.monoid.plus

    @property
    def zero(self) -> int:
        return self.monoid.zero

    @property
    def neg(self) -> np.ndarray | None:
        return None if self.group is None else self.group.neg


def _witnesses(L: FiniteAlgebra, want_neg: bool, need_neg: bool
               ) -> tuple[CommutativeMonoidWitness, AbelianGroupWitness | None]:
    cm = CommutativeMonoidWitness(L, L.plus, L.zero)
    bad = cm.violation()
    if bad is not None:
        raise VerificationError(bad[0], f"reflected plus fails {bad[0]} at {bad[1]}", bad[1])
    group = None
    if want_neg:
        try:
            group = AbelianGroupWitness(cm, find_negation(cm.plus, cm.zero))
        except VerificationError:
            if need_neg:
                raise
    return cm, group


def reflection_cost(X: FiniteAlgebra) -> int:
    """Table entries of ``X x X``."""
    n2 = X.size ** 2
    return sum(n2 ** a for _, a in X.signature.operations)


def reflect(X: FiniteAlgebra, mode: str, table_budget: int = DEFAULT_TABLE_BUDGET,
            square: ProductWitness | None = None) -> ReflectionResult:
    """Reflect ``X`` onto commutative witnesses in the given mode.

    In ``cmon`` and ``ab`` modes ``L(X)`` is ``X x X`` modulo the least
    congruence identifying ``(x, 0)`` with ``(0, x)``; its plus is the
    quotient of the componentwise jt plus and its zero the class of (0, 0).
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "terminal":
        T = terminal(X.signature)
        cm = CommutativeMonoidWitness(T, np.zeros((1, 1), dtype=INDEX), 0)
        group = AbelianGroupWitness(cm, np.zeros(1, dtype=INDEX))
        unit = Homomorphism(constant(X.size, 0, 1), X, T)
        return ReflectionResult(X, T, cm, group, unit, None, mode)
    if not X.pointed:
        raise AlgebraError(f"mode {mode} needs a jt designation")
    if mode == "identity":
        cm, group = _witnesses(X, want_neg=True, need_neg=False)
        return ReflectionResult(X, X, cm, group, identity_hom(X), None, mode)

    cost = reflection_cost(X)
    if cost > table_budget:
        raise BudgetExceeded(f"reflection of a carrier of size {X.size}", cost, table_budget)
    P = square or product(X, X)
    i1, i2 = quasi_injections(X, P)
    seeds = list(zip(i1.values.tolist(), i2.values.tolist()))
    c = generate_congruence(P.product, seeds)
    L, q = quotient(P.product, c, name=f"L({X.name})" if X.name else "")
    cm, group = _witnesses(L, want_neg=(mode == "ab"), need_neg=(mode == "ab"))
    if cm.zero != int(q(X.zero * X.size + X.zero)):
        raise AssertionError("zero is not the class of (0, 0)")
    unit = Homomorphism(q.underlying @ i1.underlying, X, L)
    return ReflectionResult(X, L, cm, group, unit, q, mode, c)


# oracles

def _oracle_result(X: FiniteAlgebra, seeds, mode: str = "ab") -> ReflectionResult:
    c = generate_congruence(X, seeds)
    Q, proj = quotient(X, c, name=f"oracle({X.name})")
    cm, group = _witnesses(Q, want_neg=True, need_neg=(mode == "ab"))
    P = product(X, X)
    xs, ys = np.divmod(np.arange(P.product.size), X.size)
    q = FiniteFunction(Q.plus[proj.values[xs], proj.values[ys]], Q.size)
    return ReflectionResult(X, Q, cm, group, proj, Homomorphism(q, P.product, Q), mode, c)


def group_commutator_oracle(G: FiniteAlgebra, mul: str = "mul") -> ReflectionResult:
    """``G / [G, G]`` as the quotient by the congruence ``xy ~ yx``."""
    from .catalog import group_law_violation
    bad = group_law_violation(G, mul)
    if bad is not None:
        raise AlgebraError(f"not a group: {bad[0]} fails at {bad[1]}", bad[1])
    t = G.tables[mul]
    seeds = list(zip(t.reshape(-1).tolist(), t.T.reshape(-1).tolist()))
    return _oracle_result(G, seeds)


def ring_square_oracle(R: FiniteAlgebra, mul: str = "mul") -> ReflectionResult:
    """``R / R^2`` as the quotient by the congruence ``xy ~ 0``."""
    from .catalog import ring_law_violation
    bad = ring_law_violation(R, mul)
    if bad is not None:
        raise AlgebraError(f"not a ring: {bad[0]} fails at {bad[1]}", bad[1])
    z = R.zero
    seeds = [(int(v), z) for v in np.unique(R.tables[mul])]
    return _oracle_result(R, seeds)


def loop_commutator_oracle(Q: FiniteAlgebra, mul: str = "mul", rdiv: str = "rdiv"
                           ) -> ReflectionResult:
    """Quotient by commutators ``(xy)/(yx)`` and associators
    ``((xy)z)/(x(yz))``, each identified with the identity."""
    from .catalog import loop_law_violation
    bad = loop_law_violation(Q, mul)
    if bad is not None:
        raise AlgebraError(f"not a loop: {bad[0]} fails at {bad[1]}", bad[1])
    m, d, e = Q.tables[mul], Q.tables[rdiv], Q.zero
    n = Q.size
    comm = d[m, m.T]
    x, y, z = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
    assoc = d[m[m[x, y], z], m[x, m[y, z]]]
    targets = np.unique(np.concatenate([comm.reshape(-1), assoc.reshape(-1)]))
    return _oracle_result(Q, [(int(v), e) for v in targets])


# the engine

@dataclass(frozen=True, eq=False)
class OmegaData:
    """``omega = <L(pi1), L(pi2)>: L(X x Y) -> L(X) x L(Y)`` and its inverse."""

    source: ProductWitness           # X x Y
    target: ProductWitness           # L(X) x L(Y)
    forward: Homomorphism
    inverse: Homomorphism


class AssignmentEngine:
    """Memoised linear assignment for one mode.

    Reflections, products, ``nu`` and ``omega`` are cached by algebra
    content, so repeated requests return the very same tables.
    """

    def __init__(self, mode: str = "ab", table_budget: int = DEFAULT_TABLE_BUDGET):
        if mode not in MODES:
            raise ValueError(f"unknown mode {mode!r}")
        self.mode = mode
        self.table_budget = table_budget
        self._lock = threading.RLock()
        self._reflections: dict[str, ReflectionResult] = {}
        self._products: dict[tuple[str, str], ProductWitness] = {}
        self._nu: dict[str, tuple[Homomorphism, Homomorphism]] = {}
        self._omega: dict[tuple[str, str], OmegaData] = {}
        self._tangents: dict[str, object] = {}

    @property
    def monadic(self) -> bool:
        return True

    def product(self, X: FiniteAlgebra, Y: FiniteAlgebra) -> ProductWitness:
        key = (X.key, Y.key)
        with self._lock:
            if key not in self._products:
                self._products[key] = product(X, Y)
            return self._products[key]

    def reflect(self, X: FiniteAlgebra) -> ReflectionResult:
        with self._lock:
            r = self._reflections.get(X.key)
            if r is None:
                square = None
                if self.mode in ("cmon", "ab"):
                    cost = reflection_cost(X)
                    if cost > self.table_budget:
                        raise BudgetExceeded(
                            f"reflection of a carrier of size {X.size}", cost, self.table_budget)
                    square = self.product(X, X)
                r = reflect(X, self.mode, self.table_budget, square)
                self._reflections[X.key] = r
            return r

    def L(self, X: FiniteAlgebra) -> FiniteAlgebra:
        return self.reflect(X).reflected

    def eta(self, X: FiniteAlgebra) -> Homomorphism:
        return self.reflect(X).unit

    def lift(self, f: Homomorphism) -> Homomorphism:
        """``L(f)``."""
        return induced_hom(f, self.reflect(f.source), self.reflect(f.target))

    def nu(self, X: FiniteAlgebra) -> Homomorphism:
        return self._nu_pair(X)[0]

    def nu_inverse(self, X: FiniteAlgebra) -> Homomorphism:
        return self._nu_pair(X)[1]

    def _nu_pair(self, X: FiniteAlgebra) -> tuple[Homomorphism, Homomorphism]:
        with self._lock:
            if X.key not in self._nu:
                self._nu[X.key] = nu(X, self)
            return self._nu[X.key]

    def omega(self, X: FiniteAlgebra, Y: FiniteAlgebra) -> OmegaData:
        key = (X.key, Y.key)
        with self._lock:
            if key not in self._omega:
                self._omega[key] = omega(X, Y, self)
            return self._omega[key]

    def tangent(self, X: FiniteAlgebra):
        from .tangent import build_tangent
        with self._lock:
            if X.key not in self._tangents:
                self._tangents[X.key] = build_tangent(X, self)
            return self._tangents[X.key]


def _monoid_morphism_violation(f: FiniteFunction, A: CommutativeMonoidWitness,
                               B: CommutativeMonoidWitness) -> tuple[str, list[int]] | None:
    v = f.values
    bad = np.argwhere(v[A.plus] != B.plus[np.ix_(v, v)])
    if bad.size:
        return "plus", bad[0].tolist()
    if int(v[A.zero]) != B.zero:
        return "zero", [A.zero]
    return None


def induced_hom(f: Homomorphism, RX: ReflectionResult, RY: ReflectionResult) -> Homomorphism:
    """``L(f)``: the class of ``w`` goes to the class of ``(f x f)(w)``."""
    if RX.mode != RY.mode:
        raise ValueError("reflections come from different modes")
    LX, LY = RX.reflected, RY.reflected
    if RX.mode == "terminal":
        return Homomorphism(constant(1, 0, 1), LX, LY)
    if RX.mode == "identity":
        g = f.underlying
    else:
        qx, qy = RX.coequalizer_projection, RY.coequalizer_projection
        n, m = f.source.size, f.target.size
        a, b = np.divmod(np.arange(n * n, dtype=INDEX), n)
        image = qy.values[f.values[a] * m + f.values[b]]
        _, first = np.unique(qx.values, return_index=True)
        g = FiniteFunction(image[first], LY.size)
        bad = np.flatnonzero(g.values[qx.values] != image)
        if bad.size:
            w = int(bad[0])
            rep = int(first[qx.values[w]])
            raise VerificationError("well-definedness",
                                    f"L(f) is not well defined: ({rep}) and ({w}) share a class "
                                    f"but their images do not", [rep, w])
    bad = _monoid_morphism_violation(g, RX.monoid, RY.monoid)
    if bad is not None:
        raise VerificationError("monoid-morphism", f"L(f) fails {bad[0]} at {bad[1]}", bad[1])
    hv = homomorphism_violation(g.values, LX, LY)
    if hv is not None:
        raise VerificationError("homomorphism", f"L(f) fails {hv[0]} at {hv[1]}", hv[1])
    return Homomorphism(g, LX, LY)


def nu(X: FiniteAlgebra, engine: AssignmentEngine) -> tuple[Homomorphism, Homomorphism]:
    """``nu_X: LL(X) -> L(X)`` as the inverse of ``eta_{L(X)}``; returns
    ``(nu_X, eta_{L(X)})``."""
    RX = engine.reflect(X)
    RL = engine.reflect(RX.reflected)
    eta_l = RL.unit
    if not eta_l.underlying.is_bijective():
        clash = eta_l.underlying.first_collision() or (RX.reflected.size, RL.reflected.size)
        raise VerificationError("idempotency", "eta of L(X) is not bijective", list(clash))
    n = Homomorphism(eta_l.underlying.inverse(), RL.reflected, RX.reflected)
    bad = _monoid_morphism_violation(n.underlying, RL.monoid, RX.monoid)
    if bad is not None:
        raise VerificationError("idempotency", f"nu fails {bad[0]} at {bad[1]}", bad[1])
    return n, eta_l


def omega(X: FiniteAlgebra, Y: FiniteAlgebra, engine: AssignmentEngine) -> OmegaData:
    P = engine.product(X, Y)
    LX, LY = engine.L(X), engine.L(Y)
    Q = engine.product(LX, LY)
    LP = engine.reflect(P.product)
    l1 = engine.lift(P.projections[0])
    l2 = engine.lift(P.projections[1])
    fwd = pairing(l1.underlying, l2.underlying)
    if not fwd.is_bijective():
        clash = fwd.first_collision() or (fwd.domain_size, fwd.codomain_size)
        raise VerificationError("product-preservation",
                                f"omega is not bijective ({fwd.domain_size} -> "
                                f"{fwd.codomain_size})", list(clash))
    RX, RY = engine.reflect(X), engine.reflect(Y)
    prod_plus = Q.product.plus
    target = CommutativeMonoidWitness(Q.product, prod_plus, Q.product.zero)
    bad = _monoid_morphism_violation(fwd, LP.monoid, target)
    if bad is not None:
        raise VerificationError("product-preservation", f"omega fails {bad[0]} at {bad[1]}",
                                bad[1])
    return OmegaData(P, Q, Homomorphism(fwd, LP.reflected, Q.product),
                     Homomorphism(fwd.inverse(), Q.product, LP.reflected))


def is_l_algebra(A: FiniteAlgebra, engine: AssignmentEngine) -> Homomorphism | None:
    """``eta_A^{-1}`` when ``eta_A`` is bijective (and ``L(a) = nu_A``)."""
    eta = engine.eta(A)
    if not eta.underlying.is_bijective():
        return None
    a = Homomorphism(eta.underlying.inverse(), eta.target, A)
    if engine.lift(a) != engine.nu(A):
        raise VerificationError("l-algebra", "L(eta^-1) differs from nu")
    return a


# verification of the assignment axioms

ASSIGNMENT_AXIOMS = (
    "A1.commutative_witness",
    "A2.naturality",
    "A3.product_preservation",
    "A4.idempotency",
    "A5.eckmann_hilton",
    "A6.monad_laws",
    "A7.functor_laws",
)


def _binary_hom(engine: AssignmentEngine, L: FiniteAlgebra, table: np.ndarray) -> Homomorphism:
    P = engine.product(L, L)
    a, b = np.divmod(np.arange(P.product.size), L.size)
    return Homomorphism(FiniteFunction(table[a, b], L.size), P.product, L)


def verify_assignment(engine: AssignmentEngine, algebras: Sequence[FiniteAlgebra],
                      homs: Sequence[Homomorphism] = ()) -> AxiomReport:
    report = AxiomReport()

    def witness(check: Check):
        for X in algebras:
            R = engine.reflect(X)
            bad = R.monoid.violation()
            check.require(bad is None, f"witness of {X.name} fails", bad[1] if bad else ())
            if engine.mode == "ab":
                check.require(R.group is not None, f"no negation on L({X.name})")
            check.equal(R.unit.underlying @ identity(X.size), R.unit.underlying, "unit")
            if engine.mode in ("cmon", "ab"):
                q = R.coequalizer_projection
                i1, i2 = quasi_injections(X, engine.product(X, X))
                check.equal(q.underlying @ i1.underlying, q.underlying @ i2.underlying,
                            f"q coequalizes the quasi-injections on {X.name}")
                check.equal(q.underlying @ i1.underlying, R.unit.underlying, "q.iota1 = eta")
                check.require(np.unique(R.unit.values).size == R.reflected.size,
                              f"eta of {X.name} is not surjective")

    def naturality(check: Check):
        for f in homs:
            RX, RY = engine.reflect(f.source), engine.reflect(f.target)
            g = engine.lift(f).values
            check.equal(g[RX.plus], RY.plus[np.ix_(g, g)], "L(f) preserves +")
            check.require(int(g[RX.zero]) == RY.zero, "L(f) preserves 0", [RX.zero])
            if RX.neg is not None and RY.neg is not None:
                check.equal(g[RX.neg], RY.neg[g], "L(f) preserves -")
            check.equal(engine.eta(f.target).values[f.values],
                        g[engine.eta(f.source).values], "eta natural")

    def products(check: Check):
        from .algebra import terminal as term
        for X in algebras:
            T = term(X.signature)
            for Y in (T, X):
                om = engine.omega(X, Y)
                check.bijective(om.forward.underlying, f"omega({X.name}, {Y.name})")
            check.require(engine.L(T).size == 1, "L(terminal) is terminal")

    def idempotency(check: Check):
        for X in algebras:
            n = engine.nu(X)
            LX = engine.L(X)
            check.equal(n.underlying @ engine.eta(LX).underlying, identity(LX.size),
                        "nu . eta_L = 1")
            check.equal(engine.nu(LX), engine.lift(n), "nu_L = L(nu)")

    def eckmann_hilton(check: Check):
        for X in algebras:
            R = engine.reflect(X)
            LX = R.reflected
            RL = engine.reflect(LX)
            plus_hom = _binary_hom(engine, LX, R.plus)
            om = engine.omega(LX, LX)
            lhs = engine.lift(plus_hom).underlying @ om.inverse.underlying
            check.equal(lhs.values, RL.plus.reshape(-1), "L(+) . omega^-1 = +_L")
            T = terminal(X.signature)
            zero_hom_ = Homomorphism(constant(1, R.zero, LX.size), T, LX)
            check.require(int(engine.lift(zero_hom_).values[0]) == RL.zero,
                          "0_L = L(0) . t^-1")
            if R.neg is not None:
                neg_hom = Homomorphism(FiniteFunction(R.neg, LX.size), LX, LX)
                check.equal(engine.lift(neg_hom).values, RL.neg, "-_L = L(-)")

    def monad(check: Check):
        for X in algebras:
            LX = engine.L(X)
            n = engine.nu(X).underlying
            check.equal(n @ engine.eta(LX).underlying, identity(LX.size), "nu . eta_L")
            check.equal(n @ engine.lift(engine.eta(X)).underlying, identity(LX.size),
                        "nu . L(eta)")

    def functor(check: Check):
        for X in algebras:
            check.equal(engine.lift(identity_hom(X)).underlying, identity(engine.L(X).size),
                        "L(1) = 1")
        for f in homs:
            for g in homs:
                if f.target == g.source:
                    check.equal(engine.lift(g @ f).underlying,
                                engine.lift(g).underlying @ engine.lift(f).underlying,
                                "L(g f) = L(g) L(f)")

    bodies = (witness, naturality, products, idempotency, eckmann_hilton, monad, functor)
    for axiom_id, body in zip(ASSIGNMENT_AXIOMS, bodies):
        report.add(run_entry(axiom_id, body))
    return report
