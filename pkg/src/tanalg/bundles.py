"""L-algebras, differential objects and differential bundles.

``D`` turns an L-algebra ``(A, a)`` into the product bundle ``X x A`` with
its lift; ``D_flat`` goes back through the kernel of the projection using
the unique fill-ins of the Rosicky square.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Any

import numpy as np

from .algebra import (INDEX, AlgebraError, FiniteAlgebra, FiniteFunction, Homomorphism,
                      constant, cross, identity, pairing, terminal)
from .congruence import kernel
from .reflect import (AssignmentEngine, CommutativeMonoidWitness, VerificationError,
                      _monoid_morphism_violation, find_negation)
from .report import SKIPPED, AxiomEntry, AxiomReport, Check, run_entry
from .tangent import (AdditiveBundleWitness, SetPullback, T_map, bundle_from_pairs,
                      check_additive_bundle, check_bundle_morphism, fibre_power,
                      set_pullback, tangent_bundle)


# L-algebras

@dataclass(frozen=True, eq=False)
class LAlgebra:
    """``a: L(A) -> A`` bijective with ``L(a) = nu_A``; the monoid on
    ``A`` is transported from ``L(A)`` along ``a``."""

    carrier: FiniteAlgebra
    structure_map: Homomorphism          # L(A) -> A

    @property
    def a(self) -> FiniteFunction:
        return self.structure_map.underlying

    @cached_property
    def a_inverse(self) -> FiniteFunction:
        return self.a.inverse()

    @cached_property
    def _source_monoid(self) -> tuple[np.ndarray, int]:
        L = self.structure_map.source
        return L.plus, L.zero

    @cached_property
    def plus(self) -> np.ndarray:
        plus_l, _ = self._source_monoid
        ai = self.a_inverse.values
        return self.a.values[plus_l[np.ix_(ai, ai)]]

    @property
    def zero(self) -> int:
        return int(self.a.values[self._source_monoid[1]])

    @property
    def monoid(self) -> CommutativeMonoidWitness:
        return CommutativeMonoidWitness(self.carrier, self.plus, self.zero)

    def neg(self, engine: AssignmentEngine) -> np.ndarray | None:
        neg_l = engine.reflect(self.carrier).neg
        if neg_l is None:
            return None
        return self.a.values[neg_l[self.a_inverse.values]]


def check_l_algebra(alg: LAlgebra, engine: AssignmentEngine) -> None:
    """Raise ``VerificationError`` unless ``alg`` is an L-algebra."""
    A, a = alg.carrier, alg.structure_map
    R = engine.reflect(A)
    if a.source != R.reflected or a.target != A:
        raise VerificationError("l-algebra", "structure map must go from L(A) to A")
    clash = a.underlying.first_collision()
    if clash is not None or a.underlying.domain_size != A.size:
        raise VerificationError("l-algebra", "structure map is not bijective",
                                list(clash) if clash else [a.underlying.domain_size, A.size])
    hv = a.violation()
    if hv is not None:
        raise VerificationError("l-algebra", f"structure map fails {hv[0]} at {hv[1]}", hv[1])
    La, nu_a = engine.lift(a), engine.nu(A)
    if La != nu_a:
        w = int(np.flatnonzero(La.values != nu_a.values)[0])
        raise VerificationError("l-algebra", f"L(a) differs from nu_A at {w}", [w])
    bad = _monoid_morphism_violation(a.underlying, R.monoid, alg.monoid)
    if bad is not None:
        raise VerificationError("l-algebra", f"a is not a monoid map: {bad[0]} at {bad[1]}",
                                bad[1])


def canonical_l_algebra(A: FiniteAlgebra, engine: AssignmentEngine) -> LAlgebra:
    """``(A, eta_A^{-1})`` when ``A`` is already linear."""
    eta = engine.eta(A)
    if not eta.underlying.is_bijective():
        clash = eta.underlying.first_collision() or (A.size, eta.target.size)
        raise VerificationError("l-algebra", f"{A.name or 'algebra'} is not linear: "
                                "eta is not bijective", list(clash))
    alg = LAlgebra(A, Homomorphism(eta.underlying.inverse(), eta.target, A))
    check_l_algebra(alg, engine)
    return alg


def terminal_l_algebra(sig, engine: AssignmentEngine) -> LAlgebra:
    return canonical_l_algebra(terminal(sig), engine)


# differential bundles

@dataclass(frozen=True, eq=False)
class DifferentialBundle:
    base: FiniteAlgebra
    total: FiniteAlgebra
    bundle: AdditiveBundleWitness        # q, sum on fibre_power(q, 2), zeta, iota
    lift: FiniteFunction                 # E -> T(E) = E x L(E)
    report: AxiomReport | None = field(default=None, compare=False)

    @property
    def q(self) -> FiniteFunction:
        return self.bundle.q

    @property
    def zeta(self) -> FiniteFunction:
        return self.bundle.e

    def with_report(self, report: AxiomReport) -> "DifferentialBundle":
        return replace(self, report=report)


@dataclass(frozen=True, eq=False)
class DifferentialObject:
    witness: CommutativeMonoidWitness
    lift: FiniteFunction                 # A -> T(A)

    @property
    def carrier(self) -> FiniteAlgebra:
        return self.witness.algebra


def _product_bundle(engine: AssignmentEngine, X: FiniteAlgebra, alg: LAlgebra
                    ) -> tuple[FiniteAlgebra, AdditiveBundleWitness]:
    A = alg.carrier
    P = engine.product(X, A)
    nx, na = X.size, A.size
    q = P.projections[0].underlying
    E2 = fibre_power(q, 2)
    x, a = np.divmod(E2.tuples[:, 0], na)
    b = E2.tuples[:, 1] % na
    sigma = FiniteFunction(x * na + alg.plus[a, b], P.product.size)
    zeta = FiniteFunction(np.arange(nx, dtype=INDEX) * na + alg.zero, P.product.size)
    neg = alg.neg(engine)
    iota = None
    if neg is not None:
        xs, vs = np.divmod(np.arange(P.product.size, dtype=INDEX), na)
        iota = FiniteFunction(xs * na + neg[vs], P.product.size)
    return P.product, AdditiveBundleWitness(q, sigma, zeta, iota)


def build_diff_bundle(X: FiniteAlgebra, alg: LAlgebra, engine: AssignmentEngine,
                      verify: bool = True) -> DifferentialBundle:
    """``X x A`` with ``q = pi1`` and the lift
    ``(1 x w^-1) . (<1, 0_a t> x <0_X t, a^-1>)``."""
    A = alg.carrier
    E, B = _product_bundle(engine, X, alg)
    RX = engine.reflect(X)
    om = engine.omega(X, A)
    nx, na, nlx = X.size, A.size, RX.reflected.size
    left = pairing(identity(nx), constant(nx, alg.zero, na))          # <1, 0_a t>
    right = pairing(constant(na, RX.zero, nlx), alg.a_inverse)        # <0_X t, a^-1>
    lam = cross(identity(E.size), om.inverse.underlying) @ cross(left, right)
    D = DifferentialBundle(X, E, B, lam)
    if verify:
        rep = verify_diff_bundle(D, engine)
        if not rep.ok:
            bad = rep.failures[0]
            raise VerificationError(bad.id, f"{bad.id}: {bad.detail}", bad.witness)
        D = D.with_report(rep)
    return D


def build_diff_object(alg: LAlgebra) -> DifferentialObject:
    """``lambda_a = <0_a, a^-1>``."""
    n_l = alg.a_inverse.codomain_size
    lam = alg.zero * n_l + alg.a_inverse.values
    return DifferentialObject(alg.monoid, FiniteFunction(lam, alg.carrier.size * n_l))


def diff_object_as_bundle(d: DifferentialObject, engine: AssignmentEngine
                          ) -> DifferentialBundle:
    """A differential object seen as a bundle over the terminal algebra."""
    A = d.carrier
    one = terminal(A.signature)
    n = A.size
    q = constant(n, 0, 1)
    E2 = fibre_power(q, 2)
    sigma = FiniteFunction(d.witness.plus[E2.tuples[:, 0], E2.tuples[:, 1]], n)
    iota = None
    if engine.reflect(A).neg is not None:
        iota = FiniteFunction(find_negation(d.witness.plus, d.witness.zero), n)
    B = AdditiveBundleWitness(q, sigma, constant(1, d.witness.zero, n), iota)
    return DifferentialBundle(one, A, B, d.lift)


def equalizer_violation(d: DifferentialObject, engine: AssignmentEngine
                        ) -> tuple[str, list[int]] | None:
    """``lambda`` must be an injection onto ``{v : p(v) = 0}``."""
    A = d.carrier
    n_l = engine.L(A).size
    lam = d.lift.values
    if d.lift.codomain_size != A.size * n_l:
        return "codomain", [d.lift.codomain_size, A.size * n_l]
    first = lam // n_l
    bad = np.flatnonzero(first != A.zero)
    if bad.size:
        return "p . lambda = 0", [int(bad[0])]
    clash = d.lift.first_collision()
    if clash is not None:
        return "lambda injective", list(clash)
    if n_l != A.size:
        return "image", [A.size, n_l]
    return None


def diff_object_to_l_algebra(d: DifferentialObject, engine: AssignmentEngine) -> LAlgebra:
    """``a^-1 = pi2 . lambda``; ``a`` is its inverse."""
    A = d.carrier
    LA = engine.L(A)
    bad = equalizer_violation(d, engine)
    if bad is not None:
        raise VerificationError("equalizer", f"lift fails {bad[0]} at {bad[1]}", bad[1])
    a_inv = FiniteFunction(d.lift.values % LA.size, LA.size)
    clash = a_inv.first_collision()
    if clash is not None or LA.size != A.size:
        raise VerificationError("l-algebra", "pi2 . lambda is not bijective",
                                list(clash) if clash else [A.size, LA.size])
    alg = LAlgebra(A, Homomorphism(a_inv.inverse(), LA, A))
    check_l_algebra(alg, engine)
    return alg


# D flat

@dataclass(frozen=True, eq=False)
class RosickyFill:
    """Lookup of ``e`` by ``(q(e), lambda(e))``."""

    keys: np.ndarray
    order: np.ndarray
    width: int

    def __call__(self, x, t) -> np.ndarray:
        code = np.asarray(x, dtype=INDEX) * self.width + np.asarray(t, dtype=INDEX)
        if self.keys.size == 0:
            return np.full(code.shape, -1, dtype=INDEX)
        pos = np.minimum(np.searchsorted(self.keys, code), self.keys.size - 1)
        return np.where(self.keys[pos] == code, self.order[pos], -1)


def rosicky_fill(d: DifferentialBundle) -> RosickyFill:
    """Fill-ins of the Rosicky square; ``(q, lambda)`` must be jointly injective."""
    width = d.lift.codomain_size
    codes = d.q.values * width + d.lift.values
    order = np.argsort(codes, kind="stable")
    keys = codes[order]
    dup = np.flatnonzero(keys[1:] == keys[:-1])
    if dup.size:
        i = int(dup[0])
        raise VerificationError("rosicky", "q and lambda are not jointly injective",
                                [int(order[i]), int(order[i + 1])])
    return RosickyFill(keys, order.astype(INDEX), width)


@dataclass(frozen=True, eq=False)
class FlatData:
    """Everything ``D_flat`` computes on the way to ``(ker q, a_{q, lambda})``."""

    algebra: LAlgebra
    inclusion: Homomorphism              # k_q: ker q -> E
    lambda_tilde: np.ndarray             # L(E) -> E, -1 off the kernel of L(q)
    lambda_flat: FiniteFunction          # E -> ker q
    fill: RosickyFill


def flat_data(d: DifferentialBundle, engine: AssignmentEngine) -> FlatData:
    X, E = d.base, d.total
    if not (X.pointed and E.pointed):
        raise VerificationError("pointed", "kernels need pointed base and total algebras")
    q_h = Homomorphism(d.q, E, X)
    K, k = kernel(q_h)
    LE = engine.L(E)
    nle = LE.size
    fill = rosicky_fill(d)
    # lambda_tilde(u) sits over 0_X with lambda = (0_E, u); this exists
    # exactly for u in the kernel of L(q)
    u = np.arange(nle, dtype=INDEX)
    lt = fill(np.full(nle, X.zero, dtype=INDEX), E.zero * nle + u)
    lam2 = d.lift.values % nle
    missing = np.flatnonzero(lt[lam2] < 0)
    if missing.size:
        e = int(missing[0])
        raise VerificationError("rosicky", f"no fill-in for lambda_2({e})", [e])
    to_k = np.full(E.size, -1, dtype=INDEX)
    to_k[k.values] = np.arange(K.size)
    lam_flat = FiniteFunction(to_k[lt[lam2]], K.size)
    Lk = engine.lift(k)
    img = lt[Lk.values]
    if np.any(img < 0):
        w = int(np.flatnonzero(img < 0)[0])
        raise VerificationError("rosicky", f"no fill-in for L(k_q)({w})", [w])
    a = FiniteFunction(to_k[img], K.size)
    if np.any(a.values < 0):
        w = int(np.flatnonzero(a.values < 0)[0])
        raise VerificationError("kernel", f"fill-in of L(k_q)({w}) leaves ker q", [w])
    alg = LAlgebra(K, Homomorphism(a, engine.L(K), K))
    check_l_algebra(alg, engine)
    return FlatData(alg, k, lt, lam_flat, fill)


def diff_bundle_to_l_algebra(d: DifferentialBundle, engine: AssignmentEngine
                             ) -> tuple[FiniteAlgebra, LAlgebra]:
    return d.base, flat_data(d, engine).algebra


# verification

BUNDLE_AXIOMS = (
    "B01.additive_bundle",
    "B02.pullback_powers",
    "B03.lift_over_zero",
    "B04.lift_over_zeta",
    "B05.lift_coassociative",
    "B06.lift_universal",
    "B07.rosicky_square",
    "B08.fibre_negation",
)


@dataclass(frozen=True, eq=False)
class FibredPower:
    """``E_k`` as an algebra, with its legs into ``E``."""

    algebra: FiniteAlgebra
    pullback: SetPullback
    legs: tuple[Homomorphism, ...]


def fibred_power(E: FiniteAlgebra, q: FiniteFunction, k: int) -> FibredPower:
    Pb = fibre_power(q, k)
    m = Pb.size
    tables = {}
    for op, arity in E.signature.operations:
        t = E.tables[op]
        if arity == 0:
            tables[op] = int(Pb.index_of(*([np.array([int(t)])] * k))[0])
            continue
        grids = np.meshgrid(*([np.arange(m)] * arity), indexing="ij")
        cols = [t[tuple(Pb.tuples[g, j] for g in grids)] for j in range(k)]
        idx = Pb.index_of(*cols)
        if np.any(idx < 0):
            raise AlgebraError(f"fibre power is not closed under {op!r}",
                               np.argwhere(idx < 0)[0].tolist())
        tables[op] = idx
    Ek = FiniteAlgebra(E.signature, m, tables, f"{E.name}_{k}")
    legs = tuple(Homomorphism(Pb.proj(j), Ek, E) for j in range(k))
    return FibredPower(Ek, Pb, legs)


def _t_bundle(d: DifferentialBundle, engine: AssignmentEngine, E2: FibredPower,
              check: Check) -> AdditiveBundleWitness | None:
    """``T`` applied to the bundle, with its sum moved to the set pullback."""
    X, E = d.base, d.total
    B = d.bundle
    T = lambda f, s, t: T_map(engine, Homomorphism(f, s, t))
    sigma = Homomorphism(B.bullet, E2.algebra, E)
    return bundle_from_pairs(T(d.q, E, X), T_map(engine, E2.legs[0]), T_map(engine, E2.legs[1]),
                             T_map(engine, sigma), T(B.e, X, E),
                             T(B.iota, E, E) if B.iota is not None else None, check, "T(E)")


def verify_diff_bundle(d: DifferentialBundle, engine: AssignmentEngine) -> AxiomReport:
    X, E, B = d.base, d.total, d.bundle
    report = AxiomReport()
    cache: dict[str, Any] = {}

    def E_k(k: int) -> FibredPower:
        if k not in cache:
            cache[k] = fibred_power(E, d.q, k)
        return cache[k]

    def TB(check: Check) -> AdditiveBundleWitness | None:
        if "TB" not in cache:
            cache["TB"] = _t_bundle(d, engine, E_k(2), Check())
        if cache["TB"] is None:
            check.fail("T does not carry the bundle to a bundle", [])
        return cache["TB"]

    zX = lambda: engine.tangent(X).z
    zE = lambda: engine.tangent(E).z

    def additive(check: Check):
        check_additive_bundle(B, check, "E")
        for name, f, s, t in (("q", d.q, E, X), ("zeta", B.e, X, E),
                              ("iota", B.iota, E, E)):
            if f is not None:
                hv = Homomorphism(f, s, t).violation()
                check.require(hv is None, f"{name} is not a homomorphism",
                              hv[1] if hv else [])
        hv = Homomorphism(B.bullet, E_k(2).algebra, E).violation()
        check.require(hv is None, "sum is not a homomorphism", hv[1] if hv else [])

    def powers(check: Check):
        Tq = T_map(engine, Homomorphism(d.q, E, X))
        for k in (2, 3):
            Ek = E_k(k)
            cols = [T_map(engine, leg).values for leg in Ek.legs]
            target = fibre_power(Tq, k)
            idx = target.index_of(*cols)
            if not check.require(bool(np.all(idx >= 0)), f"T(E_{k}) leaves the pullback",
                                 [int(np.flatnonzero(idx < 0)[0])] if np.any(idx < 0) else []):
                return
            check.bijective(FiniteFunction(idx, target.size), f"T(E_{k}) onto the pullback")

    def over_zero(check: Check):
        tb = TB(check)
        if tb is not None:
            check_bundle_morphism(B, tb, d.lift, zX(), check, "(lambda, z_X)")

    def over_zeta(check: Check):
        check_bundle_morphism(B, tangent_bundle(engine, E), d.lift, B.e, check,
                              "(lambda, zeta)")

    def coassoc(check: Check):
        TE = engine.tangent(E)
        lam_h = Homomorphism(d.lift, E, TE.total)
        check.equal(T_map(engine, lam_h) @ d.lift, TE.ell @ d.lift, "T(lambda) lambda = l lambda")

    def universal(check: Check):
        tb = TB(check)
        if tb is None:
            return
        E2 = E_k(2)
        r1, r2 = E2.pullback.tuples.T
        mu = tb.add(d.lift.values[r1], zE().values[r2])
        Tq = T_map(engine, Homomorphism(d.q, E, X))
        Pb = set_pullback(zX(), Tq)
        idx = Pb.index_of(d.q.values[r1], mu)
        if check.require(bool(np.all(idx >= 0)), "universal square does not commute",
                         [int(np.flatnonzero(idx < 0)[0])] if np.any(idx < 0) else []):
            check.bijective(FiniteFunction(idx, Pb.size), "E_2 onto the pullback of T(q)")

    def rosicky(check: Check):
        Tq = T_map(engine, Homomorphism(d.q, E, X))
        pE = engine.tangent(E).p
        top = pairing(Tq, pE) @ d.lift
        bottom = pairing(zX(), B.e) @ d.q
        if not check.equal(top, bottom, "<T(q), p> lambda = <z, zeta> q"):
            return
        Pb = set_pullback(pairing(zX(), B.e), pairing(Tq, pE))
        idx = Pb.index_of(d.q.values, d.lift.values)
        check.bijective(FiniteFunction(idx, Pb.size), "E onto the Rosicky pullback")

    def negation(check: Check):
        iota = derived_negation(d, engine)
        check_additive_bundle(replace(B, iota=iota), check, "E with derived negation")
        if B.iota is not None:
            check.equal(iota, B.iota, "derived negation matches the stored one")

    bodies = (additive, powers, over_zero, over_zeta, coassoc, universal, rosicky, negation)
    has_neg = engine.reflect(E).neg is not None
    for axiom_id, body in zip(BUNDLE_AXIOMS, bodies):
        if axiom_id == "B08.fibre_negation" and not has_neg:
            report.add(AxiomEntry(axiom_id, SKIPPED, [0], 0,
                                  f"mode {engine.mode} gives no negation on L(E)"))
            continue
        report.add(run_entry(axiom_id, body))
    report.notes["sizes"] = {"X": X.size, "E": E.size, "TE": int(d.lift.codomain_size)}
    return report


def derived_negation(d: DifferentialBundle, engine: AssignmentEngine) -> FiniteFunction:
    """``iota(e)``: the fill-in over ``q(e)`` whose lift is ``n_E(lambda(e))``."""
    nE = engine.tangent(d.total).n
    if nE is None:
        raise VerificationError("negation", "no negation on T(E) in this mode")
    fill = rosicky_fill(d)
    iota = fill(d.q.values, nE.values[d.lift.values])
    if np.any(iota < 0):
        w = int(np.flatnonzero(iota < 0)[0])
        raise VerificationError("negation", f"n_E(lambda({w})) has no fill-in", [w])
    return FiniteFunction(iota, d.total.size)


def tangent_diff_bundle(engine: AssignmentEngine, X: FiniteAlgebra) -> DifferentialBundle:
    """``(T(X), l_X)`` as a differential bundle over ``X``."""
    TX = engine.tangent(X)
    return DifferentialBundle(X, TX.total, TX.bundle(), TX.ell)


# round trip

ROUNDTRIP_AXIOMS = (
    "R01.diff_bundle",
    "R02.kernel_iso",
    "R03.phi_bijective",
    "R04.phi_inverse",
    "R05.phi_linear",
    "R06.diff_object",
)


def roundtrip_check(X: FiniteAlgebra, alg: LAlgebra, engine: AssignmentEngine) -> AxiomReport:
    """``D`` then ``D_flat``, with the comparison ``phi = <q, lambda_flat>``
    and the kernel isomorphism ``<0, 1>: A -> ker(pi1)`` as explicit tables."""
    report = AxiomReport()
    A = alg.carrier
    state: dict[str, Any] = {}

    def bundle(check: Check):
        D = build_diff_bundle(X, alg, engine, verify=False)
        rep = verify_diff_bundle(D, engine)
        state["D"] = D.with_report(rep)
        for e in rep.failures:
            check.fail(f"{e.id}: {e.detail}", e.witness or [])

    def need(check: Check, *keys) -> bool:
        missing = [k for k in keys if k not in state]
        return check.require(not missing, f"earlier step failed: {', '.join(missing)}")

    def kernel_iso(check: Check):
        if not need(check, "D"):
            return
        flat = flat_data(state["D"], engine)
        state["flat"] = flat
        K, k = flat.algebra.carrier, flat.inclusion
        # kappa(v) = (0_X, v) as an element of ker(pi1)
        pos = np.full(state["D"].total.size, -1, dtype=INDEX)
        pos[k.values] = np.arange(K.size)
        kappa = FiniteFunction(pos[X.zero * A.size + np.arange(A.size)], K.size)
        if not check.bijective(kappa, "kappa: A -> ker(pi1)"):
            return
        kh = Homomorphism(kappa, A, K)
        hv = kh.violation()
        check.require(hv is None, "kappa is not a homomorphism", hv[1] if hv else [])
        lhs = kappa @ alg.a
        rhs = flat.algebra.a @ engine.lift(kh).underlying
        check.equal(lhs, rhs, "kappa a = a_flat L(kappa)")
        state["kappa"] = kappa
        report.notes["kappa"] = kappa.values.tolist()

    def phi_bijective(check: Check):
        if not need(check, "flat"):
            return
        D, flat = state["D"], state["flat"]
        nk = flat.algebra.carrier.size
        phi = FiniteFunction(D.q.values * nk + flat.lambda_flat.values, X.size * nk)
        if check.bijective(phi, "phi = <q, lambda_flat>"):
            state["phi"] = phi
            report.notes["phi"] = phi.values.tolist()

    def phi_inverse(check: Check):
        if not need(check, "phi"):
            return
        D, flat, phi = state["D"], state["flat"], state["phi"]
        K = flat.algebra.carrier
        nle = engine.L(D.total).size
        x, kk = np.divmod(np.arange(X.size * K.size, dtype=INDEX), K.size)
        lam2_k = D.lift.values[flat.inclusion.values[kk]] % nle
        inv = flat.fill(x, D.zeta.values[x] * nle + lam2_k)
        if not check.require(bool(np.all(inv >= 0)), "phi^-1 has no fill-in",
                             [int(np.flatnonzero(inv < 0)[0])] if np.any(inv < 0) else []):
            return
        check.equal(phi.values[inv], np.arange(inv.size), "phi phi^-1 = 1")
        check.equal(inv[phi.values], np.arange(phi.domain_size), "phi^-1 phi = 1")

    def phi_linear(check: Check):
        if not need(check, "phi"):
            return
        D, flat, phi = state["D"], state["flat"], state["phi"]
        D2 = build_diff_bundle(X, flat.algebra, engine, verify=False)
        phi_h = Homomorphism(phi, D.total, D2.total)
        hv = phi_h.violation()
        if not check.require(hv is None, "phi is not a homomorphism", hv[1] if hv else []):
            return
        check.equal(T_map(engine, phi_h) @ D.lift, D2.lift @ phi, "T(phi) lambda = lambda' phi")
        check_bundle_morphism(D.bundle, D2.bundle, phi, identity(X.size), check, "phi")

    def diff_object(check: Check):
        back = diff_object_to_l_algebra(build_diff_object(alg), engine)
        check.equal(back.a, alg.a, "structure map after the differential-object round trip")

    bodies = (bundle, kernel_iso, phi_bijective, phi_inverse, phi_linear, diff_object)
    for axiom_id, body in zip(ROUNDTRIP_AXIOMS, bodies):
        report.add(run_entry(axiom_id, body))
    return report


def bundle_to_json(d: DifferentialBundle) -> dict[str, Any]:
    from .catalog import to_json
    doc = to_json(d.total)
    doc["q"] = d.q.values.tolist()
    doc["sigma"] = d.bundle.bullet.values.tolist()
    doc["zeta"] = d.zeta.values.tolist()
    doc["lambda"] = d.lift.values.tolist()
    return doc
