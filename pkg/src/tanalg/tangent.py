"""The tangent structure ``T(X) = X x L(X)`` induced by a linear
assignment, set pullbacks, additive bundles, and the axiom verifier."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Sequence

import numpy as np

from .algebra import (INDEX, AlgebraError, FiniteAlgebra, FiniteFunction,
                      Homomorphism, ProductWitness, constant, cross, identity,
                      interchange_tau, pairing, terminal, to_terminal)
from .reflect import AssignmentEngine, OmegaData, ReflectionResult
from .report import (SKIPPED, AxiomEntry, AxiomReport, BudgetExceeded, Check,
                     run_entry)

DEFAULT_BUDGET = 1_000_000


# set pullbacks

@dataclass(frozen=True, eq=False)
class SetPullback:
    """Tuples ``(a1, .., ak)`` with equal images, sorted lexicographically."""

    tuples: np.ndarray            # shape (m, k)
    sizes: tuple[int, ...]        # carrier sizes of the factors

    @property
    def size(self) -> int:
        return int(self.tuples.shape[0])

    def proj(self, j: int) -> FiniteFunction:
        return FiniteFunction(self.tuples[:, j], self.sizes[j])

    @cached_property
    def _codes(self) -> np.ndarray:
        return self.code(*self.tuples.T)

    def code(self, *cols) -> np.ndarray:
        out = np.zeros(np.shape(cols[0]), dtype=INDEX)
        for col, n in zip(cols, self.sizes):
            out = out * n + np.asarray(col, dtype=INDEX)
        return out

    def index_of(self, *cols) -> np.ndarray:
        """Positions of the given tuples, ``-1`` where absent."""
        c = self.code(*cols)
        if self.size == 0:
            return np.full(np.shape(c), -1, dtype=INDEX)
        pos = np.minimum(np.searchsorted(self._codes, c), self.size - 1)
        return np.where(self._codes[pos] == c, pos, -1)


def set_pullback(f: FiniteFunction, g: FiniteFunction) -> SetPullback:
    if f.codomain_size != g.codomain_size:
        raise AlgebraError("pullback legs need a common codomain")
    a, b = np.nonzero(f.values[:, None] == g.values[None, :])
    return SetPullback(np.stack([a, b], axis=1).astype(INDEX), (f.domain_size, g.domain_size))


def fibre_power(q: FiniteFunction, k: int) -> SetPullback:
    """``E_k``: k-tuples lying over a common base point."""
    chunks = []
    for x in np.unique(q.values):
        fib = np.flatnonzero(q.values == x)
        grids = np.meshgrid(*([fib] * k), indexing="ij")
        chunks.append(np.stack([g.reshape(-1) for g in grids], axis=1))
    tuples = np.concatenate(chunks) if chunks else np.zeros((0, k), dtype=INDEX)
    order = np.lexsort(tuples.T[::-1])
    return SetPullback(tuples[order].astype(INDEX), (q.domain_size,) * k)


# additive bundles

@dataclass(frozen=True, eq=False)
class AdditiveBundleWitness:
    """``q: E -> X`` with fibrewise sum ``bullet`` indexed by
    ``fibre_power(q, 2)``, zero section ``e`` and optional negation."""

    q: FiniteFunction
    bullet: FiniteFunction
    e: FiniteFunction
    iota: FiniteFunction | None = None

    @cached_property
    def E2(self) -> SetPullback:
        return fibre_power(self.q, 2)

    def add(self, a, b) -> np.ndarray:
        idx = self.E2.index_of(a, b)
        if np.any(idx < 0):
            bad = int(np.flatnonzero(idx < 0)[0])
            raise AlgebraError("pair is not in the same fibre",
                               [int(np.atleast_1d(a)[bad]), int(np.atleast_1d(b)[bad])])
        return self.bullet.values[idx]


def check_additive_bundle(B: AdditiveBundleWitness, check: Check, label: str) -> None:
    q, e = B.q, B.e
    E2 = B.E2
    a, b = E2.tuples[:, 0], E2.tuples[:, 1]
    s = B.bullet.values
    check.require(B.bullet.domain_size == E2.size, f"{label}: sum is not defined on E2",
                  [B.bullet.domain_size, E2.size])
    check.equal(q.values[s], q.values[a], f"{label}: q . sum = q . rho")
    check.equal((q @ e).values, np.arange(q.codomain_size), f"{label}: q . e = 1")
    zq = e.values[q.values]
    E = np.arange(q.domain_size)
    check.equal(B.add(zq, E), E, f"{label}: left unit")
    check.equal(B.add(E, zq), E, f"{label}: right unit")
    check.equal(s, B.add(b, a), f"{label}: commutativity")
    E3 = fibre_power(q, 3)
    x, y, z = E3.tuples.T
    check.equal(B.add(B.add(x, y), z), B.add(x, B.add(y, z)), f"{label}: associativity")
    if B.iota is not None:
        i = B.iota.values
        check.equal(q.values[i], q.values, f"{label}: q . iota = q")
        check.equal(B.add(E, i), zq, f"{label}: right inverse")
        check.equal(B.add(i, E), zq, f"{label}: left inverse")


def check_bundle_morphism(B: AdditiveBundleWitness, B2: AdditiveBundleWitness,
                          f: FiniteFunction, g: FiniteFunction, check: Check,
                          label: str) -> None:
    """``(f, g)`` from ``B`` to ``B2``: over ``g``, preserving sum and zero."""
    check.equal((B2.q @ f).values, (g @ B.q).values, f"{label}: q' f = g q")
    if check.failed:
        return
    a, b = B.E2.tuples.T
    check.equal(f.values[B.bullet.values], B2.add(f.values[a], f.values[b]),
                f"{label}: f preserves sums")
    check.equal((f @ B.e).values, (B2.e @ g).values, f"{label}: f e = e' g")


def bundle_from_pairs(q: FiniteFunction, r1: FiniteFunction, r2: FiniteFunction,
                      op: FiniteFunction, e: FiniteFunction, iota: FiniteFunction | None,
                      check: Check, label: str) -> AdditiveBundleWitness | None:
    """Turn a sum defined on an algebraic pullback ``P2`` (with legs r1, r2)
    into one on the set pullback, after checking ``<r1, r2>`` is a bijection
    onto it."""
    E2 = fibre_power(q, 2)
    k = E2.index_of(r1.values, r2.values)
    if not check.require(bool(np.all(k >= 0)), f"{label}: <r1, r2> leaves the pullback",
                         [int(np.flatnonzero(k < 0)[0])] if np.any(k < 0) else []):
        return None
    if not check.bijective(FiniteFunction(k, E2.size), f"{label}: <r1, r2> onto the pullback"):
        return None
    inv = np.empty(E2.size, dtype=INDEX)
    inv[k] = np.arange(k.size)
    return AdditiveBundleWitness(q, FiniteFunction(op.values[inv], op.codomain_size), e, iota)


# functor-level helpers

def T_object(engine: AssignmentEngine, A: FiniteAlgebra) -> ProductWitness:
    return engine.product(A, engine.L(A))


def T_map(engine: AssignmentEngine, f: Homomorphism) -> FiniteFunction:
    """``T(f) = f x L(f)``."""
    return cross(f.underlying, engine.lift(f).underlying)


def tangent_of_function(f: Homomorphism | FiniteFunction, TX: "TangentSpace",
                        TY: "TangentSpace") -> FiniteFunction:
    if isinstance(f, FiniteFunction):
        f = Homomorphism(f, TX.base, TY.base)
    if f.source != TX.base or f.target != TY.base:
        raise AlgebraError("T(f) needs f between the two bases")
    return T_map(TX.engine, f)


def _sum_map(R: ReflectionResult, nx: int) -> FiniteFunction:
    n = R.reflected.size
    x, ab = np.divmod(np.arange(nx * n * n, dtype=INDEX), n * n)
    a, b = np.divmod(ab, n)
    return FiniteFunction(x * n + R.plus[a, b], nx * n)


def _zero_map(R: ReflectionResult, nx: int) -> FiniteFunction:
    n = R.reflected.size
    return FiniteFunction(np.arange(nx, dtype=INDEX) * n + R.zero, nx * n)


def _neg_map(R: ReflectionResult, nx: int) -> FiniteFunction | None:
    if R.neg is None:
        return None
    n = R.reflected.size
    x, a = np.divmod(np.arange(nx * n, dtype=INDEX), n)
    return FiniteFunction(x * n + R.neg[a], nx * n)


@dataclass(frozen=True, eq=False)
class TangentSpace:
    base: FiniteAlgebra
    engine: AssignmentEngine
    reflection: ReflectionResult
    carrier: ProductWitness          # X x L(X)
    pairs: ProductWitness            # X x (L(X) x L(X)), the algebra T2(X)
    omega: OmegaData                 # L(X x L(X)) -> L(X) x LL(X)
    p: FiniteFunction
    s: FiniteFunction
    z: FiniteFunction
    n: FiniteFunction | None
    zhat: FiniteFunction             # L(X) -> L(T(X))
    ell: FiniteFunction
    flip: FiniteFunction

    @property
    def total(self) -> FiniteAlgebra:
        return self.carrier.product

    @property
    def L(self) -> FiniteAlgebra:
        return self.reflection.reflected

    @property
    def square(self) -> ProductWitness:
        """``T(T(X)) = T(X) x L(T(X))``."""
        return T_object(self.engine, self.total)

    @property
    def iterated(self) -> "TangentSpace":
        return self.engine.tangent(self.total)

    def with_maps(self, **maps) -> "TangentSpace":
        return replace(self, **maps)

    # structural maps as homomorphisms, so that T can be applied to them
    def hom(self, name: str) -> Homomorphism:
        X, TX, T2X, TTX = self.base, self.total, self.pairs.product, self.square.product
        ends = {"p": (TX, X), "s": (T2X, TX), "z": (X, TX), "n": (TX, TX),
                "ell": (TX, TTX), "flip": (TTX, TTX)}
        src, dst = ends[name]
        return Homomorphism(getattr(self, name), src, dst)

    def rho(self, j: int) -> Homomorphism:
        """Legs ``T2(X) -> T(X)``: ``(x, (a, b))`` to ``(x, a)`` or ``(x, b)``."""
        n = self.L.size
        x, ab = np.divmod(np.arange(self.pairs.product.size, dtype=INDEX), n * n)
        a, b = np.divmod(ab, n)
        v = x * n + (a if j == 1 else b)
        return Homomorphism(FiniteFunction(v, self.total.size), self.pairs.product, self.total)

    def bundle(self) -> AdditiveBundleWitness:
        """``(p, s, z[, n])`` with the sum moved onto the set pullback."""
        check = Check()
        B = bundle_from_pairs(self.p, self.rho(1).underlying, self.rho(2).underlying,
                              self.s, self.z, self.n, check, "T2")
        if B is None:
            raise AlgebraError(check.message, check.witness)
        return B


def build_tangent(X: FiniteAlgebra, engine: AssignmentEngine) -> TangentSpace:
    """All structural maps as explicit tables, following the composites
    ``l = (1 x w^-1)(<1, 0t> x <0t, nu^-1>)`` and ``c = (1 x w^-1) tau (1 x w)``."""
    R = engine.reflect(X)
    LX = R.reflected
    nx, nl = X.size, LX.size
    P = engine.product(X, LX)
    pairs = engine.product(X, engine.product(LX, LX).product)
    p = P.projections[0].underlying
    s = _sum_map(R, nx)
    z = _zero_map(R, nx)
    n = _neg_map(R, nx)

    om = engine.omega(X, LX)
    LLX = engine.L(LX)
    nll = LLX.size
    nu_inv = engine.nu_inverse(X).underlying            # eta_{L(X)}
    lead = pairing(constant(nl, R.zero, nl), nu_inv)     # <0 t, nu^-1>
    zhat = om.inverse.underlying @ lead
    ntx = P.product.size
    ell = cross(identity(ntx), om.inverse.underlying) @ cross(z, lead)
    one_w = cross(identity(ntx), om.forward.underlying)
    one_wi = cross(identity(ntx), om.inverse.underlying)
    flip = one_wi @ interchange_tau(nx, nl, nl, nll) @ one_w
    return TangentSpace(X, engine, R, P, pairs, om, p, s, z, n, zhat, ell, flip)


def t_product_comparison(engine: AssignmentEngine, X: FiniteAlgebra, Y: FiniteAlgebra
                         ) -> FiniteFunction:
    """``<T(pi1), T(pi2)>: T(X x Y) -> T(X) x T(Y)``."""
    P = engine.product(X, Y)
    f1 = T_map(engine, P.projections[0])
    f2 = T_map(engine, P.projections[1])
    return pairing(f1, f2)


def octonary(TX: TangentSpace, u: np.ndarray) -> np.ndarray:
    """Split elements of ``T^3(X)`` into the eight coordinates
    ``X, L, L, L2, L, L2, L2, L3`` (columns 0..7)."""
    eng = TX.engine
    TT = TX.iterated                      # tangent space of T(X)
    LX, LLX = TX.L, eng.L(TX.L)
    nl, nll = LX.size, LLX.size
    om_x = TX.omega                       # L(TX) -> LX x LLX
    om_t = TT.omega                       # L(TTX) -> L(TX) x LL(TX)
    ltx = eng.L(TX.total).size
    lltx = eng.L(eng.L(TX.total)).size
    m = eng.L(TT.total).size
    t2, l = np.divmod(u, m)
    t1, lt = np.divmod(t2, ltx)
    x, a = np.divmod(t1, nl)
    b, w = np.divmod(om_x.forward.values[lt], nll)
    c_, ll = np.divmod(om_t.forward.values[l], lltx)
    p5, p6 = np.divmod(om_x.forward.values[c_], nll)
    l_om = eng.lift(om_x.forward)          # LL(TX) -> L(LX x LLX)
    om_l = eng.omega(LX, LLX)
    nlll = eng.L(LLX).size
    p7, p8 = np.divmod(om_l.forward.values[l_om.values[ll]], nlll)
    return np.stack([x, a, b, w, p5, p6, p7, p8], axis=1)


# verification

TANGENT_AXIOMS = (
    "T01.p_natural",
    "T02.additive_bundle",
    "T03.lift_bundle_morphism",
    "T04.lift_coassociative",
    "T05.flip_involution",
    "T06.flip_yang_baxter",
    "T07.flip_bundle_morphism",
    "T08.lift_flip_compatible",
    "T09.lift_universal",
    "T10.lift_universal_preserved",
    "T11.cartesian",
)


def _level(axiom_id: str) -> int:
    if axiom_id in ("T04.lift_coassociative", "T06.flip_yang_baxter",
                    "T08.lift_flip_compatible", "T10.lift_universal_preserved"):
        return 3
    if axiom_id == "T01.p_natural":
        return 1
    return 2


def _auto_homs(TX: TangentSpace) -> list[Homomorphism]:
    X = TX.base
    P = TX.carrier
    return [TX.engine.eta(X), to_terminal(X), P.projections[0], P.projections[1]]


def _tangent_for(TX: TangentSpace, A: FiniteAlgebra) -> TangentSpace:
    return TX if A == TX.base else TX.engine.tangent(A)


def verify_tangent(TX: TangentSpace, sampled_homs: Sequence[Homomorphism] = (),
                   depth: int = 3, budget: int = DEFAULT_BUDGET,
                   partner: FiniteAlgebra | None = None) -> AxiomReport:
    """Every registry entry is a full table comparison; entries above the
    requested depth or over budget are skipped."""
    eng = TX.engine
    X = TX.base
    report = AxiomReport()
    sizes: dict[str, int | None] = {"T": TX.total.size, "T2": None, "T3": None}
    # level -> (size, reason) when that tangent depth cannot be materialized
    blocked: dict[int, tuple[int, str]] = {}
    try:
        sizes["T2"] = TX.square.product.size
        if sizes["T2"] > budget:
            blocked[2] = blocked[3] = (sizes["T2"], f"|T2| = {sizes['T2']} exceeds budget {budget}")
    except BudgetExceeded as exc:
        blocked[2] = blocked[3] = (exc.size, str(exc))
    if 3 not in blocked:
        try:
            sizes["T3"] = T_object(eng, TX.square.product).product.size
            if sizes["T3"] > budget:
                blocked[3] = (sizes["T3"], f"|T3| = {sizes['T3']} exceeds budget {budget}")
        except BudgetExceeded as exc:
            blocked[3] = (exc.size, str(exc))
    pullback_depth = {"value": 0}

    def T(f: Homomorphism) -> FiniteFunction:
        return T_map(eng, f)

    def naturality(check: Check):
        homs = list(sampled_homs) + _auto_homs(TX)
        skipped = 0
        for f in homs:
            try:
                TA, TB = _tangent_for(TX, f.source), _tangent_for(TX, f.target)
                Tf = T(f)
            except BudgetExceeded:
                skipped += 1
                continue
            check.equal(TB.p @ Tf, f.underlying @ TA.p, "p natural")
            check.equal(Tf @ TA.z, TB.z @ f.underlying, "z natural")
            Lf = eng.lift(f).underlying
            T2f = cross(f.underlying, cross(Lf, Lf))
            check.equal(TB.s @ T2f, Tf @ TA.s, "s natural")
            if TA.n is not None and TB.n is not None:
                check.equal(TB.n @ Tf, Tf @ TA.n, "n natural")
            if depth >= 2:
                TTf = T(Homomorphism(Tf, TA.total, TB.total))
                check.equal(TTf @ TA.ell, TB.ell @ Tf, "l natural")
                check.equal(TTf @ TA.flip, TB.flip @ TTf, "c natural")
        if skipped:
            report.notes.setdefault("coverage", {})["naturality_skipped_homs"] = skipped
        report.notes.setdefault("coverage", {})["naturality_homs"] = len(homs) - skipped

    def additive(check: Check):
        B = bundle_from_pairs(TX.p, TX.rho(1).underlying, TX.rho(2).underlying,
                              TX.s, TX.z, TX.n, check, "T")
        if B is None:
            return
        check_additive_bundle(B, check, "T")
        pullback_depth["value"] = 0
        if depth < 2 or check.failed:
            return
        # T applied to the bundle, pullbacks compared as sets
        Tq = T(TX.hom("p"))
        TB = bundle_from_pairs(Tq, T(TX.rho(1)), T(TX.rho(2)), T(TX.hom("s")),
                               T(TX.hom("z")), T(TX.hom("n")) if TX.n is not None else None,
                               check, "T(T)")
        if TB is None:
            return
        check_additive_bundle(TB, check, "T(T)")
        if not check.failed:
            pullback_depth["value"] = 1

    def lift_morphism(check: Check):
        B = TX.bundle()
        TB = _t_of_bundle(TX, check)
        if TB is not None:
            check_bundle_morphism(B, TB, TX.ell, TX.z, check, "(l, z)")

    def coassoc(check: Check):
        TT = TX.iterated
        lhs = T(TX.hom("ell")) @ TX.ell
        rhs = TT.ell @ TX.ell
        check.equal(lhs, rhs, "T(l) l = l_T l")
        if check.failed:
            return
        R = TX.reflection
        o = octonary(TX, lhs.values)
        x, v = np.divmod(np.arange(TX.total.size), TX.L.size)
        LLX = eng.L(TX.L)
        nu_l = eng.nu_inverse(TX.L).values[eng.nu_inverse(X).values[v]]
        want = [x, R.zero, R.zero, eng.reflect(TX.L).zero, R.zero,
                eng.reflect(TX.L).zero, eng.reflect(TX.L).zero, nu_l]
        for i, w in enumerate(want):
            check.equal(o[:, i], np.broadcast_to(w, x.shape), f"pi{i + 1} of T(l) l")

    def involution(check: Check):
        check.equal(TX.flip @ TX.flip, identity(TX.flip.domain_size), "c c = 1")

    def yang_baxter(check: Check):
        TT = TX.iterated
        Tc = T(TX.hom("flip"))
        cT = TT.flip
        lhs = Tc @ cT @ Tc
        rhs = cT @ Tc @ cT
        check.equal(lhs, rhs, "T(c) c_T T(c) = c_T T(c) c_T")
        u = np.arange(lhs.domain_size)
        o_in = octonary(TX, u)
        perm = [0, 4, 2, 6, 1, 5, 3, 7]
        for side, f in (("left", lhs), ("right", rhs)):
            o_out = octonary(TX, f.values)
            for i in range(8):
                check.equal(o_out[:, i], o_in[:, perm[i]],
                            f"pi{i + 1} of the {side} side")

    def flip_morphism(check: Check):
        TB = _t_of_bundle(TX, check)
        if TB is None:
            return
        B2 = tangent_bundle(TX.engine, TX.total)
        check_bundle_morphism(TB, B2, TX.flip, identity(TX.total.size), check, "(c, 1)")

    def lift_flip(check: Check):
        check.equal(TX.flip @ TX.ell, TX.ell, "c l = l")
        TT = TX.iterated
        lhs = T(TX.hom("ell")) @ TX.flip
        rhs = TT.flip @ T(TX.hom("flip")) @ TT.ell
        check.equal(lhs, rhs, "T(l) c = c_T T(c) l_T")

    def universal(check: Check):
        mu = _universality_map(TX, check)
        if mu is None:
            return
        # concrete form (x, (u, v)) -> ((x, v), zhat(u))
        nl = TX.L.size
        x, uv = np.divmod(np.arange(TX.pairs.product.size), nl * nl)
        u_, v_ = np.divmod(uv, nl)
        ltx = eng.L(TX.total).size
        check.equal(mu.values, (x * nl + v_) * ltx + TX.zhat.values[u_],
                    "universal map matches ((x, v), zhat(u))")
        Tp = T(TX.hom("p"))
        Pb = set_pullback(TX.z, Tp)
        idx = Pb.index_of(x, mu.values)
        check.require(bool(np.all(idx >= 0)), "universal square does not commute",
                      [int(np.flatnonzero(idx < 0)[0])] if np.any(idx < 0) else [])
        if not check.failed:
            check.bijective(FiniteFunction(idx, Pb.size), "T2(X) onto the pullback of T(p) along z")

    def universal_preserved(check: Check):
        mu = _universality_map(TX, check)
        if mu is None:
            return
        T2X, TTX = TX.pairs.product, TX.square.product
        mu_h = Homomorphism(mu, T2X, TTX)
        Tmu = T(mu_h)
        leg = Homomorphism(TX.p @ TX.rho(1).underlying, T2X, X)
        Tleg = T(leg)
        Tz = T(TX.hom("z"))
        Tp_h = Homomorphism(T(TX.hom("p")), TTX, TX.total)
        TTp = T(Tp_h)
        Pb = set_pullback(Tz, TTp)
        idx = Pb.index_of(Tleg.values, Tmu.values)
        check.require(bool(np.all(idx >= 0)), "T of the universal square does not commute",
                      [int(np.flatnonzero(idx < 0)[0])] if np.any(idx < 0) else [])
        if not check.failed:
            check.bijective(FiniteFunction(idx, Pb.size), "T(T2(X)) onto the pullback")

    def cartesian(check: Check):
        Y = partner if partner is not None else X
        for other in (terminal(X.signature), Y):
            k = t_product_comparison(eng, X, other)
            check.bijective(k, f"<T(pi1), T(pi2)> for {X.name} x {other.name or 'terminal'}")
        check.require(T_object(eng, terminal(X.signature)).product.size == 1,
                      "T(terminal) is terminal")

    bodies = (naturality, additive, lift_morphism, coassoc, involution, yang_baxter,
              flip_morphism, lift_flip, universal, universal_preserved, cartesian)
    for axiom_id, body in zip(TANGENT_AXIOMS, bodies):
        need = _level(axiom_id)
        if need > depth:
            size = sizes["T3" if need == 3 else "T2"] or 0
            report.add(AxiomEntry(axiom_id, SKIPPED, [int(size)], 0,
                                  f"needs tangent depth {need}, run depth {depth}"))
        elif need in blocked:
            size, reason = blocked[need]
            report.add(AxiomEntry(axiom_id, SKIPPED, [int(size)], 0, reason))
        else:
            report.add(run_entry(axiom_id, body))
    report.notes["sizes"] = sizes
    report.notes["pullback_depth"] = pullback_depth["value"]
    return report


def tangent_bundle(engine: AssignmentEngine, A: FiniteAlgebra) -> AdditiveBundleWitness:
    """``(p, s, z[, n])`` for ``T(A)`` built from the reflection of ``A`` alone."""
    R = engine.reflect(A)
    n, na = R.reflected.size, A.size
    p = FiniteFunction(np.arange(na * n, dtype=INDEX) // n, na)
    x, ab = np.divmod(np.arange(na * n * n, dtype=INDEX), n * n)
    a, b = np.divmod(ab, n)
    check = Check()
    B = bundle_from_pairs(p, FiniteFunction(x * n + a, na * n), FiniteFunction(x * n + b, na * n),
                          _sum_map(R, na), _zero_map(R, na), _neg_map(R, na), check, "T")
    if B is None:
        raise AlgebraError(check.message, check.witness)
    return B


def _t_of_bundle(TX: TangentSpace, check: Check) -> AdditiveBundleWitness | None:
    """``T`` applied to ``(p, s, z[, n])``: a bundle over ``T(X)``."""
    eng = TX.engine
    T = lambda f: T_map(eng, f)
    return bundle_from_pairs(T(TX.hom("p")), T(TX.rho(1)), T(TX.rho(2)), T(TX.hom("s")),
                             T(TX.hom("z")), T(TX.hom("n")) if TX.n is not None else None,
                             check, "T(T)")


def _universality_map(TX: TangentSpace, check: Check) -> FiniteFunction | None:
    """``T(s) . <l rho1, z_T rho2>: T2(X) -> TT(X)``, the pair routed
    through the pullback of ``T(p)``."""
    eng = TX.engine
    TB = _t_of_bundle(TX, check)
    if TB is None:
        return None
    zT = _zero_map(eng.reflect(TX.total), TX.total.size)
    left = TX.ell @ TX.rho(1).underlying
    right = zT @ TX.rho(2).underlying
    return FiniteFunction(TB.add(left.values, right.values), TX.square.product.size)
