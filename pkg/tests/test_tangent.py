import numpy as np
import pytest
from hypothesis import given, settings

from tanalg.algebra import FiniteFunction, identity
from tanalg.reflect import AssignmentEngine
from tanalg.tangent import (TANGENT_AXIOMS, T_map, fibre_power, set_pullback,
                            tangent_bundle, verify_tangent)

from conftest import unital_magmas
from oracles import GroupTangentDecoder


@pytest.fixture(scope="module")
def s3(C):
    TX = AssignmentEngine("ab").tangent(C["S3"])
    return TX, GroupTangentDecoder(TX)


def test_sizes(s3):
    TX, _ = s3
    assert (TX.base.size, TX.L.size, TX.total.size, TX.square.product.size) == (6, 2, 12, 48)


def test_projection_zero_sum_negation(s3):
    TX, D = s3
    O = D.oracle.reflected
    zero = int(D.oracle.unit.values[TX.base.zero])
    for t in range(TX.total.size):
        g, a = D.tangent(t)
        assert TX.p(t) == g
        assert D.tangent(TX.n(t)) == (g, int(D.oracle.neg[a]))
    for g in range(6):
        assert D.tangent(TX.z(g)) == (g, zero)
    nl = TX.L.size
    for u in range(TX.pairs.product.size):
        g, ab = divmod(u, nl * nl)
        a, b = divmod(ab, nl)
        assert D.tangent(TX.s(u)) == (g, int(O.plus[D.m[a], D.m[b]]))


def test_lift_closed_form(s3):
    TX, D = s3
    zero = int(D.oracle.unit.values[TX.base.zero])
    for t in range(TX.total.size):
        g, h = D.tangent(t)
        assert D.square(TX.ell(t)) == (g, zero, zero, h)


def test_flip_closed_form(s3):
    TX, D = s3
    for u in range(TX.square.product.size):
        g, h, k, j = D.square(u)
        assert D.square(TX.flip(u)) == (g, k, h, j)


def test_all_entries_pass_at_depth_three(s3):
    TX, _ = s3
    rep = verify_tangent(TX, depth=3)
    assert rep.ids == sorted(TANGENT_AXIOMS)
    assert rep.ok, rep.failures
    assert rep.notes["sizes"]["T3"] == 768


def _swap(f, i, j):
    v = f.values.copy()
    v[i], v[j] = v[j], v[i]
    return FiniteFunction(v, f.codomain_size)


def _failed(rep):
    return {e.id for e in rep.failures}


def test_flip_mutation_is_caught(s3):
    TX, _ = s3
    u = next(u for u in range(48) if TX.flip(u) != u)
    bad = TX.with_maps(flip=_swap(TX.flip, u, int(TX.flip(u)) ^ 1))
    failed = _failed(verify_tangent(bad))
    assert {"T05.flip_involution", "T06.flip_yang_baxter"} <= failed


def test_lift_mutation_is_caught(s3):
    TX, _ = s3
    v = TX.ell.values.copy()
    v[5] = v[7]
    bad = TX.with_maps(ell=FiniteFunction(v, TX.ell.codomain_size))
    rep = verify_tangent(bad)
    assert "T04.lift_coassociative" in _failed(rep)
    e = rep["T04.lift_coassociative"]
    assert e.witness is not None


def test_terminal_mode_gives_the_identity_tangent(C):
    TX = AssignmentEngine("terminal").tangent(C["S3"])
    assert TX.L.size == 1
    assert TX.p.is_bijective()
    assert TX.z @ TX.p == identity(6)
    assert TX.flip == identity(TX.square.product.size)
    assert verify_tangent(TX).ok


def test_identity_mode_on_abelian_group(C):
    TX = AssignmentEngine("identity").tangent(C["Z3"])
    assert TX.total.size == 9
    # L(X) = X, so T(X) = X x X with sum in the second coordinate
    for x in range(3):
        for a in range(3):
            for b in range(3):
                assert TX.s((x * 3 + a) * 3 + b) == x * 3 + (a + b) % 3
    assert verify_tangent(TX).ok


def test_cmon_left_zero_monoid(C):
    TX = AssignmentEngine("cmon").tangent(C["LZ3"])
    assert TX.n is None
    rep = verify_tangent(TX)
    assert rep.ok, rep.failures


def test_nonassociative_loop(C):
    rep = verify_tangent(AssignmentEngine("ab").tangent(C["Loop5"]))
    assert rep.ok, rep.failures


def test_budget_skips_deep_levels(C):
    TX = AssignmentEngine("ab").tangent(C["Z4"])
    rep = verify_tangent(TX, budget=100)
    skipped = {e.id for e in rep.entries if e.status == "skipped"}
    assert "T04.lift_coassociative" in skipped
    assert "T01.p_natural" not in skipped
    assert rep.ok


def test_depth_one_runs_only_naturality(C):
    rep = verify_tangent(AssignmentEngine("ab").tangent(C["Z2"]), depth=1)
    ran = {e.id for e in rep.entries if e.status != "skipped"}
    assert ran == {"T01.p_natural"}


def test_tangent_bundle_matches_tangent_space(C, engines):
    TX = engines["ab"].tangent(C["Z4"])
    B = tangent_bundle(engines["ab"], C["Z4"])
    assert B.q == TX.p
    assert B.e == TX.z


def test_set_pullback_and_fibre_power():
    f = FiniteFunction(np.array([0, 1, 1]), 2)
    g = FiniteFunction(np.array([1, 0]), 2)
    P = set_pullback(f, g)
    pairs = list(zip(P.proj(0).values.tolist(), P.proj(1).values.tolist()))
    assert pairs == [(0, 1), (1, 0), (2, 0)]
    assert fibre_power(f, 3).size == 1 + 8


def test_tangent_of_homomorphism_is_natural(C, engines):
    eng = engines["ab"]
    sign = eng.eta(C["S3"])
    TX, TY = eng.tangent(C["S3"]), eng.tangent(sign.target)
    assert TY.p @ T_map(eng, sign) == sign.underlying @ TX.p


@settings(max_examples=15)
@given(unital_magmas(max_size=3))
def test_random_magmas_in_cmon_mode(X):
    rep = verify_tangent(AssignmentEngine("cmon").tangent(X), depth=3)
    assert rep.ok, rep.failures
