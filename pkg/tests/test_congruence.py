import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tanalg.algebra import AlgebraError, Homomorphism
from tanalg.catalog import cyclic_group, symmetric
from tanalg.congruence import (Partition, brute_force_least_congruence,
                               compatibility_violation, discrete, generate_congruence, kernel,
                               kernel_pair_partition, partition_from_blocks, quotient,
                               set_partitions)

from conftest import seed_pairs, unital_magmas

BELL = [1, 1, 2, 5, 15, 52, 203]


@pytest.mark.parametrize("n", range(1, 7))
def test_set_partition_count(n):
    assert sum(1 for _ in set_partitions(n)) == BELL[n]


def test_partition_labels_are_least_elements():
    p = partition_from_blocks(5, [[3, 1], [4, 2]])
    assert p.labels.tolist() == [0, 1, 2, 1, 2]
    assert p.classes() == [[0], [1, 3], [2, 4]]
    assert discrete(cyclic_group(5)).partition.refines(p)
    assert not p.refines(discrete(cyclic_group(5)).partition)


def test_commutator_congruence_on_s3():
    S3 = symmetric(3)
    m = S3.tables["mul"]
    seeds = [(int(m[a, b]), int(m[b, a])) for a in range(6) for b in range(6)]
    c = generate_congruence(S3, seeds)
    assert len(c.classes()) == 2
    Q, q = quotient(S3, c)
    assert Q.size == 2 and q.violation() is None


def test_z4_against_enumeration():
    Z4 = cyclic_group(4)
    for seeds in ([(0, 2)], [(1, 3)], [(0, 1)], []):
        assert generate_congruence(Z4, seeds) == brute_force_least_congruence(Z4, seeds)
    assert generate_congruence(Z4, [(1, 3)]).classes() == [[0, 2], [1, 3]]


def test_empty_seed_set_is_discrete():
    X = symmetric(3)
    assert generate_congruence(X, []) == discrete(X)


def test_seed_out_of_range():
    with pytest.raises(AlgebraError) as info:
        generate_congruence(cyclic_group(3), [(0, 7)])
    assert info.value.witness == [0, 7]


def test_quotient_rejects_non_congruence():
    Z4 = cyclic_group(4)
    bad = partition_from_blocks(4, [[0, 1]])
    assert compatibility_violation(Z4, bad.labels) is not None
    from tanalg.congruence import Congruence
    with pytest.raises(AlgebraError):
        quotient(Z4, Congruence(bad, Z4))


def test_kernel_of_projection():
    Z6, Z2 = cyclic_group(6), cyclic_group(2)
    f = Homomorphism.checked(np.arange(6) % 2, Z6, Z2)
    K, inc = kernel(f)
    assert inc.values.tolist() == [0, 2, 4]
    assert K.size == 3
    assert kernel_pair_partition(f.underlying).classes() == [[0, 2, 4], [1, 3, 5]]


@given(st.data())
def test_least_congruence_matches_enumeration(data):
    X = data.draw(unital_magmas(max_size=5, with_unary=data.draw(st.booleans())))
    seeds = data.draw(seed_pairs(X.size))
    fast = generate_congruence(X, seeds)
    assert fast == brute_force_least_congruence(X, seeds)


@given(st.data())
def test_generated_relation_is_a_congruence_containing_the_seeds(data):
    X = data.draw(unital_magmas(min_size=3, max_size=6))
    seeds = data.draw(seed_pairs(X.size, max_pairs=4))
    c = generate_congruence(X, seeds)
    assert compatibility_violation(X, c.labels) is None
    assert all(c.partition.same(a, b) for a, b in seeds)
    # every label is the least element of its class
    for cls in c.classes():
        assert all(c.labels[x] == min(cls) for x in cls)


@given(st.data())
def test_monotone_in_the_seeds(data):
    X = data.draw(unital_magmas(min_size=2, max_size=5))
    small = data.draw(seed_pairs(X.size))
    extra = data.draw(seed_pairs(X.size))
    assert generate_congruence(X, small).partition.refines(
        generate_congruence(X, small + extra).partition)


@given(st.data())
def test_quotient_projection_is_a_surjective_homomorphism(data):
    X = data.draw(unital_magmas(min_size=2, max_size=5))
    c = generate_congruence(X, data.draw(seed_pairs(X.size)))
    Q, q = quotient(X, c)
    assert q.violation() is None
    assert np.unique(q.values).size == Q.size == len(c.classes())
    assert kernel_pair_partition(q.underlying) == c.partition


def test_partition_equality_and_hash():
    a = Partition(np.array([0, 0, 2]))
    b = Partition(np.array([0, 0, 2]))
    assert a == b and hash(a) == hash(b)
