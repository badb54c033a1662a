"""Congruence generation, quotients, kernels and a brute-force oracle."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .algebra import (INDEX, AlgebraError, FiniteAlgebra, FiniteFunction,
                      Homomorphism, subalgebra)

# translation pairs generated per batch before they are filtered
_CHUNK = 1 << 21


@dataclass(frozen=True, eq=False)
class Partition:
    """Equivalence on ``{0..size-1}``; ``labels[x]`` is the least element
    of the class of ``x``."""

    labels: np.ndarray

    def __post_init__(self):
        lab = np.array(self.labels, dtype=INDEX)
        lab.setflags(write=False)
        object.__setattr__(self, "labels", lab)

    @property
    def size(self) -> int:
        return int(self.labels.size)

    @property
    def representatives(self) -> np.ndarray:
        return np.unique(self.labels)

    def classes(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for x, r in enumerate(self.labels.tolist()):
            out.setdefault(r, []).append(x)
        return [out[r] for r in sorted(out)]

    def same(self, a: int, b: int) -> bool:
        return bool(self.labels[a] == self.labels[b])

    def refines(self, other: "Partition") -> bool:
        """Every class of self sits inside a class of other."""
        return bool(np.all(other.labels == other.labels[self.labels]))

    def __eq__(self, other):
        return isinstance(other, Partition) and np.array_equal(self.labels, other.labels)

    def __hash__(self):
        return hash(self.labels.tobytes())


def partition_from_blocks(size: int, blocks: Iterable[Iterable[int]]) -> Partition:
    lab = np.arange(size, dtype=INDEX)
    for block in blocks:
        b = sorted(block)
        lab[b] = b[0]
    return Partition(lab)


@dataclass(frozen=True, eq=False)
class Congruence:
    partition: Partition
    algebra: FiniteAlgebra

    @property
    def labels(self) -> np.ndarray:
        return self.partition.labels

    def classes(self) -> list[list[int]]:
        return self.partition.classes()

    def __eq__(self, other):
        return (isinstance(other, Congruence) and self.algebra == other.algebra
                and self.partition == other.partition)

    def __hash__(self):
        return hash(self.partition)


def compatibility_violation(X: FiniteAlgebra, labels: np.ndarray
                            ) -> tuple[str, list[int]] | None:
    """Operation and argument tuple where ``labels`` is not compatible.

    It is enough to compare every ``f(a1..ak)`` with ``f(r(a1)..r(ak))``,
    ``r`` picking the least element of each class.
    """
    labels = np.asarray(labels)
    for op, arity in X.signature.operations:
        if arity == 0:
            continue
        t = X.tables[op]
        lhs = labels[t]
        rhs = labels[t[np.ix_(*([labels] * arity))]]
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            return op, bad[0].tolist()
    return None


def _translations(X: FiniteAlgebra, a: np.ndarray, b: np.ndarray
                  ) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Images of the pairs (a, b) under every basic unary translation."""
    n = X.size
    for op, arity in X.signature.operations:
        if arity == 0:
            continue
        t = X.tables[op]
        per_pair = n ** (arity - 1)
        step = max(1, _CHUNK // per_pair)
        for pos in range(arity):
            moved = np.moveaxis(t, pos, 0)
            for lo in range(0, a.size, step):
                ta = moved[a[lo:lo + step]].reshape(-1)
                tb = moved[b[lo:lo + step]].reshape(-1)
                yield ta, tb


def generate_congruence(X: FiniteAlgebra, seeds: Sequence[tuple[int, int]]) -> Congruence:
    """Least congruence on ``X`` containing the seed pairs.

    Union-find in batches: each round merges the pending pairs whose classes
    differ, records one generating pair per absorbed class, and queues every
    unary translation of those generators. The relation at any time is the
    equivalence generated by the recorded pairs, so once all translations of
    the generators are absorbed it is closed under the operations.
    """
    n = X.size
    seeds = [(int(a), int(b)) for a, b in seeds]
    for a, b in seeds:
        if not (0 <= a < n and 0 <= b < n):
            raise AlgebraError(f"seed ({a}, {b}) out of range 0..{n - 1}", [a, b])
    labels = np.arange(n, dtype=INDEX)
    pending: list[tuple[np.ndarray, np.ndarray]] = []
    if seeds:
        arr = np.array(seeds, dtype=INDEX)
        pending.append((arr[:, 0], arr[:, 1]))
    nodes = np.arange(n)
    while pending:
        a = np.concatenate([p[0] for p in pending])
        b = np.concatenate([p[1] for p in pending])
        pending = []
        la, lb = labels[a], labels[b]
        keep = la != lb
        if not keep.any():
            continue
        la, lb = la[keep], lb[keep]
        graph = coo_matrix((np.ones(la.size, dtype=np.int8), (la, lb)), shape=(n, n))
        _, comp = connected_components(graph, directed=False)
        least = np.full(comp.max() + 1, n, dtype=INDEX)
        np.minimum.at(least, comp, nodes)
        newrep = least[comp]
        touched = np.unique(np.concatenate([la, lb]))
        moved = touched[newrep[touched] != touched]
        gen_a, gen_b = moved, newrep[moved]
        labels = newrep[labels]
        for ta, tb in _translations(X, gen_a, gen_b):
            m = labels[ta] != labels[tb]
            if m.any():
                pending.append((ta[m], tb[m]))
    return Congruence(Partition(labels), X)


def discrete(X: FiniteAlgebra) -> Congruence:
    return Congruence(Partition(np.arange(X.size)), X)


def quotient(X: FiniteAlgebra, c: Congruence, name: str = ""
             ) -> tuple[FiniteAlgebra, Homomorphism]:
    """Quotient algebra with classes numbered by increasing least element."""
    labels = c.labels
    bad = compatibility_violation(X, labels)
    if bad is not None:
        raise AlgebraError(f"partition is not a congruence: fails {bad[0]} at {bad[1]}",
                           bad[1])
    reps = np.unique(labels)
    index = np.full(X.size, -1, dtype=INDEX)
    index[reps] = np.arange(reps.size)
    cls = index[labels]
    tables = {}
    for op, arity in X.signature.operations:
        t = X.tables[op]
        tables[op] = cls[t[np.ix_(*([reps] * arity))]] if arity else cls[int(t)]
    Q = FiniteAlgebra(X.signature, reps.size, tables, name)
    return Q, Homomorphism(FiniteFunction(cls, reps.size), X, Q)


def kernel(f: Homomorphism) -> tuple[FiniteAlgebra, Homomorphism]:
    """Elements sent to the target zero, as a subalgebra with its inclusion."""
    if not (f.source.pointed and f.target.pointed):
        raise AlgebraError("kernels need pointed source and target")
    elems = np.flatnonzero(f.values == f.target.zero)
    return subalgebra(f.source, elems, name=f"ker({f.source.name})")


def kernel_pair_partition(f: FiniteFunction) -> Partition:
    """Partition of the domain by equal images."""
    first: dict[int, int] = {}
    lab = np.empty(f.domain_size, dtype=INDEX)
    for x, v in enumerate(f.values.tolist()):
        lab[x] = first.setdefault(v, x)
    return Partition(lab)


# oracle

BRUTE_FORCE_LIMIT = 7


def set_partitions(n: int) -> Iterator[np.ndarray]:
    """All partitions of ``{0..n-1}`` as restricted growth strings."""
    rgs = [0] * n

    def rec(i: int, top: int):
        if i == n:
            yield np.array(rgs, dtype=INDEX)
            return
        for v in range(top + 2):
            rgs[i] = v
            yield from rec(i + 1, max(top, v))

    if n == 0:
        return
    rgs[0] = 0
    yield from rec(1, 0)


def _rgs_to_labels(rgs: np.ndarray) -> np.ndarray:
    first: dict[int, int] = {}
    return np.array([first.setdefault(int(v), i) for i, v in enumerate(rgs)], dtype=INDEX)


def brute_force_least_congruence(X: FiniteAlgebra, seeds: Sequence[tuple[int, int]]
                                 ) -> Congruence:
    """Enumerate every partition, keep the congruences containing the seeds
    and return the one refining all the others."""
    if X.size > BRUTE_FORCE_LIMIT:
        raise AlgebraError(f"carrier of size {X.size} exceeds brute-force limit "
                           f"{BRUTE_FORCE_LIMIT}")
    candidates = []
    for rgs in set_partitions(X.size):
        if any(rgs[a] != rgs[b] for a, b in seeds):
            continue
        labels = _rgs_to_labels(rgs)
        if compatibility_violation(X, labels) is None:
            candidates.append(Partition(labels))
    least = max(candidates, key=lambda p: p.representatives.size)
    if not all(least.refines(p) for p in candidates):
        raise AssertionError("congruences containing the seeds have no least element")
    return Congruence(least, X)
