"""Independent decoders used to check closed forms."""
import numpy as np

from tanalg.reflect import group_commutator_oracle


class GroupTangentDecoder:
    """Reads elements of ``T(G)`` and ``T(T(G))`` as tuples of commutator
    classes, using the quotient oracle rather than the engine's comparison maps."""

    def __init__(self, TX):
        self.TX = TX
        G = TX.base
        self.oracle = group_commutator_oracle(G)
        self.ab = self.oracle.unit.values
        # engine class of L(G) -> oracle class, through any representative
        m = np.full(TX.L.size, -1)
        for g, a in enumerate(TX.reflection.unit.values):
            assert m[a] in (-1, self.ab[g])
            m[a] = self.ab[g]
        self.m = m
        self.nl = TX.L.size
        self.eta_t = TX.engine.eta(TX.total).values
        self.nlt = TX.engine.L(TX.total).size

    def tangent(self, t):
        g, a = divmod(int(t), self.nl)
        return g, int(self.m[a])

    def class_of(self, l):
        """``L(T(G))`` element as (class in L(G), class in L(L(G)))."""
        pre = np.flatnonzero(self.eta_t == l)
        assert pre.size
        decoded = {(int(self.ab[g]), int(self.m[a]))
                   for g, a in (divmod(int(t), self.nl) for t in pre)}
        assert len(decoded) == 1, decoded
        return decoded.pop()

    def square(self, u):
        t, l = divmod(int(u), self.nlt)
        g, a = self.tangent(t)
        b, w = self.class_of(l)
        return g, a, b, w
