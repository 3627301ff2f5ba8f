"""Tensor and exterior squares of finite abelian groups.

For ``G = Z/d_1 + ... + Z/d_k`` the exterior square is free on the symbols
``g_i ^ g_j`` (i < j) with orders ``gcd(d_i, d_j)``.  We keep this "pair
basis" as the raw presentation and renormalize it to invariant factors,
recording the change of basis in both directions.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from .abgroup import AbHom, FinAbGroup, _mul, normalize


@dataclass(frozen=True)
class WedgeBasis:
    group: FinAbGroup
    pairs: tuple
    orders: tuple
    wedge: FinAbGroup
    to_normal: tuple
    from_normal: tuple

    def raw(self, a, b):
        """Pair-basis coordinates of ``a ^ b``."""
        return tuple((a[i] * b[j] - a[j] * b[i]) % o
                     for (i, j), o in zip(self.pairs, self.orders))

    def from_raw(self, c):
        return tuple(sum(t * x for t, x in zip(row, c)) % e
                     for row, e in zip(self.to_normal, self.wedge.invariant_factors))

    def to_raw(self, w):
        return tuple(sum(t * x for t, x in zip(row, w)) % o
                     for row, o in zip(self.from_normal, self.orders))

    def encode(self, a, b):
        """Coordinates of ``a ^ b`` in the normalized exterior square."""
        return self.from_raw(self.raw(a, b))


@dataclass(frozen=True)
class TensorBasis:
    group: FinAbGroup
    pairs: tuple
    orders: tuple
    tensor: FinAbGroup
    to_normal: tuple
    from_normal: tuple

    def raw(self, a, b):
        return tuple(a[i] * b[j] % o for (i, j), o in zip(self.pairs, self.orders))

    def encode(self, a, b):
        c = self.raw(a, b)
        return tuple(sum(t * x for t, x in zip(row, c)) % e
                     for row, e in zip(self.to_normal, self.tensor.invariant_factors))


@lru_cache(maxsize=4096)
def tensor_basis(G):
    d = G.invariant_factors
    pairs = tuple((i, j) for i in range(len(d)) for j in range(len(d)))
    orders = tuple(gcd(d[i], d[j]) for i, j in pairs)
    T, to_n, from_n = normalize(orders)
    return TensorBasis(G, pairs, orders, T, to_n, from_n)


def tensor_square(G):
    """``(G ⊗ G, encoder)`` with ``encoder(a, b)`` the coordinates of a ⊗ b."""
    tb = tensor_basis(G)
    return tb.tensor, tb.encode


@lru_cache(maxsize=4096)
def wedge_basis(G):
    d = G.invariant_factors
    pairs = tuple((i, j) for i in range(len(d)) for j in range(i + 1, len(d)))
    orders = tuple(gcd(d[i], d[j]) for i, j in pairs)
    W, to_n, from_n = normalize(orders)
    return WedgeBasis(G, pairs, orders, W, to_n, from_n)


def exterior_square(G):
    """``(G ∧ G, basis, encoder)``.

    >>> from multinorm.abgroup import FinAbGroup
    >>> str(exterior_square(FinAbGroup((2, 4, 8)))[0])
    'Z/2 ⊕ Z/2 ⊕ Z/4'
    """
    wb = wedge_basis(G)
    return wb.wedge, wb, wb.encode


@lru_cache(maxsize=1 << 16)
def wedge_hom(f):
    """The map ``f ∧ f`` between normalized exterior squares."""
    src, tgt = wedge_basis(f.source), wedge_basis(f.target)
    A = f.matrix
    # (f∧f)(g_i ∧ g_j) = sum_{k<l} (a_ki a_lj - a_li a_kj) h_k ∧ h_l
    raw = tuple(
        tuple((A[k][i] * A[l][j] - A[l][i] * A[k][j]) for (i, j) in src.pairs)
        for (k, l) in tgt.pairs
    )
    M = _mul(raw, src.from_normal, len(src.pairs), src.wedge.ngens)
    M = _mul(tgt.to_normal, M, len(tgt.pairs), src.wedge.ngens)
    return AbHom(src.wedge, tgt.wedge, M)
