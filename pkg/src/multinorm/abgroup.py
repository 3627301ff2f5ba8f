"""Finite abelian groups in invariant-factor form and homomorphisms between them.

A group is ``Z/d_1 + ... + Z/d_k`` with ``d_1 | d_2 | ... | d_k`` and every
``d_i >= 2``; elements are integer tuples reduced into ``[0, d_i)``.  A
homomorphism stores the images of the source generators as the *columns*
of an integer matrix written in target coordinates.

Everything here reduces to Smith normal form of relation matrices:
``Z^m / col(R)`` is read off from ``U R V = D``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import gcd, prod
from operator import mul

from .errors import StructureError
from .smith import integer_kernel, smith_with_inverse


@dataclass(frozen=True)
class FinAbGroup:
    invariant_factors: tuple

    def __post_init__(self):
        factors = tuple(int(d) for d in self.invariant_factors)
        for d in factors:
            if d < 2:
                raise StructureError(f"invariant factor {d} < 2 in {factors}")
        for a, b in zip(factors, factors[1:]):
            if b % a:
                raise StructureError(f"{a} does not divide {b} in {factors}")
        object.__setattr__(self, "invariant_factors", factors)

    @classmethod
    def from_orders(cls, orders):
        """Renormalize an arbitrary list of cyclic orders (1s and 0s not allowed)."""
        return normalize(orders)[0]

    @property
    def ngens(self):
        return len(self.invariant_factors)

    @property
    def order(self):
        return prod(self.invariant_factors)

    @property
    def exponent(self):
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def is_trivial(self):
        return not self.invariant_factors

    def is_cyclic(self):
        return len(self.invariant_factors) <= 1

    @property
    def zero(self):
        return (0,) * len(self.invariant_factors)

    def gens(self):
        k = len(self.invariant_factors)
        return [tuple(1 if i == j else 0 for i in range(k)) for j in range(k)]

    def reduce(self, x):
        if len(x) != len(self.invariant_factors):
            raise StructureError(f"element {tuple(x)} has wrong length for {self}")
        return tuple(a % d for a, d in zip(x, self.invariant_factors))

    def add(self, x, y):
        return tuple((a + b) % d for a, b, d in zip(x, y, self.invariant_factors))

    def sub(self, x, y):
        return tuple((a - b) % d for a, b, d in zip(x, y, self.invariant_factors))

    def neg(self, x):
        return tuple(-a % d for a, d in zip(x, self.invariant_factors))

    def scale(self, k, x):
        return tuple(k * a % d for a, d in zip(x, self.invariant_factors))

    def element_order(self, x):
        o = 1
        for a, d in zip(x, self.invariant_factors):
            o = o * (d // gcd(a, d)) // gcd(o, d // gcd(a, d))
        return o

    def elements(self):
        """All elements in lexicographic order."""
        return itertools.product(*(range(d) for d in self.invariant_factors))

    def __str__(self):
        if not self.invariant_factors:
            return "trivial"
        return " ⊕ ".join(f"Z/{d}" for d in self.invariant_factors)

    def to_json(self):
        return {"invariant_factors": list(self.invariant_factors)}


TRIVIAL = FinAbGroup(())


def _reduce_rows(rows, mods):
    return tuple(tuple(a % d for a in row) for row, d in zip(rows, mods))


def _mul(A, B, inner, ncols):
    """A (r x inner) times B (inner x ncols); both tuples-of-rows."""
    if not A:
        return ()
    if inner == 0 or ncols == 0:
        return tuple((0,) * ncols for _ in A)
    cols = list(zip(*B))
    return tuple(tuple(sum(map(mul, row, col)) for col in cols) for row in A)


@dataclass(frozen=True)
class AbHom:
    source: FinAbGroup
    target: FinAbGroup
    matrix: tuple

    def __post_init__(self):
        m, n = self.target.ngens, self.source.ngens
        rows = tuple(tuple(int(a) for a in row) for row in self.matrix)
        if len(rows) != m or any(len(r) != n for r in rows):
            raise StructureError(
                f"matrix shape does not match {m}x{n} for {self.source} -> {self.target}")
        rows = _reduce_rows(rows, self.target.invariant_factors)
        for j, dj in enumerate(self.source.invariant_factors):
            for i, ei in enumerate(self.target.invariant_factors):
                if dj * rows[i][j] % ei:
                    raise StructureError(
                        f"not well defined: generator {j} of order {dj} "
                        f"maps to an element of non-dividing order")
        object.__setattr__(self, "matrix", rows)

    @classmethod
    def _trusted(cls, source, target, rows):
        """Build from rows already known to define a hom; only reduces entries.

        Used for composites and sums of existing homs, where well-definedness
        is automatic and re-checking dominates the running time.
        """
        obj = object.__new__(cls)
        object.__setattr__(obj, "source", source)
        object.__setattr__(obj, "target", target)
        object.__setattr__(obj, "matrix", _reduce_rows(rows, target.invariant_factors))
        return obj

    def __hash__(self):
        try:
            return self._hash
        except AttributeError:
            h = hash((self.source, self.target, self.matrix))
            object.__setattr__(self, "_hash", h)
            return h

    def __call__(self, x):
        x = self.source.reduce(x)
        return tuple(sum(map(mul, row, x)) % e
                     for row, e in zip(self.matrix, self.target.invariant_factors))

    def column(self, j):
        return tuple(row[j] for row in self.matrix)

    def columns(self):
        return [self.column(j) for j in range(self.source.ngens)]

    def is_zero(self):
        return all(not a for row in self.matrix for a in row)

    def is_identity(self):
        return (self.source == self.target
                and all(a == (i == j) for i, row in enumerate(self.matrix)
                        for j, a in enumerate(row)))

    def to_json(self):
        return {"source": self.source.to_json(), "target": self.target.to_json(),
                "matrix": [list(r) for r in self.matrix]}


def hom_from_images(source, target, images):
    """Build a hom from the list of images of the source generators."""
    images = [target.reduce(v) for v in images]
    if len(images) != source.ngens:
        raise StructureError("need one image per source generator")
    rows = tuple(tuple(v[i] for v in images) for i in range(target.ngens))
    return AbHom(source, target, rows)


def identity_hom(G):
    return AbHom(G, G, tuple(tuple(int(i == j) for j in range(G.ngens))
                             for i in range(G.ngens)))


def zero_hom(G, H):
    return AbHom(G, H, tuple((0,) * G.ngens for _ in range(H.ngens)))


def hom_compose(g, f):
    """``g o f``: apply f first."""
    if f.target != g.source:
        raise StructureError(f"cannot compose: {f.target} != {g.source}")
    return AbHom._trusted(f.source, g.target,
                          _mul(g.matrix, f.matrix, g.source.ngens, f.source.ngens))


def hom_sum(homs, source=None, target=None):
    homs = list(homs)
    if not homs:
        return zero_hom(source, target)
    s, t = homs[0].source, homs[0].target
    for h in homs:
        if h.source != s or h.target != t:
            raise StructureError("summands must share source and target")
    rows = tuple(tuple(map(sum, zip(*rows_i)))
                 for rows_i in zip(*(h.matrix for h in homs)))
    return AbHom._trusted(s, t, rows)


def hom_neg(f):
    return AbHom._trusted(f.source, f.target, tuple(tuple(-a for a in r) for r in f.matrix))


# -- presentations -----------------------------------------------------------

def present(relations, m):
    """Structure of ``Z^m / col(relations)`` for a finite quotient.

    ``relations`` is an ``m x c`` list-matrix.  Returns ``(G, P, L)`` where
    ``P`` (rows) maps Z^m coordinates onto G and the columns of ``L`` lift the
    generators of G back to Z^m.
    """
    if m == 0:
        return TRIVIAL, (), ()
    U, D, _, Ui = smith_with_inverse([list(r) for r in relations])
    diag = [D[i][i] if i < len(D[0]) else 0 for i in range(m)]
    if any(d == 0 for d in diag):
        raise StructureError("presentation defines an infinite group")
    kept = [i for i in range(m) if diag[i] != 1]
    G = FinAbGroup(tuple(diag[i] for i in kept))
    P = tuple(tuple(a % diag[i] for a in U[i]) for i in kept)
    L = tuple(tuple(Ui[r][i] for i in kept) for r in range(m))
    return G, P, L


@lru_cache(maxsize=4096)
def normalize(orders):
    """Invariant-factor form of ``Z/o_1 + ... + Z/o_k``.

    Returns ``(G, to_G, from_G)``: ``to_G`` (rows, ``G.ngens x k``) converts raw
    coordinates to G coordinates; ``from_G`` (``k x G.ngens``) goes back.
    """
    orders = tuple(int(o) for o in orders)
    if any(o < 1 for o in orders):
        raise StructureError(f"cyclic orders must be positive: {orders}")
    k = len(orders)
    if all(o >= 2 for o in orders) and all(b % a == 0 for a, b in zip(orders, orders[1:])):
        ident = tuple(tuple(int(i == j) for j in range(k)) for i in range(k))
        return FinAbGroup(orders), ident, ident
    R = [[orders[i] if i == j else 0 for j in range(k)] for i in range(k)]
    G, P, L = present(R, k)
    L = tuple(tuple(a % o for a in row) for row, o in zip(L, orders))
    return G, P, L


# -- subgroups ---------------------------------------------------------------

@dataclass(frozen=True)
class Subgroup:
    ambient: FinAbGroup
    generators: tuple
    abstract: FinAbGroup
    inclusion: AbHom

    @property
    def order(self):
        return self.abstract.order

    @cached_property
    def _quotient_proj(self):
        return cokernel(self.inclusion)[1]

    def contains(self, x):
        return not any(self._quotient_proj(x))

    def is_trivial(self):
        return self.abstract.is_trivial()

    def is_cyclic(self):
        return self.abstract.is_cyclic()

    @cached_property
    def element_set(self):
        f = self.inclusion
        return frozenset(f(a) for a in self.abstract.elements())

    def same_as(self, other):
        """Equality as subsets of the common ambient group."""
        return (self.ambient == other.ambient and self.order == other.order
                and all(self.contains(g) for g in other.generators))

    def __hash__(self):
        try:
            return self._hash
        except AttributeError:
            h = hash((self.ambient, self.generators))
            object.__setattr__(self, "_hash", h)
            return h

    def to_json(self):
        return {"generators": [list(g) for g in self.generators]}


def _clean_gens(G, gens):
    out = []
    seen = set()
    for g in gens:
        g = G.reduce(g)
        if any(g) and g not in seen:
            seen.add(g)
            out.append(g)
    return tuple(out)


@lru_cache(maxsize=1 << 16)
def _subgroup_cached(ambient, gens):
    k, n = len(gens), ambient.ngens
    if k == 0:
        return Subgroup(ambient, (), TRIVIAL, AbHom(TRIVIAL, ambient, ((),) * n))
    d = ambient.invariant_factors
    # relations among the generators: x in Z^k with sum x_j g_j in diag(d) Z^n
    block = [[gens[j][i] for j in range(k)] + [-d[i] if r == i else 0 for r in range(n)]
             for i in range(n)]
    K = integer_kernel(block, k + n)
    lattice = [row for row in K[:k]]
    abstract, _, L = present(lattice, k)
    X = tuple(tuple(g[i] for g in gens) for i in range(n))
    inc = _mul(X, L, k, abstract.ngens)
    return Subgroup(ambient, gens, abstract, AbHom(abstract, ambient, inc))


def subgroup_structure(ambient, gens):
    """The subgroup of ``ambient`` generated by ``gens``, with its abstract
    invariant-factor structure and an injective inclusion."""
    return _subgroup_cached(ambient, _clean_gens(ambient, gens))


def whole_group(G):
    return subgroup_structure(G, G.gens())


def trivial_subgroup(G):
    return subgroup_structure(G, ())


# -- kernels, images, cokernels ------------------------------------------------

@lru_cache(maxsize=1 << 16)
def cokernel_data(f):
    """``(Q, proj, lift)`` for ``target / im f``; ``lift`` columns are target
    coordinates of preimages of the generators of Q."""
    e = f.target.invariant_factors
    m = len(e)
    # zero and repeated columns do not change the relation lattice
    cols = sorted({c for c in zip(*f.matrix) if any(c)}) if m else []
    rel = [[c[i] for c in cols] + [e[i] if r == i else 0 for r in range(m)] for i in range(m)]
    Q, P, L = present(rel, m)
    L = tuple(tuple(a % ei for a in row) for row, ei in zip(L, e))
    return Q, AbHom(f.target, Q, P), L


def cokernel(f):
    Q, proj, _ = cokernel_data(f)
    return Q, proj


def cokernel_lift(f):
    """A set-theoretic section of the cokernel projection, as a function."""
    Q, _, L = cokernel_data(f)
    tgt = f.target

    def lift(q):
        return tgt.reduce(tuple(sum(a * b for a, b in zip(row, q)) for row in L))
    return lift


@lru_cache(maxsize=1 << 14)
def kernel(f):
    m, n = f.target.ngens, f.source.ngens
    if m == 0:
        return whole_group(f.source)
    e = f.target.invariant_factors
    block = [list(f.matrix[i]) + [-e[i] if r == i else 0 for r in range(m)] for i in range(m)]
    K = integer_kernel(block, n + m)
    ncols = len(K[0]) if K else 0
    gens = [tuple(K[i][c] for i in range(n)) for c in range(ncols)]
    return subgroup_structure(f.source, gens)


def image(f):
    return subgroup_structure(f.target, f.columns())


@lru_cache(maxsize=1 << 16)
def image_of_subgroup(f, sub):
    if sub.ambient != f.source:
        raise StructureError("subgroup does not live in the source of the map")
    return subgroup_structure(f.target, [f(g) for g in sub.generators])


def quotient_by(sub):
    return cokernel(sub.inclusion)


def is_surjective(f):
    return cokernel_data(f)[0].is_trivial()


def is_injective(f):
    return image(f).order == f.source.order


def is_isomorphic(G, H):
    return G.invariant_factors == H.invariant_factors


def join(a, b):
    if a.ambient != b.ambient:
        raise StructureError("subgroups live in different groups")
    return subgroup_structure(a.ambient, a.generators + b.generators)


def intersection_order(a, b):
    """|A ∩ B| = |A| |B| / |A + B|."""
    return a.order * b.order // join(a, b).order


# -- direct sums -------------------------------------------------------------

@lru_cache(maxsize=4096)
def direct_sum_maps(groups):
    """``(S, injections, projections)`` for the direct sum of ``groups``."""
    groups = tuple(groups)
    raw = tuple(d for G in groups for d in G.invariant_factors)
    S, to_S, from_S = normalize(raw)
    injections, projections = [], []
    off = 0
    for G in groups:
        k = G.ngens
        inj = tuple(tuple(row[off:off + k]) for row in to_S)
        injections.append(AbHom(G, S, inj))
        proj = tuple(from_S[off:off + k])
        projections.append(AbHom(S, G, proj))
        off += k
    return S, tuple(injections), tuple(projections)


def direct_sum(*groups):
    return direct_sum_maps(tuple(groups))[0]


def product_hom(homs):
    """``x -> (f_1(x), ..., f_r(x))`` into the direct sum of the targets."""
    homs = tuple(homs)
    S, inj, _ = direct_sum_maps(tuple(h.target for h in homs))
    return hom_sum([hom_compose(i, h) for i, h in zip(inj, homs)],
                   homs[0].source if homs else TRIVIAL, S)


def group_from_string(text):
    """Parse ``"2,2"``, ``"2 4"`` or ``"Z/2 + Z/4"`` style descriptions."""
    cleaned = text.replace("Z/", " ").replace("⊕", " ").replace("+", " ").replace(",", " ")
    if cleaned.strip().lower() in ("", "trivial", "0"):
        return TRIVIAL
    orders = [int(tok) for tok in cleaned.split()]
    return normalize(tuple(o for o in orders if o != 1))[0]
