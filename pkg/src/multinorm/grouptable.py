"""Finite groups given by multiplication tables, and their abelianizations.

Elements are indices ``0 .. order-1``; ``table[x][y]`` is the index of the
product ``x*y``.  Groups built from permutations compose right-to-left:
``(p*q)(k) = p[q[k]]``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .abgroup import FinAbGroup, TRIVIAL, present, hom_from_images, kernel
from .errors import InputError, InvariantViolation, StructureError

ASSOCIATIVITY_CHECK_LIMIT = 256


@dataclass(frozen=True, eq=False)
class CayleyGroup:
    table: tuple
    identity: int = 0
    names: tuple | None = None

    def __post_init__(self):
        table = tuple(tuple(int(v) for v in row) for row in self.table)
        object.__setattr__(self, "table", table)
        n = len(table)
        if n == 0:
            raise StructureError("a group has at least one element")
        T = np.asarray(table, dtype=np.int64)
        if T.shape != (n, n) or T.min() < 0 or T.max() >= n:
            raise StructureError("table must be a square array of element indices")
        full = np.arange(n)
        if not (np.sort(T, axis=0) == full[:, None]).all() or \
                not (np.sort(T, axis=1) == full[None, :]).all():
            raise StructureError("table is not a Latin square")
        e = self.identity
        if not ((T[e] == full).all() and (T[:, e] == full).all()):
            raise StructureError(f"{e} is not a two-sided identity")
        if n <= ASSOCIATIVITY_CHECK_LIMIT:
            for g in range(n):
                # (x g) y == x (g y) for all x, y
                if not (T[T[:, g], :] == T[:, T[g, :]]).all():
                    raise StructureError("multiplication is not associative")
        if self.names is not None and len(self.names) != n:
            raise StructureError("need one name per element")

    @property
    def order(self):
        return len(self.table)

    def mul(self, x, y):
        return self.table[x][y]

    @cached_property
    def _inverses(self):
        e = self.identity
        return tuple(row.index(e) for row in self.table)

    def inv(self, x):
        return self._inverses[x]

    def commutator(self, x, y):
        """``x y x^-1 y^-1``."""
        t = self.table
        return t[t[t[x][y]][self.inv(x)]][self.inv(y)]

    def power(self, x, k):
        r = self.identity
        for _ in range(k % self.element_order(x)):
            r = self.table[r][x]
        return r

    def element_order(self, x):
        k, y = 1, x
        while y != self.identity:
            y = self.table[y][x]
            k += 1
        return k

    def is_abelian(self):
        t = self.table
        return all(t[x][y] == t[y][x] for x in range(self.order) for y in range(x))

    def closure(self, elements):
        """The subgroup generated by ``elements`` as a sorted tuple."""
        t = self.table
        seen = {self.identity}
        frontier = deque([self.identity])
        gens = list(dict.fromkeys(elements))
        while frontier:
            x = frontier.popleft()
            for g in gens:
                y = t[x][g]
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return tuple(sorted(seen))

    def is_subgroup(self, subset):
        s = set(subset)
        return self.identity in s and all(self.table[x][y] in s for x in s for y in s)

    def is_normal(self, subset):
        s = set(subset)
        t = self.table
        return self.is_subgroup(s) and all(
            t[t[g][x]][self.inv(g)] in s for g in range(self.order) for x in s)

    def name(self, x):
        return self.names[x] if self.names else str(x)


def compose_perms(p, q):
    return tuple(p[k] for k in q)


def from_generators(generators, bound=ASSOCIATIVITY_CHECK_LIMIT, degree=None):
    """Close a list of permutations under composition.

    Elements are numbered in BFS order from the identity, trying generators
    in the given order, so the numbering is deterministic.  Returns the
    group together with the permutation realizing each element.
    """
    gens = [tuple(int(v) for v in g) for g in generators]
    if degree is None:
        degree = len(gens[0]) if gens else 1
    for g in gens:
        if len(g) != degree or sorted(g) != list(range(degree)):
            raise InputError(f"not a permutation of 0..{degree - 1}: {list(g)}")
    ident = tuple(range(degree))
    elems = [ident]
    index = {ident: 0}
    frontier = deque([ident])
    while frontier:
        x = frontier.popleft()
        for g in gens:
            y = compose_perms(x, g)
            if y not in index:
                if len(elems) >= bound:
                    raise InvariantViolation("group_order_bound",
                                             f"closure exceeds {bound} elements")
                index[y] = len(elems)
                elems.append(y)
                frontier.append(y)
    table = tuple(tuple(index[compose_perms(x, y)] for y in elems) for x in elems)
    return CayleyGroup(table, 0), tuple(elems)


def from_abelian(G):
    """Cayley table of a FinAbGroup (elements in lexicographic order)."""
    elems = list(G.elements())
    index = {x: i for i, x in enumerate(elems)}
    table = tuple(tuple(index[G.add(x, y)] for y in elems) for x in elems)
    return CayleyGroup(table, index[G.zero]), tuple(elems)


@dataclass(frozen=True, eq=False)
class GroupMap:
    source: CayleyGroup
    target: CayleyGroup
    images: tuple

    def __post_init__(self):
        images = tuple(int(v) for v in self.images)
        object.__setattr__(self, "images", images)
        if len(images) != self.source.order:
            raise StructureError("need one image per source element")
        s, t = self.source.table, self.target.table
        n = self.source.order
        for x in range(n):
            for y in range(n):
                if images[s[x][y]] != t[images[x]][images[y]]:
                    raise StructureError(f"not multiplicative at ({x}, {y})")

    def __call__(self, x):
        return self.images[x]

    def then(self, other):
        if other.source is not self.target:
            raise StructureError("maps do not compose")
        return GroupMap(self.source, other.target, tuple(other.images[i] for i in self.images))


def subgroup_group(G, subset):
    """A CayleyGroup for the subgroup ``subset`` plus its inclusion map."""
    elems = sorted(set(subset))
    if not G.is_subgroup(elems):
        raise InvariantViolation("subgroup", "element set is not closed")
    # identity first so the sub-table uses index 0 as identity
    elems.remove(G.identity)
    elems.insert(0, G.identity)
    index = {x: i for i, x in enumerate(elems)}
    table = tuple(tuple(index[G.mul(x, y)] for y in elems) for x in elems)
    names = tuple(G.name(x) for x in elems) if G.names else None
    H = CayleyGroup(table, 0, names)
    return H, GroupMap(H, G, tuple(elems))


def quotient_group(G, normal):
    """``G / N`` as a CayleyGroup and the projection map."""
    N = set(normal)
    if not G.is_normal(N):
        raise InvariantViolation("normal_subgroup", "subgroup is not normal")
    coset_of = [-1] * G.order
    reps = []
    for x in range(G.order):
        if coset_of[x] < 0:
            c = len(reps)
            reps.append(x)
            for n in N:
                coset_of[G.mul(x, n)] = c
    table = tuple(tuple(coset_of[G.mul(a, b)] for b in reps) for a in reps)
    Q = CayleyGroup(table, coset_of[G.identity])
    return Q, GroupMap(G, Q, tuple(coset_of))


def commutator_subgroup(G):
    """``[G, G]`` as a sorted tuple of element indices."""
    n = G.order
    comms = {G.commutator(x, y) for x in range(n) for y in range(n)}
    return G.closure(sorted(comms))


@dataclass(frozen=True, eq=False)
class Abelianization:
    group: FinAbGroup
    coords: tuple
    lifts: tuple

    def __iter__(self):
        yield self.group
        yield self.coords


def _abelian_structure(Q):
    """Invariant factors and coordinates for an abelian CayleyGroup ``Q``.

    Generators are picked greedily; each new one records the smallest power
    that lands in the span of the earlier ones, giving a triangular set of
    relations that is then reduced by Smith normal form.
    """
    e = Q.identity
    span = {e: ()}
    rels = []
    gens = []
    for g in range(Q.order):
        if g in span:
            continue
        k = len(gens)
        # smallest m with g^m in the current span
        m, y = 1, g
        while y not in span:
            y = Q.mul(y, g)
            m += 1
        base = span[y]
        rel = [-c for c in base] + [0] * (k - len(base)) + [m]
        rels.append(rel)
        gens.append(g)
        new_span = {}
        for x, c in span.items():
            cx = tuple(c) + (0,) * (k - len(c))
            z = x
            for j in range(m):
                new_span[z] = cx + (j,)
                z = Q.mul(z, g)
        span = new_span
    r = len(gens)
    if r == 0:
        return TRIVIAL, {e: ()}, ()
    R = [[(rels[c][i] if i < len(rels[c]) else 0) for c in range(r)] for i in range(r)]
    A, P, _ = present(R, r)
    coords = {}
    for x, c in span.items():
        c = tuple(c) + (0,) * (r - len(c))
        coords[x] = tuple(sum(p * v for p, v in zip(row, c)) % d
                          for row, d in zip(P, A.invariant_factors))
    return A, coords, tuple(gens)


@lru_cache(maxsize=256)
def abelianization(G):
    """``G / [G, G]`` with the coordinates of every element's image."""
    comm = commutator_subgroup(G)
    Q, proj = quotient_group(G, comm)
    A, qcoords, _ = _abelian_structure(Q)
    coords = tuple(qcoords[proj(x)] for x in range(G.order))
    lifts = []
    first = {}
    for x in range(G.order):
        first.setdefault(coords[x], x)
    for u in A.gens():
        lifts.append(first[u])
    return Abelianization(A, coords, tuple(lifts))


def induced_ab_map(f):
    """The homomorphism ``f^ab`` between abelianizations."""
    src = abelianization(f.source)
    tgt = abelianization(f.target)
    images = [tgt.coords[f(x)] for x in src.lifts]
    return hom_from_images(src.group, tgt.group, images)


def induced_kernel(f):
    return kernel(induced_ab_map(f))


def identity_map(G):
    return GroupMap(G, G, tuple(range(G.order)))


def direct_product(G, H):
    """``G x H`` with element ``(g, h)`` at index ``g * |H| + h``."""
    n, m = G.order, H.order
    table = tuple(
        tuple(G.mul(g1, g2) * m + H.mul(h1, h2) for g2 in range(n) for h2 in range(m))
        for g1 in range(n) for h1 in range(m))
    return CayleyGroup(table, G.identity * m + H.identity)


# -- the order-16 group Gal(Q(i, 2^(1/4), sqrt 3) / Q) -------------------------

def _galois_compose(s, t):
    # automorphisms as (a, b, c): 2^(1/4) -> i^a 2^(1/4), i -> i^b, sqrt3 -> c sqrt3
    a1, b1, c1 = s
    a2, b2, c2 = t
    return ((a1 + b1 * a2) % 4, b1 * b2, c1 * c2)


def biquadratic_quartic_group():
    """Galois group of ``Q(i, 2^(1/4), sqrt 3)/Q`` acting on its 16 embeddings.

    Each embedding is identified with the automorphism it differs from a
    fixed one by, so the action is left multiplication.  Returns the
    CayleyGroup and a dict with the indices of ``sigma`` (2^(1/4) -> i 2^(1/4)),
    ``tau`` (complex conjugation), ``upsilon`` (sqrt3 -> -sqrt3) and the
    subgroups ``N1 = Gal(L/Q(i, 2^(1/4)))``, ``N2 = Gal(L/Q(sqrt2, sqrt3))``,
    ``H = Gal(L/Q(sqrt 2))``.
    """
    points = [(a, b, c) for a in range(4) for b in (1, -1) for c in (1, -1)]
    where = {p: k for k, p in enumerate(points)}

    def perm(aut):
        return tuple(where[_galois_compose(aut, p)] for p in points)

    sigma, tau, upsilon = (1, 1, 1), (0, -1, 1), (0, 1, -1)
    G, perms = from_generators([perm(sigma), perm(tau), perm(upsilon)], bound=64)
    idx = {p: k for k, p in enumerate(perms)}
    auts = {idx[perm(aut)]: aut for aut in points}
    names = tuple(_aut_name(auts[k]) for k in range(G.order))
    G = CayleyGroup(G.table, G.identity, names)
    element = {aut: k for k, aut in auts.items()}

    def fixes(aut, field):
        a, b, c = aut
        if field == "L1":       # i and 2^(1/4)
            return a == 0 and b == 1
        if field == "L2":       # sqrt2 = (2^(1/4))^2 and sqrt3
            return a % 2 == 0 and c == 1
        if field == "E":        # sqrt2
            return a % 2 == 0
        raise ValueError(field)

    info = {
        "sigma": element[sigma], "tau": element[tau], "upsilon": element[upsilon],
        "N1": tuple(sorted(k for k, a in auts.items() if fixes(a, "L1"))),
        "N2": tuple(sorted(k for k, a in auts.items() if fixes(a, "L2"))),
        "H": tuple(sorted(k for k, a in auts.items() if fixes(a, "E"))),
        "permutations": perms,
    }
    return G, info


def _aut_name(aut):
    a, b, c = aut
    parts = []
    if a:
        parts.append("s" if a == 1 else f"s^{a}")
    if b == -1:
        parts.append("t")
    if c == -1:
        parts.append("u")
    return "".join(parts) or "1"
