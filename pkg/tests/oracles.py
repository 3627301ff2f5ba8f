"""Independent reference computations used by the tests.

Nothing here goes through the library's Smith normal form, wedge bases or
epsilon maps.  Structures are recovered either by counting element orders
or with sympy's invariant factors over ZZ.
"""

import itertools
from math import gcd, prod

from sympy import ZZ, Matrix
from sympy.matrices.normalforms import invariant_factors


def factors_from_relations(ngens, columns):
    """Invariant factors (all > 1) of ``Z^ngens / span(columns)``, via sympy."""
    if ngens == 0:
        return ()
    columns = [list(c) for c in columns if any(c)]
    if not columns:
        raise ValueError("infinite group")
    inv = invariant_factors(Matrix(columns).T, domain=ZZ)
    inv = [abs(int(x)) for x in inv]
    if len(inv) < ngens or 0 in inv:
        raise ValueError("infinite group")
    return tuple(x for x in inv if x != 1)


def factors_from_orders(orders):
    """Invariant factors of ``Z/o_1 + ... + Z/o_k`` via sympy."""
    k = len(orders)
    cols = [[o if i == j else 0 for i in range(k)] for j, o in enumerate(orders)]
    return factors_from_relations(k, cols) if k else ()


def _prime_factors(n):
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def factors_from_order_counts(elements, add, zero):
    """Invariant factors of a finite abelian group given by its elements.

    Uses ``|G[m]| = prod gcd(m, d_i)``: the number of cyclic p-factors of
    order at least p^k is log_p |G[p^k]| / |G[p^(k-1)]|.
    """
    elements = list(elements)

    def mult(m, x):
        y = zero
        for _ in range(m):
            y = add(y, x)
        return y

    n = len(elements)
    by_prime = []
    for p in _prime_factors(n):
        sizes = [1]     # sizes[k] = |G[p^k]|, until it stabilizes
        k = 1
        while True:
            s = sum(1 for x in elements if mult(p ** k, x) == zero)
            if s == sizes[-1]:
                break
            sizes.append(s)
            k += 1
        counts = []   # counts[k-1] = number of factors of order >= p^k
        for k in range(1, len(sizes)):
            ratio = sizes[k] // sizes[k - 1]
            c = 0
            while ratio > 1:
                ratio //= p
                c += 1
            counts.append(c)
        exps = []
        for k in range(len(counts)):
            exact = counts[k] - (counts[k + 1] if k + 1 < len(counts) else 0)
            exps += [p ** (k + 1)] * exact
        by_prime.append(sorted(exps, reverse=True))
    width = max((len(e) for e in by_prime), default=0)
    inv = []
    for i in range(width):
        inv.append(prod(e[i] for e in by_prime if i < len(e)))
    return tuple(sorted(inv, key=lambda x: x))


def group_elements(d):
    return list(itertools.product(*(range(x) for x in d)))


def add_mod(d):
    return lambda x, y: tuple((a + b) % m for a, b, m in zip(x, y, d))


def tensor_orders(d):
    pairs = [(i, j) for i in range(len(d)) for j in range(len(d))]
    return pairs, [gcd(d[i], d[j]) for i, j in pairs]


def tensor_vector(d, a, b):
    pairs, orders = tensor_orders(d)
    return [a[i] * b[j] % o for (i, j), o in zip(pairs, orders)]


def wedge_by_quotient(d):
    """``G ⊗ G / <g ⊗ g : g in G>`` with every g, by sympy."""
    pairs, orders = tensor_orders(d)
    m = len(pairs)
    cols = [[o if i == k else 0 for i in range(m)] for k, o in enumerate(orders)]
    for g in group_elements(d):
        cols.append(tensor_vector(d, g, g))
    return factors_from_relations(m, cols) if m else ()


def tensor_by_orders(d):
    pairs, orders = tensor_orders(d)
    return factors_from_orders(orders)


def subgroup_elements(d, gens):
    """Brute-force span of ``gens`` in ``Z/d_1 + ...``."""
    add = add_mod(d)
    zero = tuple(0 for _ in d)
    span = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = add(x, g)
                if y not in span:
                    span.add(y)
                    nxt.append(y)
        frontier = nxt
    return span


def sha_by_quotient(d, places):
    """``Coker(sum_v G_v ∧ G_v -> G ∧ G)`` computed inside ``G ⊗ G``.

    ``places`` is a list of generator lists.  The image of ``G_v ∧ G_v``
    is spanned by the classes of ``a ⊗ b`` with a, b in G_v.
    """
    pairs, orders = tensor_orders(d)
    m = len(pairs)
    if m == 0:
        return ()
    cols = [[o if i == k else 0 for i in range(m)] for k, o in enumerate(orders)]
    for g in group_elements(d):
        cols.append(tensor_vector(d, g, g))
    for gens in places:
        elems = subgroup_elements(d, [tuple(g) for g in gens])
        for a in elems:
            for b in elems:
                cols.append(tensor_vector(d, a, b))
    return factors_from_relations(m, cols)


def quotient_factors(d, sub_gens):
    """Structure of ``G / <sub_gens>`` by sympy."""
    k = len(d)
    cols = [[o if i == j else 0 for i in range(k)] for j, o in enumerate(d)]
    cols += [list(g) for g in sub_gens]
    return factors_from_relations(k, cols) if k else ()


# -- biquadratic fields: classical splitting rules -----------------------------

def legendre(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def squarefree_part(n):
    s = 1 if n > 0 else -1
    n = abs(n)
    out = 1
    p = 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
        if n % p == 0:
            out *= p
            n //= p
        p += 1
    return s * out * n


def quadratic_splits(d, place):
    """Does ``place`` split completely in Q(sqrt d)?"""
    if place == "inf":
        return d > 0
    p = place
    if p == 2:
        return d % 8 == 1
    if d % p == 0:
        return False
    return legendre(d, p) == 1


def biquadratic_sha_order(a, b):
    """2 when every decomposition group of Q(sqrt a, sqrt b) is cyclic, else 1.

    D_v is all of (Z/2)^2 exactly when v splits in none of the three
    quadratic subfields.  Only v = inf, 2 and primes dividing ab matter.
    """
    c = squarefree_part(a * b)
    places = ["inf", 2] + [p for p in _prime_factors(abs(a * b)) if p != 2]
    for v in places:
        if not any(quadratic_splits(x, v) for x in (a, b, c)):
            return 1
    return 2
