"""Abelian extensions of Q as fixed fields inside cyclotomic fields.

A field is ``Q(zeta_n)^H`` for a subgroup ``H`` of ``(Z/n)^*``.  It is stored
with its true conductor, so equal fields compare equal.  Its Galois group is
``(Z/n)^* / H``.

Decomposition groups follow the usual recipe.  Write ``n = p^k m`` with ``p``
not dividing ``m``.  Then the decomposition group at ``p`` in ``(Z/n)^*`` is
the preimage of ``<p mod m>`` under reduction to ``(Z/m)^*``, and its inertia
subgroup is the kernel of that reduction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import gcd, lcm

from .abgroup import (
    FinAbGroup, cokernel_data, hom_from_images, kernel, normalize, subgroup_structure,
)
from .errors import InputError, StructureError
from .obstruction import LocalFamily, make_tower

INFINITE = "inf"
FROBENIUS_SEARCH_LIMIT = 100_000


# -- elementary number theory ------------------------------------------------

def factorize(n):
    """Prime factorization ``{p: k}`` of a positive integer by trial division."""
    if n < 1:
        raise InputError(f"cannot factor {n}")
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n):
    return n >= 2 and factorize(n) == {n: 1}


def primes():
    """2, 3, 5, 7, ... without end."""
    return (p for p in itertools.count(2) if is_prime(p))


def euler_phi(n):
    r = n
    for p in factorize(n):
        r = r // p * (p - 1)
    return r


def divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def crt(residues, moduli):
    """The residue mod ``prod(moduli)`` with the given residues (coprime moduli)."""
    x, M = 0, 1
    for r, m in zip(residues, moduli):
        t = (r - x) * pow(M, -1, m) % m if m > 1 else 0
        x += M * t
        M *= m
    return x % M


def multiplicative_order(a, n):
    if gcd(a, n) != 1:
        raise StructureError(f"{a} is not a unit mod {n}")
    k, x = 1, a % n
    while x != 1 % n:
        x = x * a % n
        k += 1
    return k


def kronecker(a, n):
    """The Kronecker symbol ``(a / n)``."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # now n is odd and positive: Jacobi symbol
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _squarefree(d):
    return all(k == 1 for k in factorize(abs(d)).values())


# -- unit groups -------------------------------------------------------------

def units(n):
    """Residues mod n that are units, ascending (``[0]`` for n = 1)."""
    return [a for a in range(n) if gcd(a, n) == 1]


def _local_generators(p, k):
    """Generators and orders of a cyclic decomposition of ``(Z/p^k)^*``."""
    q = p ** k
    if p == 2:
        out = []
        if k >= 2:
            out.append((q - 1, 2))
        if k >= 3:
            out.append((5, 2 ** (k - 2)))
        return out
    phi = q // p * (p - 1)
    g = next(g for g in range(2, q) if g % p and multiplicative_order(g, q) == phi)
    return [(g, phi)]


@dataclass(frozen=True, eq=False)
class UnitGroup:
    """``(Z/n)^*`` in invariant-factor form with a codec between residues and vectors.

    Internally an element is first written in "raw" exponents, one slot per
    cyclic generator of a prime-power part, and then converted to the
    invariant-factor coordinates of ``group``.
    """
    n: int
    group: FinAbGroup
    moduli: tuple          # prime powers q with n = prod(q)
    slots: tuple           # per modulus: list of (generator mod q, order)
    to_group: tuple
    from_group: tuple
    tables: tuple          # per modulus: {residue mod q: exponent tuple}

    def encode(self, a):
        a %= self.n
        if gcd(a, self.n) != 1:
            raise StructureError(f"{a} is not a unit mod {self.n}")
        raw = []
        for q, table in zip(self.moduli, self.tables):
            raw.extend(table[a % q])
        return tuple(sum(t * x for t, x in zip(row, raw)) % d
                     for row, d in zip(self.to_group, self.group.invariant_factors))

    def decode(self, v):
        raw = [sum(t * x for t, x in zip(row, v)) for row in self.from_group]
        pos = 0
        residues = []
        for q, gens in zip(self.moduli, self.slots):
            r = 1 % q
            for g, o in gens:
                r = r * pow(g, raw[pos] % o, q) % q
                pos += 1
            residues.append(r)
        return crt(residues, self.moduli)


@lru_cache(maxsize=1024)
def unit_group(n):
    """``(Z/n)^*`` as a FinAbGroup together with a residue codec.

    Uses CRT into prime-power parts and brute-force discrete logarithms on
    each part.
    """
    if not isinstance(n, int) or n < 1:
        raise InputError(f"modulus must be a positive integer, got {n!r}")
    fac = sorted(factorize(n).items())
    moduli, slots, tables, orders = [], [], [], []
    for p, k in fac:
        q = p ** k
        gens = _local_generators(p, k)
        table = {}
        for exps in itertools.product(*(range(o) for _, o in gens)):
            r = 1 % q
            for (g, _), e in zip(gens, exps):
                r = r * pow(g, e, q) % q
            table[r] = exps
        moduli.append(q)
        slots.append(tuple(gens))
        tables.append(table)
        orders.extend(o for _, o in gens)
    G, to_g, from_g = normalize(tuple(orders))
    return UnitGroup(n, G, tuple(moduli), tuple(slots), to_g, from_g, tuple(tables))


def _closure(gens, n):
    """The subgroup of ``(Z/n)^*`` generated by ``gens``, as a sorted tuple."""
    seen = {1 % n}
    frontier = [1 % n]
    gens = [g % n for g in gens]
    for g in gens:
        if gcd(g, n) != 1:
            raise InputError(f"{g} is not a unit mod {n}")
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g % n
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return tuple(sorted(seen))


def _small_generating_set(elements, n):
    """A few residues generating the same subgroup as ``elements``."""
    gens, span = [], {1 % n}
    for a in elements:
        if a not in span:
            gens.append(a)
            span = set(_closure(gens, n))
    return gens


# -- fields ------------------------------------------------------------------

@dataclass(frozen=True)
class CycloField:
    """``Q(zeta_n)^H``.  ``fixing_subgroup`` may be given by generators.

    On construction H is closed up and the pair is reduced to the true
    conductor, so ``CycloField`` equality is field equality.
    """
    conductor: int
    fixing_subgroup: tuple

    def __post_init__(self):
        n = self.conductor
        if not isinstance(n, int) or n < 1:
            raise InputError(f"conductor must be a positive integer, got {n!r}")
        H = set(_closure(self.fixing_subgroup, n))
        # smallest m such that the kernel of (Z/n)^* -> (Z/m)^* lies in H
        for m in divisors(n):
            if all(a in H for a in units(n) if a % m == 1 % m):
                break
        object.__setattr__(self, "conductor", m)
        object.__setattr__(self, "fixing_subgroup", tuple(sorted({h % m for h in H})))

    @classmethod
    def cyclotomic(cls, n):
        return cls(n, ())

    @property
    def degree(self):
        return euler_phi(self.conductor) // len(self.fixing_subgroup)

    @cached_property
    def units(self):
        return unit_group(self.conductor)

    @cached_property
    def _galois_data(self):
        U = self.units
        gens = _small_generating_set(self.fixing_subgroup, self.conductor)
        H = subgroup_structure(U.group, [U.encode(h) for h in gens])
        return cokernel_data(H.inclusion)

    @property
    def galois_group(self):
        """``G_L = (Z/n)^* / H``."""
        return self._galois_data[0]

    def element_of(self, a):
        """The class in ``G_L`` of the residue ``a`` (coprime to the conductor)."""
        return self._galois_data[1](self.units.encode(a))

    def residue_of(self, g):
        """Some unit mod the conductor whose class is ``g``."""
        L = self._galois_data[2]
        raw = tuple(sum(a * b for a, b in zip(row, g)) for row in L)
        return self.units.decode(raw)

    def contains(self, other):
        """Whether ``other`` is a subfield of this field."""
        return (self.conductor % other.conductor == 0
                and all(h % other.conductor in set(other.fixing_subgroup)
                        for h in self.fixing_subgroup))

    def describe(self):
        return f"Q(zeta_{self.conductor})^H, degree {self.degree}"

    def to_json(self):
        return {"conductor": self.conductor, "fixing_subgroup": list(self.fixing_subgroup)}


def quadratic(d):
    """``Q(sqrt d)`` for a squarefree integer ``d`` other than 0 and 1."""
    if d in (0, 1) or not _squarefree(d):
        raise InputError(f"sqrt:{d} needs a squarefree integer other than 0 and 1")
    D = d if d % 4 == 1 else 4 * d
    n = abs(D)
    return CycloField(n, tuple(a for a in units(n) if kronecker(D, a) == 1))


def compositum(L1, L2):
    N = lcm(L1.conductor, L2.conductor)
    H1, H2 = _pullback(L1, N), _pullback(L2, N)
    return CycloField(N, tuple(sorted(H1 & H2)))


def intersection(L1, L2):
    N = lcm(L1.conductor, L2.conductor)
    H1, H2 = _pullback(L1, N), _pullback(L2, N)
    return CycloField(N, tuple(_small_generating_set(sorted(H1 | H2), N)))


def _pullback(L, N):
    H = set(L.fixing_subgroup)
    return {a for a in units(N) if a % L.conductor in H}


def subfield(L, subgroup):
    """The fixed field of a subgroup of ``G_L`` (given as a Subgroup)."""
    n = L.conductor
    gens = list(L.fixing_subgroup) + [L.residue_of(g) for g in subgroup.generators]
    return CycloField(n, tuple(_small_generating_set(sorted(set(gens)), n)) or (1 % n,))


def restriction_map(L, K):
    """``Gal(L/Q) -> Gal(K/Q)`` for a subfield ``K`` of ``L``."""
    if not L.contains(K):
        raise StructureError(f"{K.to_json()} is not a subfield of {L.to_json()}")
    G = L.galois_group
    images = [K.element_of(L.residue_of(g) % K.conductor) for g in G.gens()]
    return hom_from_images(G, K.galois_group, images)


# -- places ------------------------------------------------------------------

@dataclass(frozen=True)
class PlaceData:
    place: object            # a prime p, or INFINITE
    decomposition: object    # Subgroup of G_L
    inertia: object          # Subgroup of G_L
    ramified: bool

    @property
    def label(self):
        return str(self.place)

    def to_json(self):
        return {"place": self.label, "decomposition": self.decomposition.to_json(),
                "order": self.decomposition.order, "ramified": self.ramified}


def parse_place(place):
    if place in (INFINITE, "infinity", "oo", "∞"):
        return INFINITE
    try:
        p = int(place)
    except (TypeError, ValueError):
        raise InputError(f"not a place: {place!r}") from None
    if not is_prime(p):
        raise InputError(f"not a place: {place!r} is not prime")
    return p


def decomposition_subgroup(L, place):
    """Decomposition and inertia groups in ``G_L`` at a prime or at infinity."""
    place = parse_place(place)
    n, G = L.conductor, L.galois_group
    if place == INFINITE:
        D = subgroup_structure(G, [L.element_of(n - 1)] if n > 1 else [])
        return PlaceData(INFINITE, D, subgroup_structure(G, []), False)
    p = place
    k = 0
    m = n
    while m % p == 0:
        m //= p
        k += 1
    q = p ** k
    frob = crt([p % m, 1 % q], [m, q])
    inertia_gens = [crt([1 % m, g], [m, q]) for g, _ in _local_generators(p, k)] if k else []
    I = subgroup_structure(G, [L.element_of(a) for a in inertia_gens])
    D = subgroup_structure(G, [L.element_of(a) for a in [frob] + inertia_gens])
    return PlaceData(p, D, I, not I.is_trivial())


def frobenius(L, p):
    """The Frobenius class of an unramified prime ``p``."""
    if L.conductor % p == 0:
        raise StructureError(f"{p} is ramified in the field")
    return L.element_of(p)


def frobenius_representatives(L, limit=FROBENIUS_SEARCH_LIMIT):
    """``{g: smallest unramified prime with Frobenius g}`` for every g in ``G_L``."""
    G = L.galois_group
    want = G.order
    found = {}
    for p in primes():
        if p > limit:
            raise StructureError(f"no prime up to {limit} for some Frobenius class")
        if L.conductor % p == 0:
            continue
        found.setdefault(frobenius(L, p), p)
        if len(found) == want:
            return found


def places_of(L):
    """The infinite place and every prime dividing the conductor."""
    return [decomposition_subgroup(L, INFINITE)] + [
        decomposition_subgroup(L, p) for p in sorted(factorize(L.conductor))]


def realizable_family(L):
    """Decomposition groups of L at the ramified primes, at infinity, and a
    cyclic ``<g>`` for every g, labelled by a prime whose Frobenius is g.

    Every element occurs as a Frobenius infinitely often, so together these
    are all the decomposition groups that occur.  The cyclic ones add
    nothing to the obstruction.
    """
    G = L.galois_group
    places = places_of(L)
    reps = frobenius_representatives(L)
    subs = [pd.decomposition for pd in places]
    labels = [pd.label for pd in places]
    for g in sorted(reps):
        subs.append(subgroup_structure(G, [g]))
        labels.append(str(reps[g]))
    return LocalFamily(G, tuple(subs), tuple(labels))


def tower_from_fields(L1, L2):
    """The tower over ``Gal(L1 L2 / Q)`` and the realizable family of the compositum."""
    L = compositum(L1, L2)
    N1 = kernel(restriction_map(L, L1))
    N2 = kernel(restriction_map(L, L2))
    return make_tower(L.galois_group, N1, N2), realizable_family(L)


def field_from_json(doc):
    """Parse ``{"conductor", "fixing_subgroup"}``, ``{"quadratic": d}``,
    ``{"compositum": [...]}`` or the shorthand ``"sqrt:d"``."""
    if isinstance(doc, str):
        if doc.startswith("sqrt:"):
            try:
                return quadratic(int(doc[5:]))
            except ValueError:
                raise InputError(f"bad quadratic shorthand {doc!r}") from None
        if doc.startswith("cyclotomic:"):
            return CycloField.cyclotomic(int(doc[11:]))
        raise InputError(f"unknown field description {doc!r}")
    if not isinstance(doc, dict):
        raise InputError(f"field must be an object or string, got {type(doc).__name__}")
    if "quadratic" in doc:
        return quadratic(int(doc["quadratic"]))
    if "compositum" in doc:
        parts = [field_from_json(x) for x in doc["compositum"]]
        if not parts:
            raise InputError("empty compositum")
        out = parts[0]
        for K in parts[1:]:
            out = compositum(out, K)
        return out
    if "conductor" in doc:
        return CycloField(int(doc["conductor"]),
                          tuple(int(a) for a in doc.get("fixing_subgroup", [])))
    raise InputError("field needs 'conductor', 'quadratic' or 'compositum'")
