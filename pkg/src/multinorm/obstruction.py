"""Norm-principle obstructions for abelian extensions, computed from
decomposition groups.

For an abelian extension with Galois group G and decomposition groups G^v,
the obstruction to the Hasse norm principle is the cokernel of

    eps : (+)_v  G^v ∧ G^v  -->  G ∧ G,   sum of the maps induced by G^v <= G.

For a pair L1, L2 with compositum L and intersection E the first obstruction
is controlled by the cokernel of the restriction map

    T : Coker(eps_L) --> Coker(eps_L1) x Coker(eps_L2),

which :func:`theorem1_certificate` identifies with Coker(eps_E) through
explicit maps in both directions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .abgroup import (
    AbHom, FinAbGroup, Subgroup, _mul, cokernel, cokernel_data, direct_sum_maps,
    hom_compose, hom_from_images, hom_neg, hom_sum, identity_hom, image, image_of_subgroup,
    is_isomorphic, is_surjective, join, kernel, product_hom, subgroup_structure,
)
from .errors import InternalCheckError, InvariantViolation, StructureError
from .grouptable import (
    abelianization, commutator_subgroup, induced_ab_map, quotient_group, subgroup_group,
)
from .wedge import wedge_basis, wedge_hom


@dataclass(frozen=True)
class LocalFamily:
    ambient: FinAbGroup
    places: tuple
    labels: tuple | None = None

    def __post_init__(self):
        places = tuple(self.places)
        for v in places:
            if v.ambient != self.ambient:
                raise StructureError(f"place subgroup lives in {v.ambient}, not {self.ambient}")
        object.__setattr__(self, "places", places)
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != len(places):
                raise StructureError("need one label per place")
            object.__setattr__(self, "labels", labels)

    @classmethod
    def from_generators(cls, G, generator_lists, labels=None):
        return cls(G, tuple(subgroup_structure(G, gens) for gens in generator_lists), labels)

    def __len__(self):
        return len(self.places)

    def __hash__(self):
        try:
            return self._hash
        except AttributeError:
            h = hash((self.ambient, self.places, self.labels))
            object.__setattr__(self, "_hash", h)
            return h

    def without_cyclic(self):
        keep = [i for i, v in enumerate(self.places) if not v.is_cyclic()]
        labels = tuple(self.labels[i] for i in keep) if self.labels else None
        return LocalFamily(self.ambient, tuple(self.places[i] for i in keep), labels)

    def to_json(self):
        out = [v.to_json() for v in self.places]
        if self.labels:
            for d, lab in zip(out, self.labels):
                d["label"] = lab
        return out


def _induced(outer, lift, source):
    """The hom ``source -> outer.target`` given by ``outer`` after a lift matrix."""
    # well-definedness of such maps is what the callers check explicitly
    return AbHom._trusted(source, outer.target,
                          _mul(outer.matrix, lift, outer.source.ngens, source.ngens))


# -- single extensions -------------------------------------------------------

class _PlaceSet:
    """The distinct non-cyclic decomposition groups of a family.

    Compares by the subgroups as sets, so families that differ only in
    order, repetition or cyclic places share one epsilon map.
    """
    __slots__ = ("places", "key", "_hash")

    def __init__(self, F):
        distinct = {}
        for v in F.places:
            # places with cyclic decomposition group have trivial exterior
            # square and contribute a zero summand, so leaving them out
            # gives the same image
            if not v.is_cyclic():
                distinct.setdefault(v.element_set, v)
        self.places = tuple(distinct.values())
        self.key = frozenset(distinct)
        self._hash = hash(self.key)

    def __eq__(self, other):
        return self.key == other.key

    def __hash__(self):
        return self._hash


def epsilon_map(G, F):
    """``(+)_v G^v ∧ G^v -> G ∧ G``, restricted on each summand to the wedge of
    the inclusion of that decomposition group.

    Only distinct non-cyclic places get a summand; this leaves the image,
    and so every cokernel computed from it, unchanged.
    """
    if F.ambient != G:
        raise StructureError(f"family lives over {F.ambient}, not {G}")
    return _epsilon(G, _PlaceSet(F))


@lru_cache(maxsize=1 << 16)
def _epsilon(G, place_set):
    pieces = [wedge_hom(v.inclusion) for v in place_set.places]
    target = wedge_basis(G).wedge
    S, _, projections = direct_sum_maps(tuple(p.source for p in pieces))
    return hom_sum([hom_compose(p, pr) for p, pr in zip(pieces, projections)], S, target)


def sha_abelian(G, F):
    """Tate-Shafarevich group of the norm principle: ``Coker(eps)``.

    ``F`` must contain every place with non-cyclic decomposition group; cyclic
    places are harmless since their exterior square vanishes.
    """
    return cokernel(epsilon_map(G, F))[0]


@lru_cache(maxsize=1 << 15)
def push_family(pi, F):
    """Decomposition groups of the subextension cut out by the surjection ``pi``."""
    if F.ambient != pi.source:
        raise StructureError("family does not live over the source of the projection")
    if not is_surjective(pi):
        raise InvariantViolation("surjective_projection", "push_family needs a surjection")
    return LocalFamily(pi.target, tuple(image_of_subgroup(pi, v) for v in F.places), F.labels)


def sha_restriction_map(pi, F):
    """``Coker(eps over F) -> Coker(eps over pi(F))`` induced by ``pi ∧ pi``."""
    eps_src = epsilon_map(pi.source, F)
    Q1, _, lift = cokernel_data(eps_src)
    eps_tgt = epsilon_map(pi.target, push_family(pi, F))
    _, q2, _ = cokernel_data(eps_tgt)
    down = hom_compose(q2, wedge_hom(pi))
    if not hom_compose(down, eps_src).is_zero():
        raise InternalCheckError("restriction_well_defined",
                                 "pi ∧ pi does not carry im(eps) into im(eps)")
    return _induced(down, lift, Q1)


# -- pairs of extensions -------------------------------------------------------

@dataclass(frozen=True)
class AbelianTower:
    """``G = Gal(L/K)`` with ``N1 = Gal(L/L1)``, ``N2 = Gal(L/L2)`` and the
    projections onto ``G1 = G/N1``, ``G2 = G/N2``, ``GE = G/N1N2``."""
    G: FinAbGroup
    N1: Subgroup
    N2: Subgroup
    pi1: AbHom
    pi2: AbHom
    rho: AbHom
    rho1: AbHom
    rho2: AbHom

    @property
    def G1(self):
        return self.pi1.target

    @property
    def G2(self):
        return self.pi2.target

    @property
    def GE(self):
        return self.rho.target


@lru_cache(maxsize=1 << 14)
def make_tower(G, N1, N2):
    if N1.ambient != G or N2.ambient != G:
        raise StructureError("N1 and N2 must be subgroups of G")
    NN = join(N1, N2)
    if NN.order != N1.order * N2.order:
        raise InvariantViolation("trivial_intersection",
                                 "N1 ∩ N2 must be trivial (L is the compositum)")
    _, pi1, lift1 = cokernel_data(N1.inclusion)
    _, pi2, lift2 = cokernel_data(N2.inclusion)
    _, rho, _ = cokernel_data(NN.inclusion)
    rho1 = _induced(rho, lift1, pi1.target)
    rho2 = _induced(rho, lift2, pi2.target)
    if hom_compose(rho1, pi1) != rho or hom_compose(rho2, pi2) != rho:
        raise InternalCheckError("tower_commutes", "rho != rho_i o pi_i")
    return AbelianTower(G, N1, N2, pi1, pi2, rho, rho1, rho2)


def tower_from_generators(G, n1_gens, n2_gens):
    return make_tower(G, subgroup_structure(G, n1_gens), subgroup_structure(G, n2_gens))


def coker_g(T, F):
    """Cokernel of ``g = T_{L/L1} x T_{L/L2}`` and the map itself."""
    if F.ambient != T.G:
        raise StructureError("family must live over the Galois group of the compositum")
    Tmap = product_hom((sha_restriction_map(T.pi1, F), sha_restriction_map(T.pi2, F)))
    return cokernel(Tmap)[0], Tmap


@lru_cache(maxsize=1 << 12)
def section(rho):
    """For each element of the target, the lexicographically smallest preimage."""
    mu = {}
    for x in rho.source.elements():
        mu.setdefault(rho(x), x)
    return tuple(sorted(mu.items()))


@lru_cache(maxsize=1 << 14)
def _t0(T):
    return product_hom((wedge_hom(T.pi1), wedge_hom(T.pi2)))


@dataclass(frozen=True)
class Theorem1Certificate:
    cokerT: FinAbGroup
    shaE: FinAbGroup
    section_mu: tuple
    section_mu1: tuple
    mapP: AbHom | None
    mapS: AbHom | None
    verdict: bool
    failed: tuple = ()
    cokerT0: FinAbGroup | None = None
    sha_L: FinAbGroup | None = None
    sha_L1: FinAbGroup | None = None
    sha_L2: FinAbGroup | None = None
    checks: dict = field(default_factory=dict, compare=False, hash=False)

    def to_json(self):
        return {
            "coker_g": str(self.cokerT), "sha_E": str(self.shaE),
            "coker_g_invariant_factors": list(self.cokerT.invariant_factors),
            "sha_E_invariant_factors": list(self.shaE.invariant_factors),
            "coker_T0": str(self.cokerT0) if self.cokerT0 is not None else None,
            "sha_L": str(self.sha_L), "sha_L1": str(self.sha_L1), "sha_L2": str(self.sha_L2),
            "section_mu": [[list(e), list(x)] for e, x in self.section_mu],
            "section_mu1": [[list(e), list(x)] for e, x in self.section_mu1],
            "map_P": self.mapP.to_json() if self.mapP else None,
            "map_S": self.mapS.to_json() if self.mapS else None,
            "checks": dict(self.checks),
            "verdict": self.verdict,
            "failed": list(self.failed),
        }


def theorem1_certificate(T, F):
    """Check ``Coker(g) ≅ Sha(E/K)`` on one tower with explicit maps.

    ``P`` is induced by ``(a∧b, c∧d) -> rho1(a)∧rho1(b) - rho2(c)∧rho2(d)`` and
    ``S`` by ``e∧f -> (mu1(e)∧mu1(f), 0)`` with ``mu1 = pi1 o mu`` for the
    section ``mu`` of ``rho``.  Every check is recorded; a failure means a bug.
    """
    if F.ambient != T.G:
        raise StructureError("family must live over the Galois group of the compositum")
    checks = {}
    G, GE = T.G, T.GE
    F1, F2, FE = push_family(T.pi1, F), push_family(T.pi2, F), push_family(T.rho, F)
    eps_L = epsilon_map(G, F)
    eps_1 = epsilon_map(T.G1, F1)
    eps_2 = epsilon_map(T.G2, F2)
    eps_E = epsilon_map(GE, FE)
    C_L, _, lift_L = cokernel_data(eps_L)
    C_1, q1, lift_1 = cokernel_data(eps_1)
    C_2, q2, lift_2 = cokernel_data(eps_2)
    C_E, qE, lift_E = cokernel_data(eps_E)

    # T = T_{L/L1} x T_{L/L2}
    down1 = hom_compose(q1, wedge_hom(T.pi1))
    down2 = hom_compose(q2, wedge_hom(T.pi2))
    checks["T_well_defined"] = (hom_compose(down1, eps_L).is_zero()
                                and hom_compose(down2, eps_L).is_zero())
    T1 = _induced(down1, lift_L, C_L)
    T2 = _induced(down2, lift_L, C_L)
    D, inj, prj = direct_sum_maps((C_1, C_2))
    Tmap = hom_sum([hom_compose(inj[0], T1), hom_compose(inj[1], T2)], C_L, D)
    K, qK, lift_K = cokernel_data(Tmap)

    # Coker(T0) ≅ GE ∧ GE
    cokerT0 = cokernel(_t0(T))[0]
    WE = wedge_basis(GE)
    checks["cokerT0_iso_wedge_E"] = is_isomorphic(cokerT0, WE.wedge)

    # P : Coker(T) -> Coker(eps_E)
    up1 = hom_compose(qE, wedge_hom(T.rho1))
    up2 = hom_compose(qE, wedge_hom(T.rho2))
    checks["P_well_defined"] = (hom_compose(up1, eps_1).is_zero()
                                and hom_compose(up2, eps_2).is_zero())
    P1 = _induced(up1, lift_1, C_1)
    P2 = _induced(up2, lift_2, C_2)
    Ppre = hom_sum([hom_compose(P1, prj[0]), hom_neg(hom_compose(P2, prj[1]))], D, C_E)
    checks["P_kills_im_T"] = hom_compose(Ppre, Tmap).is_zero()
    mapP = _induced(Ppre, lift_K, K)

    # S : Coker(eps_E) -> Coker(T), through the section mu
    mu = section(T.rho)
    mu1 = tuple((e, T.pi1(x)) for e, x in mu)
    mu1_map = dict(mu1)
    W1 = wedge_basis(T.G1)
    to_K = hom_compose(qK, hom_compose(inj[0], q1))   # W1 -> K
    gens_E = GE.gens()
    images = []
    ok_rel = True
    for (k, l), o in zip(WE.pairs, WE.orders):
        img = to_K(W1.encode(mu1_map[gens_E[k]], mu1_map[gens_E[l]]))
        if any(K.scale(o, img)):
            ok_rel = False
        images.append(img)
    checks["S_well_defined"] = ok_rel
    mapS = None
    if ok_rel:
        S_on_W = hom_from_images(WE.wedge, K, [
            K.reduce([sum(c * img[i] for c, img in zip(WE.to_raw(w), images))
                      for i in range(K.ngens)])
            for w in WE.wedge.gens()])
        checks["S_descends"] = hom_compose(S_on_W, eps_E).is_zero()
        mapS = _induced(S_on_W, lift_E, C_E)
        checks["P_after_S_is_identity"] = hom_compose(mapP, mapS) == identity_hom(C_E)
        checks["S_surjective"] = is_surjective(mapS)
    checks["P_surjective"] = is_surjective(mapP)
    checks["coker_g_iso_sha_E"] = is_isomorphic(K, C_E)
    failed = tuple(name for name, ok in checks.items() if not ok)
    return Theorem1Certificate(
        cokerT=K, shaE=C_E, section_mu=mu, section_mu1=mu1, mapP=mapP, mapS=mapS,
        verdict=not failed, failed=failed, cokerT0=cokerT0,
        sha_L=C_L, sha_L1=C_1, sha_L2=C_2, checks=checks)


def multinorm_obstruction(T, F):
    """Obstruction to the multinorm principle for the pair: ``Sha(L1 ∩ L2 / K)``."""
    shaE = sha_abelian(T.GE, push_family(T.rho, F))
    cokerT, _ = coker_g(T, F)
    if not is_isomorphic(cokerT, shaE):
        raise InternalCheckError("coker_g_iso_sha_E", f"{cokerT} vs {shaE}")
    return shaE


def intersection_obstruction_order(T, F):
    """``|Sha(L1)| |Sha(L2)| / |Sha(L1 ∩ L2)|`` for the intersection principle."""
    s1 = sha_abelian(T.G1, push_family(T.pi1, F)).order
    s2 = sha_abelian(T.G2, push_family(T.pi2, F)).order
    sE = sha_abelian(T.GE, push_family(T.rho, F)).order
    if (s1 * s2) % sE:
        raise InternalCheckError("intersection_integral",
                                 f"|Sha(E)| = {sE} does not divide {s1 * s2}")
    return s1 * s2 // sE


def wedgerel_holds(T):
    """The three inclusions behind the bilinearity of the section map.

    For ``e`` in GE and ``h, h'`` in ``N2``: ``(mu1(e) ∧ pi1(h), 0)``,
    ``(pi1(h) ∧ mu1(e), 0)`` and ``(pi1(h) ∧ pi1(h'), 0)`` all lie in ``im T0``.
    """
    t0 = _t0(T)
    _, proj = cokernel(t0)
    _, inj, _ = direct_sum_maps((wedge_basis(T.G1).wedge, wedge_basis(T.G2).wedge))
    W1 = wedge_basis(T.G1)
    mu1 = [T.pi1(x) for _, x in section(T.rho)]
    ker = [T.pi1(h) for h in T.N2.element_set]

    def in_image(w):
        return not any(proj(inj[0](w)))

    for a in mu1:
        for b in ker:
            if not (in_image(W1.encode(a, b)) and in_image(W1.encode(b, a))):
                return False
    return all(in_image(W1.encode(a, b)) for a in ker for b in ker)


# -- nonabelian input: second obstruction and the map phi ----------------------

def _check_pair(G, N1, N2):
    N1, N2 = tuple(sorted(set(N1))), tuple(sorted(set(N2)))
    for name, N in (("N1", N1), ("N2", N2)):
        if not G.is_normal(N):
            raise InvariantViolation("normal_subgroup", f"{name} is not a normal subgroup")
    if set(N1) & set(N2) != {G.identity}:
        raise InvariantViolation("trivial_intersection", "N1 ∩ N2 must be trivial")
    return N1, N2


def second_obstruction_bound(G, N1, N2):
    """``[M:K] / [M1 M2:K]`` as ``|G^ab| / |im(G^ab -> G1^ab x G2^ab)|``."""
    N1, N2 = _check_pair(G, N1, N2)
    Gab = abelianization(G).group
    maps = []
    for N in (N1, N2):
        _, proj = quotient_group(G, N)
        maps.append(induced_ab_map(proj))
    img = image(product_hom(maps)).order
    if Gab.order % img:
        raise InternalCheckError("bound_integral", "image order does not divide |G^ab|")
    return Gab.order // img


@dataclass(frozen=True, eq=False)
class PhiReport:
    injective: bool
    H_elements: tuple
    H_ab: FinAbGroup
    G_ab: FinAbGroup
    kernel: Subgroup
    witnesses: tuple


def phi_report(G, N1, N2):
    """Kernel of ``Gal(L/E)^ab -> Gal(L/K)^ab`` with ``Gal(L/E) = N1 N2``.

    ``witnesses`` lists the elements of H whose class is a nonzero kernel
    element, commutators of G first.
    """
    N1, N2 = _check_pair(G, N1, N2)
    Hset = G.closure(N1 + N2)
    H, inc = subgroup_group(G, Hset)
    f = induced_ab_map(inc)
    Hab = abelianization(H)
    image_kernel = kernel(f)
    comms = set(commutator_subgroup(G))
    wit = [inc(x) for x in range(H.order)
           if any(Hab.coords[x]) and image_kernel.contains(Hab.coords[x])]
    wit.sort(key=lambda g: (g not in comms, g))
    return PhiReport(image_kernel.is_trivial(), Hset, Hab.group,
                     abelianization(G).group, image_kernel, tuple(wit))


def phi_injective(G, N1, N2):
    return phi_report(G, N1, N2).injective


def iter_subgroup_pairs(subgroups, zero):
    """Ordered pairs of subgroups (element-set form) meeting trivially."""
    for a, b in itertools.product(subgroups, repeat=2):
        if a.element_set & b.element_set == {zero}:
            yield a, b
