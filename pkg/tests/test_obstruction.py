import random

import pytest
from hypothesis import given, strategies as st
from oracles import sha_by_quotient

from multinorm.abgroup import (
    FinAbGroup, TRIVIAL, direct_sum, hom_from_images, identity_hom, is_surjective,
    normalize, subgroup_structure, whole_group,
)
from multinorm.errors import InvariantViolation
from multinorm.grouptable import (
    biquadratic_quartic_group, commutator_subgroup, direct_product, from_generators,
)
from multinorm.obstruction import (
    LocalFamily, coker_g, epsilon_map, intersection_obstruction_order, make_tower,
    multinorm_obstruction, phi_injective, phi_report, push_family, second_obstruction_bound,
    sha_abelian, sha_restriction_map, theorem1_certificate, tower_from_generators,
    wedgerel_holds,
)
from multinorm.sweep import all_subgroups, cyclic_family

V = FinAbGroup((2, 2))
V3 = FinAbGroup((2, 2, 2))

groups = st.lists(st.integers(2, 6), min_size=1, max_size=3).map(
    lambda o: normalize(tuple(o))[0]).filter(lambda G: G.order <= 32)


@st.composite
def families(draw, G, max_places=4):
    subs = all_subgroups(G)
    k = draw(st.integers(0, max_places))
    return LocalFamily(G, tuple(draw(st.sampled_from(subs)) for _ in range(k)))


@st.composite
def towers_with_family(draw):
    G = draw(groups)
    subs = all_subgroups(G)
    N1 = draw(st.sampled_from(subs))
    options = [N for N in subs if N.element_set & N1.element_set == {G.zero}]
    N2 = draw(st.sampled_from(options))
    return make_tower(G, N1, N2), draw(families(G))


def family_gens(F):
    return [list(v.generators) for v in F.places]


# -- single extensions ---------------------------------------------------------

def test_epsilon_examples():
    F = cyclic_family(V)
    eps = epsilon_map(V, F)
    assert eps.source == TRIVIAL and eps.is_zero()
    full = LocalFamily(V, (whole_group(V),))
    assert is_surjective(epsilon_map(V, full))
    three = LocalFamily.from_generators(V, [[(1, 0)], [(0, 1)], [(1, 1)]])
    eps = epsilon_map(V, three)
    assert eps.target == FinAbGroup((2,)) and eps.is_zero()


def test_sha_examples():
    Z12 = FinAbGroup((12,))
    assert sha_abelian(Z12, cyclic_family(Z12)) == TRIVIAL
    assert sha_abelian(V, cyclic_family(V)) == FinAbGroup((2,))
    assert sha_abelian(V, LocalFamily(V, (whole_group(V),))) == TRIVIAL


@given(groups, st.data())
def test_sha_matches_tensor_quotient(G, data):
    F = data.draw(families(G))
    assert sha_abelian(G, F).invariant_factors == sha_by_quotient(
        G.invariant_factors, family_gens(F))


@given(groups, st.data())
def test_sha_ignores_cyclic_places(G, data):
    F = data.draw(families(G))
    assert sha_abelian(G, F) == sha_abelian(G, F.without_cyclic())


def test_push_family_examples():
    F = cyclic_family(V)
    assert push_family(identity_hom(V), F) == F
    p1 = hom_from_images(V, FinAbGroup((2,)), [(1,), (0,)])
    pushed = push_family(p1, LocalFamily.from_generators(V, [[(0, 1)]]))
    assert pushed.places[0].is_trivial()
    Z4 = FinAbGroup((4,))
    red = hom_from_images(Z4, FinAbGroup((2,)), [(1,)])
    assert push_family(red, LocalFamily.from_generators(Z4, [[(2,)]])).places[0].is_trivial()
    incl = hom_from_images(FinAbGroup((2,)), Z4, [(2,)])
    with pytest.raises(InvariantViolation):
        push_family(incl, LocalFamily.from_generators(FinAbGroup((2,)), [[(1,)]]))


def test_restriction_map_examples():
    F = cyclic_family(V3)
    r = sha_restriction_map(identity_hom(V3), F)
    assert r.is_identity()
    to_cyclic = hom_from_images(V3, FinAbGroup((2,)), [(1,), (0,), (0,)])
    assert sha_restriction_map(to_cyclic, F).target == TRIVIAL
    drop = hom_from_images(V3, V, [(1, 0), (0, 1), (0, 0)])
    r = sha_restriction_map(drop, F)
    assert r.source == V3 and r.target == FinAbGroup((2,)) and is_surjective(r)


# -- towers --------------------------------------------------------------------

def test_make_tower_rejects_overlap():
    with pytest.raises(InvariantViolation) as exc:
        tower_from_generators(V, [(1, 0)], [(1, 0)])
    assert exc.value.check == "trivial_intersection"


def test_coker_g_examples():
    F = cyclic_family(V)
    T = tower_from_generators(V, [], [])
    assert coker_g(T, F)[0] == sha_abelian(V, F)
    T = tower_from_generators(V, [(1, 0)], [(0, 1)])
    assert coker_g(T, F)[0] == TRIVIAL
    G = direct_sum(V, V)
    T = tower_from_generators(G, [(1, 0, 0, 0), (0, 1, 0, 0)], [(0, 0, 1, 0), (0, 0, 0, 1)])
    assert T.GE == TRIVIAL
    assert coker_g(T, cyclic_family(G))[0] == TRIVIAL


def test_certificate_examples():
    F = cyclic_family(V)
    T = tower_from_generators(V, [], [])
    cert = theorem1_certificate(T, F)
    assert cert.verdict and cert.cokerT == cert.shaE == cert.sha_L == FinAbGroup((2,))
    assert multinorm_obstruction(T, F) == FinAbGroup((2,))
    assert intersection_obstruction_order(T, F) == 2
    Z4 = FinAbGroup((4,))
    T = tower_from_generators(Z4, [(2,)], [])
    assert multinorm_obstruction(T, cyclic_family(Z4)) == TRIVIAL
    assert intersection_obstruction_order(T, cyclic_family(Z4)) == 1


def test_disjoint_pair():
    G = direct_sum(V, V)
    F = cyclic_family(G)
    T = tower_from_generators(G, [(1, 0, 0, 0), (0, 1, 0, 0)], [(0, 0, 1, 0), (0, 0, 0, 1)])
    cert = theorem1_certificate(T, F)
    assert cert.verdict and cert.shaE == TRIVIAL
    s1, s2 = cert.sha_L1.order, cert.sha_L2.order
    assert intersection_obstruction_order(T, F) == s1 * s2


@given(towers_with_family())
def test_certificate_verdict_and_oracle(TF):
    T, F = TF
    cert = theorem1_certificate(T, F)
    assert cert.verdict, cert.failed
    FE = push_family(T.rho, F)
    assert cert.shaE.invariant_factors == sha_by_quotient(
        T.GE.invariant_factors, family_gens(FE))
    assert cert.cokerT == cert.shaE
    n = intersection_obstruction_order(T, F)
    assert cert.sha_L1.order * cert.sha_L2.order == n * cert.cokerT.order


@given(towers_with_family())
def test_wedgerel(TF):
    assert wedgerel_holds(TF[0])


def test_certificate_json_roundtrip():
    import json
    T = tower_from_generators(V3, [(1, 0, 0)], [(0, 1, 0)])
    doc = theorem1_certificate(T, cyclic_family(V3)).to_json()
    again = json.loads(json.dumps(doc))
    assert again["verdict"] is True and again["failed"] == []
    assert set(again["checks"]) >= {"P_after_S_is_identity", "S_surjective", "P_surjective"}


# -- nonabelian input ------------------------------------------------------------

PERM_GROUPS = {
    "S3": [(1, 0, 2), (1, 2, 0)],
    "D4": [(1, 2, 3, 0), (0, 3, 2, 1)],
    "Q8": [(1, 2, 3, 0, 5, 6, 7, 4), (4, 7, 6, 5, 2, 1, 0, 3)],
    "A4": [(1, 2, 0, 3), (1, 0, 3, 2)],
    "S4": [(1, 2, 3, 0), (1, 0, 2, 3)],
    "D6": [(1, 2, 3, 4, 5, 0), (0, 5, 4, 3, 2, 1)],
}


def normal_subgroups(G):
    found = set()
    for x in range(G.order):
        for y in range(x, G.order):
            N = G.closure([x, y])
            if G.is_normal(N):
                found.add(N)
    return sorted(found, key=lambda s: (len(s), s))


def bound_oracle(G, N1, N2):
    C = set(commutator_subgroup(G))
    A = set(G.closure(list(C) + list(N1)))
    B = set(G.closure(list(C) + list(N2)))
    return len(A & B) // len(C)


def phi_kernel_oracle(G, N1, N2):
    H = set(G.closure(list(N1) + list(N2)))
    C = set(commutator_subgroup(G))
    HH = {G.commutator(x, y) for x in H for y in H}
    HH = set(G.closure(sorted(HH)))
    return len(H & C) // len(HH)


@pytest.mark.parametrize("name", sorted(PERM_GROUPS))
def test_bound_and_phi_against_set_oracles(name):
    G, _ = from_generators(PERM_GROUPS[name])
    normals = normal_subgroups(G)
    checked = 0
    for N1 in normals:
        for N2 in normals:
            if set(N1) & set(N2) != {G.identity}:
                continue
            assert second_obstruction_bound(G, N1, N2) == bound_oracle(G, N1, N2)
            rep = phi_report(G, N1, N2)
            assert rep.kernel.order == phi_kernel_oracle(G, N1, N2)
            assert rep.injective == (rep.kernel.order == 1)
            checked += 1
    assert checked >= 2


def test_bound_examples():
    Z = from_generators([(1, 2, 3, 0, 4, 5), (0, 1, 2, 3, 5, 4)])[0]
    normals = normal_subgroups(Z)
    for N1 in normals:
        for N2 in normals:
            if set(N1) & set(N2) == {Z.identity}:
                assert second_obstruction_bound(Z, N1, N2) == 1
                assert phi_injective(Z, N1, N2)
    S3, _ = from_generators(PERM_GROUPS["S3"])
    D4, _ = from_generators(PERM_GROUPS["D4"])
    P = direct_product(S3, D4)
    n1 = tuple(g * 8 + h for g in [S3.identity] for h in range(8))
    n2 = tuple(g * 8 + D4.identity for g in range(6))
    assert second_obstruction_bound(P, n1, n2) == 1
    assert phi_injective(P, (0,), (0,))


def test_example3_bound_and_phi():
    G, info = biquadratic_quartic_group()
    assert second_obstruction_bound(G, info["N1"], info["N2"]) == 1
    rep = phi_report(G, info["N1"], info["N2"])
    assert not rep.injective
    c = G.commutator(info["sigma"], info["tau"])
    assert c != G.identity and rep.witnesses[0] == c


def test_nonnormal_rejected():
    S3, perms = from_generators(PERM_GROUPS["S3"])
    t = perms.index((1, 0, 2))
    with pytest.raises(InvariantViolation):
        second_obstruction_bound(S3, (0, t), (0,))


def test_random_families_are_reproducible():
    G = V3
    subs = all_subgroups(G)
    from multinorm.sweep import random_family
    a = [random_family(G, subs, random.Random("x")) for _ in range(3)]
    b = [random_family(G, subs, random.Random("x")) for _ in range(3)]
    assert a == b
    assert all(v.ambient == G for F in a for v in F.places)
    assert subgroup_structure(G, [(1, 0, 0)]) in subs
