from math import gcd, prod

from hypothesis import given, strategies as st
from oracles import tensor_by_orders, wedge_by_quotient

from multinorm.abgroup import (
    FinAbGroup, TRIVIAL, hom_compose, hom_from_images, identity_hom, normalize, zero_hom,
)
from multinorm.wedge import exterior_square, tensor_square, wedge_hom

groups = st.lists(st.integers(2, 8), min_size=0, max_size=3).map(
    lambda o: normalize(tuple(o))[0]).filter(lambda G: G.order <= 64)


@st.composite
def endo_pairs(draw):
    """Two composable homs G -> H -> K between small groups."""
    Gs = [draw(groups) for _ in range(3)]

    def rand_hom(A, B):
        imgs = []
        for d in A.invariant_factors:
            cands = [b for b in B.elements() if not any(B.scale(d, b))]
            imgs.append(draw(st.sampled_from(cands)))
        return hom_from_images(A, B, imgs)
    return rand_hom(Gs[0], Gs[1]), rand_hom(Gs[1], Gs[2])


def test_tensor_examples():
    for n in range(1, 9):
        G = normalize((n,))[0]
        assert tensor_square(G)[0] == G
    assert tensor_square(TRIVIAL)[0] == TRIVIAL
    assert tensor_square(FinAbGroup((2, 2)))[0] == FinAbGroup((2, 2, 2, 2))


def test_wedge_examples():
    assert exterior_square(FinAbGroup((5,)))[0] == TRIVIAL
    assert exterior_square(FinAbGroup((2, 2)))[0] == FinAbGroup((2,))
    assert exterior_square(FinAbGroup((2, 4, 8)))[0] == FinAbGroup((2, 2, 4))


def test_wedge_hom_examples():
    V = FinAbGroup((2, 2))
    assert wedge_hom(identity_hom(V)).is_identity()
    assert wedge_hom(zero_hom(V, V)).is_zero()
    swap = hom_from_images(V, V, [(0, 1), (1, 0)])
    w = wedge_hom(swap)
    assert w.is_identity()
    _, basis, enc = exterior_square(V)
    for a in V.elements():
        for b in V.elements():
            assert w(enc(a, b)) == enc(swap(a), swap(b))


@given(groups)
def test_wedge_matches_quotient_oracle(G):
    W = exterior_square(G)[0]
    assert W.invariant_factors == wedge_by_quotient(G.invariant_factors)
    d = G.invariant_factors
    assert W.order == prod(gcd(d[i], d[j]) for i in range(len(d)) for j in range(i + 1, len(d)))
    assert tensor_square(G)[0].invariant_factors == tensor_by_orders(d)


@given(groups, st.data())
def test_encoder_is_alternating_and_bilinear(G, data):
    W, _, enc = exterior_square(G)
    elems = list(G.elements())
    a, b, c = (data.draw(st.sampled_from(elems)) for _ in range(3))
    assert not any(enc(a, a))
    assert W.add(enc(a, b), enc(b, a)) == W.zero
    assert enc(G.add(a, c), b) == W.add(enc(a, b), enc(c, b))


@given(endo_pairs(), st.data())
def test_wedge_hom_is_functorial(fg, data):
    f, g = fg
    assert wedge_hom(hom_compose(g, f)) == hom_compose(wedge_hom(g), wedge_hom(f))
    _, _, enc_s = exterior_square(f.source)
    _, _, enc_t = exterior_square(f.target)
    elems = list(f.source.elements())
    a = data.draw(st.sampled_from(elems))
    b = data.draw(st.sampled_from(elems))
    assert wedge_hom(f)(enc_s(a, b)) == enc_t(f(a), f(b))
