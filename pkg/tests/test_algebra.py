import random

import pytest

from qsuperplane.algebra import (DTHETA, DX, THETA, X, XINV, ArityMismatchError, Element, Family,
                                 FamilyMismatchError, GENERATORS, TensorElement, derive_inverse_rules,
                                 differential_algebra, family_table, grade_of, multiply, normalize,
                                 normalize_by_rewriting, relation_elements, tensor_multiply)
from qsuperplane.coeffs import ONE, ZERO, p, q, r, s

from oracles import naive_normal_form


@pytest.fixture(params=["I", "II"])
def G(request):
    return differential_algebra(request.param)


GI = differential_algebra("I")
GII = differential_algebra("II")


def el(alg, *pairs):
    """Element from (coefficient, 'space separated word') pairs."""
    return Element(alg, {tuple(w.split()): c for c, w in pairs}, normalized=False)


# ---- generators and grading --------------------------------------------------

def test_generator_table():
    assert [GENERATORS[g].parity for g in (X, XINV, THETA, DX, DTHETA)] == [0, 0, 1, 1, 0]
    assert [GENERATORS[g].form_degree for g in (X, XINV, THETA, DX, DTHETA)] == [0, 0, 0, 1, 1]


def test_grade_examples():
    assert grade_of(GI.word(THETA, DX)) == (0, 1)
    assert grade_of(normalize(GI.word(DX, XINV))) == (1, 1)
    assert grade_of(GI.word(X) + GI.word(DX)) == "inhomogeneous"


# ---- raw multiplication --------------------------------------------------------

def test_multiply_concatenates():
    assert multiply(GI.word(X), GI.word(THETA)).terms == {(X, THETA): ONE}
    assert multiply(el(GI, (2 * q, "x")), el(GI, (3, "dx"))).terms == {(X, DX): 6 * q}
    res = multiply(GI.word(X) + GI.word(THETA), GI.word(THETA))
    assert res.terms == {(X, THETA): ONE, (THETA, THETA): ONE}
    assert not res.normalized


def test_multiply_family_mismatch():
    with pytest.raises(FamilyMismatchError):
        multiply(GI.word(X), GII.word(X))


# ---- normal ordering -----------------------------------------------------------

def test_superplane_relations(G):
    assert normalize(G.word(X, THETA)) == G.word(THETA, X).scale(q)
    assert normalize(G.word(THETA, THETA)) == G.zero()


def test_theta_dx_family_I():
    got = normalize(GI.word(THETA, DX))
    assert got.terms == {(DX, THETA): -q.inverse(), (DTHETA, X): 1 - p}


def test_dx_dtheta_family_II():
    assert normalize(GII.word(DX, DTHETA)).terms == {(DTHETA, DX): r.inverse()}


def test_xinv_theta(G):
    got = normalize(G.word(XINV, THETA))
    assert got.terms == {(THETA, XINV): q.inverse()}
    # oracle: x⁻¹ times the normal form of xθ gives back θ
    xth = normalize(G.word(X, THETA))
    assert normalize(multiply(G.word(XINV), xth)) == G.gen(THETA)


def test_family_tables():
    assert family_table("I") == {"A": p, "B": ONE, "F11": p * q, "F12": ZERO, "F21": -q.inverse(),
                                 "F22": 1 - p, "lam": p * q}
    assert family_table("II") == {"A": s, "B": ONE, "F11": q, "F12": q * r - 1, "F21": -r,
                                  "F22": ZERO, "lam": r.inverse()}


def test_relations_normalize_to_zero(G):
    for label, rel in relation_elements(G):
        assert normalize(rel) == G.zero(), label


def test_normalize_idempotent(G):
    rng = random.Random(3)
    for _ in range(50):
        w = tuple(rng.choice(G.letters) for _ in range(rng.randint(1, 8)))
        once = normalize(G.word(*w))
        assert normalize(Element(G, once.terms, normalized=False)) == once
        assert all(G.is_normal_word(t) for t in once.terms)


@pytest.mark.parametrize("family", ["I", "II"])
def test_against_naive_rewriter(family):
    G = differential_algebra(family)
    rng = random.Random(11)
    letters = (X, THETA, DX, DTHETA)
    for _ in range(150):
        w = tuple(rng.choice(letters) for _ in range(rng.randint(1, 9)))
        want = naive_normal_form(w, family)
        got = normalize(G.word(*w))
        assert got.terms == want, w


def test_rewriting_strategies_agree(G):
    rng = random.Random(5)
    for _ in range(100):
        w = tuple(rng.choice(G.letters) for _ in range(rng.randint(1, 10)))
        a = G.word(*w)
        fast = normalize(a)
        assert normalize_by_rewriting(a, "leftmost") == fast
        assert normalize_by_rewriting(a, "rightmost") == fast


def test_associativity(G):
    rng = random.Random(8)
    for _ in range(40):
        a, b, c = (G.word(*(rng.choice(G.letters) for _ in range(rng.randint(1, 4)))) for _ in range(3))
        assert (a * b) * c == a * (b * c)


# ---- inverse rules -------------------------------------------------------------

def test_inverse_rules_family_I():
    rules = derive_inverse_rules(GI)
    assert rules[(XINV, DX)] == {(DX, XINV): p.inverse()}
    assert rules[(XINV, DTHETA)] == {(DTHETA, XINV): (p * q).inverse()}
    assert normalize(GI.word(XINV, X)) == GI.one()
    assert normalize(GI.word(X, XINV)) == GI.one()


def test_inverse_rules_oracle(G):
    # x⁻¹·(x g − rhs)·x⁻¹ must vanish for every x-rule
    for g in (THETA, DX, DTHETA):
        rhs = Element(G, G.base_rules[(X, g)], normalized=False)
        rel = G.word(X, g) - rhs
        assert normalize(multiply(multiply(G.word(XINV), rel), G.word(XINV))) == G.zero()
        assert G.gen(XINV) * (G.gen(X) * G.gen(g)) == G.gen(g)


# ---- tensors -------------------------------------------------------------------

def test_tensor_even_even():
    x, th = GI.gen(X), GI.gen(THETA)
    got = TensorElement.pure(th, x) * TensorElement.pure(x, th)
    assert got == TensorElement.pure(normalize(GI.word(THETA, X)), normalize(GI.word(X, THETA)))
    assert got.terms == {((THETA, X), (THETA, X)): q}


def test_tensor_odd_odd_sign():
    x, th = GI.gen(X), GI.gen(THETA)
    got = tensor_multiply(TensorElement.pure(x, th), TensorElement.pure(th, x))
    assert got.terms == {((THETA, X), (THETA, X)): -q}


def test_tensor_unit_and_arity():
    a = TensorElement.pure(GI.gen(X), GI.gen(DX))
    one = TensorElement.pure(GI.one(), GI.one())
    assert one * a == a
    with pytest.raises(ArityMismatchError):
        a * TensorElement.pure(GI.one(), GI.one(), GI.one())


def test_family_parse():
    assert Family.parse("ii") is Family.II
    with pytest.raises(ValueError):
        Family.parse("III")
