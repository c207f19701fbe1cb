"""Soundness of the rewrite system and the undeformed limit."""

from __future__ import annotations

from typing import List, Optional

from .algebra import (DX, THETA, X, XINV, Element, Family, GradedAlgebra, Word, differential_algebra,
                      family_table, format_word, grade_of, multiply, normalize, normalize_by_rewriting,
                      relation_elements, word_degree, word_parity)
from .coeffs import ONE
from .report import Check, check
from .rmatrix import _equations_residual
from .sampling import COORDINATES, make_rng, random_element, random_word


def _measure(alg: GradedAlgebra, word: Word):
    inversions = sum(1 for i in range(len(word)) for j in range(i + 1, len(word))
                     if alg.order[word[i]] > alg.order[word[j]])
    return inversions, len(word)


def verify_ideal_membership(alg: GradedAlgebra) -> Check:
    bad = [f"{label} leaves {normalize(rel)}" for label, rel in relation_elements(alg) if normalize(rel)]
    return check("defining relations reduce to zero", "normalize(LHS - RHS) = 0", not bad,
                 "; ".join(bad) or None)


def verify_termination(alg: GradedAlgebra, count: int = 500, seed: int = 0, max_len: int = 12) -> Check:
    """Every single rewrite step lowers (inversions, length) lexicographically."""
    witness = None
    for (l1, l2), rhs in alg.rules.items():
        before = _measure(alg, (l1, l2))
        for w in rhs:
            if _measure(alg, w) >= before:
                witness = f"rule {l1} {l2} -> {format_word(w)} does not lower the measure"
                break
        if witness:
            break
    if witness is None:
        # words still reach a normal form within a bounded number of rounds
        rng = make_rng(seed + 31)
        for _ in range(count):
            w = random_word(rng, alg.letters, 1, max_len)
            try:
                normalize_by_rewriting(Element(alg, {w: ONE}, normalized=False))
            except Exception as exc:
                witness = f"{format_word(w)}: {exc}"
                break
    return check("rewriting terminates", "each step lowers (inversions, length)", witness is None, witness)


def verify_confluence(alg: GradedAlgebra, count: int = 500, seed: int = 0, max_len: int = 12) -> Check:
    """Leftmost, rightmost and random redex choice agree with the fast normalizer."""
    rng = make_rng(seed + 32)
    witness = None
    for _ in range(count):
        w = random_word(rng, alg.letters, 1, max_len)
        a = Element(alg, {w: ONE}, normalized=False)
        fast = normalize(a)
        for strategy in ("leftmost", "rightmost", "random"):
            slow = normalize_by_rewriting(a, strategy, rng)
            if slow != fast:
                witness = f"{format_word(w)}: {strategy} gives {slow}, normalizer gives {fast}"
                break
        if witness:
            break
    return check(f"confluence on {count} random words", "leftmost = rightmost = random = normalize",
                 witness is None, witness)


def verify_associativity(alg: GradedAlgebra, count: int = 100, seed: int = 0) -> Check:
    rng = make_rng(seed + 33)
    witness = None
    for _ in range(count):
        a, b, c = (random_element(alg, rng, max_len=4) for _ in range(3))
        lhs = normalize(multiply(normalize(multiply(a, b)), c))
        rhs = normalize(multiply(a, normalize(multiply(b, c))))
        if lhs != rhs:
            witness = f"a = {a}, b = {b}, c = {c}"
            break
    return check("associativity survives normalization", "(ab)c = a(bc)", witness is None, witness)


def verify_grading(alg: GradedAlgebra, count: int = 100, seed: int = 0) -> Check:
    rng = make_rng(seed + 34)
    witness = None
    for _ in range(count):
        w = random_word(rng, alg.letters, 1, 8)
        nf = normalize(Element(alg, {w: ONE}, normalized=False))
        g = grade_of(nf)
        if nf and g != (word_parity(w), word_degree(w)):
            witness = f"{format_word(w)} has grade {(word_parity(w), word_degree(w))}, normal form {nf} has {g}"
            break
    return check("normalization preserves parity and form degree", "grade(normalize(a)) = grade(a)",
                 witness is None, witness)


def verify_inverse_consistency(alg: GradedAlgebra) -> Check:
    bad = []
    for g in alg.letters:
        lhs = alg.gen(XINV) * (alg.gen(X) * alg.gen(g))
        if lhs != alg.gen(g):
            bad.append(f"x⁻¹(x {g}) = {lhs}")
    return check("x⁻¹ undoes x", "x⁻¹·(x g) = g", not bad, "; ".join(bad) or None)


def verify_tables(family) -> Check:
    bad = [f"{name}: {v}" for name, v in _equations_residual(family_table(family)) if v]
    return check(f"coefficient table of family {Family.parse(family).value} solves the consistency system",
                 "F11 + q F22 = q, F12 + q F21 = -1, B = 1, F12 F22 = 0, (F11 - q A) F22 = 0",
                 not bad, "; ".join(bad) or None)


def verify_classical_limit(count: int = 100, seed: int = 0) -> List[Check]:
    """Family I at q = p = 1 is the undeformed superplane."""
    alg = differential_algebra("I", {"q": 1, "p": 1})
    rng = make_rng(seed + 35)
    rels = {
        "xθ = θx": alg.word(X, THETA) - alg.word(THETA, X),
        "θ² = 0": alg.word(THETA, THETA),
        "x dx = dx x": alg.word(X, DX) - alg.word(DX, X),
    }
    out = []
    for label, rel in rels.items():
        witness = None
        for _ in range(count):
            a = random_element(alg, rng, max_len=4)
            b = random_element(alg, rng, max_len=4)
            v = normalize(multiply(multiply(a, rel), b))
            if v:
                witness = f"a = {a}, b = {b}: a({label})b = {v}"
                break
        out.append(check(f"classical limit: {label}", label, witness is None, witness))
    witness = None
    for _ in range(count):
        f = random_element(alg, rng, letters=COORDINATES, max_len=4, homogeneous=True)
        g = random_element(alg, rng, letters=COORDINATES, max_len=4, homogeneous=True)
        pf, pg = word_parity(next(iter(f.terms))), word_parity(next(iter(g.terms)))
        diff = normalize(multiply(f, g)) - normalize(multiply(g, f)).scale(-1 if pf and pg else 1)
        if diff:
            witness = f"f = {f}, g = {g}: fg ∓ gf = {diff}"
            break
    out.append(check("classical limit: coordinates supercommute", "fg = (-1)^{|f||g|} gf",
                     witness is None, witness))
    return out


def verify_consistency(family="I", fuel: int = 500, seed: int = 0, bindings=None) -> List[Check]:
    alg = differential_algebra(family, bindings)
    words = max(fuel, 500)
    out = [verify_tables(family), verify_ideal_membership(alg),
           verify_termination(alg, words, seed), verify_confluence(alg, words, seed),
           verify_associativity(alg, min(fuel, 100), seed), verify_grading(alg, min(fuel, 100), seed),
           verify_inverse_consistency(alg)]
    if Family.parse(family) is Family.I and not bindings:
        out += verify_classical_limit(max(100, min(fuel, 200)), seed)
    return out
