"""The exterior differential on Γ and the checks built on it."""

from __future__ import annotations

from typing import Dict, List, Tuple

from .algebra import (DTHETA, DX, THETA, X, XINV, Element, GradedAlgebra, Terms, Word,
                      _acc, calculus_rules, differential_algebra, family_table, format_terms,
                      normalize, relation_elements, rewrite, word_parity)
from .coeffs import ONE, ZERO, ParamRational
from .linear import rref
from .report import Check, check
from .sampling import make_rng, random_element


class InconsistentCalculusError(Exception):
    pass


# images of single letters under d, as raw word combinations
_D_LETTER: Dict[str, Terms] = {
    X: {(DX,): ONE},
    THETA: {(DTHETA,): ONE},
    DX: {},
    DTHETA: {},
    XINV: {(XINV, DX, XINV): -ONE},
}


def differentiate_word(word: Word) -> Terms:
    """Graded Leibniz expansion of d on a word, left to right, no rewriting."""
    out: Terms = {}
    sign = 1
    for i, g in enumerate(word):
        pre, post = word[:i], word[i + 1:]
        for w, c in _D_LETTER[g].items():
            _acc(out, pre + w + post, c if sign > 0 else -c)
        if word_parity((g,)):
            sign = -sign
    return out


def differentiate_raw(a: Element) -> Element:
    out: Terms = {}
    for w, c in a.terms.items():
        for w2, c2 in differentiate_word(w).items():
            _acc(out, w2, c * c2)
    return Element(a.algebra, out, normalized=False)


def differentiate(a: Element) -> Element:
    """d(a), normalized."""
    if a.algebra.slots != (DTHETA, DX):
        raise ValueError("d is defined on the differential algebra only")
    return normalize(differentiate_raw(a))


def differentiate_right_to_left(word: Word) -> Terms:
    """d on a word by peeling letters off the right end.

    d(w g) = d(w) g + (-1)^|w| w d(g); an independent route used as a test oracle.
    """
    if not word:
        return {}
    w, g = word[:-1], word[-1]
    out: Terms = {}
    for w2, c in differentiate_right_to_left(w).items():
        _acc(out, w2 + (g,), c)
    sign = -1 if word_parity(w) else 1
    for w2, c in _D_LETTER[g].items():
        _acc(out, w + w2, c * sign)
    return out


# --------------------------------------------------------------------------

def derive_two_form_relations(family="I", bindings=None) -> Dict[Word, Terms]:
    """Rediscover the two-form relations by differentiating the first-order ones.

    Applies d to each first-order relation, rewrites with the coordinate and
    first-order rules only, and solves the resulting linear system for the
    products of differentials that are out of normal order.  Returns e.g.
    ``{("dx", "dx"): {}, ("dx", "dth"): {("dth", "dx"): pq}}``.
    """
    table = family_table(family, bindings)
    rules = calculus_rules(table, two_forms=False)
    alg = differential_algebra(family, bindings)
    q_b = ParamRational.param("q").substitute(alg.bindings) if alg.bindings else None
    if q_b is not None:
        rules[(X, THETA)] = {(THETA, X): q_b}
    equations: List[Terms] = []
    for (l1, l2), rhs in rules.items():
        if not ({l1, l2} & {X, THETA}) or not ({l1, l2} & {DX, DTHETA}):
            continue
        rel: Terms = {(l1, l2): ONE}
        for w, c in rhs.items():
            _acc(rel, w, -c)
        dterms: Terms = {}
        for w, c in rel.items():
            for w2, c2 in differentiate_word(w).items():
                _acc(dterms, w2, c * c2)
        reduced = rewrite(dterms, rules)
        if reduced:
            equations.append(reduced)
    words = sorted({w for eq in equations for w in eq},
                   key=lambda w: (alg.is_normal_word(w), w))
    if not words:
        return {}
    matrix = [[eq.get(w, ZERO) for w in words] for eq in equations]
    rows, pivots = rref(matrix)
    result: Dict[Word, Terms] = {}
    for row, col in zip(rows, pivots):
        lhs = words[col]
        if alg.is_normal_word(lhs):
            raise InconsistentCalculusError(
                f"derived relations force the normal word {' '.join(lhs)} to depend on others")
        rhs = {words[j]: -row[j] for j in range(len(words)) if j != col and row[j]}
        for w in rhs:
            if not alg.is_normal_word(w):
                raise InconsistentCalculusError(f"underdetermined product {' '.join(w)}")
        result[lhs] = rhs
    return result


def two_form_rules_of(alg: GradedAlgebra) -> Dict[Word, Terms]:
    return {k: v for k, v in alg.base_rules.items() if k in ((DX, DX), (DX, DTHETA))}


# --------------------------------------------------------------------------
# verification suites
# --------------------------------------------------------------------------

def _first_fail(items, predicate):
    for item in items:
        bad = predicate(item)
        if bad:
            return bad
    return None


def verify_nilpotency(family="I", fuel: int = 200, seed: int = 0, bindings=None,
                      max_len: int = 8) -> Check:
    alg = differential_algebra(family, bindings)
    rng = make_rng(seed)
    samples = [alg.one(), alg.word(X, THETA), alg.word(THETA, DTHETA, X)]
    samples += [random_element(alg, rng, max_len=max_len) for _ in range(fuel)]

    def bad(a):
        dd = differentiate(differentiate_raw(a))
        if dd:
            return f"a = {a}: d(d(a)) = {dd}"
        return None

    witness = _first_fail(samples, bad)
    return check("d∘d = 0", "d² = 0", witness is None, witness)


def verify_leibniz(family="I", fuel: int = 200, seed: int = 0, bindings=None,
                   max_len: int = 8) -> Check:
    alg = differential_algebra(family, bindings)
    rng = make_rng(seed + 1)
    half = max(1, max_len // 2)

    def bad(pair):
        a, b = pair
        pa = word_parity(next(iter(a.terms))) if a.terms else 0
        lhs = differentiate(a * b)
        da, db = differentiate(a), differentiate(b)
        rhs = da * b + (a * db).scale(-1 if pa else 1)
        if lhs != rhs:
            return f"a = {a}, b = {b}: d(ab) - d(a)b -+ a d(b) = {lhs - rhs}"
        return None

    pairs = [(random_element(alg, rng, max_len=half, homogeneous=True),
              random_element(alg, rng, max_len=half, homogeneous=True)) for _ in range(fuel)]
    witness = _first_fail(pairs, bad)
    return check("graded Leibniz rule", "d(fg) = (df)g + (-1)^|f| f(dg)", witness is None, witness)


def verify_d_relations(family="I", bindings=None) -> List[Check]:
    alg = differential_algebra(family, bindings)
    out = []
    for label, rel in relation_elements(alg):
        dr = differentiate(rel)
        out.append(check(f"d annihilates {label}", "d(LHS - RHS) = 0", not dr,
                         None if not dr else f"d({label}) = {dr}"))
    return out


def verify_degree_bookkeeping(family="I", fuel: int = 50, seed: int = 0, bindings=None) -> Check:
    alg = differential_algebra(family, bindings)
    rng = make_rng(seed + 2)
    witness = None
    for _ in range(fuel):
        w = tuple(rng.choice(alg.letters) for _ in range(rng.randint(1, 6)))
        a = normalize(alg.word(*w))
        if not a:
            continue
        da = differentiate(a)
        if not da:
            continue
        deg_a = a.form_degrees()
        deg_d = da.form_degrees()
        par_a = {word_parity(x) for x in a.terms}
        par_d = {word_parity(x) for x in da.terms}
        if deg_d != {d + 1 for d in deg_a} or par_d != {1 - x for x in par_a}:
            witness = f"a = {a}, d(a) = {da}"
            break
    return check("d raises form degree by one and flips parity", "deg d(a) = deg a + 1",
                 witness is None, witness)


def verify_two_forms(family="I", bindings=None) -> List[Check]:
    alg = differential_algebra(family, bindings)
    derived = derive_two_form_relations(family, bindings)
    expected = two_form_rules_of(alg)
    out = []
    for lhs in ((DX, DX), (DX, DTHETA)):
        got = derived.get(lhs)
        want = expected.get(lhs)
        label = " ".join(lhs)
        ok = got is not None and got == want
        out.append(check(f"derived two-form relation for {label}",
                         f"{label} = {format_terms(want) if want else '0'}", ok,
                         None if ok else f"derived {label} = "
                                         f"{format_terms(got) if got else ('0' if got is not None else 'nothing')}"))
    return out


def verify_calculus(family="I", fuel: int = 200, seed: int = 0, bindings=None) -> List[Check]:
    out = [verify_nilpotency(family, fuel, seed, bindings),
           verify_leibniz(family, fuel, seed, bindings),
           verify_degree_bookkeeping(family, min(fuel, 100), seed, bindings)]
    out += verify_d_relations(family, bindings)
    out += verify_two_forms(family, bindings)
    return out
