"""Cartan–Maurer forms w = dx x⁻¹, u = dθ x⁻¹ − dx x⁻¹θx⁻¹ and their algebra Ω.

Ω is realized twice.  Inside Γ the forms are concrete elements and their
commutation rules with x, θ and with each other are *computed*.  Abstractly,
Ω is a four-slot algebra (u < w < θ < x) built from those computed rules, on
which the primitive co-structure Δ(w) = w⊗1 + 1⊗w, ε(w) = 0, S(w) = −w (and
the same for u) is checked.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Tuple

from .algebra import (DTHETA, DX, THETA, U, W, X, XINV, Element, Family, GradedAlgebra, TensorElement,
                      Terms, Word, _acc, _freeze_bindings, differential_algebra, format_terms,
                      grade_of, normalize, tensor_one)
from .coeffs import ONE, ZERO, ParamRational, p, q, r, s
from .hopf import GRADED, AntiHom, Counit, Hom, _axiom_checks, map_slot
from .report import Check, check, info
from .sampling import make_rng, random_element


class BasisError(ValueError):
    """An element of Γ could not be rewritten over the forms."""


class NoSolutionError(ValueError):
    pass


def _t(*pairs) -> Terms:
    out: Terms = {}
    for c, w in pairs:
        c = ParamRational.coerce(c)
        if c:
            _acc(out, tuple(w), c)
    return out


# relations as printed for the two families, LHS word -> RHS terms
PRINTED_CROSS = {
    Family.I: {
        (X, W): _t((p, (W, X))),
        (THETA, W): _t((-1, (W, THETA)), (1 - p, (U, X))),
        (X, U): _t((p * q, (U, X))),
        (THETA, U): _t((p * q, (U, THETA))),
    },
    Family.II: {
        (X, W): _t((s, (W, X))),
        (THETA, W): _t((-q * r, (W, THETA))),
        (X, U): _t((q, (U, X)), (q * (q * r - s), (W, THETA))),
        (THETA, U): _t((q, (U, THETA))),
    },
}

PRINTED_FORM_FORM = {
    Family.I: {(W, W): {}, (W, U): _t((1, (U, W)))},
    Family.II: {(W, W): {}, (W, U): _t((q * r / s, (U, W)))},
}


def _printed(table, bindings) -> Dict[Word, Terms]:
    if not bindings:
        return {k: dict(v) for k, v in table.items()}
    out = {}
    for k, v in table.items():
        out[k] = {}
        for w, c in v.items():
            _acc(out[k], w, c.substitute(bindings))
    return out


def printed_cross_relations(family="I", bindings=None) -> Dict[Word, Terms]:
    return _printed(PRINTED_CROSS[Family.parse(family)], dict(_freeze_bindings(bindings)))


def printed_form_form_relations(family="I", bindings=None) -> Dict[Word, Terms]:
    return _printed(PRINTED_FORM_FORM[Family.parse(family)], dict(_freeze_bindings(bindings)))


# --------------------------------------------------------------------------
# embedding of the forms in Γ and the way back
# --------------------------------------------------------------------------

def form_embeddings(gamma: GradedAlgebra) -> Dict[str, Element]:
    """w and u as normalized elements of Γ."""
    w = normalize(gamma.word(DX, XINV))
    u = normalize(Element(gamma, {(DTHETA, XINV): ONE, (DX, XINV, THETA, XINV): -ONE}))
    return {W: w, U: u}


def _coord_nf(gamma: GradedAlgebra, word: Word) -> Dict[Word, ParamRational]:
    return {gamma.mono_word(m): c for m, c in gamma.normal_form_word(word).items()}


def express_in_forms(a: Element) -> Terms:
    """Rewrite a degree-one element of Γ as Σ w·f + Σ u·g with f, g in the superplane.

    Uses dx = w x and dθ = u x + w θ; the coordinate parts come out normal
    ordered, so the result is a combination of normal words of Ω.
    """
    gamma = a.algebra
    out: Terms = {}
    for word, c in normalize(a).terms.items():
        ma, mb, me, mn = gamma.word_mono(word)
        if ma + mb != 1:
            raise BasisError(f"term {' '.join(word)} does not have form degree 1")
        rest = word[1:]
        if mb:
            for w2, c2 in _coord_nf(gamma, (X,) + rest).items():
                _acc(out, (W,) + w2, c * c2)
        else:
            for w2, c2 in _coord_nf(gamma, (X,) + rest).items():
                _acc(out, (U,) + w2, c * c2)
            for w2, c2 in _coord_nf(gamma, (THETA,) + rest).items():
                _acc(out, (W,) + w2, c * c2)
    return out


def embed_terms(gamma: GradedAlgebra, terms: Mapping[Word, ParamRational]) -> Element:
    """Replace w, u by their Γ embeddings and normalize."""
    emb = form_embeddings(gamma)
    total = gamma.zero()
    for word, c in terms.items():
        acc = gamma.one()
        for g in word:
            acc = acc * (emb[g] if g in emb else gamma.gen(g))
        total = total + acc.scale(c)
    return total


# --------------------------------------------------------------------------
# derivations
# --------------------------------------------------------------------------

def derive_cross_relations(family="I", bindings=None) -> Dict[Word, Terms]:
    """Compute g·f for g in {x, θ}, f in {w, u} and express it over the forms."""
    gamma = differential_algebra(family, bindings)
    emb = form_embeddings(gamma)
    out: Dict[Word, Terms] = {}
    for g in (X, THETA):
        for f in (W, U):
            prod = gamma.gen(g) * emb[f]
            rhs = express_in_forms(prod)
            back = embed_terms(gamma, rhs)
            if back != prod:
                raise BasisError(f"re-expression of {g} {f} does not embed back: {back} vs {prod}")
            out[(g, f)] = rhs
    return out


def derive_form_form_relations(family="I", bindings=None) -> Dict[Word, Terms]:
    """w² and the exchange factor λ in wu = λ uw, computed inside Γ."""
    gamma = differential_algebra(family, bindings)
    emb = form_embeddings(gamma)
    w, u = emb[W], emb[U]
    ww = w * w
    if ww:
        raise NoSolutionError(f"w² = {ww} is not zero")
    wu, uw = w * u, u * w
    if not uw:
        raise NoSolutionError("uw vanishes; no exchange factor")
    word, c_uw = next(iter(uw.terms.items()))
    lam = wu.coefficient(word) / c_uw
    if wu != uw.scale(lam):
        raise NoSolutionError(f"wu = {wu} is not proportional to uw = {uw}")
    return {(W, W): {}, (W, U): ({(U, W): lam} if lam else {})}


def compare_with_printed(derived: Dict[Word, Terms], printed: Dict[Word, Terms]) -> Dict[Word, Optional[Terms]]:
    """LHS -> computed RHS for every printed relation the computation disagrees with."""
    return {lhs: derived.get(lhs) for lhs, want in printed.items() if derived.get(lhs) != want}


def _findings(derived: Dict[Word, Terms], printed: Dict[Word, Terms], what: str) -> List[Check]:
    out = []
    for lhs, want in printed.items():
        got = derived.get(lhs)
        label = " ".join(lhs)
        ident = f"{label} = {format_terms(want) if want else '0'}"
        if got == want:
            finding = "computed relation agrees"
        else:
            finding = f"computed {label} = {format_terms(got) if got else '0'}"
        out.append(info(f"{what}: {label}", ident, finding))
    return out


def verify_cross_relations(family="I", bindings=None) -> List[Check]:
    derived = derive_cross_relations(family, bindings)
    return _findings(derived, printed_cross_relations(family, bindings), "printed forms against coordinates")


def verify_form_form_relations(family="I", bindings=None) -> List[Check]:
    derived = derive_form_form_relations(family, bindings)
    return _findings(derived, printed_form_form_relations(family, bindings), "printed forms against forms")


# --------------------------------------------------------------------------
# the abstract algebra Ω and its co-structure
# --------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _omega(family: Family, frozen: tuple, printed: bool) -> GradedAlgebra:
    bindings = dict(frozen)
    qb = q.substitute(bindings) if bindings else q
    if printed:
        rules = {**printed_cross_relations(family, bindings), **printed_form_form_relations(family, bindings)}
    else:
        rules = {**derive_cross_relations(family, bindings), **derive_form_form_relations(family, bindings)}
    rules[(X, THETA)] = {(THETA, X): qb}
    rules[(THETA, THETA)] = {}
    return GradedAlgebra("Omega", (U, W), rules, family, bindings)


def omega_algebra(family="I", bindings=None, printed: bool = False) -> GradedAlgebra:
    """Ω with the computed relations (default) or with the relations as printed."""
    return _omega(Family.parse(family), _freeze_bindings(bindings), printed)


class OmegaHopf:
    """Primitive co-structure on Ω together with the superplane maps on x, θ."""

    def __init__(self, alg: GradedAlgebra, convention: str = GRADED):
        self.algebra = alg
        self.convention = convention
        g = alg.gen
        P = TensorElement.pure
        one = alg.one()
        x, xi, th, w, u = g(X), g(XINV), g(THETA), g(W), g(U)
        images = {X: P(x, x), XINV: P(xi, xi), THETA: P(th, x) + P(x, th),
                  W: P(w, one) + P(one, w), U: P(u, one) + P(one, u)}
        self.delta = Hom(alg, images, 2, name="Δ")
        self.epsilon = Counit({X: 1, XINV: 1, THETA: 0, W: 0, U: 0})
        self.antipode = AntiHom(alg, {X: xi, XINV: x, THETA: -(xi * th * xi), W: -w, U: -u}, convention)

    def delta_slot(self, t, i):
        return map_slot(t, i, lambda w: self.delta.word(w))

    def epsilon_slot(self, t, i):
        return map_slot(t, i, lambda w: self.epsilon.word(w))

    def antipode_slot(self, t, i):
        return map_slot(t, i, lambda w: self.antipode.word(w))


def _relations_of(alg: GradedAlgebra, table: Dict[Word, Terms]):
    out = []
    for lhs, rhs in table.items():
        terms: Terms = {lhs: ONE}
        for w, c in rhs.items():
            _acc(terms, w, -c)
        out.append((f"{' '.join(lhs)} = {format_terms(rhs) if rhs else '0'}",
                    Element(alg, terms, normalized=False)))
    return out


def _compat_checks(h: OmegaHopf, relations, tag: str) -> List[Check]:
    out = []
    for name, fn in (("Δ", h.delta), ("ε", h.epsilon), ("S", h.antipode)):
        bad = []
        for label, rel in relations:
            v = fn(rel)
            if v:
                bad.append(f"{name}({label}) = {v}")
        out.append(check(f"{name} compatible with {tag}", f"{name}(LHS) = {name}(RHS)", not bad,
                         "; ".join(bad) if bad else None))
    return out


def embedding_checks(family="I", bindings=None) -> List[Check]:
    """Parity of the forms, the computed Ω relations inside Γ, and the Γ ↔ Ω dictionary."""
    fam = Family.parse(family)
    gamma = differential_algebra(fam, bindings)
    checks: List[Check] = []
    # parity audit
    emb = form_embeddings(gamma)
    gw, gu = grade_of(emb[W]), grade_of(emb[U])
    checks.append(check("parity of the embedded forms", "w odd, u even",
                        gw == (1, 1) and gu == (0, 1), f"grade(w) = {gw}, grade(u) = {gu}"))

    # embedding consistency of every Ω relation
    derived = {**derive_cross_relations(fam, bindings), **derive_form_form_relations(fam, bindings)}
    bad = []
    for lhs, rhs in derived.items():
        diff = embed_terms(gamma, {lhs: ONE}) - embed_terms(gamma, rhs)
        if diff:
            bad.append(f"{' '.join(lhs)}: {diff}")
    checks.append(check("Ω relations hold in Γ", "embed(LHS - RHS) = 0", not bad, "; ".join(bad) or None))

    # dictionary Γ <-> Ω on generators
    dx_back = embed_terms(gamma, express_in_forms(gamma.gen(DX)))
    dth_back = embed_terms(gamma, express_in_forms(gamma.gen(DTHETA)))
    w_round = express_in_forms(emb[W]) == {(W,): ONE}
    u_round = express_in_forms(emb[U]) == {(U,): ONE}
    ok = dx_back == gamma.gen(DX) and dth_back == gamma.gen(DTHETA) and w_round and u_round
    checks.append(check("Γ ↔ Ω dictionary", "dx = w x, dθ = u x + w θ", ok,
                        None if ok else "dictionary does not round-trip"))
    return checks


def omega_costructures(family="I", bindings=None, fuel: int = 100, seed: int = 0,
                       convention: str = GRADED) -> Tuple[OmegaHopf, List[Check]]:
    fam = Family.parse(family)
    alg = omega_algebra(fam, bindings)
    gamma = differential_algebra(fam, bindings)
    h = OmegaHopf(alg, convention)
    checks: List[Check] = []

    checks += embedding_checks(fam, bindings)
    derived = {**derive_cross_relations(fam, bindings), **derive_form_form_relations(fam, bindings)}

    # Hopf axioms on random Ω words
    rng = make_rng(seed + 21)
    g = alg.gen
    samples = [g(X), g(XINV), g(THETA), g(W), g(U)]
    samples += [random_element(alg, rng, max_len=6) for _ in range(fuel)]
    checks += [c for c in _axiom_checks(h, samples, "Ω")]
    bad = None
    for a in samples:
        a = normalize(a)
        if h.antipode(h.antipode(a)) != a:
            bad = f"a = {a}"
            break
    checks.append(check("S∘S = id on Ω", "S² = 1", bad is None, bad))

    # compatibility of Δ, ε, S with the relations
    checks += _compat_checks(h, _relations_of(alg, derived), "the computed Ω relations")
    x_w = derived[(X, W)].get((W, X), ZERO)
    dxw = h.delta(alg.word(X, W)) - h.delta(alg.word(W, X)).scale(x_w)
    checks.append(check("Δ(xw) = A Δ(wx)", "Δ(xw) = pΔ(wx)", not dxw, f"{dxw}"))
    dww = h.delta(alg.word(W, W))
    checks.append(check("Δ(w²) = 0", "Δ(w²) = 0", not dww, f"{dww}"))
    sww = h.antipode(alg.word(W, W))
    checks.append(check("S(w²) = 0", "S(w²) = 0", not sww, f"{sww}"))

    # the printed relations: reported, not relied upon
    printed = {**printed_cross_relations(fam, bindings), **printed_form_form_relations(fam, bindings)}
    bad = []
    for lhs, rhs in printed.items():
        diff = embed_terms(gamma, {lhs: ONE}) - embed_terms(gamma, rhs)
        if diff:
            bad.append(f"{' '.join(lhs)} = {format_terms(rhs) if rhs else '0'} "
                       f"leaves {diff} in Γ")
    checks.append(info("printed Ω relations inside Γ", "embed(LHS - RHS) = 0",
                       "all hold" if not bad else "; ".join(bad)))
    p_alg = omega_algebra(fam, bindings, printed=True)
    for c in _compat_checks(OmegaHopf(p_alg, convention), _relations_of(p_alg, printed), "the printed Ω relations"):
        checks.append(info(c.name, c.paper_eq, "holds" if c.status == "pass" else c.witness))
    return h, checks


def verify_omega(family="I", bindings=None, fuel: int = 100, seed: int = 0) -> List[Check]:
    out = verify_cross_relations(family, bindings)
    out += verify_form_form_relations(family, bindings)
    _, checks = omega_costructures(family, bindings, fuel, seed)
    return out + checks
