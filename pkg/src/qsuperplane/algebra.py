"""Graded words, normal ordering and tensor products for the superplane calculi.

Every algebra handled here has the same shape: four ordered letter slots

    slot 0  (even, form degree 1, unbounded powers)    dθ   or  u
    slot 1  (odd,  form degree 1, squares to zero)     dx   or  w
    slot 2  (odd,  degree 0, squares to zero)          θ
    slot 3  (even, degree 0, invertible)               x, x⁻¹

and a normal monomial is ``slot0^a slot1^b θ^e x^n`` with b, e in {0, 1} and n
any integer.  Elements and tensor elements are keyed by words (tuples of
letter names); a normalized element only uses normal words.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .coeffs import ONE, ZERO, ParamRational, q, p, r, s

Word = Tuple[str, ...]
Terms = Dict[Word, ParamRational]
Scalar = Union[int, Fraction, ParamRational]

X, XINV, THETA, DX, DTHETA = "x", "xinv", "th", "dx", "dth"
W, U = "w", "u"


class AlgebraError(Exception):
    pass


class FamilyMismatchError(AlgebraError):
    pass


class ArityMismatchError(AlgebraError):
    pass


class NonInvertibleCoefficientError(AlgebraError):
    pass


class Family(str, Enum):
    I = "I"
    II = "II"

    @classmethod
    def parse(cls, value) -> "Family":
        if isinstance(value, Family):
            return value
        text = str(value).strip().upper()
        for fam in cls:
            if text in (fam.value, f"FAMILY{fam.value}", f"FAMILY {fam.value}"):
                return fam
        raise ValueError(f"unknown family {value!r}")


@dataclass(frozen=True)
class Generator:
    name: str
    parity: int
    form_degree: int


GENERATORS: Dict[str, Generator] = {
    X: Generator(X, 0, 0),
    XINV: Generator(XINV, 0, 0),
    THETA: Generator(THETA, 1, 0),
    DX: Generator(DX, 1, 1),
    DTHETA: Generator(DTHETA, 0, 1),
    W: Generator(W, 1, 1),
    U: Generator(U, 0, 1),
}


def word_parity(word: Iterable[str]) -> int:
    return sum(GENERATORS[g].parity for g in word) & 1


def word_degree(word: Iterable[str]) -> int:
    return sum(GENERATORS[g].form_degree for g in word)


@dataclass(frozen=True)
class NormalMonomial:
    """``slot0^a slot1^b θ^e x^n`` in a four-slot algebra."""

    a: int = 0
    b: int = 0
    e: int = 0
    n: int = 0

    def word(self, slots: Sequence[str] = (DTHETA, DX)) -> Word:
        tail = (X,) * self.n if self.n >= 0 else (XINV,) * (-self.n)
        return (slots[0],) * self.a + (slots[1],) * self.b + (THETA,) * self.e + tail


# --------------------------------------------------------------------------
# relation tables
# --------------------------------------------------------------------------

def _c(v) -> ParamRational:
    return ParamRational.coerce(v)


FAMILY_TABLES: Dict[Family, Dict[str, ParamRational]] = {
    Family.I: {"A": p, "B": ONE, "F11": p * q, "F12": ZERO, "F21": -q.inverse(),
               "F22": 1 - p, "lam": p * q},
    Family.II: {"A": s, "B": ONE, "F11": q, "F12": q * r - 1, "F21": -r,
                "F22": ZERO, "lam": r.inverse()},
}


def _rule(*pairs) -> Terms:
    out: Terms = {}
    for coeff, word in pairs:
        coeff = _c(coeff)
        if coeff:
            out[tuple(word)] = out.get(tuple(word), ZERO) + coeff
    return {w: c for w, c in out.items() if c}


def calculus_rules(table: Mapping[str, ParamRational], two_forms: bool = True) -> Dict[Tuple[str, str], Terms]:
    """Oriented rules of the first-order calculus built from a coefficient table.

    ``two_forms=False`` drops the rules for ``dx dx`` and ``dx dθ``.
    """
    t = {k: _c(v) for k, v in table.items()}
    rules = {
        (X, THETA): _rule((q, (THETA, X))),
        (THETA, THETA): {},
        (X, DX): _rule((t["A"], (DX, X))),
        (X, DTHETA): _rule((t["F11"], (DTHETA, X)), (t["F12"], (DX, THETA))),
        (THETA, DX): _rule((t["F21"], (DX, THETA)), (t["F22"], (DTHETA, X))),
        (THETA, DTHETA): _rule((t["B"], (DTHETA, THETA))),
    }
    if two_forms:
        rules[(DX, DX)] = {}
        rules[(DX, DTHETA)] = _rule((t["lam"], (DTHETA, DX)))
    return rules


_ORDER = {0: 0, 1: 1, THETA: 2, X: 3, XINV: 3}


class GradedAlgebra:
    """A quotient of the free algebra by an oriented, order-reducing rule set.

    ``slots`` names the two form letters (``(dth, dx)`` or ``(u, w)``).
    ``rules`` maps out-of-order letter pairs to their rewrite; rules for
    ``x⁻¹`` are derived on construction unless supplied.
    """

    def __init__(self, name: str, slots: Tuple[str, str], rules: Mapping[Tuple[str, str], Terms],
                 family: Family, bindings: Mapping[str, ParamRational] | None = None,
                 table: Mapping[str, ParamRational] | None = None):
        self.name = name
        self.slots = slots
        self.family = family
        self.bindings = dict(bindings or {})
        self.table = dict(table or {})
        self.letters = (slots[0], slots[1], THETA, X, XINV)
        self.order = {slots[0]: 0, slots[1]: 1, THETA: 2, X: 3, XINV: 3}
        base = {k: dict(v) for k, v in rules.items()}
        base[(X, XINV)] = {(): ONE}
        base[(XINV, X)] = {(): ONE}
        base.setdefault((slots[1], slots[1]), {})
        base.setdefault((THETA, THETA), {})
        self.base_rules = base
        self.rules = dict(base)
        self.rules.update(derive_inverse_rules(self))
        self._rmul: Dict[Tuple[tuple, str], Dict[tuple, ParamRational]] = {}
        self._mmul: Dict[Tuple[tuple, tuple], Dict[tuple, ParamRational]] = {}
        self._wcache: Dict[Word, Dict[tuple, ParamRational]] = {}

    def __repr__(self) -> str:
        b = ",".join(f"{k}={v}" for k, v in sorted(self.bindings.items()))
        return f"<{self.name} family {self.family.value}{' ' + b if b else ''}>"

    # ---- monomial bookkeeping --------------------------------------------
    def mono_word(self, m: tuple) -> Word:
        a, b, e, n = m
        tail = (X,) * n if n >= 0 else (XINV,) * (-n)
        return (self.slots[0],) * a + (self.slots[1],) * b + (THETA,) * e + tail

    def word_mono(self, word: Word) -> tuple:
        """Exponent vector of a word that is already in normal order."""
        a = b = e = n = 0
        for g in word:
            if g == self.slots[0]:
                a += 1
            elif g == self.slots[1]:
                b += 1
            elif g == THETA:
                e += 1
            elif g == X:
                n += 1
            elif g == XINV:
                n -= 1
            else:
                raise AlgebraError(f"letter {g!r} not in {self.name}")
        return (a, b, e, n)

    def is_normal_word(self, word: Word) -> bool:
        prev = None
        for g in word:
            if g not in self.order:
                return False
            if prev is not None and (prev, g) in self.rules:
                return False
            if prev is not None and self.order[prev] > self.order[g]:
                return False
            prev = g
        return True

    def gen(self, name: str) -> "Element":
        if name not in self.order:
            raise AlgebraError(f"generator {name!r} not in {self.name}")
        return Element(self, {(name,): ONE}, normalized=True)

    def one(self) -> "Element":
        return Element(self, {(): ONE}, normalized=True)

    def zero(self) -> "Element":
        return Element(self, {}, normalized=True)

    def scalar(self, c: Scalar) -> "Element":
        c = _c(c)
        return Element(self, {(): c} if c else {}, normalized=True)

    def word(self, *letters: str) -> "Element":
        return Element(self, {tuple(letters): ONE}, normalized=False)

    # ---- fast normal-form multiplication ----------------------------------
    def _last_letter(self, m: tuple) -> Optional[str]:
        a, b, e, n = m
        if n > 0:
            return X
        if n < 0:
            return XINV
        if e:
            return THETA
        if b:
            return self.slots[1]
        if a:
            return self.slots[0]
        return None

    def _drop_last(self, m: tuple) -> tuple:
        a, b, e, n = m
        if n > 0:
            return (a, b, e, n - 1)
        if n < 0:
            return (a, b, e, n + 1)
        if e:
            return (a, b, 0, 0)
        if b:
            return (a, 0, 0, 0)
        return (a - 1, 0, 0, 0)

    def _append(self, m: tuple, g: str) -> tuple:
        a, b, e, n = m
        if g == X:
            return (a, b, e, n + 1)
        if g == XINV:
            return (a, b, e, n - 1)
        if g == THETA:
            return (a, b, 1, n)
        if g == self.slots[1]:
            return (a, 1, e, n)
        return (a + 1, b, e, n)

    def right_mul_letter(self, m: tuple, g: str) -> Dict[tuple, ParamRational]:
        key = (m, g)
        hit = self._rmul.get(key)
        if hit is not None:
            return hit
        last = self._last_letter(m)
        if last is None:
            out = {self._append(m, g): ONE}
        elif (last, g) in self.rules:
            out = {}
            rest = self._drop_last(m)
            for word, c in self.rules[(last, g)].items():
                for mono, c2 in self._mul_word({rest: ONE}, word).items():
                    _acc(out, mono, c * c2)
        elif self.order[last] <= self.order[g]:
            out = {self._append(m, g): ONE}
        else:
            raise AlgebraError(f"no rule for out-of-order pair {last} {g} in {self.name}")
        self._rmul[key] = out
        return out

    def _mul_word(self, combo: Dict[tuple, ParamRational], word: Word) -> Dict[tuple, ParamRational]:
        for g in word:
            nxt: Dict[tuple, ParamRational] = {}
            for mono, c in combo.items():
                for m2, c2 in self.right_mul_letter(mono, g).items():
                    _acc(nxt, m2, c * c2)
            combo = nxt
            if not combo:
                break
        return combo

    def mul_mono(self, m1: tuple, m2: tuple) -> Dict[tuple, ParamRational]:
        key = (m1, m2)
        hit = self._mmul.get(key)
        if hit is None:
            hit = self._mul_word({m1: ONE}, self.mono_word(m2))
            self._mmul[key] = hit
        return hit

    def normal_form_word(self, word: Word) -> Dict[tuple, ParamRational]:
        """Normal form of a single word as exponent vectors -> coefficient."""
        hit = self._wcache.get(word)
        if hit is None:
            for g in word:
                if g not in self.order:
                    raise AlgebraError(f"letter {g!r} not in {self.name}")
            hit = self._mul_word({(0, 0, 0, 0): ONE}, word)
            if len(word) <= 16:
                self._wcache[word] = hit
        return hit

    def mono_parity(self, m: tuple) -> int:
        return (m[1] + m[2]) & 1


def _acc(out: dict, key, c: ParamRational) -> None:
    if not c:
        return
    v = out.get(key)
    v = c if v is None else v + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


# --------------------------------------------------------------------------
# generic word rewriting (independent of the fast normalizer)
# --------------------------------------------------------------------------

def find_redex(word: Word, rules: Mapping[Tuple[str, str], Terms], strategy: str = "leftmost",
               rng=None) -> Optional[int]:
    positions = [i for i in range(len(word) - 1) if (word[i], word[i + 1]) in rules]
    if not positions:
        return None
    if strategy == "leftmost":
        return positions[0]
    if strategy == "rightmost":
        return positions[-1]
    if strategy == "random":
        return rng.choice(positions)
    raise ValueError(f"unknown strategy {strategy!r}")


def rewrite(terms: Mapping[Word, ParamRational], rules: Mapping[Tuple[str, str], Terms],
            strategy: str = "leftmost", rng=None, max_rounds: int = 100000) -> Terms:
    """Rewrite until no rule applies, one redex per word per round.

    The result is a combination of irreducible words; with the full rule set
    of an algebra these are exactly its normal words.
    """
    current: Terms = {w: _c(c) for w, c in terms.items() if c}
    done: Terms = {}
    for _ in range(max_rounds):
        if not current:
            return {w: c for w, c in done.items() if c}
        nxt: Terms = {}
        for word, c in current.items():
            i = find_redex(word, rules, strategy, rng)
            if i is None:
                _acc(done, word, c)
                continue
            pre, post = word[:i], word[i + 2:]
            for rhs, c2 in rules[(word[i], word[i + 1])].items():
                _acc(nxt, pre + rhs + post, c * c2)
        current = nxt
    raise AlgebraError("rewriting did not terminate within the round limit")


def derive_inverse_rules(alg: GradedAlgebra) -> Dict[Tuple[str, str], Terms]:
    """Commutation rules ``x⁻¹ g`` obtained by conjugating each ``x g`` rule with x⁻¹.

    From ``x g = c g x + Σ c_w w`` one gets
    ``x⁻¹ g = c⁻¹ (g x⁻¹ − Σ c_w x⁻¹ w x⁻¹)``; the correction words are
    reduced with the rules derived so far.
    """
    rules = dict(alg.base_rules)
    derived: Dict[Tuple[str, str], Terms] = {}
    for g in (THETA, alg.slots[1], alg.slots[0]):
        xrule = rules.get((X, g))
        if xrule is None:
            raise AlgebraError(f"{alg.name}: no rule for x {g}")
        lead = xrule.get((g, X), ZERO)
        if not lead:
            raise NonInvertibleCoefficientError(
                f"{alg.name}: coefficient of {g} x in the rule for x {g} is zero")
        corr: Terms = {}
        for w, c in xrule.items():
            if w == (g, X):
                continue
            for w2, c2 in rewrite({(XINV,) + w + (XINV,): c}, rules).items():
                _acc(corr, w2, c2)
        inv = lead.inverse()
        rhs: Terms = {(g, XINV): inv}
        for w, c in corr.items():
            _acc(rhs, w, -c * inv)
        derived[(XINV, g)] = rhs
        rules[(XINV, g)] = rhs
    return derived


# --------------------------------------------------------------------------
# elements
# --------------------------------------------------------------------------

class Element:
    """A finite linear combination of words with rational-function coefficients."""

    __slots__ = ("algebra", "terms", "normalized")

    def __init__(self, algebra: GradedAlgebra, terms: Mapping[Word, Scalar], normalized: bool = False):
        self.algebra = algebra
        self.terms: Terms = {tuple(w): _c(c) for w, c in terms.items() if c}
        self.normalized = normalized

    @classmethod
    def _from_monos(cls, alg: GradedAlgebra, monos: Mapping[tuple, ParamRational]) -> "Element":
        el = cls.__new__(cls)
        el.algebra = alg
        el.terms = {alg.mono_word(m): c for m, c in monos.items() if c}
        el.normalized = True
        return el

    def monos(self) -> Dict[tuple, ParamRational]:
        alg = self.algebra
        src = self if self.normalized else normalize(self)
        return {alg.word_mono(w): c for w, c in src.terms.items()}

    # ---- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not (self.terms if self.normalized else normalize(self).terms)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, ParamRational)):
            other = self.algebra.scalar(other)
        if not isinstance(other, Element):
            return NotImplemented
        if self.algebra is not other.algebra:
            return False
        a = self if self.normalized else normalize(self)
        b = other if other.normalized else normalize(other)
        return a.terms == b.terms

    def __hash__(self):
        a = self if self.normalized else normalize(self)
        return hash(frozenset(a.terms.items()))

    def __len__(self) -> int:
        return len(self.terms)

    def coefficient(self, word: Word | str) -> ParamRational:
        if isinstance(word, str):
            word = tuple(word.split())
        return self.terms.get(tuple(word), ZERO)

    # ---- linear structure -------------------------------------------------
    def _check(self, other: "Element") -> None:
        if self.algebra is not other.algebra:
            raise FamilyMismatchError(f"{self.algebra!r} vs {other.algebra!r}")

    def __add__(self, other) -> "Element":
        if isinstance(other, (int, Fraction, ParamRational)):
            other = self.algebra.scalar(other)
        if not isinstance(other, Element):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            _acc(out, w, c)
        return Element(self.algebra, out, self.normalized and other.normalized)

    __radd__ = __add__

    def __neg__(self) -> "Element":
        return Element(self.algebra, {w: -c for w, c in self.terms.items()}, self.normalized)

    def __sub__(self, other) -> "Element":
        if isinstance(other, (int, Fraction, ParamRational)):
            other = self.algebra.scalar(other)
        if not isinstance(other, Element):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Element":
        return (-self) + other

    def scale(self, c: Scalar) -> "Element":
        c = _c(c)
        if not c:
            return Element(self.algebra, {}, self.normalized)
        return Element(self.algebra, {w: c * v for w, v in self.terms.items()}, self.normalized)

    def __mul__(self, other) -> "Element":
        """Normalized product."""
        if isinstance(other, (int, Fraction, ParamRational)):
            return self.scale(other)
        if not isinstance(other, Element):
            return NotImplemented
        self._check(other)
        alg = self.algebra
        out: Dict[tuple, ParamRational] = {}
        for m1, c1 in self.monos().items():
            for m2, c2 in other.monos().items():
                for m, c in alg.mul_mono(m1, m2).items():
                    _acc(out, m, c1 * c2 * c)
        return Element._from_monos(alg, out)

    def __rmul__(self, other) -> "Element":
        if isinstance(other, (int, Fraction, ParamRational)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int) -> "Element":
        out = self.algebra.one()
        for _ in range(k):
            out = out * self
        return out

    # ---- grading ----------------------------------------------------------
    def grade(self):
        return grade_of(self)

    def form_degrees(self) -> set:
        return {word_degree(w) for w in self.terms}

    # ---- printing ---------------------------------------------------------
    def __str__(self) -> str:
        return format_terms(self.terms, _sort_key(self.algebra))

    def __repr__(self) -> str:
        return f"Element({self.algebra.name}[{self.algebra.family.value}], {str(self)!r})"


def _sort_key(alg: GradedAlgebra):
    def key(word: Word):
        if alg.is_normal_word(word):
            a, b, e, n = alg.word_mono(word)
            return (0, -(a + b), -a, -e, -n)
        return (1, len(word), word)
    return key


def format_word(word: Word) -> str:
    """Render a word with runs of equal letters collapsed to powers."""
    if not word:
        return "1"
    parts = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        k = j - i
        parts.append(word[i] if k == 1 else f"{word[i]}^{k}")
        i = j
    return "*".join(parts)


def format_coeff_word(c: ParamRational, word: Word) -> str:
    body = format_word(word)
    cs = str(c)
    if not word:
        return cs if c.is_atomic() else f"({cs})"
    if c.is_one():
        return body
    if c == -ONE:
        return f"-{body}"
    if c.is_atomic():
        return f"{cs}*{body}"
    return f"({cs})*{body}"


def format_terms(terms: Mapping[Word, ParamRational], key=None) -> str:
    if not terms:
        return "0"
    words = sorted(terms, key=key) if key else sorted(terms)
    out = []
    for i, w in enumerate(words):
        t = format_coeff_word(terms[w], w)
        if i == 0:
            out.append(t)
        elif t.startswith("-"):
            out.append(" - " + t[1:])
        else:
            out.append(" + " + t)
    return "".join(out)


# --------------------------------------------------------------------------
# operations
# --------------------------------------------------------------------------

def multiply(a: Element, b: Element) -> Element:
    """Free-algebra product: concatenate words, multiply coefficients, no rewriting."""
    a._check(b)
    out: Terms = {}
    for w1, c1 in a.terms.items():
        for w2, c2 in b.terms.items():
            _acc(out, w1 + w2, c1 * c2)
    return Element(a.algebra, out, normalized=False)


def normalize(a: Element) -> Element:
    if a.normalized:
        return a
    alg = a.algebra
    out: Dict[tuple, ParamRational] = {}
    for w, c in a.terms.items():
        for m, c2 in alg.normal_form_word(w).items():
            _acc(out, m, c * c2)
    return Element._from_monos(alg, out)


def normalize_by_rewriting(a: Element, strategy: str = "leftmost", rng=None) -> Element:
    """Normal form via step-by-step rewriting; an independent route to ``normalize``."""
    alg = a.algebra
    res = rewrite(a.terms, alg.rules, strategy, rng)
    # irreducible words still need x / x⁻¹ runs collapsed
    out: Dict[tuple, ParamRational] = {}
    for w, c in res.items():
        if not alg.is_normal_word(w):
            raise AlgebraError(f"irreducible word {format_word(w)} is not normal in {alg.name}")
        _acc(out, alg.word_mono(w), c)
    return Element._from_monos(alg, out)


def grade_of(a: Element):
    """``(parity, form_degree)`` shared by all terms, or ``"inhomogeneous"``.

    The zero element reports ``(0, 0)``.
    """
    grades = {(word_parity(w), word_degree(w)) for w in a.terms}
    if not grades:
        return (0, 0)
    if len(grades) > 1:
        return "inhomogeneous"
    return grades.pop()


def parity_of(a: Element) -> Optional[int]:
    pars = {word_parity(w) for w in a.terms}
    if len(pars) > 1:
        return None
    return pars.pop() if pars else 0


# --------------------------------------------------------------------------
# tensor elements
# --------------------------------------------------------------------------

class TensorElement:
    """Linear combination of k-tuples of normal words, k = 1, 2 or 3.

    Products follow the Koszul rule: each time a factor of parity P passes
    a factor of parity Q the term picks up (-1)^(PQ).
    """

    __slots__ = ("algebra", "arity", "terms")

    def __init__(self, algebra: GradedAlgebra, arity: int,
                 terms: Mapping[Tuple[Word, ...], Scalar] | None = None):
        self.algebra = algebra
        self.arity = arity
        self.terms: Dict[Tuple[Word, ...], ParamRational] = {}
        for key, c in (terms or {}).items():
            if len(key) != arity:
                raise ArityMismatchError(f"term {key} has arity {len(key)}, expected {arity}")
            c = _c(c)
            if c:
                self.terms[tuple(tuple(w) for w in key)] = c

    @classmethod
    def _from_monos(cls, alg, arity, monos) -> "TensorElement":
        t = cls.__new__(cls)
        t.algebra = alg
        t.arity = arity
        t.terms = {tuple(alg.mono_word(m) for m in key): c for key, c in monos.items() if c}
        return t

    @classmethod
    def pure(cls, *factors: Element) -> "TensorElement":
        """The tensor product f1 ⊗ f2 ⊗ ... of normalized elements."""
        alg = factors[0].algebra
        combos: Dict[tuple, ParamRational] = {(): ONE}
        for f in factors:
            if f.algebra is not alg:
                raise FamilyMismatchError("tensor factors from different algebras")
            nxt: Dict[tuple, ParamRational] = {}
            for key, c in combos.items():
                for m, c2 in f.monos().items():
                    _acc(nxt, key + (m,), c * c2)
            combos = nxt
        return cls._from_monos(alg, len(factors), combos)

    def monos(self) -> Dict[tuple, ParamRational]:
        alg = self.algebra
        return {tuple(alg.word_mono(w) for w in key): c for key, c in self.terms.items()}

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        return (self.algebra is other.algebra and self.arity == other.arity
                and self.terms == other.terms)

    def _check(self, other: "TensorElement") -> None:
        if self.algebra is not other.algebra:
            raise FamilyMismatchError("tensor elements from different algebras")
        if self.arity != other.arity:
            raise ArityMismatchError(f"arity {self.arity} vs {other.arity}")

    def __add__(self, other) -> "TensorElement":
        if not isinstance(other, TensorElement):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            _acc(out, k, c)
        t = TensorElement.__new__(TensorElement)
        t.algebra, t.arity, t.terms = self.algebra, self.arity, out
        return t

    def __neg__(self) -> "TensorElement":
        return self.scale(-ONE)

    def __sub__(self, other) -> "TensorElement":
        return self + (-other)

    def scale(self, c: Scalar) -> "TensorElement":
        c = _c(c)
        t = TensorElement.__new__(TensorElement)
        t.algebra, t.arity = self.algebra, self.arity
        t.terms = {k: c * v for k, v in self.terms.items()} if c else {}
        return t

    def __mul__(self, other) -> "TensorElement":
        if isinstance(other, (int, Fraction, ParamRational)):
            return self.scale(other)
        if not isinstance(other, TensorElement):
            return NotImplemented
        return tensor_multiply(self, other)

    def __rmul__(self, other) -> "TensorElement":
        if isinstance(other, (int, Fraction, ParamRational)):
            return self.scale(other)
        return NotImplemented

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        alg = self.algebra
        key = _sort_key(alg)
        keys = sorted(self.terms, key=lambda k: tuple(key(w) for w in k))
        out = []
        for i, k in enumerate(keys):
            c = self.terms[k]
            body = " (x) ".join(format_word(w) for w in k)
            if c.is_one():
                t = body
            elif c == -ONE:
                t = f"-{body}"
            elif c.is_atomic():
                t = f"{c}*({body})" if len(k) > 1 else f"{c}*{body}"
            else:
                t = f"({c})*({body})"
            if i == 0:
                out.append(t)
            elif t.startswith("-"):
                out.append(" - " + t[1:])
            else:
                out.append(" + " + t)
        return "".join(out)

    __repr__ = __str__


def tensor_multiply(a: TensorElement, b: TensorElement) -> TensorElement:
    """Slot-wise product with Koszul signs, each slot normalized."""
    a._check(b)
    alg = a.algebra
    k = a.arity
    bm = b.monos()
    out: Dict[tuple, ParamRational] = {}
    for ka, ca in a.monos().items():
        # parity of the a-factors to the right of each slot
        pa = [alg.mono_parity(m) for m in ka]
        for kb, cb in bm.items():
            sign = 0
            for j in range(k):
                if pa and alg.mono_parity(kb[j]):
                    sign += sum(pa[j + 1:])
            coef = ca * cb if not sign & 1 else -(ca * cb)
            combos: Dict[tuple, ParamRational] = {(): coef}
            for j in range(k):
                prod = alg.mul_mono(ka[j], kb[j])
                if not prod:
                    combos = {}
                    break
                nxt: Dict[tuple, ParamRational] = {}
                for key, c in combos.items():
                    for m, c2 in prod.items():
                        _acc(nxt, key + (m,), c * c2)
                combos = nxt
            for key, c in combos.items():
                _acc(out, key, c)
    return TensorElement._from_monos(alg, k, out)


def tensor_one(alg: GradedAlgebra, arity: int = 2) -> TensorElement:
    return TensorElement(alg, arity, {((),) * arity: ONE})


def tensor_power(t: TensorElement, k: int) -> TensorElement:
    out = tensor_one(t.algebra, t.arity)
    for _ in range(k):
        out = out * t
    return out


# --------------------------------------------------------------------------
# the differential algebras of the two families
# --------------------------------------------------------------------------

def family_table(family, bindings: Mapping[str, ParamRational] | None = None) -> Dict[str, ParamRational]:
    fam = Family.parse(family)
    table = dict(FAMILY_TABLES[fam])
    if bindings:
        table = {k: v.substitute(bindings) for k, v in table.items()}
    return table


def _freeze_bindings(bindings) -> tuple:
    return tuple(sorted((k, ParamRational.coerce(v)) for k, v in (bindings or {}).items()))


@lru_cache(maxsize=None)
def _gamma(family: Family, frozen: tuple) -> GradedAlgebra:
    bindings = dict(frozen)
    table = family_table(family, bindings)
    rules = calculus_rules(table)
    if bindings:
        rules[(X, THETA)] = _rule((q.substitute(bindings), (THETA, X)))
    return GradedAlgebra("Gamma", (DTHETA, DX), rules, family, bindings, table)


def differential_algebra(family="I", bindings: Mapping[str, object] | None = None) -> GradedAlgebra:
    """The algebra Γ of a calculus family, optionally with parameters specialized."""
    return _gamma(Family.parse(family), _freeze_bindings(bindings))


def relation_elements(alg: GradedAlgebra, two_forms: bool = True) -> List[Tuple[str, Element]]:
    """Defining relations of Γ as raw elements LHS − RHS, each labelled."""
    out = []
    for (l1, l2), rhs in alg.base_rules.items():
        if (l1, l2) in ((X, XINV), (XINV, X)):
            continue
        if not two_forms and GENERATORS[l1].form_degree + GENERATORS[l2].form_degree == 2:
            continue
        terms: Terms = {(l1, l2): ONE}
        for w, c in rhs.items():
            _acc(terms, w, -c)
        label = f"{format_word((l1, l2))} = {format_terms(rhs) if rhs else '0'}"
        out.append((label, Element(alg, terms, normalized=False)))
    return out


def tensor_arity_check(a: TensorElement, b: TensorElement) -> None:
    if a.arity != b.arity:
        raise ArityMismatchError(f"arity {a.arity} vs {b.arity}")
