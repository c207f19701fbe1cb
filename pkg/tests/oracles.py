"""Independent reference computations used by the tests.

Coefficients are compared through sympy's own rational-function arithmetic
and through evaluation at rational points; elements of Γ are compared
through a small left-to-right rewriter written from the relation tables
alone.
"""

from fractions import Fraction

import sympy

from qsuperplane.coeffs import PARAMS, ParamRational

SYMS = sympy.symbols("q p r s")
Q, P, R, S = SYMS


def to_sympy(c: ParamRational):
    def poly(terms):
        total = sympy.Integer(0)
        for exps, coeff in terms.items():
            mono = sympy.Rational(coeff.numerator, coeff.denominator)
            for sym, e in zip(SYMS, exps):
                mono *= sym ** e
            total += mono
        return total
    return poly(c.numerator) / poly(c.denominator)


def same(c: ParamRational, expr) -> bool:
    return sympy.simplify(to_sympy(c) - sympy.sympify(expr, locals=dict(zip(PARAMS, SYMS)))) == 0


POINTS = [
    {"q": Fraction(2), "p": Fraction(3), "r": Fraction(5), "s": Fraction(7)},
    {"q": Fraction(-3, 2), "p": Fraction(5, 7), "r": Fraction(2, 3), "s": Fraction(-11, 5)},
]


def at(c: ParamRational, point) -> Fraction:
    v = c.substitute({k: ParamRational.const(x) for k, x in point.items()})
    out = v.as_fraction()
    assert out is not None
    return out


# ---- a naive rewriter with the printed relations typed in by hand ----------

def printed_rules(family: str):
    from qsuperplane.coeffs import ONE, p, q, r, s
    if family == "I":
        A, F11, F12, F21, F22, lam = p, p * q, 0 * q, -q.inverse(), 1 - p, p * q
    else:
        A, F11, F12, F21, F22, lam = s, q, q * r - 1, -r, 0 * q, r.inverse()
    rules = {
        ("x", "th"): [(q, ("th", "x"))],
        ("th", "th"): [],
        ("x", "dx"): [(A, ("dx", "x"))],
        ("x", "dth"): [(F11, ("dth", "x")), (F12, ("dx", "th"))],
        ("th", "dx"): [(F21, ("dx", "th")), (F22, ("dth", "x"))],
        ("th", "dth"): [(ONE, ("dth", "th"))],
        ("dx", "dx"): [],
        ("dx", "dth"): [(lam, ("dth", "dx"))],
    }
    return {k: [(c, w) for c, w in v if c] for k, v in rules.items()}


def naive_normal_form(word, family: str):
    """Repeatedly rewrite the leftmost out-of-order pair; words without xinv only."""
    from qsuperplane.coeffs import ONE
    rules = printed_rules(family)
    todo = [(ONE, tuple(word))]
    out = {}
    while todo:
        c, w = todo.pop()
        for i in range(len(w) - 1):
            if (w[i], w[i + 1]) in rules:
                for c2, rhs in rules[(w[i], w[i + 1])]:
                    todo.append((c * c2, w[:i] + rhs + w[i + 2:]))
                break
        else:
            out[w] = out.get(w, 0 * ONE) + c
    return {w: c for w, c in out.items() if c}
