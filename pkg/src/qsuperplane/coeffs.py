"""Exact rational functions in the deformation parameters q, p, r, s.

Numerators are Laurent polynomials (negative exponents allowed), denominators
are genuine polynomials with no monomial factor, monic under graded-lex order
with q > p > r > s.  With that normalization every element has exactly one
representation, so equality is structural.

Multivariate GCDs are delegated to sympy's sparse polynomial rings; everything
else (Laurent arithmetic, the canonical form, printing) lives here.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Mapping, Tuple, Union

from sympy import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import ring as _sympy_ring

PARAMS: Tuple[str, ...] = ("q", "p", "r", "s")
NVARS = len(PARAMS)

Exps = Tuple[int, int, int, int]
Laurent = Dict[Exps, Fraction]

_ZERO_EXPS: Exps = (0, 0, 0, 0)
_ONE: Laurent = {_ZERO_EXPS: Fraction(1)}

_RING, *_ = _sympy_ring(",".join(PARAMS), QQ, grlex)


class CoefficientError(ArithmeticError):
    """Base class for coefficient-field errors."""


class ZeroDenominatorError(CoefficientError, ZeroDivisionError):
    pass


class SubstitutionPoleError(CoefficientError):
    """A binding sends a denominator to zero."""


# --------------------------------------------------------------------------
# Laurent polynomial helpers (dicts exps -> Fraction, no zero coefficients)
# --------------------------------------------------------------------------

def _add_exps(a: Exps, b: Exps) -> Exps:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3])


def _lp_add(a: Laurent, b: Laurent, sign: int = 1) -> Laurent:
    out = dict(a)
    for m, c in b.items():
        v = out.get(m, 0) + sign * c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def _lp_mul(a: Laurent, b: Laurent) -> Laurent:
    if len(a) == 1 and len(b) == 1:
        (ma, ca), = a.items()
        (mb, cb), = b.items()
        return {_add_exps(ma, mb): ca * cb}
    out: Laurent = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = _add_exps(ma, mb)
            v = out.get(m, 0) + ca * cb
            if v:
                out[m] = v
            else:
                del out[m]
    return out


def _lp_scale(a: Laurent, m: Exps, c: Fraction) -> Laurent:
    return {_add_exps(k, m): v * c for k, v in a.items()}


def _grlex_key(m: Exps):
    return (sum(m), m)


def _min_exps(a: Laurent) -> Exps:
    ms = list(a)
    return tuple(min(m[i] for m in ms) for i in range(NVARS))  # type: ignore[return-value]


def _to_sympy(a: Laurent, shift: Exps):
    return _RING.from_dict(
        {tuple(e - s for e, s in zip(m, shift)): QQ(c.numerator, c.denominator)
         for m, c in a.items()})


def _from_sympy(poly) -> Laurent:
    return {tuple(int(e) for e in m): Fraction(int(c.numerator), int(c.denominator))
            for m, c in poly.items()}


def _freeze(a: Laurent) -> tuple:
    return tuple(sorted(a.items()))


# --------------------------------------------------------------------------

class ParamRational:
    """An element of Q(q, p, r, s) in canonical form.  Immutable."""

    __slots__ = ("_num", "_den", "_key", "_hash")

    def __init__(self, num: Mapping[Exps, Union[int, Fraction]] | None = None,
                 den: Mapping[Exps, Union[int, Fraction]] | None = None):
        n = {tuple(m): Fraction(c) for m, c in (num or {}).items() if c}
        d = dict(_ONE) if den is None else {tuple(m): Fraction(c) for m, c in den.items() if c}
        self._set(*_canonical(n, d))

    def _set(self, num: Laurent, den: Laurent) -> None:
        self._num = num
        self._den = den
        self._key = None
        self._hash = None

    def _k(self):
        if self._key is None:
            self._key = (_freeze(self._num), _freeze(self._den))
        return self._key

    @classmethod
    def _raw(cls, num: Laurent, den: Laurent) -> "ParamRational":
        # caller guarantees canonical form
        obj = cls.__new__(cls)
        obj._set(num, den)
        return obj

    # ---- constructors -----------------------------------------------------
    @classmethod
    def const(cls, value: Union[int, Fraction]) -> "ParamRational":
        value = Fraction(value)
        return cls._raw({_ZERO_EXPS: value} if value else {}, dict(_ONE))

    @classmethod
    def param(cls, name: str, power: int = 1) -> "ParamRational":
        try:
            i = PARAMS.index(name)
        except ValueError:
            raise ValueError(f"unknown parameter {name!r}") from None
        exps = [0] * NVARS
        exps[i] = power
        return cls._raw({tuple(exps): Fraction(1)}, dict(_ONE))

    @classmethod
    def canonicalize(cls, num: Mapping[Exps, Union[int, Fraction]],
                     den: Mapping[Exps, Union[int, Fraction]]) -> "ParamRational":
        return cls(num, den)

    @classmethod
    def coerce(cls, value) -> "ParamRational":
        if isinstance(value, ParamRational):
            return value
        if isinstance(value, (int, Fraction)):
            return cls.const(value)
        if isinstance(value, str):
            from .parser import parse_coefficient
            return parse_coefficient(value)
        raise TypeError(f"cannot coerce {type(value).__name__} to ParamRational")

    # ---- accessors --------------------------------------------------------
    @property
    def numerator(self) -> Dict[Exps, Fraction]:
        return dict(self._num)

    @property
    def denominator(self) -> Dict[Exps, Fraction]:
        return dict(self._den)

    def is_zero(self) -> bool:
        return not self._num

    def is_one(self) -> bool:
        return self._num == _ONE and self._den == _ONE

    def is_laurent(self) -> bool:
        return self._den == _ONE

    def as_fraction(self) -> Fraction | None:
        """The value as a rational number, or None if parameters occur."""
        if not self._num:
            return Fraction(0)
        if self._den == _ONE and list(self._num) == [_ZERO_EXPS]:
            return self._num[_ZERO_EXPS]
        return None

    def __bool__(self) -> bool:
        return bool(self._num)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = ParamRational.const(other)
        if not isinstance(other, ParamRational):
            return NotImplemented
        return self._num == other._num and self._den == other._den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._k())
        return self._hash

    # ---- arithmetic -------------------------------------------------------
    def __neg__(self) -> "ParamRational":
        return ParamRational._raw({m: -c for m, c in self._num.items()}, self._den)

    def __add__(self, other) -> "ParamRational":
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return _add(self, other, 1)

    __radd__ = __add__

    def __sub__(self, other) -> "ParamRational":
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return _add(self, other, -1)

    def __rsub__(self, other) -> "ParamRational":
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return _add(other, self, -1)

    def __mul__(self, other) -> "ParamRational":
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        if not self._num or not other._num:
            return ZERO
        if self._den == _ONE and other._den == _ONE:
            return ParamRational._raw(_lp_mul(self._num, other._num), self._den)
        return ParamRational._raw(*_canonical(_lp_mul(self._num, other._num),
                                              _lp_mul(self._den, other._den)))

    __rmul__ = __mul__

    def inverse(self) -> "ParamRational":
        if not self._num:
            raise ZeroDenominatorError("division by zero in Q(q,p,r,s)")
        if len(self._num) == 1:
            (m, c), = self._num.items()
            neg = tuple(-e for e in m)
            return ParamRational._raw(_lp_scale(self._den, neg, 1 / c), dict(_ONE))
        return ParamRational._raw(*_canonical(dict(self._den), dict(self._num)))

    def __truediv__(self, other) -> "ParamRational":
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> "ParamRational":
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int) -> "ParamRational":
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        out = ONE
        for _ in range(abs(k)):
            out = out * base
        return out

    # ---- substitution -----------------------------------------------------
    def substitute(self, bindings: Mapping[str, "ParamRational"]) -> "ParamRational":
        """Replace the bound parameters by the given rational functions."""
        if not bindings or not self._num:
            return self
        for k in bindings:
            if k not in PARAMS:
                raise ValueError(f"unknown parameter {k!r}")
        vals = [ParamRational.coerce(bindings[n]) if n in bindings else None for n in PARAMS]
        num = _eval_laurent(self._num, vals)
        den = _eval_laurent(self._den, vals)
        if den.is_zero():
            raise SubstitutionPoleError(f"denominator {_format_laurent(self._den)} vanishes "
                                        f"under {dict(bindings)}")
        return num / den

    def evaluate(self, **bindings) -> "ParamRational":
        return self.substitute({k: ParamRational.coerce(v) for k, v in bindings.items()})

    def free_params(self) -> set:
        used = set()
        for part in (self._num, self._den):
            for m in part:
                used.update(PARAMS[i] for i, e in enumerate(m) if e)
        return used

    # ---- printing ---------------------------------------------------------
    def __str__(self) -> str:
        if not self._num:
            return "0"
        num = _format_laurent(self._num)
        if self._den == _ONE:
            return num
        den = _format_laurent(self._den)
        if len(self._num) > 1 or num.startswith("-"):
            num = f"({num})"
        return f"{num}/({den})"

    def __repr__(self) -> str:
        return f"ParamRational({str(self)!r})"

    def is_atomic(self) -> bool:
        """True when the printed form needs no parentheses inside a product."""
        return self._den == _ONE and len(self._num) <= 1


def _coerce_or_none(value) -> ParamRational | None:
    if isinstance(value, ParamRational):
        return value
    if isinstance(value, (int, Fraction)):
        return ParamRational.const(value)
    return None


def _add(a: ParamRational, b: ParamRational, sign: int) -> ParamRational:
    if not b._num:
        return a
    if not a._num:
        return -b if sign < 0 else b
    if a._den == _ONE and b._den == _ONE:
        return ParamRational._raw(_lp_add(a._num, b._num, sign), a._den)
    if a._den == b._den:
        return ParamRational._raw(*_canonical(_lp_add(a._num, b._num, sign), dict(a._den)))
    num = _lp_add(_lp_mul(a._num, b._den), _lp_mul(b._num, a._den), sign)
    return ParamRational._raw(*_canonical(num, _lp_mul(a._den, b._den)))


def _eval_laurent(a: Laurent, vals) -> ParamRational:
    total = ZERO
    for m, c in a.items():
        term = ParamRational.const(c)
        for i, e in enumerate(m):
            if not e:
                continue
            if vals[i] is None:
                term = term * ParamRational.param(PARAMS[i], e)
            else:
                if e < 0 and vals[i].is_zero():
                    raise SubstitutionPoleError(f"{PARAMS[i]} bound to 0 appears with exponent {e}")
                term = term * vals[i] ** e
        total = total + term
    return total


def _canonical(num: Laurent, den: Laurent) -> Tuple[Laurent, Laurent]:
    if not den:
        raise ZeroDenominatorError("zero denominator")
    if not num:
        return {}, dict(_ONE)
    if len(den) == 1:
        (m, c), = den.items()
        neg = tuple(-e for e in m)
        return _lp_scale(num, neg, 1 / c), dict(_ONE)
    shift_n = _min_exps(num)
    shift_d = _min_exps(den)
    key = (_freeze(num), shift_n, _freeze(den), shift_d)
    return _canonical_gcd(key)


@lru_cache(maxsize=65536)
def _canonical_gcd(key) -> Tuple[Laurent, Laurent]:
    num_items, shift_n, den_items, shift_d = key
    num, den = dict(num_items), dict(den_items)
    pn = _to_sympy(num, shift_n)
    pd = _to_sympy(den, shift_d)
    g = pn.gcd(pd)
    if g != 1:
        pn = pn.exquo(g)
        pd = pd.exquo(g)
    n = _from_sympy(pn)
    d = _from_sympy(pd)
    lead = max(d, key=_grlex_key)
    lc = d[lead]
    mono = tuple(a - b for a, b in zip(shift_n, shift_d))
    n = _lp_scale(n, mono, 1 / lc)
    if len(d) == 1:
        # gcd cancellation left a constant denominator
        (m, c), = d.items()
        return _lp_scale(n, tuple(-e for e in m), lc / c), dict(_ONE)
    d = {m: c / lc for m, c in d.items()}
    return n, d


def _format_monomial(m: Exps) -> str:
    parts = []
    for name, e in zip(PARAMS, m):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _format_laurent(a: Laurent) -> str:
    if not a:
        return "0"
    out = []
    for i, m in enumerate(sorted(a, key=_grlex_key, reverse=True)):
        c = a[m]
        mono = _format_monomial(m)
        neg = c < 0
        mag = -c if neg else c
        if mono:
            body = mono if mag == 1 else f"{mag}*{mono}"
        else:
            body = str(mag)
        if i == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


ZERO = ParamRational._raw({}, dict(_ONE))
ONE = ParamRational._raw(dict(_ONE), dict(_ONE))

q = ParamRational.param("q")
p = ParamRational.param("p")
r = ParamRational.param("r")
s = ParamRational.param("s")


def cf_arith(a, b, op: str) -> ParamRational:
    """Apply one of ``add``, ``sub``, ``mul``, ``div`` to two coefficients."""
    a, b = ParamRational.coerce(a), ParamRational.coerce(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def cf_canonicalize(num: Mapping[Exps, Union[int, Fraction]],
                    den: Mapping[Exps, Union[int, Fraction]]) -> ParamRational:
    return ParamRational.canonicalize(num, den)


def cf_substitute(a: ParamRational, bindings: Mapping[str, object]) -> ParamRational:
    return a.substitute({k: ParamRational.coerce(v) for k, v in bindings.items()})


def parse_bindings(items: Iterable[str]) -> Dict[str, ParamRational]:
    """Parse ``k=v`` strings such as ``s=q*r`` into a binding map."""
    out: Dict[str, ParamRational] = {}
    for item in items:
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in PARAMS:
            raise ValueError(f"bad binding {item!r}; expected one of {PARAMS} = expression")
        out[key] = ParamRational.coerce(value.strip())
    return out
