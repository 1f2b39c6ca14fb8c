"""Canonical symbolic expressions over jet coordinates with exact rational arithmetic.

An expression is an immutable tree built from atoms (rational constants,
independent variables, jet coordinates u^alpha_J, ansatz parameters, and
derivatives of declared unknown functions) combined by sums, products, rational
powers and the elementary functions exp/log/sin/cos.

All constructors canonicalize: sums and products are flattened, like terms are
collected with exact rational coefficients, powers of a common base are merged,
and rational constants are folded.  Two expressions built from the same
mathematical content through the constructors compare equal structurally.
Powers of sums are *not* expanded automatically; :func:`expand` does that on
demand, and additionally merges powers of a common sum base whose exponents
differ by integers (the step that makes rational-function cancellations such as
``u_xx*(1+u_x^2)^(-1/2) - (1+u_x^2+...)*(1+u_x^2)^(-3/2)`` collapse exactly).

Zero testing is syntactic after :func:`expand`; transcendental identities are
deliberately out of reach (``sin(x)^2 + cos(x)^2 - 1`` is reported as not
provably zero).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .errors import (
    DegenerateExpression,
    EvaluationError,
    NotPolynomial,
    UnknownSymbol,
)

Rat = Fraction

FUNC_NAMES = ("exp", "log", "sin", "cos")


def rat(num, den=1) -> Fraction:
    return Fraction(num, den)


# ---------------------------------------------------------------------------
# node types
# ---------------------------------------------------------------------------

class Expr:
    """Base class; all concrete nodes are immutable dataclasses."""

    __slots__ = ()

    def __add__(self, other):
        return add(self, _coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return add(self, neg(_coerce(other)))

    def __rsub__(self, other):
        return add(_coerce(other), neg(self))

    def __mul__(self, other):
        return mul(self, _coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return div(self, _coerce(other))

    def __rtruediv__(self, other):
        return div(_coerce(other), self)

    def __neg__(self):
        return neg(self)

    def __pow__(self, exponent):
        return pow_(self, exponent)


@dataclass(frozen=True, slots=True)
class Const(Expr):
    value: Fraction


@dataclass(frozen=True, slots=True)
class Var(Expr):
    """Independent variable x^index, 1-based."""

    index: int


@dataclass(frozen=True, slots=True)
class Jet(Expr):
    """Jet coordinate u^dep_idx; ``idx`` is the sorted multi-index tuple."""

    dep: int
    idx: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "idx", tuple(sorted(self.idx)))

    @property
    def order(self) -> int:
        return len(self.idx)


@dataclass(frozen=True, slots=True)
class Param(Expr):
    """Unknown ansatz constant."""

    name: str


@dataclass(frozen=True, slots=True)
class UFunc(Expr):
    """Derivative of a declared unknown function.

    ``args`` are the atoms the function depends on (independent variables and
    order-0 jets); ``deriv`` is the sorted multiset of argument positions the
    function has been differentiated by.  Empty ``deriv`` is the function
    itself.
    """

    name: str
    args: tuple[Expr, ...]
    deriv: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "deriv", tuple(sorted(self.deriv)))


@dataclass(frozen=True, slots=True)
class Func(Expr):
    fname: str
    arg: Expr


@dataclass(frozen=True, slots=True)
class Pow(Expr):
    base: Expr
    exp: Fraction


@dataclass(frozen=True, slots=True)
class Mul(Expr):
    """coeff * factors[0] * factors[1] * ...; factors sorted, coeff != 0."""

    coeff: Fraction
    factors: tuple[Expr, ...]


@dataclass(frozen=True, slots=True)
class Add(Expr):
    terms: tuple[Expr, ...]


ZERO = Const(Fraction(0))
ONE = Const(Fraction(1))

ATOM_TYPES = (Const, Var, Jet, Param, UFunc)


def _coerce(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, Fraction)):
        return Const(Fraction(x))
    raise TypeError(f"cannot treat {x!r} as an expression")


def const(x) -> Const:
    return Const(Fraction(x))


# ---------------------------------------------------------------------------
# declaration context
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Context:
    """Declared names: independent and dependent variables, parameters, and
    unknown-function signatures (name, argument names)."""

    indep: tuple[str, ...]
    dep: tuple[str, ...]
    params: tuple[str, ...] = ()
    unknowns: tuple[tuple[str, tuple[str, ...]], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "indep", tuple(self.indep))
        object.__setattr__(self, "dep", tuple(self.dep))
        object.__setattr__(self, "params", tuple(self.params))
        object.__setattr__(
            self, "unknowns", tuple((n, tuple(a)) for n, a in self.unknowns)
        )
        names = list(self.indep) + list(self.dep) + list(self.params)
        names += [n for n, _ in self.unknowns]
        if len(names) != len(set(names)):
            raise UnknownSymbol("declared names must be unique across categories")

    @property
    def p(self) -> int:
        return len(self.indep)

    @property
    def q(self) -> int:
        return len(self.dep)

    def var(self, name: str) -> Var:
        try:
            return Var(self.indep.index(name) + 1)
        except ValueError:
            raise UnknownSymbol(f"{name!r} is not an independent variable") from None

    def dep_index(self, name: str) -> int:
        try:
            return self.dep.index(name) + 1
        except ValueError:
            raise UnknownSymbol(f"{name!r} is not a dependent variable") from None

    def jet(self, dep_name: str, *indep_names: str) -> Jet:
        alpha = self.dep_index(dep_name)
        idx = tuple(self.var(n).index for n in indep_names)
        return Jet(alpha, idx)

    def unknown_args(self, name: str) -> tuple[str, ...]:
        for n, args in self.unknowns:
            if n == name:
                return args
        raise UnknownSymbol(f"{name!r} is not a declared unknown function")

    def unknown_arg_atoms(self, name: str) -> tuple[Expr, ...]:
        out = []
        for a in self.unknown_args(name):
            if a in self.indep:
                out.append(self.var(a))
            elif a in self.dep:
                out.append(Jet(self.dep_index(a), ()))
            else:
                raise UnknownSymbol(
                    f"unknown-function argument {a!r} is not a declared variable"
                )
        return tuple(out)

    def ufunc(self, name: str, *deriv_names: str) -> UFunc:
        args = self.unknown_arg_atoms(name)
        arg_names = self.unknown_args(name)
        deriv = []
        for d in deriv_names:
            try:
                deriv.append(arg_names.index(d))
            except ValueError:
                raise UnknownSymbol(
                    f"{name!r} does not depend on {d!r}"
                ) from None
        return UFunc(name, args, tuple(deriv))


# ---------------------------------------------------------------------------
# canonical ordering
# ---------------------------------------------------------------------------

def sort_key(e: Expr):
    if isinstance(e, Const):
        return (0, e.value)
    if isinstance(e, Var):
        return (1, e.index)
    if isinstance(e, Jet):
        return (2, e.dep, len(e.idx), e.idx)
    if isinstance(e, Param):
        return (3, e.name)
    if isinstance(e, UFunc):
        return (4, e.name, e.deriv, tuple(sort_key(a) for a in e.args))
    if isinstance(e, Func):
        return (5, e.fname, sort_key(e.arg))
    if isinstance(e, Pow):
        return (6, sort_key(e.base), e.exp)
    if isinstance(e, Mul):
        return (7, tuple(sort_key(f) for f in e.factors), e.coeff)
    if isinstance(e, Add):
        return (8, tuple(sort_key(t) for t in e.terms))
    raise TypeError(type(e))


def _base_exp(f: Expr) -> tuple[Expr, Fraction]:
    if isinstance(f, Pow):
        return f.base, f.exp
    return f, Fraction(1)


def _factor_key(f: Expr):
    b, e = _base_exp(f)
    return (sort_key(b), e)


# ---------------------------------------------------------------------------
# smart constructors
# ---------------------------------------------------------------------------

def _split(e: Expr) -> tuple[Fraction, tuple[Expr, ...]]:
    """Split into (rational coefficient, unit factor tuple)."""
    if isinstance(e, Const):
        return e.value, ()
    if isinstance(e, Mul):
        return e.coeff, e.factors
    return Fraction(1), (e,)


def _term(coeff: Fraction, factors: tuple[Expr, ...]) -> Expr:
    if coeff == 0 or not factors:
        return Const(coeff)
    if len(factors) == 1:
        if coeff == 1:
            return factors[0]
        # distribute a scalar over a lone sum so that e - e collapses
        if isinstance(factors[0], Add):
            return add(*(mul(Const(coeff), t) for t in factors[0].terms))
    return Mul(coeff, factors)


def add(*args) -> Expr:
    acc: dict[tuple[Expr, ...], Fraction] = {}
    stack = [_coerce(a) for a in args]
    for a in stack:
        terms = a.terms if isinstance(a, Add) else (a,)
        for t in terms:
            c, fs = _split(t)
            if c == 0:
                continue
            acc[fs] = acc.get(fs, Fraction(0)) + c
    out = [_term(c, fs) for fs, c in acc.items() if c != 0]
    if not out:
        return ZERO
    if len(out) == 1:
        return out[0]
    out.sort(key=sort_key)
    return Add(tuple(out))


def mul(*args) -> Expr:
    coeff = Fraction(1)
    bases: dict[Expr, Fraction] = {}
    order: list[Expr] = []
    work = [_coerce(a) for a in args]
    while work:
        a = work.pop(0)
        if isinstance(a, Const):
            coeff *= a.value
            if coeff == 0:
                return ZERO
            continue
        if isinstance(a, Mul):
            coeff *= a.coeff
            if coeff == 0:
                return ZERO
            work = list(a.factors) + work
            continue
        b, e = _base_exp(a)
        if b in bases:
            bases[b] += e
        else:
            bases[b] = e
            order.append(b)
    factors: list[Expr] = []
    for b in order:
        e = bases[b]
        if e == 0:
            continue
        f = pow_(b, e)
        if isinstance(f, Const):
            coeff *= f.value
            if coeff == 0:
                return ZERO
        elif isinstance(f, (Mul, Pow)) and not isinstance(f, Pow):
            work.append(f)  # pragma: no cover - pow_ never returns raw Mul here
        else:
            factors.append(f)
    if coeff == 0:
        return ZERO
    factors.sort(key=_factor_key)
    return _term(coeff, tuple(factors))


def neg(e: Expr) -> Expr:
    return mul(Const(Fraction(-1)), e)


def sub(a, b) -> Expr:
    return add(a, neg(_coerce(b)))


def _int_nth_root(n: int, k: int) -> int | None:
    if n < 0:
        return None
    if n in (0, 1):
        return n
    r = round(n ** (1.0 / k))
    for c in (r - 1, r, r + 1):
        if c >= 0 and c ** k == n:
            return c
    return None


def pow_(base, exponent) -> Expr:
    base = _coerce(base)
    e = Fraction(exponent)
    if e == 0:
        return ONE
    if e == 1:
        return base
    if isinstance(base, Const):
        v = base.value
        if v == 0:
            if e < 0:
                raise DegenerateExpression("0 raised to a negative power")
            return ZERO
        if v == 1:
            return ONE
        if e.denominator == 1:
            return Const(v ** e.numerator)
        rn = _int_nth_root(v.numerator, e.denominator)
        rd = _int_nth_root(v.denominator, e.denominator)
        if rn is not None and rd is not None:
            return Const(Fraction(rn, rd) ** e.numerator)
        return Pow(base, e)
    if isinstance(base, Pow) and e.denominator == 1:
        return pow_(base.base, base.exp * e)
    if isinstance(base, Mul) and e.denominator == 1:
        parts = [Const(base.coeff ** e.numerator)]
        parts.extend(pow_(f, e) for f in base.factors)
        return mul(*parts)
    return Pow(base, e)


def div(a, b) -> Expr:
    return mul(_coerce(a), pow_(b, Fraction(-1)))


def func(name: str, arg) -> Expr:
    if name not in FUNC_NAMES:
        raise UnknownSymbol(f"unknown function {name!r}")
    arg = _coerce(arg)
    if isinstance(arg, Const):
        v = arg.value
        if name == "exp" and v == 0:
            return ONE
        if name == "log" and v == 1:
            return ZERO
        if name == "sin" and v == 0:
            return ZERO
        if name == "cos" and v == 0:
            return ONE
    return Func(name, arg)


# ---------------------------------------------------------------------------
# normalization
# ---------------------------------------------------------------------------

def normalize(e: Expr) -> Expr:
    """Rebuild through the canonicalizing constructors (idempotent)."""
    if isinstance(e, ATOM_TYPES):
        if isinstance(e, UFunc):
            return UFunc(e.name, tuple(normalize(a) for a in e.args), e.deriv)
        return e
    if isinstance(e, Add):
        return add(*(normalize(t) for t in e.terms))
    if isinstance(e, Mul):
        return mul(Const(e.coeff), *(normalize(f) for f in e.factors))
    if isinstance(e, Pow):
        return pow_(normalize(e.base), e.exp)
    if isinstance(e, Func):
        return func(e.fname, normalize(e.arg))
    raise TypeError(type(e))


# ---------------------------------------------------------------------------
# traversal helpers
# ---------------------------------------------------------------------------

def subterms(e: Expr) -> Iterator[Expr]:
    yield e
    if isinstance(e, Add):
        for t in e.terms:
            yield from subterms(t)
    elif isinstance(e, Mul):
        for f in e.factors:
            yield from subterms(f)
    elif isinstance(e, Pow):
        yield from subterms(e.base)
    elif isinstance(e, Func):
        yield from subterms(e.arg)
    elif isinstance(e, UFunc):
        for a in e.args:
            yield from subterms(a)


def atoms_of(e: Expr) -> Iterator[Expr]:
    for s in subterms(e):
        if isinstance(s, (Var, Jet, Param, UFunc)):
            yield s


def jets_of(e: Expr) -> set[Jet]:
    return {a for a in atoms_of(e) if isinstance(a, Jet)}


def jet_order(e: Expr) -> int:
    return max((j.order for j in jets_of(e)), default=0)


def contains(e: Expr, atom: Expr) -> bool:
    return any(s == atom for s in subterms(e))


# ---------------------------------------------------------------------------
# differentiation and substitution
# ---------------------------------------------------------------------------

def diff(e: Expr, v: Expr) -> Expr:
    """Partial derivative with respect to a single atom.

    Jet coordinates other than ``v`` count as constants; derivatives of
    unknown functions follow the chain rule through matching argument slots.
    """
    if not isinstance(v, (Var, Jet, Param)):
        raise UnknownSymbol(f"cannot differentiate with respect to {v!r}")
    return _diff(e, v)


def _diff(e: Expr, v: Expr) -> Expr:
    if e == v:
        return ONE
    if isinstance(e, (Const, Var, Jet, Param)):
        return ZERO
    if isinstance(e, UFunc):
        parts = [
            UFunc(e.name, e.args, e.deriv + (k,))
            for k, a in enumerate(e.args)
            if a == v
        ]
        return add(*parts) if parts else ZERO
    if isinstance(e, Add):
        return add(*(_diff(t, v) for t in e.terms))
    if isinstance(e, Mul):
        parts = []
        for i, f in enumerate(e.factors):
            rest = e.factors[:i] + e.factors[i + 1:]
            parts.append(mul(Const(e.coeff), _diff(f, v), *rest))
        return add(*parts)
    if isinstance(e, Pow):
        return mul(Const(e.exp), pow_(e.base, e.exp - 1), _diff(e.base, v))
    if isinstance(e, Func):
        d = _diff(e.arg, v)
        if e.fname == "exp":
            outer = func("exp", e.arg)
        elif e.fname == "log":
            outer = pow_(e.arg, Fraction(-1))
        elif e.fname == "sin":
            outer = func("cos", e.arg)
        else:
            outer = neg(func("sin", e.arg))
        return mul(outer, d)
    raise TypeError(type(e))


def substitute(e: Expr, bindings: Mapping[Expr, Expr]) -> Expr:
    """Simultaneous substitution of atoms, followed by normalization."""
    for k in bindings:
        if not isinstance(k, (Var, Jet, Param, UFunc)):
            raise UnknownSymbol(f"substitution key {k!r} is not an atom")
    return _subst(e, bindings)


def _subst(e: Expr, b: Mapping[Expr, Expr]) -> Expr:
    hit = b.get(e)
    if hit is not None:
        return _coerce(hit)
    if isinstance(e, (Const, Var, Jet, Param)):
        return e
    if isinstance(e, UFunc):
        return UFunc(e.name, tuple(_subst(a, b) for a in e.args), e.deriv)
    if isinstance(e, Add):
        return add(*(_subst(t, b) for t in e.terms))
    if isinstance(e, Mul):
        return mul(Const(e.coeff), *(_subst(f, b) for f in e.factors))
    if isinstance(e, Pow):
        return pow_(_subst(e.base, b), e.exp)
    if isinstance(e, Func):
        return func(e.fname, _subst(e.arg, b))
    raise TypeError(type(e))


def substitute_functions(e: Expr, table: Mapping[str, tuple[tuple[Expr, ...], Expr]]) -> Expr:
    """Replace unknown functions by concrete expressions.

    ``table`` maps a function name to ``(args, body)``; a derivative node is
    replaced by the matching iterated partial derivative of ``body``.
    """
    if isinstance(e, UFunc) and e.name in table:
        args, body = table[e.name]
        if len(args) != len(e.args):
            raise UnknownSymbol(f"arity mismatch for unknown function {e.name!r}")
        out = body
        for pos in e.deriv:
            out = diff(out, args[pos])
        return out
    if isinstance(e, (Const, Var, Jet, Param, UFunc)):
        return e
    if isinstance(e, Add):
        return add(*(substitute_functions(t, table) for t in e.terms))
    if isinstance(e, Mul):
        return mul(Const(e.coeff), *(substitute_functions(f, table) for f in e.factors))
    if isinstance(e, Pow):
        return pow_(substitute_functions(e.base, table), e.exp)
    if isinstance(e, Func):
        return func(e.fname, substitute_functions(e.arg, table))
    raise TypeError(type(e))


# ---------------------------------------------------------------------------
# expansion and zero testing
# ---------------------------------------------------------------------------

_EXPAND_POW_CAP = 64


def _distribute(factors: list[Expr], coeff: Fraction) -> Expr:
    """Multiply out, distributing over every Add factor."""
    flat: list[list[Expr]] = []
    for f in factors:
        if isinstance(f, Add):
            flat.append(list(f.terms))
        else:
            flat.append([f])
    parts = []
    for combo in itertools.product(*flat):
        parts.append(mul(Const(coeff), *combo))
    return add(*parts)


def _expand_once(e: Expr) -> Expr:
    if isinstance(e, (Const, Var, Jet, Param)):
        return e
    if isinstance(e, UFunc):
        return UFunc(e.name, tuple(_expand_once(a) for a in e.args), e.deriv)
    if isinstance(e, Func):
        return func(e.fname, _expand_once(e.arg))
    if isinstance(e, Add):
        return add(*(_expand_once(t) for t in e.terms))
    if isinstance(e, Pow):
        base = _expand_once(e.base)
        if (
            isinstance(base, Add)
            and e.exp.denominator == 1
            and 1 < e.exp.numerator <= _EXPAND_POW_CAP
        ):
            return _distribute([base] * e.exp.numerator, Fraction(1))
        return pow_(base, e.exp)
    if isinstance(e, Mul):
        factors = []
        for f in e.factors:
            g = _expand_once(f)
            if isinstance(g, Mul):
                factors.append(Const(g.coeff))
                factors.extend(g.factors)
            else:
                factors.append(g)
        # re-run integer powers of sums through distribution
        expanded = []
        coeff = e.coeff
        for f in factors:
            if isinstance(f, Const):
                coeff *= f.value
                continue
            if (
                isinstance(f, Pow)
                and isinstance(f.base, Add)
                and f.exp.denominator == 1
                and 1 < f.exp.numerator <= _EXPAND_POW_CAP
            ):
                expanded.extend([f.base] * f.exp.numerator)
            else:
                expanded.append(f)
        if any(isinstance(f, Add) for f in expanded):
            return _distribute(expanded, coeff)
        return mul(Const(coeff), *expanded)
    raise TypeError(type(e))


def _merge_sum_powers(e: Expr) -> Expr:
    """Factor powers of a common sum base whose exponents differ by integers.

    ``a*S^(-1/2) + b*S^(-3/2)`` becomes ``(a*S + b)*S^(-3/2)`` with the integer
    part multiplied out, which lets rational-function cancellations finish.
    """
    if not isinstance(e, Add):
        return e
    exponents: dict[Expr, set[Fraction]] = {}
    term_bases: list[set[Expr]] = []
    for t in e.terms:
        _, fs = _split(t)
        bases = set()
        for f in fs:
            b, ex = _base_exp(f)
            if isinstance(b, Add):
                exponents.setdefault(b, set()).add(ex)
                bases.add(b)
        term_bases.append(bases)
    targets: dict[Expr, Fraction] = {}
    for b, exps in exponents.items():
        exps = set(exps)
        # terms lacking the base count as exponent 0 and get pulled over the
        # common denominator, provided the shift stays integral
        if any(b not in bs for bs in term_bases) and \
                min(exps) < 0 and min(exps).denominator == 1:
            exps.add(Fraction(0))
        if len(exps) < 2:
            continue
        mn = min(exps)
        if all((x - mn).denominator == 1 for x in exps):
            targets[b] = mn
    if not targets:
        return e
    new_terms = []
    for t in e.terms:
        c, fs = _split(t)
        extra: list[Expr] = []
        kept: list[Expr] = []
        present: set[Expr] = set()
        for f in fs:
            b, ex = _base_exp(f)
            mn = targets.get(b)
            if mn is not None:
                present.add(b)
                if ex != mn:
                    k = ex - mn
                    if k.denominator == 1 and k > 0:
                        if mn != 0:
                            kept.append(Pow(b, mn))
                        extra.extend([b] * k.numerator)
                        continue
            kept.append(f)
        for b, mn in targets.items():
            if b not in present and mn < 0 and mn.denominator == 1:
                kept.append(Pow(b, mn))
                extra.extend([b] * (-mn.numerator))
        if extra:
            new_terms.append(_distribute(kept + extra, c))
        else:
            new_terms.append(_term(c, tuple(fs)))
    return add(*new_terms)


def expand(e: Expr, max_rounds: int = 12) -> Expr:
    """Fully distribute products and integer powers of sums, then merge
    integer-shifted powers of common sum bases, iterating to a fixed point."""
    cur = normalize(e)
    for _ in range(max_rounds):
        nxt = _merge_sum_powers(_expand_once(cur))
        if nxt == cur:
            return cur
        cur = nxt
    return cur


def is_zero(e: Expr) -> bool:
    """True iff the expression is provably the constant zero.

    Func applications are treated as opaque atoms, so identities like
    ``sin^2 + cos^2 = 1`` are (by design) not recognized.
    """
    e = normalize(e)
    if e == ZERO:
        return True
    return expand(e) == ZERO


def equal(a: Expr, b: Expr) -> bool:
    return is_zero(sub(a, b))


# ---------------------------------------------------------------------------
# collection into monomials
# ---------------------------------------------------------------------------

def collect(e: Expr, variables: Iterable[Expr]) -> dict[Expr, Expr]:
    """Write ``e`` as a sum of monomial * coefficient over ``variables``.

    The expression must be polynomial in the given atoms; monomial keys are
    power products (``ONE`` for the constant part) and coefficients are free
    of the variables.  Zero coefficients are dropped.
    """
    vars_ = set(variables)
    ex = expand(e)
    if ex == ZERO:
        return {}
    out: dict[Expr, list[Expr]] = {}
    terms = ex.terms if isinstance(ex, Add) else (ex,)
    for t in terms:
        c, fs = _split(t)
        mono: list[Expr] = []
        coefs: list[Expr] = []
        for f in fs:
            b, exp = _base_exp(f)
            if b in vars_:
                if exp.denominator != 1 or exp < 0:
                    raise NotPolynomial(
                        f"variable {b!r} occurs with non-polynomial exponent {exp}"
                    )
                mono.append(f)
            else:
                if any(contains(f, v) for v in vars_):
                    raise NotPolynomial(
                        f"variable occurs inside non-polynomial factor {f!r}"
                    )
                coefs.append(f)
        key = mul(*mono) if mono else ONE
        out.setdefault(key, []).append(_term(c, tuple(coefs)))
    result = {}
    for key, parts in out.items():
        coef = add(*parts)
        if coef != ZERO:
            result[key] = coef
    return result


# ---------------------------------------------------------------------------
# exact evaluation
# ---------------------------------------------------------------------------

def evaluate(e: Expr, env: Mapping[Expr, Fraction]) -> Fraction:
    """Evaluate to an exact rational under an atom assignment."""
    if isinstance(e, Const):
        return e.value
    if isinstance(e, (Var, Jet, Param)):
        try:
            return Fraction(env[e])
        except KeyError:
            raise EvaluationError(f"no value assigned to {e!r}") from None
    if isinstance(e, UFunc):
        try:
            return Fraction(env[e])
        except KeyError:
            raise EvaluationError(f"no value assigned to {e!r}") from None
    if isinstance(e, Add):
        return sum((evaluate(t, env) for t in e.terms), Fraction(0))
    if isinstance(e, Mul):
        out = e.coeff
        for f in e.factors:
            out *= evaluate(f, env)
        return out
    if isinstance(e, Pow):
        b = evaluate(e.base, env)
        if e.exp.denominator == 1:
            if b == 0 and e.exp < 0:
                raise EvaluationError("division by zero during evaluation")
            return b ** e.exp.numerator
        rn = _int_nth_root(b.numerator, e.exp.denominator)
        rd = _int_nth_root(b.denominator, e.exp.denominator)
        if rn is None or rd is None:
            raise EvaluationError(f"{b} has no exact rational root of order {e.exp.denominator}")
        return Fraction(rn, rd) ** e.exp.numerator
    if isinstance(e, Func):
        raise EvaluationError(f"cannot evaluate {e.fname} exactly")
    raise TypeError(type(e))
