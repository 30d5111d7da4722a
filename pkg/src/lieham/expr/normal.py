"""Rational normal form over an atom set.

Transcendental subterms (exp, ln, sin, cos, abs), non-integer powers, and
quadrature functions become opaque indeterminates ("atoms").  What is left
is a rational function in the coordinates, time, parameters and atoms; it
is reduced with sympy's sparse rational-function field and rendered back
as a quotient of expanded polynomials with coprime integer coefficients
and a positive leading denominator coefficient.

A power ``b^(p/q)`` becomes ``b^m * R^s`` with ``R = b^(1/q)`` an atom and
``p = q*m + s``; any ``R^k`` with ``k >= q`` left after reduction is
rewritten as ``b * R^(k-q)``.  No other identity between atoms is used, so
``exp(x)*exp(x)`` stays ``exp(x)^2``.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from functools import lru_cache
from math import gcd

from sympy import integer_nthroot
from sympy.polys.domains import QQ
from sympy.polys.fields import field

from .nodes import (
    COORDINATES,
    TIME,
    Add,
    Const,
    Div,
    Expr,
    Func,
    Mul,
    Neg,
    Pow,
    Quad,
    Sym,
)
from .printer import to_text


class NormalizationError(ArithmeticError):
    pass


class _AtomTable:
    """Process-wide registry of atoms, keyed by canonical text."""

    def __init__(self):
        self._lock = threading.Lock()
        self._by_key = {}
        self._nodes = []
        self._roots = {}

    def register(self, node: Expr, root_of=None) -> str:
        key = to_text(node)
        with self._lock:
            name = self._by_key.get(key)
            if name is None:
                name = f"_a{len(self._nodes)}"
                self._by_key[key] = name
                self._nodes.append((key, node))
                if root_of is not None:
                    self._roots[name] = root_of
        return name

    def node(self, name: str) -> Expr:
        return self._nodes[int(name[2:])][1]

    def key(self, name: str) -> str:
        return self._nodes[int(name[2:])][0]

    def root(self, name: str):
        return self._roots.get(name)


ATOMS = _AtomTable()


def is_atom_name(name: str) -> bool:
    return name.startswith("_a")


def _gen_sort_key(name: str):
    if name in COORDINATES:
        return (0, COORDINATES.index(name), "")
    if name == TIME:
        return (1, 0, "")
    if is_atom_name(name):
        return (3, 0, ATOMS.key(name))
    return (2, 0, name)


def _exact_root(value: Fraction, q: int):
    if value < 0 and q % 2 == 0:
        return None
    sign = -1 if value < 0 else 1
    num, ok_n = integer_nthroot(abs(value.numerator), q)
    den, ok_d = integer_nthroot(value.denominator, q)
    if ok_n and ok_d:
        return Fraction(sign * int(num), int(den))
    return None


def _fold_constant_func(name: str, arg: Expr):
    if not isinstance(arg, Const):
        return None
    v = arg.value
    if name == "abs":
        return Const(abs(v))
    if v == 0 and name in ("sin",):
        return Const(Fraction(0))
    if v == 0 and name in ("exp", "cos"):
        return Const(Fraction(1))
    if v == 1 and name == "ln":
        return Const(Fraction(0))
    return None


@lru_cache(maxsize=65536)
def _atomize(e: Expr) -> Expr:
    """Replace atoms by internal symbols, leaving a rational skeleton."""
    if isinstance(e, (Const, Sym)):
        return e
    if isinstance(e, Add):
        return Add(tuple(_atomize(a) for a in e.args))
    if isinstance(e, Mul):
        return Mul(tuple(_atomize(a) for a in e.args))
    if isinstance(e, Neg):
        return Neg(_atomize(e.arg))
    if isinstance(e, Div):
        return Div(_atomize(e.num), _atomize(e.den))
    if isinstance(e, Pow):
        if e.exp.denominator == 1:
            return Pow(_atomize(e.base), e.exp)
        return _atomize_root(e.base, e.exp)
    if isinstance(e, Func):
        if e.name == "sqrt":
            return _atomize_root(e.arg, Fraction(1, 2))
        arg = normalize(e.arg)
        folded = _fold_constant_func(e.name, arg)
        if folded is not None:
            return folded
        if e.name == "abs" and isinstance(arg, Func) and arg.name in ("abs", "exp"):
            return _atomize(arg)
        return Sym(ATOMS.register(Func(e.name, arg)))
    if isinstance(e, Quad):
        node = Quad(normalize(e.integrand), e.var, normalize(e.lower), normalize(e.upper), e.label)
        return Sym(ATOMS.register(node))
    raise TypeError(type(e))


def _atomize_root(base: Expr, r: Fraction) -> Expr:
    q = r.denominator
    b = normalize(base)
    m, s = divmod(r.numerator, q)
    if isinstance(b, Const):
        root = _exact_root(b.value, q)
        if root is not None:
            if root == 0 and r < 0:
                raise NormalizationError("zero raised to a negative power")
            return Const(root ** r.numerator)
    name = ATOMS.register(Pow(b, Fraction(1, q)), root_of=(b, q))
    parts = []
    if m:
        parts.append(Pow(_atomize(b), Fraction(m)))
    if s:
        parts.append(Pow(Sym(name), Fraction(s)))
    if not parts:
        return Const(Fraction(1))
    return parts[0] if len(parts) == 1 else Mul(tuple(parts))


@lru_cache(maxsize=1024)
def _field_for(names: tuple):
    if not names:
        names = ("x",)
    K, *_ = field(",".join(names), QQ)
    return K


def _to_field(e: Expr, K, index):
    """Evaluate an atom-free skeleton in the field ``K``."""
    if isinstance(e, Const):
        return K(QQ(e.value.numerator, e.value.denominator))
    if isinstance(e, Sym):
        return K.gens[index[e.name]]
    if isinstance(e, Add):
        acc = K.zero
        for a in e.args:
            acc = acc + _to_field(a, K, index)
        return acc
    if isinstance(e, Mul):
        acc = K.one
        for a in e.args:
            acc = acc * _to_field(a, K, index)
        return acc
    if isinstance(e, Neg):
        return -_to_field(e.arg, K, index)
    if isinstance(e, Div):
        den = _to_field(e.den, K, index)
        if not den:
            raise NormalizationError(f"division by zero in {to_text(e)}")
        return _to_field(e.num, K, index) / den
    if isinstance(e, Pow):
        base = _to_field(e.base, K, index)
        n = e.exp.numerator
        if n < 0 and not base:
            raise NormalizationError(f"zero raised to a negative power in {to_text(e)}")
        if n == 0:
            # 0^0 = 1, matching evaluation
            return K.one
        return base**n
    raise TypeError(type(e))


class RationalForm:
    """A reduced fraction ``numer/denom`` in a sympy field over named gens."""

    __slots__ = ("K", "names", "value")

    def __init__(self, K, names, value):
        self.K = K
        self.names = names
        self.value = value

    @property
    def numer(self):
        return self.value.numer

    @property
    def denom(self):
        return self.value.denom

    def is_zero(self) -> bool:
        return not self.value.numer

    def gen_index(self, name):
        return self.names.index(name) if name in self.names else None


def _reduce_roots(value, K, names, index):
    """Rewrite R^k (k >= q) as base * R^(k-q) for every root atom R."""
    roots = [(i, ATOMS.root(n)) for i, n in enumerate(names) if ATOMS.root(n) is not None]
    if not roots:
        return value
    for _ in range(16):
        changed = False
        parts = []
        for poly in (value.numer, value.denom):
            if not any(m[i] >= q for m in poly.monoms() for i, (_, q) in roots):
                parts.append(K(poly))
                continue
            changed = True
            acc = K.zero
            for monom, coeff in poly.terms():
                term = K(coeff)
                for j, power in enumerate(monom):
                    if not power:
                        continue
                    root = ATOMS.root(names[j])
                    if root is not None and power >= root[1]:
                        base, q = root
                        mult, power = divmod(power, q)
                        term = term * _to_field(_atomize(base), K, index) ** mult
                    term = term * K.gens[j] ** power
                acc = acc + term
            parts.append(acc)
        if not changed:
            return value
        value = parts[0] / parts[1]
    return value


def rational_form(e: Expr) -> RationalForm:
    skeleton = _atomize(e)
    names = tuple(sorted(skeleton.symbols | _root_base_symbols(skeleton.symbols), key=_gen_sort_key))
    K = _field_for(names)
    index = {n: i for i, n in enumerate(names)}
    value = _to_field(skeleton, K, index)
    value = _reduce_roots(value, K, names, index)
    return RationalForm(K, names, value)


def _root_base_symbols(symbols):
    out = set()
    pending = [s for s in symbols if is_atom_name(s)]
    while pending:
        name = pending.pop()
        root = ATOMS.root(name)
        if root is None:
            continue
        for s in _atomize(root[0]).symbols:
            if s not in out and s not in symbols:
                out.add(s)
                pending.append(s)
    return out


def _gen_node(name: str) -> Expr:
    return ATOMS.node(name) if is_atom_name(name) else Sym(name)


def _power_node(name: str, k: int) -> Expr:
    node = _gen_node(name)
    if k == 1:
        return node
    if isinstance(node, Pow) and node.exp.numerator == 1:
        return Pow(node.base, node.exp * k)
    return Pow(node, Fraction(k))


def _integer_content(numer, denom):
    """Scale factor making both polynomials integral and coprime, denominator LC > 0."""
    coeffs = [Fraction(int(c.numerator), int(c.denominator)) for c in numer.coeffs() + denom.coeffs()]
    lcm = 1
    for c in coeffs:
        lcm = lcm * c.denominator // gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in coeffs]
    g = 0
    for v in ints:
        g = gcd(g, v)
    scale = Fraction(lcm, g or 1)
    lc = denom.LC
    if Fraction(int(lc.numerator), int(lc.denominator)) < 0:
        scale = -scale
    return scale


def poly_to_expr(poly, names, scale=Fraction(1)) -> Expr:
    terms = []
    for monom, coeff in poly.terms():
        c = Fraction(int(coeff.numerator), int(coeff.denominator)) * scale
        factors = tuple(_power_node(names[j], k) for j, k in enumerate(monom) if k)
        terms.append((c, factors))
    if not terms:
        return Const(Fraction(0))
    out = []
    for i, (c, factors) in enumerate(terms):
        magnitude = abs(c)
        if not factors:
            out.append(Const(c))
            continue
        if magnitude == 1:
            body = factors[0] if len(factors) == 1 else Mul(factors)
        else:
            body = Mul((Const(magnitude),) + factors)
        out.append(Neg(body) if c < 0 else body)
    return out[0] if len(out) == 1 else Add(tuple(out))


def form_to_expr(form: RationalForm) -> Expr:
    numer, denom = form.numer, form.denom
    if not numer:
        return Const(Fraction(0))
    scale = _integer_content(numer, denom)
    num = poly_to_expr(numer, form.names, scale)
    if denom.is_ground:
        d = Fraction(int(denom.LC.numerator), int(denom.LC.denominator)) * scale
        if d == 1:
            return num
        return Div(num, Const(d))
    return Div(num, poly_to_expr(denom, form.names, scale))


@lru_cache(maxsize=65536)
def normalize(e: Expr) -> Expr:
    """Canonical reduced quotient of polynomials over the atom set."""
    if isinstance(e, (Const, Sym)):
        return e
    return form_to_expr(rational_form(e))


def is_zero(e: Expr) -> bool:
    return rational_form(e).is_zero()


def numer_denom(e: Expr):
    """Numerator and denominator of the normal form as expressions."""
    n = normalize(e)
    if isinstance(n, Div):
        return n.num, n.den
    return n, Const(Fraction(1))


def constant_value(e: Expr):
    """The exact rational value of ``e`` if its normal form is a constant."""
    n = normalize(e)
    if isinstance(n, Const):
        return n.value
    if isinstance(n, Neg) and isinstance(n.arg, Const):
        return -n.arg.value
    if isinstance(n, Div) and isinstance(n.den, Const):
        num = constant_value(n.num)
        if num is not None:
            return num / n.den.value
    return None
