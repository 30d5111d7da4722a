"""Domain guards and seeded rejection sampling."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .evaluate import evaluate_many
from .nodes import Const, Div, Func, Pow, Quad, as_expr, walk
from .normal import normalize, numer_denom
from .printer import to_text

DEFAULT_SEED = 20240229
DEFAULT_BOX = (-3.0, 3.0)
TIME_BOX = (0.0, 3.0)
SAMPLING_MARGIN = 1e-3
MAX_DRAWS = 50


class EmptyRegionError(ValueError):
    pass


@dataclass(frozen=True)
class Guard:
    """``expr != 0`` or ``expr > 0``."""

    expr: object
    relation: str = "!="

    def __post_init__(self):
        if self.relation not in ("!=", ">"):
            raise ValueError(f"unsupported guard relation {self.relation!r}")

    @property
    def text(self):
        return f"{to_text(self.expr)} {self.relation} 0"

    def __str__(self):
        return self.text

    def satisfied(self, values, margin=0.0):
        """Vectorized check on already evaluated guard values."""
        with np.errstate(invalid="ignore"):
            if self.relation == "!=":
                return np.isfinite(values) & (np.abs(values) > margin)
            return np.isfinite(values) & (values > margin)


def parse_guard(text: str) -> Guard:
    for rel in ("!=", ">"):
        if rel in text:
            lhs, rhs = text.split(rel, 1)
            if normalize(as_expr(rhs.strip())) != Const(Fraction(0)):
                lhs = f"({lhs}) - ({rhs})"
            return Guard(normalize(as_expr(lhs.strip())), rel)
    raise ValueError(f"guard must read '<expr> != 0' or '<expr> > 0': {text!r}")


def as_guard(g) -> Guard:
    if isinstance(g, Guard):
        return g
    if isinstance(g, str):
        return parse_guard(g)
    return Guard(normalize(as_expr(g)), "!=")


def natural_guards(e) -> list:
    """Guards under which every subterm of ``e`` is defined."""
    found = []
    for node in walk(e):
        if isinstance(node, Div):
            found.append(Guard(node.den, "!="))
        elif isinstance(node, Pow):
            if node.exp.denominator % 2 == 0:
                found.append(Guard(node.base, ">"))
            elif node.exp < 0:
                found.append(Guard(node.base, "!="))
        elif isinstance(node, Func):
            if node.name in ("ln", "sqrt"):
                found.append(Guard(node.arg, ">"))
        elif isinstance(node, Quad):
            found.extend(natural_guards(node.lower))
            found.extend(natural_guards(node.upper))
    return simplify_guards(found)


def simplify_guards(guards) -> list:
    """Normalize, drop constant-true guards, deduplicate by text (order kept)."""
    out = []
    seen = set()
    for g in guards:
        g = as_guard(g)
        expr = normalize(g.expr)
        if g.relation == "!=":
            num, _ = numer_denom(expr)
            expr = num
        if isinstance(expr, Const):
            if (g.relation == "!=" and expr.value != 0) or (g.relation == ">" and expr.value > 0):
                continue
            raise EmptyRegionError(f"guard {g.text} can never hold")
        if not expr.symbols:
            from .evaluate import evaluate

            v = evaluate(expr, {})
            if (g.relation == "!=" and v != 0) or (g.relation == ">" and v > 0):
                continue
            raise EmptyRegionError(f"guard {g.text} can never hold")
        g = Guard(expr, g.relation)
        if g.text not in seen:
            seen.add(g.text)
            out.append(g)
    return out


def default_box(name: str):
    return TIME_BOX if name == "t" else DEFAULT_BOX


def sample_region(symbols, guards=(), n=200, seed=DEFAULT_SEED, box=None, bindings=None,
                  extra=(), margin=SAMPLING_MARGIN):
    """Draw ``n`` seeded points satisfying every guard.

    ``symbols`` are the free names to sample; ``bindings`` fixes others.
    ``extra`` lists expressions that must evaluate finitely at every kept
    point.  Returns a dict of float arrays.
    """
    guards = [as_guard(g) for g in guards]
    bindings = dict(bindings or {})
    box = dict(box or {})
    names = sorted(set(symbols) - bindings.keys())
    for g in guards:
        names = sorted(set(names) | (g.expr.symbols - bindings.keys()))
    rng = np.random.default_rng(seed)
    kept = {k: [] for k in names}
    count = 0
    batch = max(4 * n, 64)
    for _ in range(MAX_DRAWS):
        cols = {}
        for k in names:
            lo, hi = box.get(k, default_box(k))
            cols[k] = rng.uniform(lo, hi, size=batch)
        env = {**{k: np.full(batch, float(v)) for k, v in bindings.items()}, **cols}
        ok = np.ones(batch, dtype=bool)
        for g in guards:
            ok &= g.satisfied(evaluate_many(g.expr, env), margin)
        for e in extra:
            ok &= np.isfinite(evaluate_many(e, env))
        for k in names:
            kept[k].extend(cols[k][ok].tolist())
        count += int(ok.sum())
        if count >= n:
            break
    if count < n:
        raise EmptyRegionError(
            f"only {count} of {n} sample points satisfy the guards "
            + ", ".join(g.text for g in guards))
    out = {k: np.array(v[:n]) for k, v in kept.items()}
    for k, v in bindings.items():
        out[k] = np.full(n, float(v))
    return out


def rational_points(names, guards=(), n=8, seed=DEFAULT_SEED, box=None, bindings=None, extra=()):
    """Seeded points with small-denominator rational coordinates."""
    floats = sample_region(names, guards, n=n, seed=seed, box=box, bindings=bindings, extra=extra,
                           margin=5e-2)
    pts = []
    for i in range(n):
        p = {}
        for k, col in floats.items():
            if bindings and k in bindings:
                p[k] = Fraction(bindings[k])
            else:
                p[k] = Fraction(col[i]).limit_denominator(16)
        pts.append(p)
    return pts
