"""Relation ideals, constraint discovery by elimination, and verification.

The pipeline: a :class:`~algstat.netmodels.ParamMap` becomes a relation
ideal (one ``w - f(theta)`` generator per observable, rational observables
cleared with inverse-witness variables), parameters are eliminated under a
block order, and the surviving generators are the discovered constraints.
Every emitted constraint is re-checked symbolically against the map on the
spot; numeric validation at exact rational parameter points is a separate,
independent gate.

Only equality constraints are produced: the output describes the smallest
variety containing the model, not its semi-algebraic image.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from .groebner import Budget, Ideal, buchberger, eliminate
from .netmodels import Constraint, ConstraintSet, ParamMap, sample_interior_params
from .polyring import PolyRing, Polynomial, RationalFunction

VARIETY_BANNER = (
    "equality constraints only: this describes the smallest variety "
    "containing the model image, not the semi-algebraic image itself"
)


@dataclass
class RelationIdeal:
    ideal: Ideal
    param_names: list
    aux_names: list
    obs_symbols: list
    denominators: list  # (aux name, denominator polynomial) pairs

    @property
    def eliminated(self) -> list:
        return self.param_names + self.aux_names


def build_relation_ideal(pmap: ParamMap) -> RelationIdeal:
    """Assemble ``w - f`` (or cleared ``w*den - num``) generators.

    The ring puts parameters and inverse-witness auxiliaries in the
    leading block so the map's elimination order is built in.  One witness
    variable ``z*den - 1`` is added per distinct denominator.
    """
    params = list(pmap.param_ring.names)
    # collect distinct non-constant denominators in first-appearance order
    dens: list[Polynomial] = []
    for sym, expr in pmap.observables:
        if isinstance(expr, RationalFunction) and not expr.den.is_constant():
            if expr.den.is_zero:
                raise ZeroDivisionError(f"observable {sym} has zero denominator")
            if not any(expr.den == d for d in dens):
                dens.append(expr.den)
    aux = [f"z{i + 1}" for i in range(len(dens))]
    obs = pmap.symbols
    clash = set(obs) & set(params + aux)
    if clash:
        raise ValueError(f"observable symbols collide with parameters: {sorted(clash)}")
    ring = PolyRing(
        tuple(params) + tuple(aux) + tuple(obs), "block", block=len(params) + len(aux)
    )
    gens = []
    for sym, expr in pmap.observables:
        w = ring.var(sym)
        if isinstance(expr, RationalFunction):
            num = expr.num.reindex(ring)
            den = expr.den.reindex(ring)
            gens.append(w * den - num)
        else:
            gens.append(w - expr.reindex(ring))
    for name, den in zip(aux, dens):
        gens.append(ring.var(name) * den.reindex(ring) - ring.one)
    return RelationIdeal(Ideal(gens, ring), params, list(aux), list(obs),
                         list(zip(aux, dens)))


def relation_groebner_obs_first(pmap: ParamMap):
    """Groebner basis of a polynomial map's relation ideal, cheaply.

    Under a block order with the observables leading, the generators
    ``w - f(theta)`` have pairwise-coprime leading monomials, so they are
    already a Groebner basis; membership tests against the relation ideal
    then cost one division.  Only valid for all-polynomial maps.
    """
    for sym, expr in pmap.observables:
        if isinstance(expr, RationalFunction):
            raise ValueError("observables-first basis needs a polynomial map")
    params = list(pmap.param_ring.names)
    obs = pmap.symbols
    ring = PolyRing(tuple(obs) + tuple(params), "block", block=len(obs))
    gens = [ring.var(sym) - expr.reindex(ring) for sym, expr in pmap.observables]
    return buchberger(Ideal(gens, ring))


def symbolic_residual(pmap: ParamMap, constraint: Polynomial):
    """Substitute the map into a constraint over observable symbols.

    A zero result proves the constraint holds on the whole model image.
    Returns a Polynomial when all touched observables are polynomial, a
    RationalFunction otherwise.
    """
    known = dict(pmap.observables)
    used = constraint.variables_used()
    missing = used - set(known)
    if missing:
        raise ValueError(f"constraint uses symbols not in the map: {sorted(missing)}")
    assignment = {}
    for name in constraint.ring.names:
        if name in known:
            assignment[name] = known[name]
        else:
            assignment[name] = Fraction(0)  # unused foreign symbol
    out = constraint.substitute(assignment, target=pmap.param_ring)
    return out


def implicitize_model(pmap: ParamMap, budget: Budget | None = None) -> ConstraintSet:
    """Eliminate parameters from the relation ideal; emit observable constraints.

    Raises BudgetExceededError when the basis computation does not finish;
    a partial basis is never emitted.  Every returned constraint has
    already passed an exact symbolic-residual check against the map.
    """
    rel = build_relation_ideal(pmap)
    out = eliminate(rel.ideal, rel.eliminated, budget)
    constraints = []
    for k, g in enumerate(out.generators):
        g = g.primitive()
        res = symbolic_residual(pmap, g)
        if not res.is_zero:
            raise AssertionError(
                f"implicitization produced a non-vanishing constraint: {g}"
            )
        constraints.append(Constraint(g, "implicitized", f"imp{k + 1}"))
    return ConstraintSet(out.ring, constraints, dict(pmap.symbol_info))


@dataclass
class ConstraintResult:
    name: str
    max_residual: object  # Fraction in exact mode, float otherwise
    samples: int
    passed: bool
    note: str = ""


@dataclass
class ValidationReport:
    results: list
    samples: int
    tol: object
    exact: bool
    wall_time: float = 0.0
    banner: str = VARIETY_BANNER

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def render(self) -> str:
        mode = "exact rational" if self.exact else f"float, tol={self.tol}"
        lines = [
            f"# validation: {self.samples} samples, {mode}",
            f"# {self.banner}",
        ]
        width = max([len(r.name) for r in self.results] or [4])
        for r in self.results:
            verdict = "pass" if r.passed else "FAIL"
            res = r.max_residual
            res_s = "0" if res == 0 else (str(res) if self.exact else f"{res:.3e}")
            note = f"  ({r.note})" if r.note else ""
            lines.append(
                f"{r.name:<{width}}  max|residual| = {res_s}  "
                f"samples = {r.samples}  {verdict}{note}"
            )
        lines.append("overall: " + ("pass" if self.passed else "FAIL"))
        return "\n".join(lines)


def numeric_validate(
    pmap: ParamMap,
    cs: ConstraintSet,
    samples: int = 1000,
    tol: float | None = None,
    seed: int = 0,
) -> ValidationReport:
    """Evaluate constraints at sampled interior rational parameter points.

    Exact mode (``tol=None``) demands residuals equal to zero as rational
    numbers; float mode compares |residual| against ``tol > 0``.
    """
    exact = tol is None
    if not exact and not tol > 0:
        raise ValueError("tol must be positive in float mode")
    rng = random.Random(seed)
    known = set(pmap.symbols)
    t0 = time.monotonic()
    per = []
    for c in cs.constraints:
        used = c.poly.variables_used()
        missing = used - known
        if missing:
            raise ValueError(
                f"constraint {c.name or str(c.poly)!r} uses symbols not in "
                f"the map: {sorted(missing)}"
            )
        per.append((c, used))
    results = {id(c): [c.name or f"c{k + 1}", Fraction(0), True]
               for k, (c, _) in enumerate(per)}
    for _ in range(samples):
        point = sample_interior_params(pmap, rng)
        vals = {}
        for sym, expr in pmap.observables:
            vals[sym] = expr.evaluate(point)
        for c, used in per:
            full = {n: vals.get(n, Fraction(0)) for n in c.poly.ring.names}
            r = c.poly.evaluate(full)
            entry = results[id(c)]
            if exact:
                if abs(r) > abs(entry[1]):
                    entry[1] = r
                if r != 0:
                    entry[2] = False
            else:
                fr = abs(float(r))
                if fr > entry[1]:
                    entry[1] = fr
                if fr > tol:
                    entry[2] = False
    out = [
        ConstraintResult(name, res, samples, ok)
        for name, res, ok in (results[id(c)] for c, _ in per)
    ]
    return ValidationReport(out, samples, tol, exact, time.monotonic() - t0)


def constraints_to_text(cs: ConstraintSet, order="lex") -> str:
    """Constraint file: one canonical polynomial per line, provenance comments."""
    lines = [f"# {VARIETY_BANNER}"]
    last = None
    for c in cs.constraints:
        if c.provenance != last:
            lines.append(f"# provenance: {c.provenance}")
            last = c.provenance
        lines.append(c.poly.canonical_string(order))
    return "\n".join(lines) + "\n"


def constraints_from_text(text: str, ring: PolyRing) -> ConstraintSet:
    constraints = []
    prov = "user"
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("provenance:"):
                prov = body[len("provenance:"):].strip()
            continue
        try:
            p = ring.parse(line)
        except Exception as exc:
            raise ValueError(f"line {lineno}: {exc}") from exc
        constraints.append(Constraint(p, prov, f"line{lineno}"))
    return ConstraintSet(ring, constraints)
