"""Graphical-model structures and their polynomial parameterization maps.

A parsed network is turned into a :class:`ParamMap`: a list of observable
symbols, each bound to a polynomial (or rational function) in the network
parameters.  Downstream modules implicitize these maps, differentiate
them, and test their constraints against data.

Conventions, fixed throughout the package:

* state 0 is the dropped CPT state; free rows carry parameters for
  states 1..card-1 only, named ``t_<var>_<state>_<parent states>``;
* joint-space maps emit every observable cell (the redundant sum-to-one
  coordinate included) with symbols ``w<states>``;
* Gaussian maps use edge coefficients ``b_<child>_<parent>`` and
  conditional variances ``v_<var>``; covariance/precision observables are
  named ``s_<i>_<j>`` / ``t_<i>_<j>`` by 1-based position among the
  observed variables in declaration order (means are carried but never
  mapped).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .polyring import PolyRing, Polynomial, RationalFunction


class ModelFormatError(ValueError):
    """Malformed model text; message carries the offending line number."""


_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9]*\Z")


# ---------------------------------------------------------------------------
# structures


@dataclass(frozen=True)
class DiscreteVar:
    name: str
    card: int
    hidden: bool = False


@dataclass(frozen=True)
class GaussVar:
    name: str
    hidden: bool = False


@dataclass
class TieRule:
    """One tied CPT row: expressions per non-zero state, over reference params."""

    config: tuple
    exprs: dict  # state -> source text, later parsed to Polynomial


class BayesNet:
    def __init__(self, name: str, variables: Sequence[DiscreteVar],
                 parents: Mapping[str, Sequence[str]], ties=None):
        self.name = name
        self.variables = list(variables)
        self.by_name = {v.name: v for v in self.variables}
        order = {v.name: i for i, v in enumerate(self.variables)}
        self.parents = {
            v.name: sorted(parents.get(v.name, ()), key=order.__getitem__)
            for v in self.variables
        }
        self.ties: dict[str, list[TieRule]] = dict(ties or {})
        self._param_ring = None
        self._tie_polys = None

    # -- structure queries -------------------------------------------------

    @property
    def observed(self) -> list[DiscreteVar]:
        return [v for v in self.variables if not v.hidden]

    @property
    def hidden(self) -> list[DiscreteVar]:
        return [v for v in self.variables if v.hidden]

    def has_hidden(self) -> bool:
        return any(v.hidden for v in self.variables)

    def has_ties(self) -> bool:
        return bool(self.ties)

    def parent_cards(self, name: str) -> list[int]:
        return [self.by_name[p].card for p in self.parents[name]]

    def parent_configs(self, name: str):
        return itertools.product(*[range(c) for c in self.parent_cards(name)])

    def tied_configs(self, name: str) -> dict:
        return {t.config: t for t in self.ties.get(name, [])}

    def free_configs(self, name: str) -> list[tuple]:
        tied = self.tied_configs(name)
        return [cfg for cfg in self.parent_configs(name) if cfg not in tied]

    # -- parameters ----------------------------------------------------------

    @staticmethod
    def param_name(var: str, state: int, config: tuple) -> str:
        parts = ["t", var, str(state)] + [str(c) for c in config]
        return "_".join(parts)

    def param_names(self) -> list[str]:
        names = []
        for v in self.variables:
            for cfg in self.free_configs(v.name):
                for a in range(1, v.card):
                    names.append(self.param_name(v.name, a, cfg))
        return names

    def closed_form_dimension(self) -> int:
        """Parameter count: (card-1) summed over free parent configurations."""
        return sum(
            (v.card - 1) * len(self.free_configs(v.name)) for v in self.variables
        )

    def param_ring(self) -> PolyRing:
        if self._param_ring is None:
            self._param_ring = PolyRing(self.param_names(), "grevlex")
            self._tie_polys = {}
            for vname, rules in self.ties.items():
                allowed = {
                    self.param_name(vname, a, cfg)
                    for cfg in self.free_configs(vname)
                    for a in range(1, self.by_name[vname].card)
                }
                for rule in rules:
                    parsed = {}
                    for a, src in rule.exprs.items():
                        p = self._param_ring.parse(src)
                        bad = p.variables_used() - allowed
                        if bad:
                            raise ModelFormatError(
                                f"tie for {vname} row {rule.config} references "
                                f"non-reference parameters: {sorted(bad)}"
                            )
                        parsed[a] = p
                    self._tie_polys[(vname, rule.config)] = parsed
        return self._param_ring

    def cpt_entry(self, var: str, state: int, config: tuple) -> Polynomial:
        """P(var = state | parents = config) as a polynomial in the parameters."""
        ring = self.param_ring()
        card = self.by_name[var].card
        tied = self._tie_polys.get((var, tuple(config)))
        if tied is not None:
            if state > 0:
                return tied[state]
            return ring.one - sum(tied.values(), ring.zero)
        if state > 0:
            return ring.var(self.param_name(var, state, tuple(config)))
        total = ring.zero
        for a in range(1, card):
            total = total + ring.var(self.param_name(var, a, tuple(config)))
        return ring.one - total

    def __repr__(self):
        return f"BayesNet({self.name!r}, {len(self.variables)} variables)"


class GaussianNet:
    def __init__(self, name: str, variables: Sequence[GaussVar],
                 parents: Mapping[str, Sequence[str]]):
        self.name = name
        self.variables = list(variables)
        self.by_name = {v.name: v for v in self.variables}
        order = {v.name: i for i, v in enumerate(self.variables)}
        self.parents = {
            v.name: sorted(parents.get(v.name, ()), key=order.__getitem__)
            for v in self.variables
        }

    @property
    def observed(self) -> list[GaussVar]:
        return [v for v in self.variables if not v.hidden]

    @property
    def hidden(self) -> list[GaussVar]:
        return [v for v in self.variables if v.hidden]

    def has_hidden(self) -> bool:
        return any(v.hidden for v in self.variables)

    def param_names(self, fix_hidden_variances=False) -> list[str]:
        names = []
        for v in self.variables:
            for p in self.parents[v.name]:
                names.append(f"b_{v.name}_{p}")
        for v in self.variables:
            if fix_hidden_variances and v.hidden:
                continue
            names.append(f"v_{v.name}")
        return names

    def closed_form_dimension(self) -> int:
        return sum(len(self.parents[v.name]) for v in self.variables) + len(
            self.variables
        )

    def __repr__(self):
        return f"GaussianNet({self.name!r}, {len(self.variables)} variables)"


@dataclass
class RawMap:
    """A bare polynomial parameterization, for non-graphical surfaces."""

    name: str
    params: list[str]
    observables: list  # (symbol, source text) pairs until built


# ---------------------------------------------------------------------------
# parameterization maps


@dataclass(frozen=True)
class CellInfo:
    states: tuple


@dataclass(frozen=True)
class CondInfo:
    var: str
    state: int
    prefix_vars: tuple
    prefix_states: tuple


@dataclass(frozen=True)
class CovInfo:
    i: int  # 1-based positions among observed variables
    j: int
    var_i: str
    var_j: str


@dataclass
class ParamMap:
    """Observable symbols bound to expressions in the network parameters."""

    kind: str
    param_ring: PolyRing
    observables: list  # (symbol, Polynomial | RationalFunction)
    net: object = None
    symbol_info: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.param_ring.nvars

    @property
    def m(self) -> int:
        return len(self.observables)

    @property
    def symbols(self) -> list[str]:
        return [s for s, _ in self.observables]

    def expr(self, symbol: str):
        for s, e in self.observables:
            if s == symbol:
                return e
        raise KeyError(symbol)

    def obs_ring(self, order="grevlex") -> PolyRing:
        return PolyRing(self.symbols, order)

    def assignment(self) -> dict:
        return dict(self.observables)

    def evaluate(self, point) -> dict:
        """Observable values at a rational parameter point."""
        return {s: e.evaluate(point) for s, e in self.observables}


def state_suffix(states: Iterable[int], cards: Iterable[int]) -> str:
    states = list(states)
    if all(c <= 10 for c in cards):
        return "".join(str(s) for s in states)
    return "_".join(str(s) for s in states)


def cell_symbol(states: Iterable[int], cards: Sequence[int]) -> str:
    return "w" + state_suffix(states, cards)


def _full_joint_cells(net: BayesNet):
    """Polynomial for every full (hidden included) joint cell."""
    ring = net.param_ring()
    names = [v.name for v in net.variables]
    cells = {}
    for states in itertools.product(*[range(v.card) for v in net.variables]):
        by = dict(zip(names, states))
        p = ring.one
        for v in net.variables:
            cfg = tuple(by[q] for q in net.parents[v.name])
            p = p * net.cpt_entry(v.name, by[v.name], cfg)
        cells[states] = p
    return cells


def _observable_joint_cells(net: BayesNet):
    """Map observable state tuple -> polynomial, hidden states summed out."""
    full = _full_joint_cells(net)
    obs_idx = [i for i, v in enumerate(net.variables) if not v.hidden]
    ring = net.param_ring()
    cells: dict[tuple, Polynomial] = {}
    for states, poly in full.items():
        key = tuple(states[i] for i in obs_idx)
        cells[key] = cells.get(key, ring.zero) + poly
    return cells


def joint_space_map(net: BayesNet) -> ParamMap:
    """One polynomial per observable joint cell (all cells, summing to one)."""
    cells = _observable_joint_cells(net)
    cards = [v.card for v in net.observed]
    observables = []
    info = {}
    for states in itertools.product(*[range(c) for c in cards]):
        sym = cell_symbol(states, cards)
        observables.append((sym, cells[states]))
        info[sym] = CellInfo(tuple(states))
    return ParamMap(
        kind="joint",
        param_ring=net.param_ring(),
        observables=observables,
        net=net,
        symbol_info=info,
        notes={
            "sum_to_one": True,
            "redundant_coordinate": "all cells are emitted; they sum to 1, so "
            "one coordinate is redundant",
        },
    )


def local_structure_map(net: BayesNet) -> ParamMap:
    """Joint-space map of a net with tied CPT rows."""
    if not net.has_ties():
        raise ValueError("net has no tied rows; use joint_space_map")
    return joint_space_map(net)


def _reduced_marginal(net: BayesNet, evidence: Mapping[str, int]):
    """Marginal P(evidence) split into pulled-out CPT factors and a core sum.

    Barren variables (no evidence among their descendants) are dropped:
    their CPT rows sum out to one identically.  Evidence variables whose
    parents are all evidence contribute one fixed CPT factor each,
    returned as a keyed list so that identical factors of a numerator and
    denominator cancel structurally.  The core is the sum over the kept
    non-evidence variables of the product of the remaining CPT entries.
    """
    ring = net.param_ring()
    kept = {v.name for v in net.variables}
    children: dict[str, set] = {v.name: set() for v in net.variables}
    for child, ps in net.parents.items():
        for p in ps:
            children[p].add(child)
    changed = True
    while changed:
        changed = False
        for v in list(kept):
            if v not in evidence and not (children[v] & kept):
                kept.discard(v)
                changed = True
    pulled = []
    core_vars = []
    for v in net.variables:
        if v.name not in kept:
            continue
        if v.name in evidence and all(p in evidence for p in net.parents[v.name]):
            cfg = tuple(evidence[p] for p in net.parents[v.name])
            pulled.append((v.name, evidence[v.name], cfg))
        else:
            core_vars.append(v.name)
    sum_vars = [v for v in net.variables if v.name in kept and v.name not in evidence]
    core = ring.zero
    for states in itertools.product(*[range(v.card) for v in sum_vars]):
        by = dict(evidence)
        by.update({v.name: s for v, s in zip(sum_vars, states)})
        term = ring.one
        for name in core_vars:
            cfg = tuple(by[p] for p in net.parents[name])
            term = term * net.cpt_entry(name, by[name], cfg)
        core = core + term
    return pulled, core


def _reduced_conditional(net: BayesNet, context: Mapping[str, int],
                         var: str, state: int) -> RationalFunction:
    from collections import Counter

    ring = net.param_ring()
    num_pulled, num_core = _reduced_marginal(net, {**context, var: state})
    den_pulled, den_core = _reduced_marginal(net, dict(context))
    cn, cd = Counter(num_pulled), Counter(den_pulled)
    common = cn & cd
    cn -= common
    cd -= common
    if num_core == den_core:
        num_core = den_core = ring.one
    num, den = num_core, den_core
    for (name, s, cfg), mult in sorted(cn.items()):
        for _ in range(mult):
            num = num * net.cpt_entry(name, s, cfg)
    for (name, s, cfg), mult in sorted(cd.items()):
        for _ in range(mult):
            den = den * net.cpt_entry(name, s, cfg)
    if den.is_zero:
        raise ValueError(f"impossible context: P({dict(context)}) is identically zero")
    return RationalFunction(num, den)


def conditional_space_map(net: BayesNet, order: Sequence[str] | None = None) -> ParamMap:
    """Observables P(x = a | observable predecessors), as rational functions.

    ``order`` defaults to declaration order restricted to the observables;
    any supplied order must keep observable parents before their children.
    Each entry is a ratio of marginalized joint polynomials in reduced
    form: barren variables are summed out and CPT factors shared by
    numerator and denominator are cancelled, which keeps the expressions
    small without changing the function.
    """
    obs = [v.name for v in net.observed]
    if order is None:
        order = obs
    else:
        order = list(order)
        if sorted(order) != sorted(obs):
            raise ValueError("order must list exactly the observable variables")
        pos = {n: i for i, n in enumerate(order)}
        for child in obs:
            for p in net.parents[child]:
                if p in pos and pos[p] >= pos[child]:
                    raise ValueError(
                        f"order puts {child!r} before its observable parent {p!r}"
                    )
    cards = {v.name: v.card for v in net.observed}
    ring = net.param_ring()
    observables = []
    info = {}
    for k, vname in enumerate(order):
        prefix = order[:k]
        for pstates in itertools.product(*[range(cards[p]) for p in prefix]):
            context = dict(zip(prefix, pstates))
            for a in range(1, cards[vname]):
                suffix = state_suffix(pstates, [cards[p] for p in prefix])
                sym = f"p_{vname}_{a}" + (f"_{suffix}" if prefix else "")
                observables.append((sym, _reduced_conditional(net, context, vname, a)))
                info[sym] = CondInfo(vname, a, tuple(prefix), tuple(pstates))
    return ParamMap(
        kind="conditional",
        param_ring=ring,
        observables=observables,
        net=net,
        symbol_info=info,
        notes={"order": list(order)},
    )


def _unit_lower_inverse(B):
    """(I - B)^{-1} for strictly lower-triangular polynomial B."""
    n = len(B)
    ring = B[0][0].ring if n else None
    L = [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i):
            acc = ring.zero
            for k in range(j, i):
                if not B[i][k].is_zero:
                    acc = acc + B[i][k] * L[k][j]
            L[i][j] = acc
    return L


def _covariance_matrix(net: GaussianNet, fix_hidden_variances: bool):
    ring = PolyRing(net.param_names(fix_hidden_variances), "grevlex")
    names = [v.name for v in net.variables]
    n = len(names)
    B = [[ring.zero for _ in range(n)] for _ in range(n)]
    for i, child in enumerate(names):
        for p in net.parents[child]:
            B[i][names.index(p)] = ring.var(f"b_{child}_{p}")
    L = _unit_lower_inverse(B)
    v = []
    for var in net.variables:
        if fix_hidden_variances and var.hidden:
            v.append(ring.one)
        else:
            v.append(ring.var(f"v_{var.name}"))
    sigma = [[ring.zero for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1):
            acc = ring.zero
            for k in range(n):
                if not L[i][k].is_zero and not L[j][k].is_zero:
                    acc = acc + L[i][k] * v[k] * L[j][k]
            sigma[i][j] = sigma[j][i] = acc
    return ring, sigma


def gaussian_covariance_map(net: GaussianNet, fix_hidden_variances=False) -> ParamMap:
    """Covariances of the observed variables as polynomials in (b, v).

    Computed from the exact matrix identity Sigma = (I-B)^{-1} V (I-B)^{-T};
    the result coincides with the trek rule.  ``fix_hidden_variances``
    pins v = 1 for hidden variables (their scale is not identifiable).
    """
    ring, sigma = _covariance_matrix(net, fix_hidden_variances)
    names = [v.name for v in net.variables]
    obs_idx = [i for i, v in enumerate(net.variables) if not v.hidden]
    observables = []
    info = {}
    for a in range(len(obs_idx)):
        for b in range(a, len(obs_idx)):
            sym = f"s_{a + 1}_{b + 1}"
            observables.append((sym, sigma[obs_idx[a]][obs_idx[b]]))
            info[sym] = CovInfo(a + 1, b + 1, names[obs_idx[a]], names[obs_idx[b]])
    return ParamMap(
        kind="covariance",
        param_ring=ring,
        observables=observables,
        net=net,
        symbol_info=info,
        notes={"fixed_hidden_variances": bool(fix_hidden_variances)},
    )


def _symbolic_det(M, ring):
    """Determinant by cofactor expansion with column-subset memoization."""
    n = len(M)
    memo: dict[tuple, Polynomial] = {}

    def det(row: int, cols: tuple) -> Polynomial:
        if not cols:
            return ring.one
        key = cols
        if row == n - len(cols) and key in memo:
            return memo[key]
        acc = ring.zero
        for t, c in enumerate(cols):
            entry = M[row][c]
            if entry.is_zero:
                continue
            sub = det(row + 1, cols[:t] + cols[t + 1:])
            term = entry * sub
            acc = acc + term if t % 2 == 0 else acc - term
        if row == n - len(cols):
            memo[key] = acc
        return acc

    return det(0, tuple(range(n)))


def gaussian_precision_map(net: GaussianNet) -> ParamMap:
    """Entries of the observed-covariance inverse, as rational functions.

    Positions follow the observed variables in declaration order (1-based);
    limited to six observed variables because of symbolic inversion cost.
    """
    nobs = len(net.observed)
    if nobs > 6:
        raise ValueError("precision map supports at most 6 observed variables")
    ring, sigma = _covariance_matrix(net, fix_hidden_variances=False)
    obs_idx = [i for i, v in enumerate(net.variables) if not v.hidden]
    S = [[sigma[obs_idx[a]][obs_idx[b]] for b in range(nobs)] for a in range(nobs)]
    det = _symbolic_det(S, ring)
    if det.is_zero:
        raise ValueError("observed covariance has identically zero determinant")
    names = [v.name for v in net.variables]
    observables = []
    info = {}
    for a in range(nobs):
        for b in range(a, nobs):
            rows = tuple(r for r in range(nobs) if r != a)
            cols = tuple(c for c in range(nobs) if c != b)
            minor = _symbolic_det([[S[r][c] for c in cols] for r in rows], ring)
            cof = minor if (a + b) % 2 == 0 else -minor
            sym = f"t_{a + 1}_{b + 1}"
            observables.append((sym, RationalFunction(cof, det)))
            info[sym] = CovInfo(a + 1, b + 1, names[obs_idx[a]], names[obs_idx[b]])
    return ParamMap(
        kind="precision",
        param_ring=ring,
        observables=observables,
        net=net,
        symbol_info=info,
    )


def raw_param_map(raw: RawMap) -> ParamMap:
    ring = PolyRing(raw.params, "grevlex")
    observables = [(sym, ring.parse(src)) for sym, src in raw.observables]
    return ParamMap(kind="raw", param_ring=ring, observables=observables, net=raw)


def build_map(model, space: str | None = None, fix_hidden_variances: bool | None = None) -> ParamMap:
    """Dispatch a parsed model to the right map builder.

    ``space``: joint | conditional | covariance | precision (defaults to
    joint for discrete nets, covariance for Gaussian nets).
    """
    if isinstance(model, RawMap):
        return raw_param_map(model)
    if isinstance(model, BayesNet):
        space = space or "joint"
        if space == "joint":
            return joint_space_map(model)
        if space == "conditional":
            return conditional_space_map(model)
        raise ValueError(f"space {space!r} not available for discrete networks")
    if isinstance(model, GaussianNet):
        space = space or "covariance"
        if space == "covariance":
            fix = model.has_hidden() if fix_hidden_variances is None else fix_hidden_variances
            return gaussian_covariance_map(model, fix_hidden_variances=fix)
        if space == "precision":
            return gaussian_precision_map(model)
        raise ValueError(f"space {space!r} not available for Gaussian networks")
    raise TypeError(f"cannot build a map from {type(model).__name__}")


# ---------------------------------------------------------------------------
# constraints


@dataclass
class Constraint:
    poly: Polynomial
    provenance: str = "user"
    name: str = ""


@dataclass
class ConstraintSet:
    ring: PolyRing
    constraints: list
    symbol_info: dict = field(default_factory=dict)

    def __iter__(self):
        return iter(self.constraints)

    def __len__(self):
        return len(self.constraints)

    def polys(self) -> list[Polynomial]:
        return [c.poly for c in self.constraints]


def ci_constraints(cards: Sequence[int], x: int, y: int,
                   given: Sequence[int] = ()) -> ConstraintSet:
    """Determinantal constraints for X independent of Y given Z.

    One 2x2-minor polynomial per conditioning context and per pair of
    states of X and of Y; variables outside X, Y, Z are marginalized by
    summing joint cells, so the saturated case yields binomial quadratics.
    """
    cards = list(cards)
    given = list(given)
    used = [x, y] + given
    if len(set(used)) != len(used):
        raise ValueError("X, Y, Z must be disjoint")
    for i in used:
        if not 0 <= i < len(cards):
            raise ValueError(f"variable index {i} out of range")
    free = [i for i in range(len(cards)) if i not in used]
    ring = PolyRing(
        [cell_symbol(states, cards) for states in
         itertools.product(*[range(c) for c in cards])],
        "grevlex",
    )
    info = {
        cell_symbol(states, cards): CellInfo(tuple(states))
        for states in itertools.product(*[range(c) for c in cards])
    }

    def marginal(xa: int, yb: int, ctx: tuple) -> Polynomial:
        fixed = {x: xa, y: yb}
        fixed.update(dict(zip(given, ctx)))
        acc = ring.zero
        for rest in itertools.product(*[range(cards[i]) for i in free]):
            states = [0] * len(cards)
            for i, s in fixed.items():
                states[i] = s
            for i, s in zip(free, rest):
                states[i] = s
            acc = acc + ring.var(cell_symbol(states, cards))
        return acc

    out = []
    for ctx in itertools.product(*[range(cards[i]) for i in given]):
        for a1, a2 in itertools.combinations(range(cards[x]), 2):
            for b1, b2 in itertools.combinations(range(cards[y]), 2):
                p = (
                    marginal(a1, b1, ctx) * marginal(a2, b2, ctx)
                    - marginal(a1, b2, ctx) * marginal(a2, b1, ctx)
                )
                ctx_s = ",".join(str(c) for c in ctx)
                nm = f"ci_x{x}({a1}{a2})_x{y}({b1}{b2})" + (f"_z[{ctx_s}]" if given else "")
                out.append(Constraint(p, "ci", nm))
    return ConstraintSet(ring, out, info)


@dataclass
class LogOddsRelation:
    """Integer linear relation on the log-odds vector eta."""

    coeffs: dict  # state tuple -> integer coefficient (reference cell omitted)
    source: str = ""

    def render(self) -> str:
        parts = []
        for states, c in sorted(self.coeffs.items()):
            if c == 0:
                continue
            label = "eta[" + "".join(str(s) for s in states) + "]"
            if not parts:
                parts.append(label if c == 1 else f"-{label}" if c == -1 else f"{c}*{label}")
            else:
                sign = "+ " if c > 0 else "- "
                mag = abs(c)
                parts.append(sign + (label if mag == 1 else f"{mag}*{label}"))
        return (" ".join(parts) if parts else "0") + " = 0"


def log_odds_linearize(cs: ConstraintSet) -> list[LogOddsRelation]:
    """Turn binomial cell constraints w_i*w_j - w_k*w_l into eta relations.

    The all-zero cell is the log-odds reference and drops out with
    coefficient zero.  Non-binomial constraints are rejected.
    """
    relations = []
    for c in cs.constraints:
        p = c.poly.primitive()
        terms = p.terms
        if len(terms) != 2 or terms[0][0] != -terms[1][0] or abs(terms[0][0]) != 1:
            raise ValueError(
                f"constraint {c.name or str(p)!r} is not a binomial difference"
            )
        del p
        coeffs: dict[tuple, int] = {}
        for coef, exps in terms:
            if sum(exps) != 2:
                raise ValueError(
                    f"constraint {c.name or str(p)!r} is not quadratic in the cells"
                )
            sign = 1 if coef > 0 else -1
            for i, e in enumerate(exps):
                if not e:
                    continue
                sym = cs.ring.names[i]
                inf = cs.symbol_info.get(sym)
                if not isinstance(inf, CellInfo):
                    raise ValueError(f"symbol {sym!r} is not a joint cell")
                if any(inf.states):  # reference cell has eta = 0
                    coeffs[inf.states] = coeffs.get(inf.states, 0) + sign * e
        coeffs = {s: v for s, v in coeffs.items() if v}
        # orient so the largest state tuple carries a positive coefficient
        if coeffs and coeffs[max(coeffs)] < 0:
            coeffs = {s: -v for s, v in coeffs.items()}
        relations.append(LogOddsRelation(coeffs, c.name))
    return relations


def log_odds_vector(dist: Mapping[tuple, Fraction]):
    """eta_i = log(w_i / w_0) for a positive distribution over cells."""
    import math

    ref = tuple(0 for _ in next(iter(dist)))
    w0 = dist[ref]
    return {s: math.log(w / w0) for s, w in dist.items() if s != ref}


# ---------------------------------------------------------------------------
# named constraint families for the four-observable chain layout (A,B,C,D
# binary, in that order); these are what hidden-cause structures on that
# backbone entail over the observables


def _abcd_conditional_ring():
    names = [f"p_B_1_{a}" for a in range(2)]
    names += [f"p_D_1_{a}{b}{c}" for a in range(2) for b in range(2) for c in range(2)]
    names += [f"p_C_1_{a}{b}" for a in range(2) for b in range(2)]
    ring = PolyRing(names, "grevlex")
    info = {}
    for a in range(2):
        info[f"p_B_1_{a}"] = CondInfo("B", 1, ("A",), (a,))
        for b in range(2):
            info[f"p_C_1_{a}{b}"] = CondInfo("C", 1, ("A", "B"), (a, b))
            for c in range(2):
                info[f"p_D_1_{a}{b}{c}"] = CondInfo("D", 1, ("A", "B", "C"), (a, b, c))
    return ring, info


def verma_constraints_conditional() -> ConstraintSet:
    """The two sum_B P(B|A) P(D|A,B,C) equalities over conditional symbols.

    For each state c of C: the sum over B of P(B|A)(P of D given A,B,c)
    takes the same value at A=0 and A=1.  Stated for D=1; the D=0 version
    is its negative because the B-terms sum to one.
    """
    ring, info = _abcd_conditional_ring()
    out = []
    for c in range(2):
        acc = ring.zero
        for a_sign, a in ((1, 0), (-1, 1)):
            pb1 = ring.var(f"p_B_1_{a}")
            for b in range(2):
                bterm = pb1 if b == 1 else ring.one - pb1
                acc = acc + a_sign * bterm * ring.var(f"p_D_1_{a}{b}{c}")
        out.append(Constraint(acc, "verma", f"verma_c{c}"))
    return ConstraintSet(ring, out, info)


def ci_ac_given_b_conditional() -> ConstraintSet:
    """A independent of C given B, stated on conditional symbols."""
    ring, info = _abcd_conditional_ring()
    out = []
    for b in range(2):
        p = ring.var(f"p_C_1_0{b}") - ring.var(f"p_C_1_1{b}")
        out.append(Constraint(p, "ci", f"ci_ac_b{b}"))
    return ConstraintSet(ring, out, info)


def verma_constraints_joint() -> ConstraintSet:
    """Cleared-numerator Verma constraints over the 16 joint cells.

    P(B|A) and P(D|A,B,C) are written as ratios of cell marginals and the
    shared denominator is cleared, leaving one polynomial per state of C.
    """
    cards = [2, 2, 2, 2]
    ring = PolyRing(
        [cell_symbol(s, cards) for s in itertools.product(range(2), repeat=4)],
        "grevlex",
    )
    info = {
        cell_symbol(s, cards): CellInfo(tuple(s))
        for s in itertools.product(range(2), repeat=4)
    }

    def cells(**fixed):
        acc = ring.zero
        for s in itertools.product(range(2), repeat=4):
            by = dict(zip("ABCD", s))
            if all(by[k] == v for k, v in fixed.items()):
                acc = acc + ring.var(cell_symbol(s, cards))
        return acc

    out = []
    for c in range(2):
        num = {}
        den = {}
        for a in (0, 1):
            m_a = cells(A=a)
            s0 = cells(A=a, B=0, C=c)
            s1 = cells(A=a, B=1, C=c)
            d10 = ring.var(cell_symbol((a, 0, c, 1), cards))
            d11 = ring.var(cell_symbol((a, 1, c, 1), cards))
            # sum over B with the common denominator m_a * s0 * s1
            num[a] = cells(A=a, B=0) * d10 * s1 + cells(A=a, B=1) * d11 * s0
            den[a] = m_a * s0 * s1
        cleared = num[0] * den[1] - num[1] * den[0]
        out.append(Constraint(cleared.primitive(), "verma", f"verma_c{c}"))
    return ConstraintSet(ring, out, info)


# ---------------------------------------------------------------------------
# parameter sampling


def sample_interior_params(pmap: ParamMap, rng, denominator: int = 10**4,
                           max_tries: int = 200) -> dict:
    """Exact rational parameter point in the interior of the natural domain.

    Discrete CPT rows: draw integers from [1, D] per state and normalize
    within the row.  Gaussian: nonzero rationals in [-3, 3] for edge
    coefficients, (0, 3] for variances.  Raw maps: nonzero rationals in
    [-3, 3].  Tied rows must land in (0, 1); failure after ``max_tries``
    resamples is an error, never silently skipped.
    """
    net = pmap.net
    if isinstance(net, BayesNet):
        for _ in range(max_tries):
            point = {}
            for v in net.variables:
                for cfg in net.free_configs(v.name):
                    draws = [rng.randint(1, denominator) for _ in range(v.card)]
                    total = sum(draws)
                    for a in range(1, v.card):
                        point[net.param_name(v.name, a, cfg)] = Fraction(draws[a], total)
            if _tied_rows_feasible(net, point):
                return point
        raise ValueError(
            "sampler cannot satisfy positivity of the tied CPT rows "
            f"after {max_tries} attempts"
        )
    if isinstance(net, GaussianNet):
        point = {}
        for name in pmap.param_ring.names:
            if name.startswith("b_"):
                num = 0
                while num == 0:
                    num = rng.randint(-3 * denominator, 3 * denominator)
                point[name] = Fraction(num, denominator)
            else:
                point[name] = Fraction(rng.randint(1, 3 * denominator), denominator)
        return point
    point = {}
    for name in pmap.param_ring.names:
        num = 0
        while num == 0:
            num = rng.randint(-3 * denominator, 3 * denominator)
        point[name] = Fraction(num, denominator)
    return point


def _tied_rows_feasible(net: BayesNet, point: dict) -> bool:
    # tied rows may sit on the simplex boundary (noisy-or pins rows to 0),
    # but must still describe probabilities
    if not net.has_ties():
        return True
    net.param_ring()
    for (vname, cfg), exprs in net._tie_polys.items():
        total = Fraction(0)
        for a, p in exprs.items():
            val = p.evaluate(point)
            if not (0 <= val <= 1):
                return False
            total += val
        if total > 1:
            return False
    return True


# ---------------------------------------------------------------------------
# model text parsing


def parse_model(text: str):
    """Parse the line-oriented model format.

    Kinds: ``discrete network``, ``gaussian network``, ``map``.  Variable
    declaration order is the topological order; every edge must point
    forward in it.
    """
    lines = text.splitlines()
    kind = None
    name = ""
    dvars: list[DiscreteVar] = []
    gvars: list[GaussVar] = []
    params: list[str] = []
    raw_obs: list = []
    parents: dict[str, list[str]] = {}
    ties: dict[str, list[TieRule]] = {}
    seen: set[str] = set()

    def err(lineno, msg):
        raise ModelFormatError(f"line {lineno}: {msg}")

    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if kind is None:
            if toks[:2] == ["discrete", "network"] and len(toks) == 3:
                kind, name = "discrete", toks[2]
            elif toks[:2] == ["gaussian", "network"] and len(toks) == 3:
                kind, name = "gaussian", toks[2]
            elif toks[0] == "map" and len(toks) == 2:
                kind, name = "map", toks[1]
            else:
                err(lineno, "expected 'discrete network NAME', "
                            "'gaussian network NAME', or 'map NAME'")
            continue
        if toks[0] == "var":
            rest = toks[1:]
            if not rest:
                err(lineno, "var needs a name")
            vname = rest[0]
            if not _NAME_RE.match(vname):
                err(lineno, f"invalid variable name {vname!r} "
                            "(letters then letters/digits; no underscores)")
            if vname in seen:
                err(lineno, f"duplicate variable {vname!r}")
            seen.add(vname)
            hidden = "hidden" in rest[1:]
            flags = [t for t in rest[1:] if t != "hidden"]
            if kind == "discrete":
                if len(flags) != 2 or flags[0] != "states":
                    err(lineno, "discrete var needs 'states <k>'")
                try:
                    card = int(flags[1])
                except ValueError:
                    err(lineno, f"bad state count {flags[1]!r}")
                if card < 2:
                    err(lineno, f"cardinality must be at least 2, got {card}")
                dvars.append(DiscreteVar(vname, card, hidden))
            elif kind == "gaussian":
                if flags:
                    err(lineno, f"unexpected tokens {flags} on gaussian var")
                gvars.append(GaussVar(vname, hidden))
            else:
                err(lineno, "map blocks declare 'param' and 'obs', not 'var'")
            parents[vname] = []
        elif toks[0] == "param" and kind == "map":
            if len(toks) != 2:
                err(lineno, "param needs exactly one name")
            if toks[1] in params:
                err(lineno, f"duplicate parameter {toks[1]!r}")
            params.append(toks[1])
        elif toks[0] == "obs" and kind == "map":
            if "=" not in line:
                err(lineno, "obs needs '<symbol> = <polynomial>'")
            head, src = line.split("=", 1)
            sym = head.split()[1]
            raw_obs.append((lineno, sym, src.strip()))
        elif toks[0] == "edge":
            if len(toks) != 4 or toks[2] != "->":
                err(lineno, "edge syntax is 'edge A -> B'")
            a, b = toks[1], toks[3]
            for q in (a, b):
                if q not in seen:
                    err(lineno, f"unknown variable {q!r}")
            order = [v.name for v in (dvars if kind == "discrete" else gvars)]
            if order.index(a) >= order.index(b):
                err(lineno, f"edge {a} -> {b} points backward in the "
                            "declaration order (cycle or back-edge)")
            if a in parents[b]:
                err(lineno, f"duplicate edge {a} -> {b}")
            parents[b].append(a)
        elif toks[0] == "tie" and kind == "discrete":
            m = re.match(
                r"tie\s+(\w+)\s+row\s+([0-9,\s]+?)(?:\s+state\s+(\d+))?\s*=\s*(.+)\Z",
                line,
            )
            if not m:
                err(lineno, "tie syntax is 'tie VAR row c1,c2[ state a] = expr'")
            vname, cfg_s, state_s, src = m.groups()
            if vname not in seen:
                err(lineno, f"unknown variable {vname!r}")
            var = next(v for v in dvars if v.name == vname)
            try:
                cfg = tuple(int(t) for t in cfg_s.split(","))
            except ValueError:
                err(lineno, f"bad row configuration {cfg_s!r}")
            state = int(state_s) if state_s else 1
            if state_s is None and var.card != 2:
                err(lineno, f"{vname} has {var.card} states; tie lines must "
                            "name the state")
            if not 1 <= state < var.card:
                err(lineno, f"tie state must be in 1..{var.card - 1}")
            rules = ties.setdefault(vname, [])
            for r in rules:
                if r.config == cfg:
                    if state in r.exprs:
                        err(lineno, f"duplicate tie for {vname} row {cfg} state {state}")
                    r.exprs[state] = src
                    break
            else:
                rules.append(TieRule(cfg, {state: src}))
        else:
            err(lineno, f"unrecognized directive {toks[0]!r}")

    if kind is None:
        raise ModelFormatError("empty model file")
    if kind == "map":
        if not params:
            raise ModelFormatError("map declares no parameters")
        if not raw_obs:
            raise ModelFormatError("map declares no observables")
        ring = PolyRing(params, "grevlex")
        obs = []
        for lineno, sym, src in raw_obs:
            try:
                ring.parse(src)
            except Exception as exc:
                err(lineno, str(exc))
            obs.append((sym, src))
        return RawMap(name, params, obs)
    if kind == "discrete":
        if not dvars:
            raise ModelFormatError("network declares no variables")
        if all(v.hidden for v in dvars):
            raise ModelFormatError("all variables are hidden; nothing observable")
        net = BayesNet(name, dvars, parents, ties)
        for vname, rules in ties.items():
            var = net.by_name[vname]
            cards = net.parent_cards(vname)
            for r in rules:
                if len(r.config) != len(cards) or any(
                    not (0 <= c < k) for c, k in zip(r.config, cards)
                ):
                    raise ModelFormatError(
                        f"tie row {r.config} does not match the parents of {vname}"
                    )
                missing = [a for a in range(1, var.card) if a not in r.exprs]
                if missing:
                    raise ModelFormatError(
                        f"tie for {vname} row {r.config} missing states {missing}"
                    )
        net.param_ring()  # validates tie expressions eagerly
        return net
    if not gvars:
        raise ModelFormatError("network declares no variables")
    if all(v.hidden for v in gvars):
        raise ModelFormatError("all variables are hidden; nothing observable")
    return GaussianNet(name, gvars, parents)
