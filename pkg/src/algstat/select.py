"""Likelihood fitting, BIC with algebraic dimension, and constraint tests.

The exact-arithmetic modules answer "what does structure imply"; this one
confronts those implications with data.  BIC uses the generic Jacobian
rank as the dimension, not the raw parameter count.  Constraint fit is
measured by a nonparametric bootstrap z-test of the plug-in residual: one
mechanism that serves determinant, tetrad, and Verma-style constraints
alike, and is invariant under rescaling any constraint polynomial.
"""

from __future__ import annotations

import io
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .geometry import model_dimension
from .netmodels import (
    BayesNet,
    CellInfo,
    CondInfo,
    ConstraintSet,
    CovInfo,
    GaussianNet,
)
from .polyring import Polynomial


class DataError(ValueError):
    pass


@dataclass
class Dataset:
    kind: str  # "discrete" | "gaussian"
    columns: list
    rows: np.ndarray
    cards: list | None = None

    def __post_init__(self):
        self.rows = np.asarray(self.rows)
        if self.rows.ndim != 2 or self.rows.shape[1] != len(self.columns):
            raise DataError("rows must be an N x k array matching the columns")
        if self.N < 1:
            raise DataError("dataset is empty")
        if self.kind == "discrete":
            if self.cards is None:
                self.cards = [int(self.rows[:, j].max()) + 1 for j in range(self.k)]
            self.rows = self.rows.astype(np.int64)
            for j, c in enumerate(self.cards):
                col = self.rows[:, j]
                if col.min() < 0 or col.max() >= c:
                    raise DataError(
                        f"column {self.columns[j]!r} has states outside 0..{c - 1}"
                    )
        elif self.kind == "gaussian":
            self.rows = self.rows.astype(np.float64)
        else:
            raise DataError(f"unknown dataset kind {self.kind!r}")

    @property
    def N(self) -> int:
        return self.rows.shape[0]

    @property
    def k(self) -> int:
        return self.rows.shape[1]

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, self.columns.index(name)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(self.columns) + "\n")
        if self.kind == "discrete":
            for row in self.rows:
                buf.write(",".join(str(int(x)) for x in row) + "\n")
        else:
            for row in self.rows:
                buf.write(",".join(repr(float(x)) for x in row) + "\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, kind: str | None = None, cards=None) -> "Dataset":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if len(lines) < 2:
            raise DataError("CSV needs a header line and at least one row")
        columns = [c.strip() for c in lines[0].split(",")]
        cells = [ln.split(",") for ln in lines[1:]]
        if any(len(r) != len(columns) for r in cells):
            raise DataError("ragged CSV row")
        if kind is None:
            flat = [x.strip() for row in cells for x in row]
            kind = "discrete" if all(x.lstrip("-").isdigit() for x in flat) else "gaussian"
        if kind == "discrete":
            rows = np.array([[int(x) for x in r] for r in cells], dtype=np.int64)
        else:
            rows = np.array([[float(x) for x in r] for r in cells], dtype=np.float64)
        return cls(kind, columns, rows, cards=list(cards) if cards else None)


# ---------------------------------------------------------------------------
# sampling from networks


def _numeric_cpts(net: BayesNet, params: Mapping[str, object]) -> dict:
    """Per-variable CPT arrays (configs x states) at a numeric parameter point."""
    point = {k: Fraction(v) for k, v in params.items()}
    out = {}
    for v in net.variables:
        cards = net.parent_cards(v.name)
        n_cfg = int(np.prod(cards)) if cards else 1
        table = np.zeros((n_cfg, v.card))
        for idx, cfg in enumerate(itertools.product(*[range(c) for c in cards])):
            for a in range(v.card):
                table[idx, a] = float(net.cpt_entry(v.name, a, cfg).evaluate(point))
        if (table < -1e-12).any() or (np.abs(table.sum(axis=1) - 1) > 1e-9).any():
            raise DataError(f"parameters give {v.name} an invalid CPT row")
        out[v.name] = np.clip(table, 0.0, 1.0)
    return out


def _config_index(net: BayesNet, name: str, columns: dict) -> np.ndarray:
    cards = net.parent_cards(name)
    if not cards:
        return np.zeros(len(next(iter(columns.values()))) if columns else 1, dtype=np.int64)
    idx = None
    for p, c in zip(net.parents[name], cards):
        col = columns[p]
        idx = col if idx is None else idx * c + col
    return idx


def sample_discrete(net: BayesNet, params: Mapping[str, object], n: int,
                    seed: int = 0) -> Dataset:
    """Ancestral sampling; hidden columns are dropped from the output."""
    rng = np.random.default_rng(seed)
    cpts = _numeric_cpts(net, params)
    columns: dict[str, np.ndarray] = {}
    for v in net.variables:
        cfg = _config_index(net, v.name, columns)
        if cfg.shape == (1,) and n != 1:
            cfg = np.zeros(n, dtype=np.int64)
        table = cpts[v.name]
        u = rng.random(n)
        cum = np.cumsum(table[cfg], axis=1)
        columns[v.name] = (u[:, None] > cum).sum(axis=1).astype(np.int64)
    obs = [v.name for v in net.observed]
    rows = np.column_stack([columns[o] for o in obs])
    return Dataset("discrete", obs, rows, cards=[net.by_name[o].card for o in obs])


def sample_gaussian(net: GaussianNet, params: Mapping[str, float], n: int,
                    seed: int = 0) -> Dataset:
    """Linear-Gaussian ancestral sampling (zero means); hidden columns dropped."""
    rng = np.random.default_rng(seed)
    columns: dict[str, np.ndarray] = {}
    for v in net.variables:
        x = np.zeros(n)
        for p in net.parents[v.name]:
            x = x + float(params[f"b_{v.name}_{p}"]) * columns[p]
        var = float(params[f"v_{v.name}"])
        if var <= 0:
            raise DataError(f"conditional variance of {v.name} must be positive")
        x = x + rng.normal(0.0, math.sqrt(var), n)
        columns[v.name] = x
    obs = [v.name for v in net.observed]
    return Dataset("gaussian", obs, np.column_stack([columns[o] for o in obs]))


# ---------------------------------------------------------------------------
# maximum likelihood


@dataclass
class FitResult:
    params: dict
    loglik: float
    converged: bool
    restarts_used: int = 0
    iterations: int = 0

    def __post_init__(self):
        if not math.isfinite(self.loglik):
            raise ValueError("log-likelihood must be finite")


def _observed_counts(net: BayesNet, data: Dataset) -> dict:
    columns = {name: data.column(name) for name in data.columns}
    counts = {}
    for v in net.variables:
        cards = net.parent_cards(v.name)
        n_cfg = int(np.prod(cards)) if cards else 1
        cfg = _config_index(net, v.name, columns)
        if cfg.shape == (1,) and data.N != 1:
            cfg = np.zeros(data.N, dtype=np.int64)
        flat = cfg * v.card + columns[v.name]
        counts[v.name] = np.bincount(flat, minlength=n_cfg * v.card).reshape(
            n_cfg, v.card
        )
    return counts


def mle_observed(net: BayesNet, data: Dataset, eps: Fraction | None = None) -> FitResult:
    """Closed-form CPT estimates: add-epsilon smoothed relative frequencies.

    ``eps`` defaults to 1/(2N) so sparse tables stay interior with a finite
    log-likelihood; pass 0 for bare relative frequencies.  Parameters come
    back as exact rationals.
    """
    if net.has_hidden():
        raise ValueError("net has hidden variables; use em_fit")
    if net.has_ties():
        raise ValueError("closed-form estimation needs free CPTs")
    if set(n.name for n in net.variables) - set(data.columns):
        raise DataError("dataset is missing variables of the network")
    eps = Fraction(1, 2 * data.N) if eps is None else Fraction(eps)
    counts = _observed_counts(net, data)
    params: dict[str, Fraction] = {}
    loglik = 0.0
    for v in net.variables:
        table = counts[v.name]
        for idx, cfg in enumerate(
            itertools.product(*[range(c) for c in net.parent_cards(v.name)])
        ):
            row = table[idx]
            total = int(row.sum())
            denom = total + eps * v.card
            for a in range(v.card):
                theta = (int(row[a]) + eps) / denom if denom else Fraction(1, v.card)
                if a > 0:
                    params[net.param_name(v.name, a, cfg)] = theta
                if row[a]:
                    loglik += int(row[a]) * math.log(theta)
    return FitResult(params, loglik, True)


def _dirichlet_rows(rng, shape):
    g = rng.gamma(1.0, 1.0, shape)
    return g / g.sum(axis=-1, keepdims=True)


def em_fit(net: BayesNet, data: Dataset, restarts: int = 10, tol: float = 1e-8,
           max_iter: int = 2000, seed: int = 0) -> FitResult:
    """EM for hidden-variable networks with free CPTs.

    Deterministic for a fixed seed; the log-likelihood is asserted
    non-decreasing every iteration, and the best of ``restarts`` seeded
    uniform-Dirichlet initializations is returned.  Non-convergence within
    ``max_iter`` is reported on the result, never silently dropped.
    """
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    if net.has_ties():
        raise ValueError("EM supports free CPTs only")
    hidden = net.hidden
    if not hidden:
        return mle_observed(net, data)
    obs_cols = {v.name: data.column(v.name) for v in net.observed}
    N = data.N
    hidden_states = list(itertools.product(*[range(v.card) for v in hidden]))
    best: FitResult | None = None
    for r in range(restarts):
        rng = np.random.default_rng([seed, r])
        cpts = {}
        for v in net.variables:
            cards = net.parent_cards(v.name)
            n_cfg = int(np.prod(cards)) if cards else 1
            cpts[v.name] = _dirichlet_rows(rng, (n_cfg, v.card))
        prev_ll = -np.inf
        converged = False
        iters = 0
        for it in range(1, max_iter + 1):
            iters = it
            # E-step: joint likelihood of each row under each hidden completion
            like = np.zeros((N, len(hidden_states)))
            for hx, hstate in enumerate(hidden_states):
                columns = dict(obs_cols)
                for v, s in zip(hidden, hstate):
                    columns[v.name] = np.full(N, s, dtype=np.int64)
                prob = np.ones(N)
                for v in net.variables:
                    cfg = _config_index(net, v.name, columns)
                    prob = prob * cpts[v.name][cfg, columns[v.name]]
                like[:, hx] = prob
            row_tot = like.sum(axis=1)
            if (row_tot <= 0).any():
                break  # this start assigns zero mass to an observed row
            ll = float(np.log(row_tot).sum())
            if ll + 1e-9 * (1 + abs(ll)) < prev_ll:
                raise AssertionError("EM log-likelihood decreased")
            post = like / row_tot[:, None]
            # M-step: expected counts
            new = {}
            for v in net.variables:
                cards = net.parent_cards(v.name)
                n_cfg = int(np.prod(cards)) if cards else 1
                acc = np.zeros((n_cfg, v.card))
                for hx, hstate in enumerate(hidden_states):
                    columns = dict(obs_cols)
                    for hv, s in zip(hidden, hstate):
                        columns[hv.name] = np.full(N, s, dtype=np.int64)
                    cfg = _config_index(net, v.name, columns)
                    flat = cfg * v.card + columns[v.name]
                    acc += np.bincount(
                        flat, weights=post[:, hx], minlength=n_cfg * v.card
                    ).reshape(n_cfg, v.card)
                rows = acc.sum(axis=1, keepdims=True)
                with np.errstate(invalid="ignore"):
                    table = np.where(rows > 0, acc / np.where(rows > 0, rows, 1), 1.0 / v.card)
                new[v.name] = table
            cpts = new
            if ll - prev_ll < tol * (1 + abs(ll)) and it > 1:
                prev_ll = ll
                converged = True
                break
            prev_ll = ll
        if prev_ll == -np.inf:
            continue
        params = {}
        for v in net.variables:
            for idx, cfg in enumerate(
                itertools.product(*[range(c) for c in net.parent_cards(v.name)])
            ):
                for a in range(1, v.card):
                    params[net.param_name(v.name, a, cfg)] = float(cpts[v.name][idx, a])
        fit = FitResult(params, float(prev_ll), converged, restarts_used=r + 1,
                        iterations=iters)
        if best is None or fit.loglik > best.loglik:
            best = fit
    if best is None:
        raise RuntimeError("every EM start collapsed to zero likelihood")
    return best


# ---------------------------------------------------------------------------
# BIC


@dataclass
class BicScore:
    score: float
    loglik: float
    dim: int
    n_rows: int
    heuristic: bool  # True when the model has hidden variables
    fit: FitResult

    def render(self, name: str = "model") -> str:
        tag = "  [heuristic for non-CEF models]" if self.heuristic else ""
        return (
            f"{name}: BIC = {self.score:.6f} "
            f"(logL = {self.loglik:.6f}, dim = {self.dim}, N = {self.n_rows}){tag}"
        )


def bic_score(net: BayesNet, data: Dataset, dim: int | None = None,
              fit: FitResult | None = None, eps: Fraction | None = None,
              restarts: int = 10, seed: int = 0, trials: int = 25) -> BicScore:
    """logL(theta-hat) - (d/2) log N with d the generic-rank dimension.

    For hidden models the dimension is still the algebraic rank, but BIC's
    asymptotic justification does not carry over, so the score is labeled
    heuristic.
    """
    if fit is None:
        fit = (
            em_fit(net, data, restarts=restarts, seed=seed)
            if net.has_hidden()
            else mle_observed(net, data, eps=eps)
        )
    if dim is None:
        dim = model_dimension(net, "joint", trials=trials, seed=seed)
    score = fit.loglik - 0.5 * dim * math.log(data.N)
    return BicScore(score, fit.loglik, dim, data.N, net.has_hidden(), fit)


# ---------------------------------------------------------------------------
# bootstrap constraint testing


@dataclass
class ConstraintTestRow:
    name: str
    residual: float
    se: float
    z: float
    p: float
    note: str = ""

    @property
    def testable(self) -> bool:
        return not math.isnan(self.z)


@dataclass
class TestResult:
    rows: list
    alpha: float
    bootstrap: int
    seed: int
    reject: bool

    def render(self, name: str = "constraints") -> str:
        lines = [
            f"{name}: bootstrap z-test, B = {self.bootstrap}, "
            f"alpha = {self.alpha} (Bonferroni over {len(self.rows)}), seed = {self.seed}"
        ]
        width = max([len(r.name) for r in self.rows] or [4])
        for r in self.rows:
            if not r.testable:
                lines.append(f"  {r.name:<{width}}  untestable ({r.note})")
                continue
            lines.append(
                f"  {r.name:<{width}}  residual = {r.residual: .5e}  "
                f"se = {r.se:.5e}  z = {r.z: .3f}  p = {r.p:.5f}"
            )
        lines.append("verdict: " + ("reject" if self.reject else "consistent"))
        return "\n".join(lines)


def _compile_poly(poly: Polynomial, symbols: list) -> list:
    index = {s: i for i, s in enumerate(symbols)}
    ring = poly.ring
    out = []
    for coef, exps in poly.terms:
        fac = [(index[ring.names[i]], e) for i, e in enumerate(exps) if e]
        out.append((float(coef), fac))
    return out


def _eval_compiled(compiled: list, values: np.ndarray) -> np.ndarray:
    total = np.zeros(values.shape[0])
    for coef, fac in compiled:
        term = np.full(values.shape[0], coef)
        for idx, e in fac:
            term = term * values[:, idx] ** e
        total += term
    return total


def _discrete_symbol_values(cs: ConstraintSet, symbols: list, data: Dataset,
                            tables: np.ndarray):
    """Symbol estimates from joint count tables (batch x full-table)."""
    cards = data.cards
    shape = tuple(cards)
    B = tables.shape[0]
    tensors = tables.reshape((B,) + shape)
    N_b = tables.sum(axis=1)
    values = np.zeros((B, len(symbols)))
    notes = {}
    col_of = {name: j for j, name in enumerate(data.columns)}
    for si, sym in enumerate(symbols):
        info = cs.symbol_info.get(sym)
        if isinstance(info, CellInfo):
            values[:, si] = tensors[(slice(None),) + info.states] / N_b
        elif isinstance(info, CondInfo):
            keep = sorted(col_of[v] for v in info.prefix_vars) + [col_of[info.var]]
            keep_sorted = sorted(set(keep))
            drop = tuple(1 + j for j in range(len(shape)) if j not in keep_sorted)
            marg = tensors.sum(axis=drop) if drop else tensors
            # marg axes: batch, then the kept columns in original order
            idx: list = [slice(None)] * (1 + len(keep_sorted))
            for v, s in zip(info.prefix_vars, info.prefix_states):
                idx[1 + keep_sorted.index(col_of[v])] = s
            tpos = 1 + keep_sorted.index(col_of[info.var])
            num_idx = list(idx)
            num_idx[tpos] = info.state
            num = marg[tuple(num_idx)]
            den_idx = list(idx)
            den_idx[tpos] = slice(None)
            den = marg[tuple(den_idx)].sum(axis=-1)
            with np.errstate(invalid="ignore", divide="ignore"):
                values[:, si] = np.where(den > 0, num / np.where(den > 0, den, 1), np.nan)
            if den[0] == 0:
                ctx = dict(zip(info.prefix_vars, info.prefix_states))
                notes[sym] = f"empirical context {ctx} has zero count"
        else:
            raise DataError(
                f"symbol {sym!r} is not a joint-cell or conditional symbol"
            )
    return values, notes


def _gaussian_symbol_values(cs: ConstraintSet, symbols: list, data: Dataset,
                            batches: list):
    values = np.zeros((len(batches), len(symbols)))
    for bi, rows in enumerate(batches):
        mu = rows.mean(axis=0)
        centered = rows - mu
        cov = centered.T @ centered / (rows.shape[0] - 1)
        for si, sym in enumerate(symbols):
            info = cs.symbol_info.get(sym)
            if not isinstance(info, CovInfo):
                raise DataError(f"symbol {sym!r} is not a covariance symbol")
            values[bi, si] = cov[info.i - 1, info.j - 1]
    return values, {}


def _infer_symbol_info(cs: ConstraintSet, data: Dataset) -> None:
    """Fill missing symbol semantics from the naming convention."""
    for sym in cs.ring.names:
        if sym in cs.symbol_info:
            continue
        if sym.startswith("w") and data.kind == "discrete":
            digits = sym[1:].replace("_", "")
            if len(digits) == data.k and digits.isdigit():
                cs.symbol_info[sym] = CellInfo(tuple(int(d) for d in digits))
                continue
        if sym.startswith("s_") and data.kind == "gaussian":
            parts = sym.split("_")
            if len(parts) == 3 and parts[1].isdigit() and parts[2].isdigit():
                i, j = int(parts[1]), int(parts[2])
                cs.symbol_info[sym] = CovInfo(i, j, data.columns[i - 1],
                                              data.columns[j - 1])
                continue
        if sym.startswith("p_") and data.kind == "discrete":
            # p_<var>_<state>[_<prefix states>]; the prefix covers the data
            # columns before <var> in conditional-space order
            parts = sym.split("_")
            if len(parts) in (3, 4) and parts[2].isdigit():
                var, state = parts[1], int(parts[2])
                if len(parts) == 3:
                    cs.symbol_info[sym] = CondInfo(var, state, (), ())
                    continue
                states = tuple(int(d) for d in parts[3])
                cs.symbol_info[sym] = CondInfo(
                    var, state, tuple(data.columns[: len(states)]), states
                )
                continue
        raise DataError(f"cannot infer the meaning of symbol {sym!r}")


def constraint_test(cs: ConstraintSet, data: Dataset, B: int = 200,
                    alpha: float = 0.01, seed: int = 0) -> TestResult:
    """Bootstrap z-test of every constraint's plug-in residual.

    Discrete data plugs empirical cell frequencies (or conditional
    frequencies) into the constraint polynomials; Gaussian data plugs
    sample covariances.  The standard error comes from ``B`` row
    resamples; the model is rejected when any Bonferroni-adjusted p-value
    falls below ``alpha``.
    """
    if B < 100:
        raise ValueError("need at least 100 bootstrap resamples")
    if not cs.constraints:
        return TestResult([], alpha, B, seed, False)
    _infer_symbol_info(cs, data)
    symbols = list(cs.ring.names)
    rng = np.random.default_rng(seed)
    if data.kind == "discrete":
        cards = data.cards
        radix = np.ones(len(cards), dtype=np.int64)
        for j in range(len(cards) - 2, -1, -1):
            radix[j] = radix[j + 1] * cards[j + 1]
        ids = (data.rows * radix).sum(axis=1)
        size = int(np.prod(cards))
        tables = np.zeros((B + 1, size))
        tables[0] = np.bincount(ids, minlength=size)
        for b in range(B):
            take = rng.integers(0, data.N, data.N)
            tables[b + 1] = np.bincount(ids[take], minlength=size)
        values, notes = _discrete_symbol_values(cs, symbols, data, tables)
    else:
        batches = [data.rows]
        for b in range(B):
            take = rng.integers(0, data.N, data.N)
            batches.append(data.rows[take])
        values, notes = _gaussian_symbol_values(cs, symbols, data, batches)
    rows = []
    any_reject = False
    k_tests = len(cs.constraints)
    for ci, c in enumerate(cs.constraints):
        name = c.name or f"c{ci + 1}"
        used = [symbols.index(s) for s in c.poly.variables_used()]
        note = "; ".join(notes[symbols[i]] for i in used if symbols[i] in notes)
        compiled = _compile_poly(c.poly, symbols)
        res = _eval_compiled(compiled, values)
        point = res[0]
        boot = res[1:]
        valid = ~np.isnan(boot)
        if math.isnan(point) or valid.sum() < 2:
            rows.append(ConstraintTestRow(name, float("nan"), float("nan"),
                                          float("nan"), float("nan"),
                                          note or "undefined plug-in"))
            continue
        if valid.sum() < B:
            note = (note + "; " if note else "") + (
                f"{int(B - valid.sum())} resamples dropped (zero-count context)"
            )
        se = float(boot[valid].std(ddof=1))
        if se == 0.0:
            z = 0.0 if point == 0.0 else math.inf
        else:
            z = point / se
        p = math.erfc(abs(z) / math.sqrt(2.0))
        if p * k_tests < alpha:
            any_reject = True
        rows.append(ConstraintTestRow(name, float(point), se, float(z), float(p), note))
    return TestResult(rows, alpha, B, seed, any_reject)


# ---------------------------------------------------------------------------
# model comparison


@dataclass
class ModelEntry:
    name: str
    net: object = None
    constraints: ConstraintSet | None = None
    dim: int | None = None


@dataclass
class ComparisonRow:
    name: str
    bic: BicScore | None = None
    test: TestResult | None = None

    @property
    def rejected(self) -> bool:
        return bool(self.test and self.test.reject)


@dataclass
class ComparisonReport:
    rows: list
    method: str

    @property
    def any_rejected(self) -> bool:
        return any(r.rejected for r in self.rows)

    def ranking(self) -> list:
        scored = [r for r in self.rows if r.bic is not None]
        return sorted(scored, key=lambda r: -r.bic.score)

    def render(self) -> str:
        lines = [f"model comparison ({self.method})"]
        for r in self.rows:
            parts = [f"model {r.name}:"]
            if r.bic is not None:
                tag = " [heuristic]" if r.bic.heuristic else ""
                parts.append(f"BIC = {r.bic.score:.6f} (dim {r.bic.dim}){tag}")
            if r.test is not None:
                parts.append("constraints: " + ("reject" if r.test.reject else "consistent"))
            lines.append("  " + " ".join(parts))
        ranked = self.ranking()
        if len(ranked) >= 2:
            if ranked[0].bic.score == ranked[1].bic.score:
                lines.append(f"BIC ranking: tie between {ranked[0].name} and {ranked[1].name}")
            else:
                lines.append("BIC ranking: " + " > ".join(r.name for r in ranked))
        rejected = [r.name for r in self.rows if r.rejected]
        for name in rejected:
            lines.append(f"verdict: reject {name} (constraint failure)")
        if not rejected:
            lines.append(
                "verdict: no model is definitively rejected; BIC differences "
                "are evidence only"
            )
        return "\n".join(lines)


def compare_models(entries: Sequence[ModelEntry], data: Dataset,
                   method: str = "both", alpha: float = 0.01, B: int = 200,
                   seed: int = 0, restarts: int = 10) -> ComparisonReport:
    """Rank by BIC and/or test constraints, with asymmetric verdicts.

    A model is definitively rejected only when its own constraints fail on
    the data; a worse BIC score alone never rejects, it only ranks.
    """
    if len(entries) < 2:
        raise ValueError("need at least two models to compare")
    if method not in ("bic", "constraints", "both"):
        raise ValueError(f"unknown method {method!r}")
    rows = []
    for me in entries:
        row = ComparisonRow(me.name)
        if method in ("bic", "both") and me.net is not None:
            row.bic = bic_score(me.net, data, dim=me.dim, seed=seed, restarts=restarts)
        elif method == "bic" and me.net is None:
            raise ValueError(f"model {me.name!r} has no fittable network for BIC")
        if method in ("constraints", "both") and me.constraints is not None:
            row.test = constraint_test(me.constraints, data, B=B, alpha=alpha, seed=seed)
        rows.append(row)
    return ComparisonReport(rows, method)
