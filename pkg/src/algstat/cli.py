"""Command-line front end.

Subcommands wire model files, datasets, and constraint files through the
pipeline: ``implicitize`` discovers constraints, ``verify`` checks a
constraint file symbolically and at exact sample points, ``dimension``
prints a rank report, ``groebner`` reduces an ideal file, ``score``
prints BIC, and ``compare`` emits the asymmetric model-selection verdict.

Exit status: 0 success/consistent, 1 rejection or failed verification,
2 usage error, 3 budget exceeded.  All randomness flows from ``--seed``
(default 0), which is echoed in the output; identical inputs and seeds
produce byte-identical stdout.
"""

from __future__ import annotations

import argparse
import re
import sys
from pathlib import Path

from .groebner import Budget, BudgetExceededError, Ideal, buchberger, parse_ideal_file
from .implicitize import (
    constraints_from_text,
    constraints_to_text,
    implicitize_model,
    numeric_validate,
    symbolic_residual,
)
from .netmodels import BayesNet, ModelFormatError, build_map, parse_model
from .polyring import PolyRing
from .select import (
    Dataset,
    ModelEntry,
    bic_score,
    compare_models,
)

USAGE_ERROR = 2
BUDGET_ERROR = 3


class CliError(Exception):
    def __init__(self, message: str, code: int = USAGE_ERROR):
        super().__init__(message)
        self.code = code


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _load_model(path: str):
    try:
        return parse_model(_read(path))
    except ModelFormatError as exc:
        raise CliError(f"{path}: {exc}") from exc


def _load_dataset(path: str, net=None) -> Dataset:
    try:
        if net is not None and isinstance(net, BayesNet):
            cards = [net.by_name[c].card for c in _csv_columns(path)]
            return Dataset.from_csv(_read(path), kind="discrete", cards=cards)
        return Dataset.from_csv(_read(path))
    except KeyError as exc:
        raise CliError(f"{path}: column {exc} is not a network variable")
    except ValueError as exc:
        raise CliError(f"{path}: {exc}") from exc


def _csv_columns(path: str):
    head = _read(path).splitlines()
    if not head:
        raise CliError(f"{path}: empty file")
    return [c.strip() for c in head[0].split(",")]


def _build_map(model, space):
    try:
        return build_map(model, space=space)
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def cmd_implicitize(args) -> int:
    model = _load_model(args.model)
    pmap = _build_map(model, args.space)
    budget = Budget(max_seconds=args.budget_seconds)
    try:
        cs = implicitize_model(pmap, budget)
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return BUDGET_ERROR
    out = args.out or str(Path(args.model).with_suffix(".constraints"))
    Path(out).write_text(constraints_to_text(cs))
    print(f"seed: {args.seed}")
    print(f"map: {pmap.kind}, {pmap.n} parameters -> {pmap.m} observables")
    print(f"constraints discovered: {len(cs)} (soundness residuals all zero)")
    for c in cs.constraints:
        print(f"  {c.poly.canonical_string('lex')}")
    print(f"written to {out}")
    return 0


def cmd_verify(args) -> int:
    model = _load_model(args.model)
    pmap = _build_map(model, args.space)
    ring = pmap.obs_ring()
    try:
        cs = constraints_from_text(_read(args.constraints), ring)
    except ValueError as exc:
        raise CliError(f"{args.constraints}: {exc}") from exc
    if not cs.constraints:
        raise CliError(f"{args.constraints}: no constraints found")
    print(f"seed: {args.seed}")
    ok = True
    for c in cs.constraints:
        res = symbolic_residual(pmap, c.poly)
        zero = res.is_zero
        ok = ok and zero
        print(f"{c.name}: symbolic residual: {'0' if zero else 'NONZERO'}")
    report = numeric_validate(pmap, cs, samples=args.samples, tol=args.tol,
                              seed=args.seed)
    npass = sum(1 for r in report.results if r.passed)
    mode = "exact" if report.exact else f"tol={args.tol}"
    print(f"{mode} samples {npass}/{len(report.results)} constraints pass "
          f"({args.samples} points each)")
    for r in report.results:
        flag = "pass" if r.passed else "FAIL"
        print(f"  {r.name}: max|residual| = {r.max_residual}  {flag}")
    ok = ok and report.passed
    return 0 if ok else 1


def cmd_dimension(args) -> int:
    model = _load_model(args.model)
    from .geometry import model_dimension

    try:
        dim, profile = model_dimension(
            _build_map(model, args.space), args.space or "joint",
            trials=args.trials, seed=args.seed, return_profile=True,
        )
    except Exception as exc:
        raise CliError(str(exc)) from exc
    print(f"seed: {args.seed}")
    name = getattr(model, "name", args.model)
    print(f"model {name}: dimension = {dim}")
    print(profile.render())
    return 0


def cmd_groebner(args) -> int:
    try:
        ideal, params = parse_ideal_file(_read(args.idealfile))
    except ValueError as exc:
        raise CliError(f"{args.idealfile}: {exc}") from exc
    ring = ideal.ring
    if args.order and not params:
        ring = PolyRing(ring.names, args.order)
        ideal = Ideal([g.reindex(ring) for g in ideal.generators], ring)
    try:
        gb = buchberger(ideal, Budget(max_seconds=args.budget_seconds))
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return BUDGET_ERROR
    print(f"seed: {args.seed}")
    print(f"reduced basis ({len(gb.basis)} elements, order {ring.order.kind}):")
    for p in gb.basis:
        print(f"  {p.canonical_string('lex')}")
    return 0


def cmd_score(args) -> int:
    model = _load_model(args.model)
    if not isinstance(model, BayesNet):
        raise CliError("score supports discrete networks")
    data = _load_dataset(args.data, net=model)
    try:
        out = bic_score(model, data, seed=args.seed)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    print(f"seed: {args.seed}")
    print(out.render(model.name))
    return 0


def _constraint_ring_from_text(text: str) -> PolyRing:
    names = set()
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        names.update(re.findall(r"[A-Za-z_][A-Za-z_0-9]*", line))
    if not names:
        raise CliError("constraint file declares no symbols")
    return PolyRing(sorted(names), "grevlex")


def cmd_compare(args) -> int:
    *model_paths, data_path = args.inputs
    if len(model_paths) < 2:
        raise CliError("compare needs at least two models and a dataset")
    entries = []
    nets = []
    for path in model_paths:
        name = Path(path).stem
        text = _read(path)
        first = next(
            (ln.strip() for ln in text.splitlines()
             if ln.strip() and not ln.strip().startswith("#")),
            "",
        )
        if first.startswith(("discrete network", "gaussian network", "map ")):
            net = _load_model(path)
            nets.append(net)
            entries.append(ModelEntry(name, net=net))
        else:
            try:
                ring = _constraint_ring_from_text(text)
                cs = constraints_from_text(text, ring)
            except ValueError as exc:
                raise CliError(f"{path}: {exc}") from exc
            entries.append(ModelEntry(name, constraints=cs))
    data = _load_dataset(data_path, net=nets[0] if nets else None)
    try:
        report = compare_models(entries, data, method=args.method,
                                alpha=args.alpha, B=args.bootstrap, seed=args.seed)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    print(f"seed: {args.seed}")
    print(report.render())
    return 1 if report.any_rejected else 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="algstat",
        description="polynomial constraints, dimension, and model selection "
                    "for graphical models",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, space=True):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--budget-seconds", type=float, default=600.0)
        if space:
            p.add_argument("--space",
                           choices=["joint", "conditional", "covariance", "precision"],
                           default=None,
                           help="map kind (default: joint for discrete, "
                                "covariance for gaussian)")

    p = sub.add_parser("implicitize", help="discover observable constraints")
    p.add_argument("model")
    p.add_argument("--out", default=None)
    common(p)
    p.set_defaults(func=cmd_implicitize)

    p = sub.add_parser("verify", help="check constraints against a model map")
    p.add_argument("model")
    p.add_argument("constraints")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--tol", type=float, default=None,
                   help="float tolerance (default: exact rational mode)")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dimension", help="generic Jacobian rank report")
    p.add_argument("model")
    p.add_argument("--trials", type=int, default=25,
                   help="sampled points for the generic rank")
    common(p)
    p.set_defaults(func=cmd_dimension)

    p = sub.add_parser("groebner", help="reduced Groebner basis of an ideal file")
    p.add_argument("idealfile")
    p.add_argument("--order", choices=["lex", "grevlex", "block"], default=None)
    common(p, space=False)
    p.set_defaults(func=cmd_groebner)

    p = sub.add_parser("score", help="BIC with algebraic dimension")
    p.add_argument("model")
    p.add_argument("data")
    common(p, space=False)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("compare", help="rank models and test their constraints")
    p.add_argument("inputs", nargs="+",
                   metavar="MODEL-OR-CONSTRAINTS ... DATA")
    p.add_argument("--method", choices=["bic", "constraints", "both"],
                   default="both")
    p.add_argument("--alpha", type=float, default=0.01)
    p.add_argument("--bootstrap", type=int, default=200)
    common(p, space=False)
    p.set_defaults(func=cmd_compare)

    return parser


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return BUDGET_ERROR


if __name__ == "__main__":
    sys.exit(main())
