"""Jacobians, generic rank, and algebraic-singularity scans.

Rank computations are exact: matrices of rationals are cleared to integers
row by row and reduced with fraction-free (Bareiss) elimination, so a rank
drop is a theorem about the sampled point, not a float threshold effect.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Callable, Sequence

from .netmodels import BayesNet, GaussianNet, ParamMap, build_map, sample_interior_params
from .polyring import PolyRing


@dataclass
class JacobianMatrix:
    entries: list  # rows of Polynomial | RationalFunction
    row_labels: list
    col_names: list
    ring: PolyRing

    @property
    def shape(self):
        return (len(self.entries), len(self.col_names))

    def evaluate(self, point) -> list:
        return [[e.evaluate(point) for e in row] for row in self.entries]


def jacobian(exprs: Sequence, var_names: Sequence[str], labels=None) -> JacobianMatrix:
    """Matrix of formal partials; rational entries use the quotient rule."""
    exprs = list(exprs)
    if not exprs:
        raise ValueError("no expressions to differentiate")
    ring = exprs[0].ring
    rows = []
    for e in exprs:
        rows.append([e.partial(v) for v in var_names])
    return JacobianMatrix(rows, list(labels or range(len(exprs))), list(var_names), ring)


def map_jacobian(pmap: ParamMap) -> JacobianMatrix:
    return jacobian(
        [e for _, e in pmap.observables],
        list(pmap.param_ring.names),
        labels=pmap.symbols,
    )


def exact_rank(matrix: Sequence[Sequence[Fraction]]) -> int:
    """Rank over Q by integer fraction-free (Bareiss) elimination."""
    m = [list(row) for row in matrix]
    if not m or not m[0]:
        return 0
    # clear denominators per row; scaling a row does not change rank
    im = []
    for row in m:
        d = 1
        for x in row:
            d = lcm(d, Fraction(x).denominator)
        im.append([int(Fraction(x) * d) for x in row])
    nrows, ncols = len(im), len(im[0])
    rank = 0
    prev = 1
    row = 0
    for col in range(ncols):
        piv = next((r for r in range(row, nrows) if im[r][col]), None)
        if piv is None:
            continue
        im[row], im[piv] = im[piv], im[row]
        pivot = im[row][col]
        for r in range(row + 1, nrows):
            factor = im[r][col]
            # Bareiss update must run even for zero factors to keep the
            # fraction-free divisibility invariant
            for c in range(col + 1, ncols):
                im[r][c] = (im[r][c] * pivot - factor * im[row][c]) // prev
            im[r][col] = 0
        prev = pivot
        rank += 1
        row += 1
        if row == nrows:
            break
    return rank


@dataclass
class RankProfile:
    generic_rank: int
    witnesses: list  # (point dict, rank)
    drops: list      # points with rank < generic_rank

    def render(self, max_points: int = 25) -> str:
        lines = [f"generic rank: {self.generic_rank}"]
        for point, r in self.witnesses[:max_points]:
            vals = ", ".join(f"{k}={v}" for k, v in point.items())
            lines.append(f"  rank {r} at ({vals})")
        if len(self.witnesses) > max_points:
            lines.append(f"  ... {len(self.witnesses) - max_points} more points")
        if self.drops:
            lines.append(f"rank drops below generic at {len(self.drops)} point(s):")
            for point, r in self.drops:
                vals = ", ".join(f"{k}={v}" for k, v in point.items())
                lines.append(f"  rank {r} at ({vals})")
        else:
            lines.append("no rank drops among scanned points")
        return "\n".join(lines)


def _box_sampler(names):
    def sample(rng):
        point = {}
        for n in names:
            v = 0
            while v == 0:
                v = rng.randint(-10**4, 10**4)
            point[n] = Fraction(v)
        return point

    return sample


def generic_rank(
    J: JacobianMatrix,
    trials: int = 25,
    sampler: Callable | None = None,
    seed: int = 0,
) -> RankProfile:
    """Max exact rank over seeded random interior points.

    This operationalizes "generic": no certificate is attempted, but the
    rank at any point can only fall below the reported value, never above
    it, for maps whose generic rank was actually attained.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = random.Random(seed)
    sampler = sampler or _box_sampler(J.col_names)
    witnesses = []
    best = 0
    for _ in range(trials):
        point = sampler(rng)
        r = exact_rank(J.evaluate(point))
        witnesses.append((point, r))
        best = max(best, r)
    drops = [(p, r) for p, r in witnesses if r < best]
    return RankProfile(best, witnesses, drops)


def singular_scan(J: JacobianMatrix, points: Sequence, generic: int | None = None,
                  trials: int = 25, seed: int = 0) -> RankProfile:
    """Evaluate rank at supplied points and record drops below generic rank."""
    if generic is None:
        generic = generic_rank(J, trials=trials, seed=seed).generic_rank
    witnesses = []
    for point in points:
        if not isinstance(point, dict):
            if len(point) != len(J.ring.names):
                raise ValueError("point dimension mismatch")
            point = dict(zip(J.ring.names, (Fraction(v) for v in point)))
        r = exact_rank(J.evaluate(point))
        witnesses.append((point, r))
    drops = [(p, r) for p, r in witnesses if r < generic]
    return RankProfile(generic, witnesses, drops)


def subspace_probes(names: Sequence[str], zeroed: Sequence[str], values: Sequence):
    """Points with a fixed subset of coordinates zeroed, the rest on a grid."""
    import itertools

    free = [n for n in names if n not in zeroed]
    points = []
    for combo in itertools.product([Fraction(v) for v in values], repeat=len(free)):
        point = {n: Fraction(0) for n in zeroed}
        point.update(dict(zip(free, combo)))
        points.append(point)
    return points


class DimensionMismatchError(RuntimeError):
    """Generic rank disagrees with the closed-form count: a map-builder bug."""


def model_dimension(net, map_kind: str = "joint", trials: int = 25, seed: int = 0,
                    return_profile: bool = False):
    """Model dimension as the generic Jacobian rank of its parameterization.

    For networks without hidden variables the closed-form parameter count
    must agree exactly with the sampled generic rank; disagreement raises
    rather than returning either number.  For hidden models the rank is
    reported as-is (their images need not be manifolds, so the number is a
    dimension in the stratified sense at generic points).
    """
    if map_kind not in ("joint", "conditional", "covariance"):
        raise ValueError(f"unknown map kind {map_kind!r}")
    pmap = net if isinstance(net, ParamMap) else build_map(net, space=map_kind)
    J = map_jacobian(pmap)
    sampler = lambda rng: sample_interior_params(pmap, rng)
    profile = generic_rank(J, trials=trials, sampler=sampler, seed=seed)
    model = pmap.net
    if isinstance(model, (BayesNet, GaussianNet)) and not model.has_hidden():
        expected = model.closed_form_dimension()
        if profile.generic_rank != expected:
            raise DimensionMismatchError(
                f"generic rank {profile.generic_rank} != closed-form "
                f"dimension {expected} for {model.name!r}"
            )
    if return_profile:
        return profile.generic_rank, profile
    return profile.generic_rank
