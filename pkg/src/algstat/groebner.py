"""Buchberger's algorithm, reduced Groebner bases, and elimination ideals.

Pair selection follows the normal strategy (smallest lcm in the active
order); the coprime-lcm and chain criteria prune useless pairs.  All
computations are exact over the rationals and fully deterministic for a
fixed input, so reduced bases can be compared byte-for-byte.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .polyring import (
    PolyRing,
    Polynomial,
    RingMismatchError,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
    normal_form,
)


@dataclass(frozen=True)
class Budget:
    """Hard limits for a basis computation; exceeding them is an error."""

    max_pair_reductions: int = 10**6
    max_seconds: float = 600.0


class BudgetExceededError(RuntimeError):
    def __init__(self, pairs_done: int, basis_size: int, elapsed: float):
        self.pairs_done = pairs_done
        self.basis_size = basis_size
        self.elapsed = elapsed
        super().__init__(
            f"budget exceeded after {pairs_done} pair reductions "
            f"({elapsed:.1f}s, basis size {basis_size})"
        )


@dataclass
class Ideal:
    """A generator set; the ring carries the variable table and order."""

    generators: list[Polynomial]
    ring: PolyRing

    def __post_init__(self):
        gens = []
        for g in self.generators:
            if g.ring != self.ring:
                g = g.reindex(self.ring)
            if not g.is_zero:
                gens.append(g)
        self.generators = gens


@dataclass
class GroebnerBasis:
    basis: list[Polynomial]
    ring: PolyRing
    reduced: bool = True
    pairs_reduced: int = 0
    elapsed: float = 0.0

    def __iter__(self):
        return iter(self.basis)

    def __len__(self):
        return len(self.basis)


def s_polynomial(f: Polynomial, g: Polynomial) -> Polynomial:
    """S(f, g) = (L/lt f) f - (L/lt g) g with L = lcm of the leading monomials."""
    if f.is_zero or g.is_zero:
        raise ValueError("S-polynomial of a zero polynomial")
    lf, lg = f.leading_monomial(), g.leading_monomial()
    L = mono_lcm(lf, lg)
    a = f.mul_term(Fraction(1, 1) / f.leading_coefficient(), mono_div(L, lf))
    b = g.mul_term(Fraction(1, 1) / g.leading_coefficient(), mono_div(L, lg))
    return a - b


def _interreduce(polys: list[Polynomial]) -> list[Polynomial]:
    """Fully inter-reduced, primitive set generating the same ideal.

    Each element is replaced by its normal form modulo the others until
    nothing changes; zero remainders are dropped.  Output is sorted by
    leading monomial, descending.
    """
    polys = [p.primitive() for p in polys if not p.is_zero]
    changed = True
    while changed:
        changed = False
        polys.sort(key=lambda p: p.ring._key(p.leading_monomial()))
        out: list[Polynomial] = []
        for i, p in enumerate(polys):
            others = out + polys[i + 1:]
            r = normal_form(p, others) if others else p
            if r.is_zero:
                changed = True
                continue
            r = r.primitive()
            if r != p:
                changed = True
            out.append(r)
        polys = out
    polys.sort(key=lambda p: p.ring._key(p.leading_monomial()), reverse=True)
    return polys


def buchberger(ideal: Ideal, budget: Budget | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of ``ideal`` under its ring's order.

    Deterministic: for a fixed generator list the same basis (same
    element order, same coefficients) is produced; the reduced basis
    itself is unique up to positive scaling, which the primitive form
    pins down.
    """
    if not ideal.generators:
        raise ValueError("empty generator list")
    budget = budget or Budget()
    ring = ideal.ring
    key = ring._key
    t0 = time.monotonic()

    G: list[Polynomial] = _interreduce(ideal.generators)
    if not G:
        return GroebnerBasis([ring.zero], ring, True, 0, 0.0)
    lead = [g.leading_monomial() for g in G]

    pending: set[tuple[int, int]] = set()
    heap: list = []

    def push_pair(i: int, j: int):
        if i > j:
            i, j = j, i
        L = mono_lcm(lead[i], lead[j])
        heapq.heappush(heap, (key(L), i, j))
        pending.add((i, j))

    for i in range(len(G)):
        for j in range(i + 1, len(G)):
            push_pair(i, j)

    pairs_done = 0
    while heap:
        if pairs_done >= budget.max_pair_reductions or (
            time.monotonic() - t0 > budget.max_seconds
        ):
            raise BudgetExceededError(pairs_done, len(G), time.monotonic() - t0)
        _, i, j = heapq.heappop(heap)
        if (i, j) not in pending:
            continue
        pending.discard((i, j))
        li, lj = lead[i], lead[j]
        L = mono_lcm(li, lj)
        # coprime-lcm criterion
        if L == mono_mul(li, lj):
            continue
        # chain criterion: some k with lead[k] | L and both mixed pairs done
        skip = False
        for k in range(len(G)):
            if k == i or k == j:
                continue
            if mono_divides(lead[k], L):
                a = (i, k) if i < k else (k, i)
                b = (j, k) if j < k else (k, j)
                if a not in pending and b not in pending:
                    skip = True
                    break
        if skip:
            continue
        pairs_done += 1
        h = normal_form(s_polynomial(G[i], G[j]), G)
        if not h.is_zero:
            h = h.primitive()
            G.append(h)
            lead.append(h.leading_monomial())
            new = len(G) - 1
            for k in range(new):
                push_pair(k, new)

    basis = _interreduce(G)
    return GroebnerBasis(basis, ring, True, pairs_done, time.monotonic() - t0)


def eliminate(ideal: Ideal, drop: Sequence[str], budget: Budget | None = None) -> Ideal:
    """Generators of the elimination ideal after dropping ``drop``.

    Uses a block order with the dropped variables in the leading block
    (grevlex within each block); the basis elements free of every dropped
    variable generate the elimination ideal.
    """
    drop = list(drop)
    for n in drop:
        if n not in ideal.ring.index:
            raise ValueError(f"cannot drop unknown variable {n!r}")
    keep = [n for n in ideal.ring.names if n not in drop]
    if not drop:
        gb = buchberger(ideal, budget)
        return Ideal(list(gb.basis), ideal.ring)
    elim_ring = PolyRing(tuple(drop) + tuple(keep), "block", block=len(drop))
    gens = [g.reindex(elim_ring) for g in ideal.generators]
    gb = buchberger(Ideal(gens, elim_ring), budget)
    keep_ring = PolyRing(tuple(keep), "grevlex")
    dropped = set(drop)
    out = []
    for g in gb.basis:
        if g.variables_used().isdisjoint(dropped):
            out.append(g.reindex(keep_ring))
    return Ideal(out, keep_ring)


def ideal_member(f: Polynomial, gb: GroebnerBasis) -> bool:
    """True iff the normal form of ``f`` modulo the reduced basis is zero."""
    if not gb.reduced:
        raise ValueError("membership requires a reduced basis")
    if f.ring != gb.ring:
        if f.ring.names != gb.ring.names and set(f.ring.names) - set(gb.ring.names):
            raise RingMismatchError("polynomial uses variables outside the basis ring")
        f = f.reindex(gb.ring)
    return normal_form(f, gb.basis).is_zero


def spair_normal_forms_vanish(gb: GroebnerBasis) -> bool:
    """Post-hoc check that every S-polynomial of the basis reduces to zero."""
    B = gb.basis
    for i in range(len(B)):
        for j in range(i + 1, len(B)):
            if not normal_form(s_polynomial(B[i], B[j]), B).is_zero:
                return False
    return True


# -- ideal files -------------------------------------------------------------

def parse_ideal_file(text: str):
    """Parse the ideal interchange format.

    First non-comment line: ``vars: x, y | params: t, u`` (params part
    optional); the remaining lines hold one polynomial each.  Returns
    ``(Ideal, param_names)`` with params occupying the leading block when
    present.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    header = None
    polys_src = []
    for k, ln in enumerate(lines):
        if not ln or ln.startswith("#"):
            continue
        if header is None:
            header = (k + 1, ln)
        else:
            polys_src.append((k + 1, ln))
    if header is None:
        raise ValueError("empty ideal file")
    lineno, ln = header
    if not ln.startswith("vars:"):
        raise ValueError(f"line {lineno}: expected 'vars:' header, got {ln!r}")
    body = ln[len("vars:"):]
    params: list[str] = []
    if "|" in body:
        body, ppart = body.split("|", 1)
        ppart = ppart.strip()
        if not ppart.startswith("params:"):
            raise ValueError(f"line {lineno}: expected 'params:' after '|'")
        params = [p.strip() for p in ppart[len("params:"):].split(",") if p.strip()]
    names = [v.strip() for v in body.split(",") if v.strip()]
    if params:
        ring = PolyRing(tuple(params) + tuple(names), "block", block=len(params))
    else:
        ring = PolyRing(tuple(names), "grevlex")
    gens = []
    for lineno, src in polys_src:
        try:
            gens.append(ring.parse(src))
        except Exception as exc:
            raise ValueError(f"line {lineno}: {exc}") from exc
    if not gens:
        raise ValueError("ideal file declares no generators")
    return Ideal(gens, ring), params
