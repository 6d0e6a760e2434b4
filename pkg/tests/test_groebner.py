import random
from fractions import Fraction

import pytest
import sympy

from algstat.groebner import (
    Budget,
    BudgetExceededError,
    Ideal,
    buchberger,
    eliminate,
    ideal_member,
    parse_ideal_file,
    s_polynomial,
    spair_normal_forms_vanish,
)
from algstat.polyring import PolyRing, normal_form


def to_sympy(p, syms):
    expr = 0
    for c, e in p.terms:
        t = sympy.Rational(c.numerator, c.denominator)
        for s, k in zip(syms, e):
            t *= s ** k
        expr += t
    return expr


def sympy_groebner_strings(polys, ring, order):
    syms = sympy.symbols(list(ring.names))
    gb = sympy.groebner([to_sympy(p, syms) for p in polys], *syms, order=order)
    out = set()
    for e in gb.exprs:
        p = sympy.Poly(e, *syms)
        # primitive integer form with positive leading coefficient
        p = p * (1 / p.content())
        if p.LC() < 0:
            p = -p
        out.add(sympy.srepr(p.as_expr()))
    return out


def our_basis_strings(basis, ring):
    syms = sympy.symbols(list(ring.names))
    return {sympy.srepr(sympy.expand(to_sympy(p, syms))) for p in basis}


class TestSPolynomial:
    def test_self_pair_vanishes(self):
        ring = PolyRing(["x", "y"], "grevlex")
        f = ring.parse("x^2 + y")
        assert s_polynomial(f, f).is_zero

    def test_hand_computed_case(self):
        ring = PolyRing(["x", "y"], "grevlex")
        f = ring.parse("x^3 - 2*x*y")
        g = ring.parse("x^2*y - 2*y^2 + x")
        assert s_polynomial(f, g) == ring.parse("-x^2")

    def test_coprime_leads_reduce_to_zero(self):
        ring = PolyRing(["x", "y"], "grevlex")
        f = ring.parse("x^2 + 1")
        g = ring.parse("y^3 + y")
        s = s_polynomial(f, g)
        assert normal_form(s, [f, g]).is_zero

    def test_zero_input_rejected(self):
        ring = PolyRing(["x"], "lex")
        with pytest.raises(ValueError):
            s_polynomial(ring.zero, ring.var("x"))


class TestBuchberger:
    def test_single_generator(self):
        ring = PolyRing(["x"], "lex")
        gb = buchberger(Ideal([ring.var("x")], ring))
        assert [str(p) for p in gb.basis] == ["x"]

    def test_circle_and_line(self):
        ring = PolyRing(["x", "y"], "lex")
        gb = buchberger(Ideal([ring.parse("x^2 + y^2 - 1"), ring.parse("x - y")], ring))
        assert {p.canonical_string() for p in gb.basis} == {"x - y", "2*y^2 - 1"}

    def test_twisted_cubic_leading_terms(self):
        ring = PolyRing(["z", "y", "x"], "lex")
        g1 = ring.parse("y - x^2")
        g2 = ring.parse("z - x^3")
        gb = buchberger(Ideal([g1, g2], ring))
        leads = {gb.ring.names[e.index(1)] for e in (p.leading_monomial() for p in gb.basis)}
        assert leads == {"z", "y"}
        # same variety: mutual membership both directions
        assert ideal_member(g1, gb) and ideal_member(g2, gb)
        gb2 = buchberger(Ideal(list(gb.basis), ring))
        assert all(ideal_member(p, gb2) for p in (g1, g2))

    def test_matches_independent_cas(self):
        cases = [
            (["x", "y"], ["x^2 + y^2 - 1", "x*y - 1"]),
            (["x", "y", "z"], ["x + y + z", "x*y + y*z + z*x", "x*y*z - 1"]),
            (["x", "y", "z"], ["x^2 - y", "y^2 - z", "x*z - x"]),
        ]
        for names, srcs in cases:
            ring = PolyRing(names, "grevlex")
            polys = [ring.parse(s) for s in srcs]
            gb = buchberger(Ideal(polys, ring))
            assert our_basis_strings(gb.basis, ring) == sympy_groebner_strings(
                polys, ring, "grevlex"
            )

    def test_permutation_invariance_randomized(self):
        ring = PolyRing(["x", "y", "z"], "grevlex")
        rng = random.Random(5)
        done = 0
        while done < 200:
            gens = []
            for _ in range(rng.randint(1, 3)):
                acc = {}
                for _ in range(rng.randint(1, 3)):
                    e = tuple(rng.randint(0, 2) for _ in range(3))
                    acc[e] = acc.get(e, 0) + Fraction(rng.randint(-3, 3))
                p = ring.poly({e: c for e, c in acc.items() if c})
                if not p.is_zero:
                    gens.append(p)
            if not gens:
                continue
            base = buchberger(Ideal(gens, ring))
            perm = gens[:]
            rng.shuffle(perm)
            again = buchberger(Ideal(perm, ring))
            assert [str(p) for p in base.basis] == [str(p) for p in again.basis]
            done += 1

    def test_spair_postcheck_randomized(self):
        ring = PolyRing(["x", "y"], "grevlex")
        rng = random.Random(17)
        done = 0
        while done < 200:
            gens = []
            for _ in range(rng.randint(1, 3)):
                acc = {}
                for _ in range(rng.randint(1, 4)):
                    e = (rng.randint(0, 3), rng.randint(0, 3))
                    acc[e] = acc.get(e, 0) + Fraction(rng.randint(-4, 4))
                p = ring.poly({e: c for e, c in acc.items() if c})
                if not p.is_zero:
                    gens.append(p)
            if not gens:
                continue
            gb = buchberger(Ideal(gens, ring))
            assert spair_normal_forms_vanish(gb)
            done += 1

    def test_budget_exceeded_reports_progress(self):
        ring = PolyRing(["x", "y", "z"], "grevlex")
        gens = [
            ring.parse("x^2 - y"),
            ring.parse("y^2 - z"),
            ring.parse("z^2 - x"),
            ring.parse("x*y*z - 1"),
        ]
        with pytest.raises(BudgetExceededError) as exc:
            buchberger(Ideal(gens, ring), Budget(max_pair_reductions=1))
        assert exc.value.pairs_done == 1
        assert exc.value.basis_size >= 4


class TestEliminate:
    def test_drop_nothing_returns_reduced_basis(self):
        ring = PolyRing(["x", "y"], "grevlex")
        out = eliminate(Ideal([ring.parse("2*x - 2*y")], ring), [])
        assert [p.canonical_string() for p in out.generators] == ["x - y"]

    def test_surface_elimination(self):
        ring = PolyRing(["t", "u", "x", "y", "z"], "block", block=2)
        gens = [
            ring.parse("x - t*u^2 + t^3"),
            ring.parse("y - u"),
            ring.parse("z - u^2 + t^2"),
        ]
        out = eliminate(Ideal(gens, ring), ["t", "u"])
        assert len(out.generators) == 1
        assert out.generators[0].canonical_string("lex") == "x^2 - y^2*z^2 + z^3"

    def test_twisted_cubic_elimination_equals_expected_ideal(self):
        ring = PolyRing(["t", "x", "y", "z"], "block", block=1)
        gens = [ring.parse("x - t"), ring.parse("y - t^2"), ring.parse("z - t^3")]
        out = eliminate(Ideal(gens, ring), ["t"])
        keep = out.ring
        expected = [keep.parse("y - x^2"), keep.parse("z - x^3")]
        gb_out = buchberger(Ideal(out.generators, keep))
        gb_exp = buchberger(Ideal(expected, keep))
        assert all(ideal_member(p, gb_exp) for p in out.generators)
        assert all(ideal_member(p, gb_out) for p in expected)

    def test_elimination_soundness_by_substitution(self):
        # every output generator vanishes under the parameterization
        ring = PolyRing(["t", "u", "x", "y", "z"], "block", block=2)
        gens = [
            ring.parse("x - t*u^2 + t^3"),
            ring.parse("y - u"),
            ring.parse("z - u^2 + t^2"),
        ]
        out = eliminate(Ideal(gens, ring), ["t", "u"])
        tu = PolyRing(["t", "u"], "grevlex")
        t, u = tu.var("t"), tu.var("u")
        asgn = {"x": t * (u ** 2 - t ** 2), "y": u, "z": u ** 2 - t ** 2}
        for g in out.generators:
            assert g.substitute(asgn).is_zero


class TestMembership:
    def test_basic_membership(self):
        ring = PolyRing(["x"], "lex")
        gb = buchberger(Ideal([ring.var("x")], ring))
        assert ideal_member(ring.var("x"), gb)
        assert not ideal_member(ring.parse("x + 1"), gb)

    def test_membership_closure_randomized(self):
        ring = PolyRing(["x", "y"], "grevlex")
        gb = buchberger(Ideal([ring.parse("x^2 - y"), ring.parse("x*y - 1")], ring))
        rng = random.Random(9)
        members = [p for p in gb.basis]
        for _ in range(50):
            f = members[rng.randrange(len(members))]
            g = members[rng.randrange(len(members))]
            acc = {}
            for _ in range(rng.randint(1, 3)):
                e = (rng.randint(0, 2), rng.randint(0, 2))
                acc[e] = acc.get(e, 0) + Fraction(rng.randint(-3, 3))
            h = ring.poly(acc)
            assert ideal_member(f + g, gb)
            assert ideal_member(h * f, gb)

    def test_resort_across_orders(self):
        lexring = PolyRing(["x", "y"], "lex")
        grev = PolyRing(["x", "y"], "grevlex")
        gb = buchberger(Ideal([grev.parse("x - y")], grev))
        assert ideal_member(lexring.parse("x^2 - y^2"), gb)


class TestIdealFile:
    def test_roundtrip_with_params(self):
        text = """# surface
vars: x, y, z | params: t, u
x - t*u^2 + t^3
y - u
z - u^2 + t^2
"""
        ideal, params = parse_ideal_file(text)
        assert params == ["t", "u"]
        assert ideal.ring.order.kind == "block"
        assert len(ideal.generators) == 3

    def test_errors_name_line(self):
        with pytest.raises(ValueError, match="line 3"):
            parse_ideal_file("vars: x\nx\nx + q\n")

    def test_missing_header(self):
        with pytest.raises(ValueError, match="vars"):
            parse_ideal_file("x + 1\n")
