import random
from fractions import Fraction

import pytest

from algstat.geometry import (
    DimensionMismatchError,
    JacobianMatrix,
    exact_rank,
    generic_rank,
    jacobian,
    map_jacobian,
    model_dimension,
    singular_scan,
    subspace_probes,
)
from algstat.netmodels import (
    build_map,
    joint_space_map,
    parse_model,
    sample_interior_params,
)
from algstat.polyring import PolyRing

from test_netmodels import NAIVE_BAYES, NOISY_OR


SURFACE_POLY = "x^2 - y^2*z^2 + z^3"


class TestExactRank:
    def test_simple_ranks(self):
        assert exact_rank([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]) == 1
        assert exact_rank([[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]) == 2
        assert exact_rank([[Fraction(0)]]) == 0
        assert exact_rank([]) == 0

    def test_matches_fraction_gauss_randomized(self):
        rng = random.Random(77)
        for _ in range(200):
            n, m = rng.randint(1, 5), rng.randint(1, 5)
            M = [
                [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(m)]
                for _ in range(n)
            ]
            # plain exact Gaussian elimination as the oracle
            A = [row[:] for row in M]
            rank = 0
            r = 0
            for c in range(m):
                piv = next((i for i in range(r, n) if A[i][c] != 0), None)
                if piv is None:
                    continue
                A[r], A[piv] = A[piv], A[r]
                for i in range(n):
                    if i != r and A[i][c] != 0:
                        f = A[i][c] / A[r][c]
                        A[i] = [x - f * y for x, y in zip(A[i], A[r])]
                rank += 1
                r += 1
            assert exact_rank(M) == rank


class TestJacobian:
    def test_printed_surface_jacobian(self):
        ring = PolyRing(["x", "y", "z"], "lex")
        J = jacobian([ring.parse(SURFACE_POLY)], ["x", "y", "z"])
        assert J.entries[0][0] == ring.parse("2*x")
        assert J.entries[0][1] == ring.parse("-2*y*z^2")
        assert J.entries[0][2] == ring.parse("3*z^2 - 2*z*y^2")

    def test_constant_map_zero_matrix(self):
        ring = PolyRing(["x", "y"], "lex")
        J = jacobian([ring.const(3), ring.const(5)], ["x", "y"])
        assert all(e.is_zero for row in J.entries for e in row)

    def test_linear_map_constant_matrix(self):
        ring = PolyRing(["x", "y"], "lex")
        J = jacobian([ring.parse("2*x + 3*y"), ring.parse("x - y")], ["x", "y"])
        point = {"x": Fraction(7), "y": Fraction(-2)}
        assert J.evaluate(point) == [
            [Fraction(2), Fraction(3)],
            [Fraction(1), Fraction(-1)],
        ]

    def test_chain_rule_at_a_point(self):
        # f: (t) -> (t^2, t^3); g: (u, v) -> u*v; J(g.f) = J(g)J(f) exactly
        tring = PolyRing(["t"], "lex")
        uvring = PolyRing(["u", "v"], "lex")
        t = tring.var("t")
        f1, f2 = t ** 2, t ** 3
        g = uvring.parse("u*v")
        comp = g.substitute({"u": f1, "v": f2})
        point = {"t": Fraction(5, 3)}
        lhs = comp.partial("t").evaluate(point)
        gu = g.partial("u").evaluate({"u": f1.evaluate(point), "v": f2.evaluate(point)})
        gv = g.partial("v").evaluate({"u": f1.evaluate(point), "v": f2.evaluate(point)})
        rhs = gu * f1.partial("t").evaluate(point) + gv * f2.partial("t").evaluate(point)
        assert lhs == rhs


class TestGenericRankAndScan:
    def setup_method(self):
        ring = PolyRing(["x", "y", "z"], "lex")
        self.J = jacobian([ring.parse(SURFACE_POLY)], ["x", "y", "z"])

    def test_surface_generic_rank_is_one(self):
        profile = generic_rank(self.J, trials=20, seed=1)
        assert profile.generic_rank == 1
        assert all(r <= profile.generic_rank for _, r in profile.witnesses)

    def test_y_axis_points_drop_to_rank_zero(self):
        points = [(0, c, 0) for c in (1, -1, 2, -2, 3)]
        profile = singular_scan(self.J, points, generic=1)
        assert [r for _, r in profile.witnesses] == [0] * 5
        assert len(profile.drops) == 5

    def test_generic_points_have_rank_one(self):
        rng = random.Random(3)
        pts = [
            (rng.randint(1, 50), rng.randint(1, 50), rng.randint(1, 50))
            for _ in range(20)
        ]
        profile = singular_scan(self.J, pts, generic=1)
        assert not profile.drops

    def test_linear_variety_no_drops(self):
        ring = PolyRing(["x", "y"], "lex")
        J = jacobian([ring.var("x")], ["x", "y"])
        pts = [(0, 0), (1, 5), (-3, 2)]
        profile = singular_scan(J, pts, generic=1)
        assert not profile.drops
        assert all(r == 1 for _, r in profile.witnesses)

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError):
            singular_scan(self.J, [(1, 2)], generic=1)

    def test_subspace_probes(self):
        pts = subspace_probes(["x", "y", "z"], ["x", "z"], [1, -1, 2, -2, 3])
        assert {p["y"] for p in pts} == {1, -1, 2, -2, 3}
        assert all(p["x"] == 0 and p["z"] == 0 for p in pts)

    def test_report_renders(self):
        profile = singular_scan(self.J, [(0, 3, 0)], generic=1)
        text = profile.render()
        assert "generic rank: 1" in text and "rank 0" in text


class TestSurfaceRoundTrip:
    def test_implicitize_then_scan_rediscovers_y_axis(self):
        # the discovered constraint, not the hand-written one, must expose
        # the singular locus
        from algstat.implicitize import implicitize_model
        from algstat.netmodels import parse_model, raw_param_map

        src = (
            "map surface\nparam t\nparam u\nobs x = t*(u^2 - t^2)\n"
            "obs y = u\nobs z = u^2 - t^2\n"
        )
        cs = implicitize_model(raw_param_map(parse_model(src)))
        poly = cs.constraints[0].poly
        J = jacobian([poly], list(poly.ring.names))
        profile = singular_scan(J, subspace_probes(poly.ring.names, ["x", "z"],
                                                   [1, -1, 2, -2, 3]), generic=1)
        assert all(r == 0 for _, r in profile.witnesses)
        assert len(profile.drops) == 5


class TestModelDimension:
    def test_binary_chain(self):
        net = parse_model(
            "discrete network chain\nvar A states 2\nvar B states 2\nvar C states 2\n"
            "edge A -> B\nedge B -> C\n"
        )
        # 1 (root) + 2 (B given A) + 2 (C given B)
        assert model_dimension(net, "joint", trials=5, seed=0) == 5

    def test_chain_with_bigger_cards(self):
        net = parse_model(
            "discrete network chain\nvar A states 2\nvar B states 3\nvar C states 3\n"
            "edge A -> B\nedge B -> C\n"
        )
        # 1 + 2*2 + 2*3
        assert model_dimension(net, "joint", trials=5, seed=0) == 11

    def test_saturated_three_binary(self):
        net = parse_model(
            "discrete network full\nvar A states 2\nvar B states 2\nvar C states 2\n"
            "edge A -> B\nedge A -> C\nedge B -> C\n"
        )
        assert model_dimension(net, "joint", trials=5, seed=0) == 7

    def test_noisy_or_dimension(self):
        net = parse_model(NOISY_OR)
        assert model_dimension(net, "joint", trials=8, seed=0) == 4

    def test_random_nonhidden_nets_match_closed_form(self):
        rng = random.Random(2024)
        for trial in range(5):
            k = rng.randint(2, 4)
            cards = [rng.randint(2, 3) for _ in range(k)]
            lines = [f"discrete network r{trial}"]
            for i, c in enumerate(cards):
                lines.append(f"var X{i} states {c}")
            for i in range(k):
                for j in range(i + 1, k):
                    if rng.random() < 0.5:
                        lines.append(f"edge X{i} -> X{j}")
            net = parse_model("\n".join(lines) + "\n")
            expected = net.closed_form_dimension()
            assert model_dimension(net, "joint", trials=8, seed=trial) == expected

    def test_gaussian_dimension(self):
        net = parse_model(
            "gaussian network g\nvar X\nvar Y\nvar Z\nedge X -> Y\nedge Y -> Z\n"
        )
        # 2 edges + 3 variances
        assert model_dimension(net, "covariance", trials=5, seed=0) == 5

    def test_hidden_naive_bayes_rank_deficient(self):
        # binary-observable naive Bayes with enough leaves: parameter count
        # exceeds the generic rank, so no closed-form check applies
        net = parse_model(
            "discrete network nbb\nvar H hidden states 2\n"
            "var A states 2\nvar B states 2\nvar C states 2\n"
            "edge H -> A\nedge H -> B\nedge H -> C\n"
        )
        pmap = joint_space_map(net)
        dim, profile = model_dimension(net, "joint", trials=10, seed=0,
                                       return_profile=True)
        assert dim == 7  # saturated: 2x2x2 table has 7 free cells
        assert pmap.n == 7
        net4 = parse_model(
            "discrete network nb4\nvar H hidden states 2\n"
            "var A states 2\nvar B states 2\nvar C states 2\nvar D states 2\n"
            "edge H -> A\nedge H -> B\nedge H -> C\nedge H -> D\n"
        )
        dim4 = model_dimension(net4, "joint", trials=10, seed=0)
        assert dim4 == 9  # all 9 parameters identifiable at generic points

    def test_closed_form_mismatch_raises(self):
        net = parse_model(
            "discrete network chain\nvar A states 2\nvar B states 2\nedge A -> B\n"
        )
        pmap = joint_space_map(net)
        J = map_jacobian(pmap)
        # sabotage: drop a row so the rank cannot reach the closed form
        J_bad = JacobianMatrix(J.entries[:1], J.row_labels[:1], J.col_names, J.ring)
        profile = generic_rank(J_bad, trials=4,
                               sampler=lambda rng: sample_interior_params(pmap, rng))
        assert profile.generic_rank < net.closed_form_dimension()
        with pytest.raises(DimensionMismatchError):
            # feed the truncated map through the dimension check
            bad_map = build_map(net)
            bad_map.observables = bad_map.observables[:1]
            model_dimension(bad_map, "joint", trials=4, seed=0)

    def test_naive_bayes_ternary_dimension_vs_codimension(self):
        # generic rank 7 = 8 free cells minus the one discovered constraint
        net = parse_model(NAIVE_BAYES)
        dim = model_dimension(net, "joint", trials=10, seed=0)
        assert dim == (9 - 1) - 1
