from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import affine_combination, in_triangle

from barycentric import HullModel, MetricKind, ProbDist, SemilatticeModel, TableModel, cc, gamma, metric, nu_assoc
from barycentric.distributions import dyadic_thirds_grid, grid_distributions
from barycentric.errors import (
    DegenerateError,
    DimensionError,
    DomainError,
    NoMetricError,
    UnsupportedWeightError,
)
from barycentric.linalg import RowEchelon, affine_dimension, in_convex_hull, rank


def test_cc_hull_examples():
    m = HullModel([(0, 0), (5, 7), (1, 1)])
    assert cc(m, 1, (F(0), F(0)), (F(5), F(7))) == (0, 0)
    assert cc(m, F(1, 2), (F(0), F(0)), (F(1), F(1))) == (F(1, 2), F(1, 2))
    assert cc(m, 0, (F(0), F(0)), (F(5), F(7))) == (5, 7)


def test_cc_rejects_points_outside_hull(triangle):
    with pytest.raises(DomainError):
        cc(triangle, F(1, 2), (F(1), F(1)), (F(0), F(0)))
    with pytest.raises(DomainError):
        cc(triangle, F(1, 2), (F(0),), (F(0), F(0)))


def test_cc_semilattice(twochain):
    assert cc(twochain, F(1, 2), "a", "b") == "a"
    assert cc(twochain, 1, "b", "a") == "b"
    assert cc(twochain, 0, "b", "a") == "a"
    with pytest.raises(DomainError):
        cc(twochain, F(1, 2), "a", "c")


def test_cc_table_off_grid(chain_table):
    assert cc(chain_table, F(1, 3), "b", "b") == "b"
    with pytest.raises(UnsupportedWeightError):
        cc(chain_table, F(1, 4), "a", "b")


def test_nu_assoc():
    assert nu_assoc(F(1, 2), F(1, 2)) == F(1, 3)
    for mu in dyadic_thirds_grid(2):
        assert nu_assoc(0, mu) == 0
    with pytest.raises(DegenerateError):
        nu_assoc(1, 1)


def test_nu_assoc_matches_hull_expansion():
    # both sides of the associativity law collapse to (lam*mu, lam*(1-mu), 1-lam)
    x, y, z = (F(0), F(0)), (F(3), F(0)), (F(0), F(5))
    m = HullModel([x, y, z])
    grid = dyadic_thirds_grid(2)
    for lam in grid:
        for mu in grid:
            if lam * mu == 1:
                continue
            nu = nu_assoc(lam, mu)
            assert 0 <= nu <= 1
            eta = (lam * mu, lam * (1 - mu), 1 - lam)
            left = cc(m, lam, cc(m, mu, x, y), z)
            right = cc(m, lam * mu, x, cc(m, nu, y, z))
            assert left == right == affine_combination(eta, [x, y, z])
            assert gamma(m, ProbDist(eta), [x, y, z]) == left


def test_gamma_examples(triangle):
    pts = [(F(0), F(0)), (F(3), F(0)), (F(0), F(3))]
    big = HullModel(pts)
    assert gamma(big, ProbDist.uniform(3), pts) == (1, 1)
    seg = HullModel([(0,), (2,)])
    assert gamma(seg, ProbDist([F(1, 2), F(1, 4), F(1, 4)]), [(F(0),), (F(1),), (F(2),)]) == (F(3, 4),)
    for i in range(3):
        assert gamma(big, ProbDist.dirac(3, i), pts) == pts[i]


def test_gamma_dirac_all_models(twochain, chain_table):
    assert gamma(twochain, ProbDist([0, 1, 0]), ["a", "b", "a"]) == "b"
    assert gamma(chain_table, ProbDist([0, 1, 0]), ["a", "b", "a"]) == "b"


def test_gamma_length_mismatch(triangle):
    with pytest.raises(DimensionError):
        gamma(triangle, ProbDist.uniform(2), [(F(0), F(0))])


def test_gamma_binary_is_cc(triangle, twochain, chain_table):
    pts = [(F(0), F(0)), (F(1), F(0)), (F(0), F(1))]
    for lam in dyadic_thirds_grid(2):
        for x in pts:
            for y in pts:
                assert gamma(triangle, ProbDist.binary(lam), [x, y]) == cc(triangle, lam, x, y)
        for x in "ab":
            for y in "ab":
                assert gamma(twochain, ProbDist.binary(lam), [x, y]) == cc(twochain, lam, x, y)
                if chain_table.supports(lam):
                    assert gamma(chain_table, ProbDist.binary(lam), [x, y]) == cc(chain_table, lam, x, y)


GRID = dyadic_thirds_grid(2)


@settings(max_examples=300)
@given(st.integers(1, 5).flatmap(lambda n: st.tuples(st.sampled_from(grid_distributions(GRID, n)), st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6)), min_size=n, max_size=n))))
def test_gamma_matches_direct_oracle(case):
    mu, raw = case
    gens = [(F(0), F(0)), (F(6), F(0)), (F(0), F(6)), (F(6), F(6))]
    m = HullModel(gens)
    pts = [(F(a), F(b)) for a, b in raw]
    assert gamma(m, mu, pts) == affine_combination(mu.weights, pts)


def test_metric_examples():
    o, d = (F(0), F(0)), (F(1), F(1))
    l1 = HullModel([o, d], MetricKind.l1())
    linf = HullModel([o, d], MetricKind.linf())
    assert metric(l1, o, d) == 2
    assert metric(linf, o, d) == 1
    assert metric(l1, d, d) == 0
    w = HullModel([o, d], MetricKind.weighted_l1([F(2), F(1, 3)]))
    assert metric(w, o, d) == F(7, 3)


def test_metric_missing(twochain):
    with pytest.raises(NoMetricError):
        metric(twochain, "a", "b")
    with pytest.raises(NoMetricError):
        metric(HullModel([(0,), (1,)]), (F(0),), (F(1),))


def test_metric_kind_validation():
    with pytest.raises(ValueError):
        MetricKind.weighted_l1([F(1), F(0)])
    with pytest.raises(DimensionError):
        HullModel([(0, 0), (1, 1)], MetricKind.weighted_l1([F(1)]))


def test_hull_construction_errors():
    with pytest.raises(ValueError):
        HullModel([])
    with pytest.raises(DimensionError):
        HullModel([(0,), (0, 1)])
    with pytest.raises(TypeError):
        HullModel([(0.5,)])


def test_semilattice_validation():
    with pytest.raises(ValueError, match="commutative"):
        SemilatticeModel(["a", "b"], {("a", "a"): "a", ("a", "b"): "a", ("b", "a"): "b", ("b", "b"): "b"})
    with pytest.raises(ValueError, match="idempotent"):
        SemilatticeModel(["a", "b"], {("a", "a"): "b", ("a", "b"): "b", ("b", "a"): "b", ("b", "b"): "b"})
    with pytest.raises(ValueError):
        SemilatticeModel.from_order(["a", "b"], [])  # no common lower bound


def test_semilattice_from_order(antichain):
    assert antichain.meet[("u", "v")] == "bot"
    assert antichain.meet[("u", "bot")] == "bot"
    assert antichain.meet[("u", "u")] == "u"


def test_table_construction_errors(twochain):
    with pytest.raises(ValueError):
        TableModel(["a", "b"], {F(1, 2): {("a", "a"): "a"}})
    with pytest.raises(DomainError):
        TableModel(["a"], {F(1, 2): {("a", "a"): "z"}})


# --- exact linear algebra ---------------------------------------------------


def test_row_echelon_rank_against_sympy():
    sympy = pytest.importorskip("sympy")
    import random

    rng = random.Random(3)
    for _ in range(30):
        rows = [[F(rng.randint(-2, 2), rng.randint(1, 3)) for _ in range(5)] for _ in range(rng.randint(1, 6))]
        if rng.random() < 0.5:
            rows.append([a + b for a, b in zip(rows[0], rows[-1])])
        assert rank(rows) == sympy.Matrix(rows).rank()


def test_row_echelon_pivots_on_last_column():
    ech = RowEchelon()
    ech.add({0: F(-1, 2), 1: F(-1, 2), 2: F(1)})
    assert ech.pivots == [2]
    assert ech.contains({0: F(-1), 1: F(-1), 2: F(2)})
    assert not ech.contains({0: F(1)})


def test_affine_dimension():
    assert affine_dimension([(F(0), F(0)), (F(1), F(0)), (F(0), F(1)), (F(1), F(1))]) == 2
    assert affine_dimension([(F(0), F(0)), (F(1), F(1)), (F(2), F(2))]) == 1
    assert affine_dimension([(F(3),)]) == 0


def test_in_convex_hull_against_orientation_oracle():
    import random

    rng = random.Random(11)
    tri = [(F(0), F(0)), (F(4), F(1)), (F(1), F(3))]
    for _ in range(300):
        p = (F(rng.randint(-4, 20), 4), F(rng.randint(-4, 16), 4))
        assert in_convex_hull(p, tri) == in_triangle(p, *tri)


def test_in_convex_hull_degenerate():
    seg = [(F(0), F(0)), (F(2), F(2))]
    assert in_convex_hull((F(1), F(1)), seg)
    assert not in_convex_hull((F(1), F(0)), seg)
    assert not in_convex_hull((F(3), F(3)), seg)
    assert in_convex_hull((F(5),), [(F(5),)])
