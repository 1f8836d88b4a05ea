from fractions import Fraction as F

import pytest
from hypothesis import assume, given, settings, strategies as st

from dgla.errors import InputError, NotAComplexError
from dgla.linalg import (
    ChainComplex,
    DegreeMap,
    GradedSpace,
    cohomology,
    cohomology_dims,
    cone,
    format_scalar,
    homotopy_defect,
    inverse,
    is_acyclic,
    is_chain_map,
    kernel,
    matmul,
    matvec,
    normalize_homotopy,
    parse_scalar,
    rank,
    row_reduce,
    solve,
    split_complex,
    truncate,
    truncation_inclusion,
)


def pair_complex():
    space = GradedSpace({0: ("e",), 1: ("f",)})
    return ChainComplex.build(space, {0: [[1]]})


def test_scalars_round_trip():
    assert parse_scalar("-3/6") == F(-1, 2)
    assert parse_scalar("7") == 7
    assert format_scalar(F(4, 2)) == "2"
    assert format_scalar(F(-1, 3)) == "-1/3"
    for bad in ("1/0", "x", "1.5", True):
        with pytest.raises(InputError):
            parse_scalar(bad)


def test_rank_and_kernel_examples():
    assert rank([[1, 0], [0, 1]]) == 2
    assert kernel([[1, 0], [0, 1]], ncols=2) == []
    assert rank([[0, 0], [0, 0]]) == 0
    assert len(kernel([[0, 0], [0, 0]], ncols=2)) == 2
    m = [[1, 2], [2, 4]]
    assert rank(m) == 1
    (v,) = kernel(m, ncols=2)
    assert [x / v[1] for x in v] == [-2, 1]
    assert matvec(m, v) == [0, 0]


def test_solve_reports_infeasible():
    assert solve([[1, 1], [2, 2]], [1, 3], ncols=2) is None
    x = solve([[1, 1], [1, -1]], [3, 1], ncols=2)
    assert x == [2, 1]


matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_rank_nullity_and_kernel_vectors(m):
    ncols = len(m[0])
    ker = kernel(m, ncols=ncols)
    assert rank(m) + len(ker) == ncols
    for v in ker:
        assert not any(matvec(m, v))


@settings(max_examples=60, deadline=None)
@given(matrices, st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_solve_returns_a_solution_of_consistent_systems(m, x):
    ncols = len(m[0])
    rhs = matvec(m, [F(v) for v in x[:ncols]])
    sol = solve(m, rhs, ncols=ncols)
    assert sol is not None and matvec(m, sol) == rhs


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-2, 2), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_inverse(m):
    n = len(m)
    assume(rank(m) == n)
    ident = matmul(m, inverse(m))
    assert ident == [[F(int(i == j)) for j in range(n)] for i in range(n)]


def test_pivot_rule_is_deterministic():
    rr = row_reduce([[0, 2, 4], [1, 1, 1]])
    assert list(rr.pivot_columns) == [0, 1]


def test_not_a_complex_is_rejected_with_witness():
    space = GradedSpace({0: ("a",), 1: ("b",), 2: ("c",)})
    with pytest.raises(NotAComplexError) as e:
        ChainComplex.build(space, {0: [[1]], 1: [[1]]})
    assert e.value.witness["element"] == "a"


def test_cohomology_examples():
    space = GradedSpace({-1: ("a", "b"), 3: ("c",)})
    assert cohomology_dims(ChainComplex.zero_differential(space)) == {-1: 2, 3: 1}
    assert is_acyclic(pair_complex())
    three = GradedSpace({0: ("u",), 1: ("v", "w"), 2: ("z",)})
    c = ChainComplex.build(three, {0: [[1], [0]], 1: [[0, 1]]})
    assert cohomology_dims(c) == {0: 0, 1: 0, 2: 0}


def test_cohomology_representatives_are_cocycles():
    space = GradedSpace({0: ("a", "b"), 1: ("c", "d")})
    c = ChainComplex.build(space, {0: [[1, 1], [0, 0]]})
    h = cohomology(c)
    assert h[0].dim == 1 and h[1].dim == 1
    for v in h[0].representatives:
        assert not any(matvec(c.d(0), v))


def test_split_examples():
    zero = ChainComplex.zero_differential(GradedSpace({0: ("a",), 2: ("b", "c")}))
    s = split_complex(zero)
    assert s.w.space.total_dim == 0 and s.h.space.total_dim == 3
    assert s.gamma.is_zero()
    p = split_complex(pair_complex())
    assert p.h.space.total_dim == 0
    # gamma(f) = -e, in the coordinates of W
    e_w = p.project_w.apply(0, [F(1)])
    f_w = p.project_w.apply(1, [F(1)])
    assert p.gamma.apply(1, f_w) == [-x for x in e_w]
    assert homotopy_defect(p.w, p.gamma).is_zero()


def test_split_matches_cohomology_on_mixed_complex():
    space = GradedSpace({0: ("z", "e"), 1: ("f",)})
    c = ChainComplex.build(space, {0: [[0, 1]]})
    s = split_complex(c)
    assert cohomology_dims(s.h) == {0: 1}
    assert sum(cohomology_dims(c).values()) == s.h.space.total_dim


def test_normalize_homotopy_on_pair():
    c = pair_complex()
    gamma = DegreeMap(c.space, c.space, -1, {1: [[-1]]})
    h = normalize_homotopy(c, gamma)
    assert h.block(1) == [[-1]]
    assert h.compose(h).is_zero()
    assert homotopy_defect(c, h).is_zero()
    empty = ChainComplex.zero_differential(GradedSpace({}))
    assert normalize_homotopy(empty, DegreeMap.zero(empty.space, empty.space, -1)).is_zero()


def test_normalize_homotopy_repairs_a_non_square_zero_gamma():
    # acyclic a -> (b1, b2) -> (c1, c2) -> e
    space = GradedSpace({0: ("a",), 1: ("b1", "b2"), 2: ("c1", "c2"), 3: ("e",)})
    c = ChainComplex.build(space, {0: [[1], [0]], 1: [[0, 0], [0, 1]], 2: [[1, 0]]})
    gamma = split_complex(c).gamma
    w = split_complex(c).w
    # gamma + d sigma - sigma d is still a homotopy; sigma of degree -2
    sigma = DegreeMap(w.space, w.space, -2, {
        n: [[F(1)] * w.dim(n) for _ in range(w.dim(n - 2))] for n in w.space.degrees if w.dim(n - 2)
    })
    d = w.differential
    bent = gamma + d.compose(sigma) - sigma.compose(d)
    assert homotopy_defect(w, bent).is_zero()
    assert not bent.compose(bent).is_zero()
    h = normalize_homotopy(w, bent)
    assert h.compose(h).is_zero()
    assert homotopy_defect(w, h).is_zero()


def test_truncation_examples():
    low = ChainComplex.zero_differential(GradedSpace({-3: ("a",), -2: ("b",)}))
    assert truncate(low).space.pairs() == low.space.pairs()
    c = ChainComplex.build(GradedSpace({-1: ("a",), 0: ("b",)}), {-1: [[1]]})
    assert truncate(c).dim(-1) == 0
    z = ChainComplex.zero_differential(GradedSpace({-1: ("a", "b"), 0: ("c",)}))
    t = truncate(z)
    assert t.dim(-1) == 2 and t.dim(0) == 0
    assert is_chain_map(truncation_inclusion(z), t, z)


def test_cone_of_identity_is_acyclic():
    c = ChainComplex.zero_differential(GradedSpace({0: ("a",), 1: ("b",)}))
    blocks = {0: [[1]], 1: [[1]]}
    assert is_acyclic(cone(blocks, c, c))
