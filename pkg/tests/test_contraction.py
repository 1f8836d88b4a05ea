import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from dgla.contraction import (
    Contraction,
    cohomology_commutation_check,
    contraction_from_splitting,
    extend_to_lie,
    extend_to_tensor,
    identity_contraction,
    linear_presentation,
    split_formula_check,
    verify_contraction,
)
from dgla.errors import InputError
from dgla.freelie import Realization
from dgla.linalg import ChainComplex, DegreeMap, GradedSpace, cohomology_dims
from dgla.samples import random_complex, random_contraction
from dgla.tensor import Tensor, concat

L = Tensor.letter


def pair_onto_zero(sign=-1):
    big = ChainComplex.build(GradedSpace({0: ("e",), 1: ("f",)}), {0: [[1]]})
    small = ChainComplex.zero_differential(GradedSpace({}))
    zero_in = DegreeMap.zero(small.space, big.space, 0)
    zero_out = DegreeMap.zero(big.space, small.space, 0)
    h = DegreeMap(big.space, big.space, -1, {1: [[F(sign)]]})
    return Contraction(small, big, zero_in, zero_out, h)


def cocycle_plus_pair():
    """N = <m> + (e -> f) with m of degree 0, contracted onto M = <m>."""
    big = ChainComplex.build(GradedSpace({0: ("m", "e"), 1: ("f",)}), {0: [[0, 1]]})
    small = ChainComplex.zero_differential(GradedSpace({0: ("m",)}))
    iota = DegreeMap(small.space, big.space, 0, {0: [[1], [0]]})
    pi = DegreeMap(big.space, small.space, 0, {0: [[1, 0]]})
    h = DegreeMap(big.space, big.space, -1, {1: [[0], [-1]]})
    return Contraction(small, big, iota, pi, h)


def test_identity_contraction_passes():
    c = ChainComplex.build(GradedSpace({0: ("a",), 1: ("b",)}), {0: [[2]]})
    assert verify_contraction(identity_contraction(c)).passed


def test_pair_contraction_sign():
    assert verify_contraction(pair_onto_zero(-1)).passed
    rep = verify_contraction(pair_onto_zero(+1))
    assert rep.failures() == ["iota pi - Id_N = dh + hd"]
    assert rep.check("iota pi - Id_N = dh + hd").witness is not None


def test_contraction_from_splitting_is_a_contraction():
    rng = random.Random(3)
    for _ in range(10):
        c = random_complex(rng, 6)
        k = contraction_from_splitting(c)
        assert verify_contraction(k).passed
        assert cohomology_dims(k.small) == {n: d for n, d in cohomology_dims(c).items() if d}


def test_bidegree_examples():
    t = extend_to_tensor(cocycle_plus_pair(), 3)
    b = t.basis
    (w0,) = [a for a in b.w_letters if b.degrees[a] == 0]
    (w1,) = [a for a in b.w_letters if b.degrees[a] == 1]
    def pair(word):
        bd = b.bidegree(word)
        return bd.a, bd.b

    assert pair(("m", "m", "m")) == (3, 0)
    assert pair(("m", w0)) == (1, 1)
    assert pair((w0, w1, "m")) == (1, 2)
    with pytest.raises(InputError):
        b.bidegree(("nope",))


def test_k_examples():
    t = extend_to_tensor(cocycle_plus_pair(), 3)
    b = t.basis
    (w1,) = [a for a in b.w_letters if b.degrees[a] == 1]
    assert t.k(Tensor.word(("m", "m"))) == Tensor.zero()
    assert t.k(L(w1)) == b.h_images[w1]
    assert t.k(Tensor.word(("m", w1))) == concat(L("m"), b.h_images[w1])


def test_split_formula_examples():
    t = extend_to_tensor(cocycle_plus_pair(), 3)
    b = t.basis
    (w0,) = [a for a in b.w_letters if b.degrees[a] == 0]
    (w1,) = [a for a in b.w_letters if b.degrees[a] == 1]
    m = L("m")
    # b = 0: k(x y) = (-1)^|x| x k(y)
    assert t.k(concat(m, L(w1))) == concat(m, t.k(L(w1)))
    # q = 0: k(x y) = k(x) y
    assert t.k(concat(L(w1), m)) == concat(t.k(L(w1)), m)
    rep = split_formula_check(L(w1), L(w1), t)
    assert rep.passed and not rep.vacuous
    assert rep.rhs == (concat(t.k(L(w1)), L(w1)) - concat(L(w1), t.k(L(w1)))) * F(1, 2)
    assert split_formula_check(m, m, t).vacuous
    assert split_formula_check(L(w0), L(w1), t).passed


def test_cocycle_plus_pair_extends():
    c = cocycle_plus_pair()
    for rep in extend_to_tensor(c, 4).verify().values():
        assert rep.passed
    lie = extend_to_lie(c, 4)
    assert all(rep.passed for rep in lie.verify().values())
    assert lie.rho_commutation_failures() == []


def test_k_on_weight_one_is_h():
    lie = extend_to_lie(cocycle_plus_pair(), 2)
    b = lie.tensor.basis
    for a in b.w_letters:
        assert lie.k(L(a)) == b.h_images.get(a, Tensor.zero())
        assert lie.k(lie.rho(L(a))) == lie.rho(lie.k(L(a)))


def test_lie_bracket_formula():
    lie = extend_to_lie(cocycle_plus_pair(), 3)
    b = lie.tensor.basis
    (w0,) = [a for a in b.w_letters if b.degrees[a] == 0]
    (w1,) = [a for a in b.w_letters if b.degrees[a] == 1]
    assert lie.bracket_formula_check(L(w1), L(w1))
    assert lie.bracket_formula_check(L("m"), L(w1))
    assert lie.bracket_formula_check(L(w0), L(w1))


def test_acyclic_lie_algebra_contracts_to_zero():
    c = pair_onto_zero()
    lie = extend_to_lie(c, 4)
    for w, rep in lie.verify().items():
        block = lie.weight_contraction(w)
        assert rep.passed and block.small.space.total_dim == 0
    real = Realization(linear_presentation(c.big, 4))
    assert all(v == 0 for v in cohomology_dims(real.complex(-1, 5)).values())


def test_extension_refuses_invalid_contraction():
    with pytest.raises(InputError):
        extend_to_tensor(pair_onto_zero(+1), 2)


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 10_000))
def test_random_contractions_extend(seed):
    c = random_contraction(random.Random(seed))
    assert verify_contraction(c).passed
    lie = extend_to_lie(c, 3)
    assert all(rep.passed for rep in lie.tensor.verify().values())
    assert all(rep.passed for rep in lie.verify().values())
    assert not lie.rho_commutation_failures()


def test_commutation_examples():
    zero = ChainComplex.zero_differential(GradedSpace({0: ("a",), 1: ("b",)}))
    assert cohomology_commutation_check(zero, 3).passed
    pair = ChainComplex.build(GradedSpace({0: ("e",), 1: ("f",)}), {0: [[1]]})
    rep = cohomology_commutation_check(pair, 4)
    assert rep.passed and all(not row for row in rep.lie_lhs.values())
    assert all(not row for row in rep.tensor_lhs.values())
    mixed = ChainComplex.build(GradedSpace({0: ("z", "e"), 1: ("f",)}), {0: [[0, 1]]})
    rep = cohomology_commutation_check(mixed, 4)
    assert rep.passed and rep.lie_lhs == {1: {0: 1}, 2: {}, 3: {}, 4: {}}


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10_000))
def test_random_commutation(seed):
    assert cohomology_commutation_check(random_complex(random.Random(seed), 4), 3).passed
