from fractions import Fraction as F

import pytest
import sympy

from dgla.errors import InputError
from dgla.freelie import DglaPresentation
from dgla.maurer_cartan import (
    NilpotentRing,
    TensorDgla,
    free_mc_algebra,
    mc_elements,
    obstruction_demo,
    rescaling_check,
)


def test_ring_order_must_be_at_least_two():
    with pytest.raises(InputError):
        NilpotentRing(1)
    assert list(NilpotentRing(3).powers) == [1, 2]


def test_mc_elements_of_t_with_zero_d():
    trivial = free_mc_algebra(3, 0)
    small = mc_elements(TensorDgla(trivial, NilpotentRing(2)))
    assert small.constraints == []
    (el,) = small.elements()
    assert el[1][0].free_symbols  # every a s t is Maurer-Cartan
    large = mc_elements(TensorDgla(trivial, NilpotentRing(3)))
    a = sympy.Symbol("a1_0")
    assert large.constraints == [-a ** 2 / 2]
    for el in large.elements():
        assert el[1] == [0]
    # the order-2 coefficient stays free
    assert all(sympy.Symbol("a2_0") in fp for fp in large.free_parameters())


def test_is_mc_examples():
    trivial = TensorDgla(free_mc_algebra(3, 0), NilpotentRing(3))
    assert trivial.is_mc({2: [sympy.Integer(5)]})
    assert not trivial.is_mc({1: [sympy.Integer(1)]})
    # 1/2 [s t, s t] = 1/2 s^2 [t,t]
    assert trivial.mc_residue({1: [sympy.Integer(1)]}) == {2: [sympy.Rational(1, 2)]}


def test_mc_algebra_has_only_solutions_of_its_own_equation():
    # with dt = -1/2[t,t], the degree-1 part is t and degree-2 part is [t,t]
    mc = TensorDgla(free_mc_algebra(3), NilpotentRing(3))
    sols = mc_elements(mc)
    for el in sols.elements():
        assert mc.is_mc(el)


def test_zero_dimensional_degree_one():
    p = DglaPresentation.free([("x", 0)], 2)
    sols = mc_elements(TensorDgla(p, NilpotentRing(3)))
    assert sols.elements() == [{1: [], 2: []}] and sols.describe() == ["0"]


@pytest.mark.parametrize("lam", [F(1), F(-3, 2), F(2, 7)])
def test_rescaling(lam):
    assert rescaling_check(lam)


def test_rescaling_rejects_zero():
    with pytest.raises(InputError):
        rescaling_check(F(0))


def test_obstruction_demo_items():
    rep = obstruction_demo()
    assert rep.passed
    items = rep.items()
    assert len(items) == 5 and all(ok for _, ok, _ in items)
    assert rep.x_is_mc and not rep.lift_exists and rep.bracket_nonzero
    assert rep.mc_algebra_acyclic and not rep.mc_algebra_semifree
