import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from dgla.errors import InputError, WeightCapError
from dgla.freelie import (
    Derivation,
    DglaMorphism,
    DglaPresentation,
    FreeLieAlgebra,
    GeneratorSet,
    Realization,
    bracket,
    coproduct,
    derivation_extend,
    differential_check,
    dynkin_rho,
    identity_morphism,
    is_lie_element,
    lie_basis,
    lie_dims,
    nested_bracket,
    realize,
    tensor_basis,
)
from dgla.linalg import cohomology_dims
from dgla.oracles import multigraded_witt, witt_dimension
from dgla.samples import random_generators, random_tensor
from dgla.tensor import Tensor

L = Tensor.letter
W = Tensor.word


def lyndon_count(k: int, n: int) -> int:
    """Brute force: words strictly smaller than all their proper rotations."""
    count = 0
    for w in itertools.product(range(k), repeat=n):
        if all(w < w[i:] + w[:i] for i in range(1, n)):
            count += 1
    return count


def test_tensor_basis_examples():
    xy = GeneratorSet((("x", 0), ("y", 0)), 4)
    assert tensor_basis(xy, 2, 0) == [("x", "x"), ("x", "y"), ("y", "x"), ("y", "y")]
    t = GeneratorSet((("t", 1),), 4)
    assert tensor_basis(t, 3, 3) == [("t", "t", "t")]
    assert tensor_basis(t, 2, 1) == []


def test_dynkin_examples():
    degs = {"a": 0, "b": 0, "t": 1}
    assert dynkin_rho(L("a"), degs) == L("a")
    assert dynkin_rho(W("ab"), degs) == (W("ab") - W("ba")) * F(1, 2)
    assert dynkin_rho(W("tt"), degs) == W("tt")


def test_bracket_examples():
    assert bracket(L("v"), L("v"), {"v": 0}) == Tensor.zero()
    assert bracket(L("t"), L("t"), {"t": 1}) == W("tt") * 2
    assert bracket(L("x"), L("y"), {"x": 0, "y": 0}) == W("xy") - W("yx")


def test_lie_dims_examples():
    xy = lie_dims(GeneratorSet((("x", 0), ("y", 0)), 4))
    assert [sum(xy[w].values()) for w in range(1, 5)] == [2, 1, 2, 3]
    t = lie_dims(GeneratorSet((("t", 1),), 3))
    assert [sum(t[w].values()) for w in (1, 2, 3)] == [1, 1, 0]
    x2 = lie_dims(GeneratorSet((("x", 2),), 2))
    assert sum(x2[2].values()) == 0


def test_bianchi_identity():
    degs = {"t": 1}
    tt = bracket(L("t"), L("t"), degs)
    assert bracket(L("t"), tt, degs) == Tensor.zero()
    assert lie_basis(GeneratorSet((("t", 1),), 3), 3) == {}


@pytest.mark.parametrize("k", [2, 3])
def test_lie_dims_match_lyndon_words(k):
    gens = GeneratorSet(tuple((f"x{i}", 0) for i in range(k)), 5)
    table = lie_dims(gens)
    for w in range(1, 6):
        assert sum(table[w].values()) == lyndon_count(k, w) == witt_dimension(k, w)


def test_multigraded_dims_match_oracle():
    # letter multiplicities are tracked by the word, so count words in each fine degree
    alg = FreeLieAlgebra(GeneratorSet((("x", 0), ("y", 0)), 5))
    for w in range(1, 6):
        elems = alg.basis(w, 0)
        by_counts = {}
        for b in elems:
            key = (b.word.count("x"), b.word.count("y"))
            by_counts[key] = by_counts.get(key, 0) + 1
        for a in range(w + 1):
            assert by_counts.get((a, w - a), 0) == multigraded_witt((a, w - a))


def test_weight_cap_is_enforced():
    gens = GeneratorSet((("x", 0),), 2)
    with pytest.raises(WeightCapError):
        lie_basis(gens, 3)
    with pytest.raises(WeightCapError):
        DglaPresentation.free([("x", 0), ("y", 1)], 1, {"y": bracket(L("x"), L("x"), {"x": 0}) + W("xy")})


generator_sets = st.lists(st.integers(-2, 2), min_size=1, max_size=3).map(
    lambda ds: {f"g{i}": d for i, d in enumerate(ds)}
)


@st.composite
def tensors(draw, max_weight=4):
    degs = draw(generator_sets)
    terms = draw(st.lists(
        st.tuples(st.lists(st.sampled_from(sorted(degs)), min_size=1, max_size=max_weight),
                  st.integers(-3, 3)),
        min_size=1, max_size=5,
    ))
    x = Tensor.sum(W(tuple(w)) * c for w, c in terms)
    return degs, x


@settings(max_examples=80, deadline=None)
@given(tensors())
def test_rho_is_idempotent(data):
    degs, x = data
    r = dynkin_rho(x, degs)
    assert dynkin_rho(r, degs) == r


@settings(max_examples=50, deadline=None)
@given(generator_sets, st.data())
def test_brackets_are_lie_and_graded_antisymmetric(degs, data):
    letters = sorted(degs)
    a = data.draw(st.sampled_from(letters))
    b = data.draw(st.sampled_from(letters))
    br = bracket(L(a), L(b), degs)
    assert is_lie_element(br, degs)
    sign = 1 if degs[a] * degs[b] % 2 else -1
    assert bracket(L(b), L(a), degs) == br * sign


@settings(max_examples=50, deadline=None)
@given(tensors(max_weight=3))
def test_rho_image_is_lie(data):
    degs, x = data
    assert is_lie_element(dynkin_rho(x, degs), degs)


@settings(max_examples=40, deadline=None)
@given(generator_sets, st.data())
def test_graded_jacobi(degs, data):
    letters = sorted(degs)
    a, b, c = (L(data.draw(st.sampled_from(letters))) for _ in range(3))
    da, db, dc = (x.degree(degs) for x in (a, b, c))

    def br(x, y):
        return bracket(x, y, degs)

    def s(p):
        return -1 if p % 2 else 1

    total = (
        br(a, br(b, c)) * s(da * dc)
        + br(b, br(c, a)) * s(db * da)
        + br(c, br(a, b)) * s(dc * db)
    )
    assert total == Tensor.zero()


def test_nested_bracket_is_rho_image():
    degs = {"x": 0, "y": 1}
    w = ("x", "y", "y")
    assert dynkin_rho(W(w), degs) == nested_bracket(w, degs) * F(1, 3)


def test_morphism_examples():
    p = DglaPresentation.free([("x", 0), ("y", 0)], 3)
    assert identity_morphism(p).image("x") == L("x")
    z = DglaPresentation.free([("z", 0)], 3)
    f = DglaMorphism(p, z, {"x": L("z"), "y": L("z")})
    assert f(bracket(L("x"), L("y"), p.degrees)) == Tensor.zero()


@pytest.mark.parametrize("lam", [F(1), F(-3, 2), F(2, 7)])
def test_rescaling_morphism_commutes_with_d(lam):
    br = bracket(L("t"), L("t"), {"t": 1})
    src = DglaPresentation.free([("u", 1)], 3, {"u": bracket(L("u"), L("u"), {"u": 1}) * F(-1, 2)})
    tgt = DglaPresentation.free([("t", 1)], 3, {"t": br * lam})
    f = DglaMorphism(src, tgt, {"u": L("t") * (-2 * lam)})
    assert f.is_chain_map()


def test_derivation_examples():
    degs = {"v": 0, "w": 0}
    zero = derivation_extend(None, {}, {}, degs, 1)
    assert zero(bracket(L("v"), L("w"), degs)) == Tensor.zero()
    # g(v) = w with r = 0: [v,v] -> [w,v] + [v,w]
    der = derivation_extend(None, {}, {"v": L("w")}, degs, 0)
    x = bracket(L("v"), L("v"), degs)
    assert der(x) == bracket(L("w"), L("v"), degs) + bracket(L("v"), L("w"), degs)
    odd = {"v": 1, "w": 2}
    der1 = derivation_extend(None, {}, {"v": L("w")}, odd, 1)
    got = der1(bracket(L("v"), L("v"), odd))
    assert got == bracket(L("w"), L("v"), odd) + bracket(L("v"), L("w"), odd) * (-1)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_derivation_is_a_derivation_of_the_bracket(data):
    degs = data.draw(generator_sets)
    letters = sorted(degs)
    r = data.draw(st.integers(-1, 1))
    images = {}
    for g in letters:
        # a random Lie element of degree |g| + r (or zero)
        cands = [h for h in letters if degs[h] == degs[g] + r]
        images[g] = L(data.draw(st.sampled_from(cands))) * data.draw(st.integers(-2, 2)) if cands else Tensor.zero()
    der = Derivation(degs, images, r)
    x = L(data.draw(st.sampled_from(letters)))
    y = bracket(L(data.draw(st.sampled_from(letters))), L(data.draw(st.sampled_from(letters))), degs)
    lhs = der(bracket(x, y, degs))
    sign = -1 if (r * x.degree(degs)) % 2 else 1
    rhs = bracket(der(x), y, degs) + bracket(x, der(y), degs) * sign
    assert lhs == rhs


def test_differential_check_examples():
    assert differential_check(DglaPresentation.free([("x", 0)], 3)).passed
    t = DglaPresentation.free([("t", 1)], 3, {"t": bracket(L("t"), L("t"), {"t": 1}) * F(-1, 2)})
    assert differential_check(t).passed
    degs = {"a": 0, "b": 1}
    bad = DglaPresentation.free([("a", 0), ("b", 1)], 3, {"a": L("b"), "b": bracket(L("b"), L("b"), degs)})
    rep = differential_check(bad)
    assert not rep.passed
    (fail,) = rep.failures
    assert fail.name == "a" and fail.residue == bracket(L("b"), L("b"), degs)


def test_presentation_rejects_bad_differentials():
    with pytest.raises(InputError):
        DglaPresentation.free([("x", 0), ("y", 0)], 3, {"x": W("xy")})  # not Lie
    with pytest.raises(InputError):
        DglaPresentation.free([("x", 0)], 3, {"x": L("x")})  # wrong degree
    with pytest.raises(InputError):
        DglaPresentation.free([("x", 0)], 3, {"z": L("x")})


def test_coproduct_examples():
    p = DglaPresentation.free([("x", 0)], 3)
    assert coproduct(p, DglaPresentation.empty(3)).names == ("x",)
    q = coproduct(p, DglaPresentation.free([("y", 0)], 3))
    assert q.names == ("x", "y") and q.cofactors == (("x",), ("y",))
    assert q.algebra.dim(2, 0) == 1


def test_realize_mc_algebra():
    t = DglaPresentation.free([("t", 1)], 3, {"t": bracket(L("t"), L("t"), {"t": 1}) * F(-1, 2)})
    cx, _, real = realize(t, (0, 3))
    assert [cx.dim(n) for n in range(4)] == [0, 1, 1, 0]
    assert real.labels(1) == ("t",) and real.labels(2) == ("[t,t]",)
    assert real.d_matrix(1) == [[F(-1, 2)]]
    assert real.dim(3) == 0
    dims = cohomology_dims(Realization(t).complex(0, 3))
    assert all(v == 0 for n, v in dims.items() if 1 <= n <= 2)


def test_realization_zero_differential():
    p = DglaPresentation.free([("x", 0), ("y", 1)], 2)
    r = Realization(p)
    assert not any(any(row) for row in r.d_matrix(0))


def test_seeded_random_tensors_are_reproducible():
    a = random_tensor(random.Random(5), ["x", "y"], 4)
    b = random_tensor(random.Random(5), ["x", "y"], 4)
    assert a == b
    assert random_generators(random.Random(1), 3) == random_generators(random.Random(1), 3)
