"""Small seeded battery behind ``dgla selftest --seed N``."""
from __future__ import annotations

import random

from .cobar import CoalgebraData, semifree_certificate, validate_coalgebra
from .contraction import cohomology_commutation_check, extend_to_lie
from .corpus import (
    random_factor_morphism,
    random_free_square,
    random_semifree_square,
    semifree_corpus,
)
from .freelie import GeneratorSet, dynkin_rho, lie_dims
from .maurer_cartan import obstruction_demo
from .model import factor_free_surjective, factor_semifree_qis, lift_free, lift_semifree
from .oracles import witt_dimension
from .samples import random_complex, random_contraction, random_generators, random_tensor


def run_selftest(seed: int = 0) -> list[tuple[str, bool, str]]:
    rng = random.Random(seed)
    out = []

    ok = True
    for _ in range(20):
        gens = random_generators(rng, rng.randint(1, 3))
        degs = dict(gens)
        x = random_tensor(rng, list(degs), 4)
        r = dynkin_rho(x, degs)
        ok &= dynkin_rho(r, degs) == r
    out.append(("rho rho = rho on 20 random tensors", ok, ""))

    ok = True
    for k in (2, 3):
        table = lie_dims(GeneratorSet(tuple((f"x{i}", 0) for i in range(k)), 4))
        ok &= all(sum(table[w].values()) == witt_dimension(k, w) for w in range(1, 5))
    out.append(("Lie dims match the necklace count", ok, "2 and 3 generators, weights 1-4"))

    ok = True
    for _ in range(5):
        lc = extend_to_lie(random_contraction(rng), 3)
        ok &= all(rep.passed for rep in lc.tensor.verify().values())
        ok &= all(rep.passed for rep in lc.verify().values())
        ok &= not lc.rho_commutation_failures()
    out.append(("contraction extension on 5 random contractions", ok, "weight cap 3"))

    ok = all(cohomology_commutation_check(random_complex(rng, 4), 3).passed for _ in range(5))
    out.append(("H of T(V), L(V) matches T(H), L(H)", ok, "5 random complexes"))

    ok = all(lift_semifree(random_semifree_square(rng)).passed for _ in range(3))
    ok &= all(lift_free(random_free_square(rng, force_non_qis=(j == 0))).passed for j in range(3))
    out.append(("lifting squares", ok, "3 semifree, 3 free"))

    ok = all(factor_free_surjective(random_factor_morphism(rng), (-1, 1)).passed for _ in range(3))
    name, (g, window) = sorted(semifree_corpus().items())[rng.randrange(5)]
    ok &= factor_semifree_qis(g, 4, window).passed
    out.append(("factorizations", ok, f"3 free, semifree on {name!r}"))

    out.append(("Maurer-Cartan obstruction demo", obstruction_demo().passed, ""))

    c = CoalgebraData.build([("x", 2), ("y", 4)], {"y": [(1, "x", "x")]})
    ok = validate_coalgebra(c).passed and bool(semifree_certificate(c).stages)
    bad = CoalgebraData.build([("x", 1), ("y", 2)], {"y": [(1, "x", "x")]})
    ok &= not validate_coalgebra(bad).passed
    out.append(("cobar golden examples", ok, ""))
    return out
