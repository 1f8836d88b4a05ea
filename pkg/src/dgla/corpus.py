"""Seeded corpora of presentations, morphisms and lifting squares.

Random algebras are built from three kinds of generators: cocycles
(d = 0), contractible pairs e -> f, and "bracket" generators q with
d q = [p1, p2] for cocycles p1, p2.  All of these give d^2 = 0 by
construction.
"""
from __future__ import annotations

import random
from fractions import Fraction

from .freelie import DglaMorphism, DglaPresentation, GeneratorSet, Realization, bracket
from .linalg import kernel, solve
from .model import LiftingSquare, adjoin, inclusion
from .tensor import Tensor


def _coeffs(rng: random.Random, n: int, spread: int = 2) -> list[Fraction]:
    while True:
        v = [Fraction(rng.randint(-spread, spread)) for _ in range(n)]
        if n == 0 or any(v):
            return v


def random_element(rng: random.Random, real: Realization, degree: int) -> Tensor:
    n = real.dim(degree)
    if not n:
        return Tensor.zero()
    return real.element(degree, _coeffs(rng, n))


def random_cocycle(rng: random.Random, real: Realization, degree: int) -> Tensor:
    n = real.dim(degree)
    if not n:
        return Tensor.zero()
    zs = kernel(real.d_matrix(degree), ncols=n) if real.dim(degree + 1) else [
        [Fraction(int(i == j)) for i in range(n)] for j in range(n)
    ]
    if not zs:
        return Tensor.zero()
    cs = _coeffs(rng, len(zs))
    vec = [sum(c * z[k] for c, z in zip(cs, zs)) for k in range(n)]
    return real.element(degree, vec)


def random_presentation(rng: random.Random, prefix: str = "p", cap: int = 3,
                        lo: int = -1, hi: int = 1, size: int = 3) -> DglaPresentation:
    gens, diff, cocycles = [], {}, []
    count = 0
    while len(gens) < size:
        kind = rng.random()
        if kind < 0.5 or len(gens) + 2 > size + 1:
            nm = f"{prefix}{count}"
            deg = rng.randint(lo, hi)
            gens.append((nm, deg))
            cocycles.append((nm, deg))
        elif kind < 0.8:
            e, f = f"{prefix}{count}e", f"{prefix}{count}f"
            deg = rng.randint(lo, hi - 1) if hi > lo else lo
            gens += [(e, deg), (f, deg + 1)]
            diff[e] = Tensor.letter(f)
        elif cocycles:
            (a, da), (b, db) = rng.choice(cocycles), rng.choice(cocycles)
            nm = f"{prefix}{count}q"
            degs = {a: da, b: db}
            br = bracket(Tensor.letter(a), Tensor.letter(b), degs)
            if not br or cap < 2:
                continue
            gens.append((nm, da + db - 1))
            diff[nm] = br
        count += 1
    return DglaPresentation(GeneratorSet(tuple(gens), cap), diff)


def random_chain_map(rng: random.Random, a: DglaPresentation, b: DglaPresentation) -> DglaMorphism:
    """Cocycle generators go to random cocycles and pairs e -> f to (y, dy / c).

    A bracket generator q with dq = [p1, p2] goes to a solution of
    d x = f(dq); the draw is repeated if none exists in b.
    """
    rb = Realization(b)
    linear = {g for g in a.names if a.dgen(g) and a.dgen(g).weights() == {1}}
    pair_targets = {next(iter(a.dgen(g).letters())) for g in linear}
    for _ in range(20):
        images = {}
        for g in a.names:
            deg, dg = a.degrees[g], a.dgen(g)
            if g in linear:
                (f,) = dg.letters()
                y = random_element(rng, rb, deg)
                images[g] = y
                images[f] = b.d(y) * (1 / dg.coeff((f,)))
            elif not dg and g not in pair_targets:
                images[g] = random_cocycle(rng, rb, deg)
        f = DglaMorphism(a, b, images)
        ok = True
        for g in a.names:
            dg = a.dgen(g)
            if not dg or g in linear:
                continue
            tgt, deg = f(dg), a.degrees[g]
            if not tgt:
                continue
            sol = solve(rb.d_matrix(deg), rb.coords(tgt, deg + 1), ncols=rb.dim(deg)) if rb.dim(deg) else None
            if sol is None:
                ok = False
                break
            images[g] = rb.element(deg, sol)
        if ok:
            out = DglaMorphism(a, b, images)
            if out.is_chain_map():
                return out
    # the zero map is always a chain map
    return DglaMorphism(a, b, {})


def random_factor_morphism(rng: random.Random, cap: int = 3) -> DglaMorphism:
    a = random_presentation(rng, "a", cap, size=rng.randint(1, 3))
    b = random_presentation(rng, "b", cap, size=rng.randint(1, 3))
    return random_chain_map(rng, a, b)


def _pairs(rng: random.Random, prefix: str, count: int, lo: int, hi: int):
    gens, diff = [], {}
    for j in range(count):
        deg = rng.randint(lo, hi)
        u, w = f"{prefix}{j}", f"d{prefix}{j}"
        gens += [(u, deg), (w, deg + 1)]
        diff[u] = Tensor.letter(w)
    return gens, diff


def _square_ends(rng: random.Random, d_alg: DglaPresentation, c_alg: DglaPresentation,
                 g: DglaMorphism, cap: int, free: bool):
    """Random A, elementary semifree or free B, and a commuting (gamma, beta)."""
    rc = Realization(c_alg)
    rd = Realization(d_alg)
    a_gens, a_diff = [], {}
    gamma = {}
    for j in range(rng.randint(1, 2)):
        nm, deg = f"a{j}", rng.randint(-1, 1)
        a_gens.append((nm, deg))
        gamma[nm] = random_cocycle(rng, rc, deg)
    if free:
        new, diff = _pairs(rng, "u", rng.randint(1, 2), -1, 1)
        a = DglaPresentation(GeneratorSet(tuple(a_gens), cap), a_diff)
        b = adjoin(a, new, diff)
        beta = {x: g(gamma[x]) for x in a.names}
        for nm, deg in new[::2]:
            y = random_element(rng, rd, deg)
            beta[nm] = y
            beta["d" + nm] = d_alg.d(y)
        return a, b, gamma, beta
    # elementary semifree: v with dv = a_top + c [a_i, a_j]; gamma(a_top) = d x - c [gamma a_i, gamma a_j]
    vdeg = rng.randint(-1, 1)
    top = "atop"
    a_gens.append((top, vdeg + 1))
    a = DglaPresentation(GeneratorSet(tuple(a_gens), cap), a_diff)
    x = random_element(rng, rc, vdeg)
    extra = Tensor.zero()
    cands = [(p, q) for p, dp in a_gens[:-1] for q, dq in a_gens[:-1] if dp + dq == vdeg + 1]
    dv = Tensor.letter(top)
    if cands and rng.random() < 0.7:
        p, q = rng.choice(cands)
        k = Fraction(rng.choice([-1, 1, 2]))
        br = bracket(Tensor.letter(p), Tensor.letter(q), a.degrees)
        if br:
            dv = dv + br * k
            extra = c_alg.bracket(gamma[p], gamma[q]) * k
    gamma[top] = c_alg.d(x) - extra
    b = adjoin(a, [("v", vdeg)], {"v": dv})
    beta = {nm: g(gamma[nm]) for nm in a.names}
    beta["v"] = g(x)
    return a, b, gamma, beta


def random_semifree_square(rng: random.Random, cap: int = 3) -> LiftingSquare:
    """Elementary semifree i against g: D u L(W) -> D (W contractible), a surjective qis."""
    d_alg = random_presentation(rng, "p", cap, size=rng.randint(1, 3))
    new, diff = _pairs(rng, "c", rng.randint(0, 2), -1, 1)
    c_alg = adjoin(d_alg, new, diff) if new else d_alg
    g = DglaMorphism(c_alg, d_alg, {x: Tensor.letter(x) for x in d_alg.names})
    a, b, gamma, beta = _square_ends(rng, d_alg, c_alg, g, cap, free=False)
    degs = [d for _, d in b.generators.generators]
    window = (min(degs), max(degs) + 1)
    return LiftingSquare(inclusion(a, b), g, DglaMorphism(a, c_alg, gamma), DglaMorphism(b, d_alg, beta), window)


def random_free_square(rng: random.Random, cap: int = 3, force_non_qis: bool = False) -> LiftingSquare:
    """Free i against a surjection g: D u L(extra) -> D that is usually not a qis."""
    d_alg = random_presentation(rng, "p", cap, size=rng.randint(1, 3))
    extra = [(f"e{j}", rng.randint(-1, 1)) for j in range(rng.randint(1 if force_non_qis else 0, 2))]
    c_alg = adjoin(d_alg, extra, {}) if extra else d_alg
    rd = Realization(d_alg)
    images = {x: Tensor.letter(x) for x in d_alg.names}
    for nm, deg in extra:
        images[nm] = Tensor.zero() if force_non_qis else random_cocycle(rng, rd, deg)
    g = DglaMorphism(c_alg, d_alg, images)
    a, b, gamma, beta = _square_ends(rng, d_alg, c_alg, g, cap, free=True)
    degs = [d for _, d in b.generators.generators]
    window = (min(degs), max(degs))
    return LiftingSquare(inclusion(a, b), g, DglaMorphism(a, c_alg, gamma), DglaMorphism(b, d_alg, beta), window)


def semifree_corpus(cap: int = 3) -> dict[str, tuple[DglaMorphism, tuple[int, int]]]:
    """Surjections g with windows on which the semifree factorization stabilizes.

    Generators sit in degree >= 1 so that brackets of the adjoined
    generators leave the window quickly.
    """
    letter = Tensor.letter
    out = {}
    m = DglaPresentation.free([("x", 2)], cap)
    out["identity on L<x:2>"] = (DglaMorphism(m, m, {"x": letter("x")}), (1, 3))
    c = DglaPresentation.free([("x", 2), ("u", 1), ("du", 2)], cap, {"u": letter("du")})
    out["L<x:2> u pair -> L<x:2>"] = (DglaMorphism(c, m, {"x": letter("x")}), (1, 3))
    m3 = DglaPresentation.free([("x", 3)], cap)
    c = DglaPresentation.free([("x", 3), ("y", 3)], cap)
    out["fold L<x:3, y:3> -> L<x:3>"] = (DglaMorphism(c, m3, {"x": letter("x"), "y": letter("x")}), (2, 4))
    t = DglaPresentation.free([("t", 1)], cap, {"t": bracket(letter("t"), letter("t"), {"t": 1}) * Fraction(-1, 2)})
    out["identity on dt = -1/2[t,t]"] = (DglaMorphism(t, t, {"t": letter("t")}), (1, 2))
    m2 = DglaPresentation.free([("x", 2), ("y", 3)], cap)
    out["identity on L<x:2, y:3>"] = (DglaMorphism(m2, m2, {"x": letter("x"), "y": letter("y")}), (1, 3))
    return out
