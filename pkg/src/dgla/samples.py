"""Seeded random instances: complexes, contractions, tensors.

Everything takes a ``random.Random`` so corpora are reproducible from a seed.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .contraction import Contraction
from .linalg import (
    ChainComplex,
    DegreeMap,
    GradedSpace,
    Matrix,
    inverse,
    matmul,
    rank,
    zeros,
)
from .tensor import Tensor


def _tag(n: int) -> str:
    return f"m{-n}" if n < 0 else str(n)


def random_invertible(rng: random.Random, n: int, spread: int = 2) -> Matrix:
    while True:
        m = [[Fraction(rng.randint(-spread, spread)) for _ in range(n)] for _ in range(n)]
        if rank(m) == n:
            return m


def _conjugate_complex(c: ChainComplex, change: dict[int, Matrix], prefix: str) -> tuple:
    """Rewrite ``c`` in the basis whose vectors are the columns of ``change``."""
    space = GradedSpace({n: tuple(f"{prefix}{_tag(n)}_{j}" for j in range(c.dim(n))) for n in c.degrees})
    inv = {n: inverse(m) for n, m in change.items()}
    blocks = {}
    for n in c.degrees:
        if c.dim(n + 1):
            blocks[n] = matmul(
                matmul(inv[n + 1], c.d(n), inner=c.dim(n + 1), cols=c.dim(n)),
                change[n], inner=c.dim(n), cols=c.dim(n),
            )
    new = ChainComplex.build(space, blocks)
    to_old = DegreeMap(space, c.space, 0, change)
    to_new = DegreeMap(c.space, space, 0, inv)
    return new, to_old, to_new


def _pieces(rng: random.Random, total: int, lo: int, hi: int, per_degree: int):
    """Random list of ('z', n) cocycles and ('p', n) pairs n -> n+1 within limits."""
    pieces = []
    dims: dict[int, int] = {}
    used = 0
    attempts = 0
    while used < total and attempts < 50:
        attempts += 1
        if rng.random() < 0.5 and hi > lo:
            n = rng.randint(lo, hi - 1)
            if dims.get(n, 0) < per_degree and dims.get(n + 1, 0) < per_degree and used + 2 <= total:
                pieces.append(("p", n))
                dims[n] = dims.get(n, 0) + 1
                dims[n + 1] = dims.get(n + 1, 0) + 1
                used += 2
        else:
            n = rng.randint(lo, hi)
            if dims.get(n, 0) < per_degree:
                pieces.append(("z", n))
                dims[n] = dims.get(n, 0) + 1
                used += 1
    return pieces


def _assemble(pieces) -> tuple[ChainComplex, dict]:
    basis: dict[int, list[str]] = {}
    roles = {}
    for idx, (kind, n) in enumerate(pieces):
        if kind == "z":
            nm = f"z{idx}"
            basis.setdefault(n, []).append(nm)
            roles[nm] = ("z", None)
        else:
            e, f = f"e{idx}", f"f{idx}"
            basis.setdefault(n, []).append(e)
            basis.setdefault(n + 1, []).append(f)
            roles[e] = ("e", f)
            roles[f] = ("f", e)
    space = GradedSpace({n: tuple(v) for n, v in basis.items()})
    blocks = {}
    for n in space.degrees:
        if not space.dim(n + 1):
            continue
        m = zeros(space.dim(n + 1), space.dim(n))
        for j, nm in enumerate(space.names(n)):
            kind, other = roles[nm]
            if kind == "e":
                m[space.names(n + 1).index(other)][j] = Fraction(1)
        blocks[n] = m
    return ChainComplex.build(space, blocks), roles


def random_complex(rng: random.Random, total: int = 5, lo: int = -2, hi: int = 2,
                   per_degree: int = 3, prefix: str = "v") -> ChainComplex:
    """Direct sum of cocycles and contractible pairs, in a scrambled basis."""
    size = rng.randint(1, total)
    c, _ = _assemble(_pieces(rng, size, lo, hi, per_degree))
    change = {n: random_invertible(rng, c.dim(n)) for n in c.degrees}
    return _conjugate_complex(c, change, prefix)[0]


def random_contraction(rng: random.Random, total: int = 5, lo: int = -2, hi: int = 2,
                       per_degree: int = 3) -> Contraction:
    """N = M + W with W contractible, presented in a scrambled basis of N.

    Uses 1-3 degrees so weight-4 tensor blocks stay small.
    """
    span = rng.randint(0, 2)
    start = rng.randint(lo, hi - span)
    pieces = _pieces(rng, rng.randint(1, total), start, start + span, per_degree)
    c, roles = _assemble(pieces)
    # small part: all cocycles plus a random subset of the pairs
    keep_pair = {nm: rng.random() < 0.4 for nm, (k, _) in roles.items() if k == "e"}
    in_m = {}
    for nm, (kind, other) in roles.items():
        if kind == "z":
            in_m[nm] = True
        elif kind == "e":
            in_m[nm] = keep_pair[nm]
        else:
            in_m[nm] = keep_pair[other]
    mspace = GradedSpace({n: tuple(x for x in c.space.names(n) if in_m[x]) for n in c.degrees})
    mblocks = {}
    for n in mspace.degrees:
        if mspace.dim(n + 1):
            rows = [c.space.names(n + 1).index(x) for x in mspace.names(n + 1)]
            cols = [c.space.names(n).index(x) for x in mspace.names(n)]
            mblocks[n] = [[c.d(n)[i][j] for j in cols] for i in rows]
    m = ChainComplex.build(mspace, mblocks)
    iota, pi, h = {}, {}, {}
    for n in c.degrees:
        names = c.space.names(n)
        if mspace.dim(n):
            iota[n] = [[Fraction(int(x == y)) for y in mspace.names(n)] for x in names]
            pi[n] = [[Fraction(int(x == y)) for y in names] for x in mspace.names(n)]
        if c.dim(n - 1):
            blk = zeros(c.dim(n - 1), c.dim(n))
            for j, nm in enumerate(names):
                kind, other = roles[nm]
                if kind == "f" and not in_m[nm]:
                    blk[c.space.names(n - 1).index(other)][j] = Fraction(-1)
            h[n] = blk
    # scramble N
    change = {n: random_invertible(rng, c.dim(n)) for n in c.degrees}
    big, to_old, to_new = _conjugate_complex(c, change, "n")
    iota_map = to_new.compose(DegreeMap(mspace, c.space, 0, iota))
    pi_map = DegreeMap(c.space, mspace, 0, pi).compose(to_old)
    h_map = to_new.compose(DegreeMap(c.space, c.space, -1, h)).compose(to_old)
    return Contraction(m, big, iota_map, pi_map, h_map)


def random_tensor(rng: random.Random, letters: Sequence[str], max_weight: int,
                  terms: int = 4, spread: int = 3) -> Tensor:
    """Random combination of words of weight 1..max_weight (not homogeneous)."""
    out = {}
    for _ in range(terms):
        n = rng.randint(1, max_weight)
        w = tuple(rng.choice(letters) for _ in range(n))
        c = Fraction(rng.randint(-spread, spread), rng.randint(1, 3))
        out[w] = out.get(w, Fraction(0)) + c
    return Tensor(out)


def random_generators(rng: random.Random, count: int, lo: int = -2, hi: int = 2):
    return tuple((f"g{i}", rng.randint(lo, hi)) for i in range(count))
