"""Extension certificates, lifting and factorization for DG-Lie algebras.

All algebras are free presentations truncated at a weight cap, so each degree
of each algebra is finite dimensional and linear conditions (surjectivity,
quasi-isomorphism, solvability of d c = b) are decided exactly by row
reduction.  Statements about infinitely many degrees are replaced by checks
on a finite degree window; every certificate records its window.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import ExtensionError, InputError, LiftingError, NotSurjectiveError
from .freelie import (
    DglaMorphism,
    DglaPresentation,
    GeneratorSet,
    Realization,
    identity_morphism,
)
from .linalg import (
    ChainComplex,
    Echelon,
    GradedSpace,
    cohomology,
    cohomology_dims,
    cone,
    dense_to_sparse,
    inverse,
    kernel,
    rank,
    row_reduce,
    solve,
    split_complex,
    transpose,
    zeros,
)
from .tensor import Tensor

Window = tuple[int, int]

ELEMENTARY = "elementary-semifree"
FREE = "free"
COMPOSITE = "composite"
KINDS = (ELEMENTARY, FREE, COMPOSITE)


def _tag(n: int) -> str:
    return f"m{-n}" if n < 0 else str(n)


def _fresh(base: str, taken: set) -> str:
    nm = base
    k = 0
    while nm in taken:
        k += 1
        nm = f"{base}_{k}"
    taken.add(nm)
    return nm


def check_window(window: Window) -> Window:
    lo, hi = int(window[0]), int(window[1])
    if lo > hi:
        raise InputError(f"empty degree window [{lo}, {hi}]")
    return lo, hi


# ---------------------------------------------------------------------------
# Realized morphisms


class RealizedMorphism:
    """Degreewise matrices of a morphism between realized presentations."""

    def __init__(self, f: DglaMorphism, src: Realization | None = None,
                 tgt: Realization | None = None):
        self.f = f
        self.src = src or Realization(f.source)
        self.tgt = tgt or Realization(f.target)
        self._m: dict[int, list] = {}

    def matrix(self, n: int):
        if n not in self._m:
            self._m[n] = self.src.map_matrix(self.f, self.tgt, n)
        return self._m[n]

    def generator_columns(self, n: int):
        """Columns for the images of the source generators of degree n."""
        cols = []
        for g in self.f.source.names:
            if self.f.source.degrees[g] == n:
                cols.append(self.tgt.coords(self.f.image(g), n))
        return cols

    def surjective(self, n: int) -> bool:
        d = self.tgt.dim(n)
        if d == 0:
            return True
        cheap = self.generator_columns(n)
        if cheap and rank(transpose(cheap)) == d:
            return True
        return rank(self.matrix(n), ncols=self.src.dim(n)) == d


def first_non_surjective(rf: RealizedMorphism, degrees: Sequence[int]):
    for n in degrees:
        if not rf.surjective(n):
            return n
    return None


def window_complex(r: Realization, lo: int, hi: int) -> ChainComplex:
    """Realized complex on [lo-1, hi+1]: exact cohomology in degrees lo..hi."""
    return r.complex(lo - 1, hi + 1)


def window_cohomology(r: Realization, window: Window) -> dict[int, int]:
    lo, hi = window
    dims = cohomology_dims(window_complex(r, lo, hi))
    return {n: dims.get(n, 0) for n in range(lo, hi + 1)}


@dataclass(frozen=True)
class QisReport:
    window: Window
    is_qis: bool
    source_dims: dict
    target_dims: dict
    injective: dict
    surjective: dict
    cone_acyclic: bool
    cone_dims: dict


def _subspace_dim(vectors) -> int:
    return len(vectors) and rank([list(v) for v in vectors])


def qis_report(rf: RealizedMorphism, window: Window) -> QisReport:
    """Decide whether H(f) is an isomorphism in every degree of the window.

    Direct route: H(f) injective iff f^{-1}(B) meets Z(src) only in B(src);
    surjective iff f(Z(src)) + B(tgt) = Z(tgt).  Second route: the mapping
    cone is acyclic in degrees lo..hi-1, which must agree with the first.
    """
    lo, hi = window
    src = window_complex(rf.src, lo, hi)
    tgt = window_complex(rf.tgt, lo, hi)
    hs, ht = cohomology(src), cohomology(tgt)
    inj, surj = {}, {}
    for n in range(lo, hi + 1):
        zs = [list(v) for v in kernel(src.d(n), ncols=src.dim(n))] if src.dim(n) else []
        bs = [list(v) for v in row_reduce(src.d(n - 1)).image_basis] if src.dim(n - 1) and src.dim(n) else []
        zt = [list(v) for v in kernel(tgt.d(n), ncols=tgt.dim(n))] if tgt.dim(n) else []
        bt = [list(v) for v in row_reduce(tgt.d(n - 1)).image_basis] if tgt.dim(n - 1) and tgt.dim(n) else []
        fm = rf.matrix(n) if src.dim(n) and tgt.dim(n) else None
        # injectivity: kernel of z -> f(z) mod B(tgt), restricted to Z(src)
        if zs and fm is not None:
            fz = [[sum(fm[i][k] * z[k] for k in range(len(z))) for i in range(len(fm))] for z in zs]
        else:
            fz = [[] for _ in zs]
        if not zs:
            inj[n] = True
        else:
            # solve sum a_j f(z_j) = sum b_k bt_k; then sum a_j z_j must lie in B(src)
            cols = [v if v else [Fraction(0)] * tgt.dim(n) for v in fz] + [
                [-x for x in v] for v in bt
            ]
            if tgt.dim(n):
                ker = kernel(transpose(cols), ncols=len(cols))
            else:
                ker = [[Fraction(int(i == j)) for i in range(len(cols))] for j in range(len(cols))]
            pre = []
            for v in ker:
                a = v[: len(zs)]
                pre.append([sum(a[j] * zs[j][k] for j in range(len(zs))) for k in range(src.dim(n))])
            pre_dim = _subspace_dim([p for p in pre if any(p)])
            inj[n] = pre_dim == _subspace_dim(bs)
        if not zt:
            surj[n] = True
        else:
            span = [v for v in fz if v and any(v)] + bt
            surj[n] = _subspace_dim(span) == len(zt)
    sdims = {n: hs[n].dim if n in hs else 0 for n in range(lo, hi + 1)}
    tdims = {n: ht[n].dim if n in ht else 0 for n in range(lo, hi + 1)}
    is_qis = all(inj.values()) and all(surj.values())
    fblocks = {n: rf.matrix(n) for n in src.degrees if src.dim(n) and tgt.dim(n)}
    cx = cone(fblocks, src, tgt)
    cdims = cohomology_dims(cx)
    cone_window = {n: cdims.get(n, 0) for n in range(lo, hi)}
    cone_acyclic = all(v == 0 for v in cone_window.values())
    if is_qis and not cone_acyclic:
        raise AssertionError("quasi-isomorphism test disagrees with the mapping cone")
    return QisReport(window, is_qis, sdims, tdims, inj, surj, cone_acyclic, cone_window)


# ---------------------------------------------------------------------------
# Extension certificates


@dataclass(frozen=True)
class ExtensionCertificate:
    kind: str
    inclusion: DglaMorphism
    cofactor: tuple[str, ...]
    stages: tuple["ExtensionCertificate", ...] = ()
    # free extensions: adapted basis of V (see FreeSplitting)
    splitting: "FreeSplitting | None" = None

    @property
    def source(self) -> DglaPresentation:
        return self.inclusion.source

    @property
    def target(self) -> DglaPresentation:
        return self.inclusion.target


@dataclass(frozen=True)
class FreeSplitting:
    """V = Z + W with d(w_j) = z_j; vectors are coordinates on V's generators.

    ``cocycles[n]`` and ``complements[n]`` list the z's in degree n and the
    w's in degree n; ``names`` holds the generator names of the adapted
    basis used by the two-stage decomposition; ``to_adapted[n]`` gives the
    coordinates of V's own generators in terms of (z's, w's) of degree n.
    """

    v_names: dict
    cocycles: dict
    complements: dict
    z_names: dict
    w_names: dict
    to_adapted: dict


def _inclusion_letters(i: DglaMorphism) -> dict[str, str]:
    """a -> b when i sends each A-generator to a distinct B-generator."""
    out = {}
    for a in i.source.names:
        img = i.image(a)
        if len(img.terms) != 1:
            raise InputError(f"map is not an inclusion of generators at {a!r}")
        (w, c), = img.terms.items()
        if len(w) != 1 or c != 1:
            raise InputError(f"map is not an inclusion of generators at {a!r}")
        out[a] = w[0]
    if len(set(out.values())) != len(out):
        raise InputError("map identifies two generators")
    bad = i.chain_defects()
    if bad:
        g = sorted(bad)[0]
        raise InputError(f"inclusion does not commute with d on {g!r}", witness={"generator": g})
    return out


def _cofactor(i: DglaMorphism) -> tuple[dict[str, str], tuple[str, ...]]:
    letters = _inclusion_letters(i)
    image = set(letters.values())
    b = i.target
    if b.cofactors:
        covered = set()
        for block in b.cofactors:
            s = set(block)
            if s <= image:
                covered |= s
            elif s & image:
                raise InputError("cofactor boundary splits a block of the target")
        if covered != image:
            raise InputError("image of the source is not a union of cofactor blocks")
    elif image:
        raise InputError("cofactor boundary missing: target must record its cofactors")
    return letters, tuple(g for g in b.names if g not in image)


def v_complex(p: DglaPresentation, names: Sequence[str]) -> ChainComplex:
    """(V, d) for generators whose differentials are linear in ``names``."""
    keep = set(names)
    space = GradedSpace.from_pairs([(g, p.degrees[g]) for g in names])
    blocks = {}
    for n in space.degrees:
        if not space.dim(n + 1):
            continue
        m = zeros(space.dim(n + 1), space.dim(n))
        tgt = space.names(n + 1)
        for j, g in enumerate(space.names(n)):
            for w, c in p.dgen(g).terms.items():
                m[tgt.index(w[0])][j] = c
        blocks[n] = m
    for g in names:
        for w in p.dgen(g).terms:
            if len(w) != 1 or w[0] not in keep:
                raise AssertionError("differential is not linear in V")
    return ChainComplex.build(space, blocks)


def _free_splitting(vc: ChainComplex, taken: set) -> FreeSplitting:
    sp = split_complex(vc)
    cocycles, complements, z_names, w_names, to_adapted, v_names = {}, {}, {}, {}, {}, {}
    for n in vc.degrees:
        names = vc.space.names(n)
        v_names[n] = names
        # columns of embed_w: the coboundary basis of degree n, then preimages
        blk = sp.embed_w.block(n)
        cols = [list(c) for c in zip(*blk)]
        nb = rank(vc.d(n - 1)) if vc.dim(n - 1) else 0
        cocycles[n] = cols[:nb]
        complements[n] = cols[nb:]

        def pick(vec, prefix, j):
            nz = [k for k, x in enumerate(vec) if x]
            if len(nz) == 1 and vec[nz[0]] == 1:
                return names[nz[0]]
            return _fresh(f"{prefix}{_tag(n)}_{j}", taken)

        z_names[n] = [pick(v, "z", j) for j, v in enumerate(cocycles[n])]
        w_names[n] = [pick(v, "w", j) for j, v in enumerate(complements[n])]
        to_adapted[n] = inverse(transpose(cocycles[n] + complements[n]))
    return FreeSplitting(v_names, cocycles, complements, z_names, w_names, to_adapted)


def _vector_element(names: Sequence[str], vec: Sequence[Fraction]) -> Tensor:
    return Tensor({(g,): c for g, c in zip(names, vec)})


def certify_extension(i: DglaMorphism, claimed: str) -> ExtensionCertificate:
    """Certify i: A -> B as an elementary semifree, free or composite extension."""
    if claimed not in KINDS:
        raise InputError(f"unknown extension kind {claimed!r}")
    letters, cofactor = _cofactor(i)
    b = i.target
    base = set(letters.values())
    if claimed == ELEMENTARY:
        for v in cofactor:
            stray = b.dgen(v).letters() - base
            if stray:
                raise ExtensionError(
                    f"d({v}) is not in the source: uses {sorted(stray)}",
                    witness={"generator": v, "letters": sorted(stray)},
                )
        return ExtensionCertificate(ELEMENTARY, i, cofactor)
    if claimed == FREE:
        vset = set(cofactor)
        for v in cofactor:
            for w in b.dgen(v).terms:
                if len(w) != 1 or w[0] not in vset:
                    raise ExtensionError(
                        f"d({v}) does not lie in V", witness={"generator": v}
                    )
        vc = v_complex(b, cofactor)
        hd = cohomology_dims(vc)
        if any(hd.values()):
            n = next(k for k, x in sorted(hd.items()) if x)
            raise ExtensionError(
                f"V is not acyclic: H^{n}(V) has dimension {hd[n]}",
                witness={"degree": n, "dim": hd[n]},
            )
        split = _free_splitting(vc, set(b.names))
        stages = _free_stages(i, letters, split)
        return ExtensionCertificate(FREE, i, cofactor, stages, split)
    # composite: one elementary stage per remaining cofactor block
    blocks = [blk for blk in b.cofactors if not set(blk) <= base]
    if not b.cofactors:
        blocks = [cofactor] if cofactor else []
    stages = []
    done = list(letters.values())
    prev_pres = _sub_presentation(b, done, [blk for blk in b.cofactors if set(blk) <= base])
    for blk in blocks:
        here = done + list(blk)
        kept_blocks = [c for c in b.cofactors if set(c) <= set(here)] or [tuple(here)]
        nxt = _sub_presentation(b, here, kept_blocks)
        inc = DglaMorphism(prev_pres, nxt, {g: Tensor.letter(g) for g in prev_pres.names})
        stages.append(certify_extension(inc, ELEMENTARY))
        prev_pres = nxt
        done = here
    return ExtensionCertificate(COMPOSITE, i, cofactor, tuple(stages))


def _sub_presentation(b: DglaPresentation, names: Sequence[str], blocks) -> DglaPresentation:
    sub = b.restrict([g for g in b.names if g in set(names)])
    cof = tuple(tuple(blk) for blk in blocks if blk)
    if cof and set(a for blk in cof for a in blk) != set(sub.names):
        cof = ()
    return DglaPresentation(sub.generators, sub.differential, cof)


def _free_stages(i: DglaMorphism, letters, split: FreeSplitting):
    """A -> A u L(Z) -> A u L(Z + W), with an isomorphism onto the target."""
    b = i.target
    a_names = [letters[a] for a in i.source.names]
    a_sub = _sub_presentation(b, a_names, [blk for blk in b.cofactors if set(blk) <= set(a_names)])
    zs = [(nm, n) for n in sorted(split.z_names) for nm in split.z_names[n]]
    ws = [(nm, n) for n in sorted(split.w_names) for nm in split.w_names[n]]
    a_gens = a_sub.generators.generators
    a_blocks = a_sub.cofactors or ((tuple(a_names),) if a_names else ())
    p1 = DglaPresentation(
        GeneratorSet(a_gens + tuple(zs), b.cap), dict(a_sub.differential),
        a_blocks + ((tuple(nm for nm, _ in zs),) if zs else ()),
    )
    diff2 = dict(a_sub.differential)
    for n in sorted(split.w_names):
        for j, nm in enumerate(split.w_names[n]):
            diff2[nm] = Tensor.letter(split.z_names[n + 1][j])
    p2 = DglaPresentation(
        GeneratorSet(p1.generators.generators + tuple(ws), b.cap), diff2,
        p1.cofactors + ((tuple(nm for nm, _ in ws),) if ws else ()),
    )
    inc0 = DglaMorphism(a_sub, p1, {g: Tensor.letter(g) for g in a_sub.names})
    inc1 = DglaMorphism(p1, p2, {g: Tensor.letter(g) for g in p1.names})
    stages = (certify_extension(inc0, ELEMENTARY), certify_extension(inc1, ELEMENTARY))
    # the adapted presentation is isomorphic to the target
    images = {g: Tensor.letter(g) for g in a_names}
    for n in split.z_names:
        for nm, vec in zip(split.z_names[n], split.cocycles[n]):
            images[nm] = _vector_element(split.v_names[n], vec)
        for nm, vec in zip(split.w_names[n], split.complements[n]):
            images[nm] = _vector_element(split.v_names[n], vec)
    iso = DglaMorphism(p2, b, images)
    if not iso.is_chain_map():
        raise AssertionError("adapted free decomposition is not a DG morphism")
    return stages


def free_decomposition_iso(cert: ExtensionCertificate) -> DglaMorphism:
    """Isomorphism from the last stage of a free certificate onto its target."""
    split = cert.splitting
    b = cert.target
    p2 = cert.stages[-1].target
    letters = _inclusion_letters(cert.inclusion)
    images = {letters[a]: Tensor.letter(letters[a]) for a in cert.source.names}
    for n in split.z_names:
        for nm, vec in zip(split.z_names[n], split.cocycles[n]):
            images[nm] = _vector_element(split.v_names[n], vec)
        for nm, vec in zip(split.w_names[n], split.complements[n]):
            images[nm] = _vector_element(split.v_names[n], vec)
    return DglaMorphism(p2, b, images)


def adjoin(base: DglaPresentation, new: Sequence[tuple[str, int]],
           differential: Mapping[str, Tensor]) -> DglaPresentation:
    """base u L(new) with the given differentials, recording the new block."""
    for nm, _ in new:
        if nm in base.degrees:
            raise InputError(f"generator {nm!r} already present")
    blocks = base.cofactors or ((base.names,) if base.names else ())
    cof = blocks + ((tuple(nm for nm, _ in new),) if new else ())
    gens = GeneratorSet(base.generators.generators + tuple(new), base.cap)
    return DglaPresentation(gens, {**base.differential, **differential}, cof)


def inclusion(sub: DglaPresentation, sup: DglaPresentation) -> DglaMorphism:
    return DglaMorphism(sub, sup, {g: Tensor.letter(g) for g in sub.names})


def with_boundary(p: DglaPresentation) -> DglaPresentation:
    """p with a single cofactor block recorded (if it has none)."""
    if p.cofactors or not p.names:
        return p
    return DglaPresentation(p.generators, p.differential, (p.names,))


# ---------------------------------------------------------------------------
# Lifting


@dataclass(frozen=True)
class LiftingSquare:
    """Commutative square g gamma = beta i with i: A -> B and g: C -> D."""

    i: DglaMorphism
    g: DglaMorphism
    gamma: DglaMorphism
    beta: DglaMorphism
    window: Window

    def __post_init__(self):
        object.__setattr__(self, "window", check_window(self.window))
        pairs = (
            ("i source", self.i.source, "gamma source", self.gamma.source),
            ("i target", self.i.target, "beta source", self.beta.source),
            ("gamma target", self.gamma.target, "g source", self.g.source),
            ("g target", self.g.target, "beta target", self.beta.target),
        )
        for n1, p1, n2, p2 in pairs:
            if not p1.same_as(p2):
                raise InputError(f"{n1} and {n2} differ")
        caps = {self.i.source.cap, self.i.target.cap, self.g.source.cap, self.g.target.cap}
        if len(caps) != 1:
            raise InputError("all four algebras must share one weight cap")
        for a in self.i.source.names:
            lhs = self.g(self.gamma.image(a))
            rhs = self.beta(self.i.image(a))
            if lhs != rhs:
                raise InputError(
                    f"square does not commute on {a!r}", witness={"generator": a}
                )
        for nm, f in (("i", self.i), ("g", self.g), ("gamma", self.gamma), ("beta", self.beta)):
            bad = f.chain_defects()
            if bad:
                gen = sorted(bad)[0]
                raise InputError(
                    f"{nm} does not commute with d on {gen!r}", witness={"map": nm, "generator": gen}
                )


@dataclass(frozen=True)
class LiftResult:
    lift: DglaMorphism
    upper_triangle: bool
    lower_triangle: bool
    chain_map: bool
    window: Window

    @property
    def passed(self) -> bool:
        return self.upper_triangle and self.lower_triangle and self.chain_map


def _check_lift(sq: LiftingSquare, h: DglaMorphism) -> LiftResult:
    upper = all(h(sq.i.image(a)) == sq.gamma.image(a) for a in sq.i.source.names)
    lower = all(sq.g(h.image(b)) == sq.beta.image(b) for b in sq.i.target.names)
    return LiftResult(h, upper, lower, h.is_chain_map(), sq.window)


def _require_surjective(rg: RealizedMorphism, degrees) -> None:
    n = first_non_surjective(rg, degrees)
    if n is not None:
        raise NotSurjectiveError(f"g is not surjective in degree {n}", witness={"degree": n})


def lift_semifree(sq: LiftingSquare) -> LiftResult:
    """Lift against a surjective quasi-isomorphism, for elementary semifree i."""
    cert = certify_extension(sq.i, ELEMENTARY)
    letters = _inclusion_letters(sq.i)
    back = {b: a for a, b in letters.items()}
    lo, hi = sq.window
    c_real = Realization(sq.g.source)
    d_real = Realization(sq.g.target)
    rg = RealizedMorphism(sq.g, c_real, d_real)
    _require_surjective(rg, range(lo, hi + 1))
    qr = qis_report(rg, sq.window)
    if not qr.is_qis:
        bad = [n for n in range(lo, hi + 1) if not (qr.injective[n] and qr.surjective[n])]
        raise InputError(
            f"g is not a quasi-isomorphism in degree {bad[0]}", witness={"degree": bad[0]}
        )
    images = {letters[a]: sq.gamma.image(a) for a in sq.i.source.names}
    b = sq.i.target
    for v in cert.cofactor:
        n = b.degrees[v]
        _require_surjective(rg, [n])
        # step 1: d c = gamma(d v)
        target = sq.gamma(b.dgen(v).rename(back))
        c = [Fraction(0)] * c_real.dim(n)
        if target:
            sol = solve(c_real.d_matrix(n), c_real.coords(target, n + 1), ncols=c_real.dim(n))
            if sol is None:
                raise LiftingError(
                    f"gamma(d {v}) is not a coboundary in the realized window",
                    witness={"generator": v, "step": "coboundary"},
                )
            c = sol
        c_elem = c_real.element(n, c)
        # step 2: cocycle c' with g(c') = beta(v) - g(c)
        rest = d_real.coords(sq.beta.image(v) - sq.g(c_elem), n)
        gm = rg.matrix(n)
        dm = c_real.d_matrix(n)
        stacked = [list(r) for r in gm] + [list(r) for r in dm]
        rhs = list(rest) + [Fraction(0)] * len(dm)
        sol = solve(stacked, rhs, ncols=c_real.dim(n)) if stacked else (
            [Fraction(0)] * c_real.dim(n) if not any(rhs) else None
        )
        if sol is None:
            raise LiftingError(
                f"no cocycle corrects the lift of {v} in the realized window",
                witness={"generator": v, "step": "cocycle"},
            )
        images[v] = c_elem + c_real.element(n, sol)
    h = DglaMorphism(b, sq.g.source, images)
    res = _check_lift(sq, h)
    if not res.passed:
        raise AssertionError("semifree lift fails its own checks")
    return res


def lift_free(sq: LiftingSquare) -> LiftResult:
    """Lift against a surjection, for a free extension i."""
    cert = certify_extension(sq.i, FREE)
    split = cert.splitting
    letters = _inclusion_letters(sq.i)
    c_real = Realization(sq.g.source)
    d_real = Realization(sq.g.target)
    rg = RealizedMorphism(sq.g, c_real, d_real)
    lo, hi = sq.window
    _require_surjective(rg, range(lo, hi + 1))
    images = {letters[a]: sq.gamma.image(a) for a in sq.i.source.names}
    adapted: dict[tuple[int, int], Tensor] = {}
    c_prime = sq.g.source
    for n in sorted(split.complements):
        for j, vec in enumerate(split.complements[n]):
            _require_surjective(rg, [n])
            target = sq.beta(_vector_element(split.v_names[n], vec))
            sol = solve(rg.matrix(n), d_real.coords(target, n), ncols=c_real.dim(n))
            if sol is None:
                raise NotSurjectiveError(
                    f"g is not surjective in degree {n}", witness={"degree": n}
                )
            cj = c_real.element(n, sol)
            nb = len(split.cocycles[n])
            adapted[(n, nb + j)] = cj
            adapted[(n + 1, j)] = c_prime.d(cj)
    for n, names in split.v_names.items():
        coords = split.to_adapted[n]
        for k, v in enumerate(names):
            parts = []
            for r in range(len(coords)):
                c = coords[r][k]
                if c:
                    parts.append(adapted[(n, r)] * c)
            images[v] = Tensor.sum(parts)
    h = DglaMorphism(sq.i.target, sq.g.source, images)
    res = _check_lift(sq, h)
    if not res.passed:
        raise AssertionError("free lift fails its own checks")
    return res


# ---------------------------------------------------------------------------
# Factorizations


@dataclass(frozen=True)
class FreeFactorization:
    certificate: ExtensionCertificate
    g: DglaMorphism
    window: Window
    v_cohomology: dict
    surjective: dict
    commutes: bool

    @property
    def passed(self) -> bool:
        return (
            self.commutes
            and all(self.surjective.values())
            and not any(self.v_cohomology.values())
        )


def factor_free_surjective(f: DglaMorphism, window: Window) -> FreeFactorization:
    """f = g i with i free and g surjective on the window.

    For every realized basis element beta of B in a window degree, adjoin a
    contractible pair u -> w with g(u) = beta and g(w) = d beta.
    """
    lo, hi = check_window(window)
    a, b = f.source, f.target
    base = with_boundary(DglaPresentation(a.generators, a.differential, a.cofactors))
    base = DglaPresentation(GeneratorSet(a.generators.generators, b.cap),
                            {g: v.capped(b.cap) for g, v in a.differential.items()},
                            base.cofactors)
    rb = Realization(b)
    taken = set(a.names) | set(b.names)
    new, diff, images = [], {}, {g: f.image(g) for g in a.names}
    for n in range(lo, hi + 1):
        for j, elem in enumerate(rb.basis(n)):
            u = _fresh(f"u{_tag(n)}_{j}", taken)
            w = _fresh(f"du{_tag(n)}_{j}", taken)
            new += [(u, n), (w, n + 1)]
            diff[u] = Tensor.letter(w)
            images[u] = elem.element
            images[w] = b.d(elem.element)
    target = adjoin(base, new, diff)
    inc = inclusion(base, target)
    cert = certify_extension(inc, FREE)
    g = DglaMorphism(target, b, images)
    if not g.is_chain_map():
        raise AssertionError("factorization map is not a DG morphism")
    rg = RealizedMorphism(g, None, rb)
    surj = {n: rg.surjective(n) for n in range(lo, hi + 1)}
    vcoh = cohomology_dims(v_complex(target, cert.cofactor)) if cert.cofactor else {}
    commutes = all(g(inc.image(x)) == f.image(x) for x in a.names)
    return FreeFactorization(cert, g, (lo, hi), vcoh, surj, commutes)


@dataclass(frozen=True)
class StageRecord:
    index: int
    added: dict  # degree -> number of generators adjoined
    generators: tuple[str, ...]
    certificate: ExtensionCertificate
    extends_previous: bool


@dataclass(frozen=True)
class SemifreeFactorization:
    certificate: ExtensionCertificate
    f_tilde: DglaMorphism
    stages: tuple[StageRecord, ...]
    stabilized: bool
    stabilized_degrees: dict
    cocycle_surjective: bool
    qis: QisReport
    surjective: dict
    window: Window

    @property
    def passed(self) -> bool:
        return self.stabilized and self.qis.is_qis and all(self.surjective.values())


def _stage_candidates(p: DglaPresentation, f: DglaMorphism, rm: Realization,
                      window: Window, stage: int, taken: set):
    """Cocycles of C_n mapping to coboundaries of M, independent mod B(C_n)."""
    rc = Realization(p)
    rf = RealizedMorphism(f, rc, rm)
    lo, hi = window
    new, diff, images, added = [], {}, {}, {}
    for k in range(lo, hi + 1):
        nc, nm = rc.dim(k), rm.dim(k - 1)
        if not nc:
            continue
        dc = rc.d_matrix(k)
        fk = rf.matrix(k)
        dm = rm.d_matrix(k - 1) if nm else []
        rows = []
        for r in dc:
            rows.append(list(r) + [Fraction(0)] * nm)
        if rm.dim(k):
            for i in range(rm.dim(k)):
                rows.append(list(fk[i]) + [-dm[i][j] for j in range(nm)])
        ncols = nc + nm
        sols = kernel(rows, ncols=ncols) if rows else [
            [Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)
        ]
        ech = Echelon()
        if rc.dim(k - 1):
            dprev = rc.d_matrix(k - 1)
            for j in range(rc.dim(k - 1)):
                ech.add(dense_to_sparse([dprev[i][j] for i in range(nc)]))
        count = 0
        for s in sols:
            y, m = s[:nc], s[nc:]
            if not any(y) or not ech.add(dense_to_sparse(y)):
                continue
            x = _fresh(f"x{stage}_{_tag(k - 1)}_{count}", taken)
            new.append((x, k - 1))
            diff[x] = rc.element(k, y)
            images[x] = rm.element(k - 1, m) if nm else Tensor.zero()
            count += 1
        if count:
            added[k - 1] = count
    return new, diff, images, added


def factor_semifree_qis(g: DglaMorphism, stages: int, window: Window) -> SemifreeFactorization:
    """g = f~ i with i semifree (finitely many stages) and f~ a surjective qis on the window."""
    if stages < 2:
        raise InputError("need at least 2 stages")
    lo, hi = check_window(window)
    c0 = with_boundary(g.source)
    if c0 is not g.source:
        g = DglaMorphism(c0, g.target, g.images)
    m = g.target
    rm = Realization(m)
    rg = RealizedMorphism(g, None, rm)
    _require_surjective(rg, range(lo, hi + 1))
    taken = set(c0.names) | set(m.names)
    # stage 1: a basis of the cocycles of M in the window, with d = 0
    new, images = [], dict(g.images)
    added = {}
    for n in range(lo, hi + 1):
        if not rm.dim(n):
            continue
        zs = kernel(rm.d_matrix(n), ncols=rm.dim(n))
        for j, z in enumerate(zs):
            nm = _fresh(f"x1_{_tag(n)}_{j}", taken)
            new.append((nm, n))
            images[nm] = rm.element(n, z)
        if zs:
            added[n] = len(zs)
    current = adjoin(c0, new, {})
    f_cur = DglaMorphism(current, m, images)
    records = [
        StageRecord(1, added, tuple(nm for nm, _ in new),
                    certify_extension(inclusion(c0, current), ELEMENTARY), True)
    ]
    # condition (3): cocycles of C_1 surject onto cocycles of M
    rc1 = Realization(current)
    rf1 = RealizedMorphism(f_cur, rc1, rm)
    cocycle_surj = True
    for n in range(lo, hi + 1):
        if not rm.dim(n):
            continue
        zt = kernel(rm.d_matrix(n), ncols=rm.dim(n))
        if not zt:
            continue
        zc = kernel(rc1.d_matrix(n), ncols=rc1.dim(n)) if rc1.dim(n) else []
        fm = rf1.matrix(n)
        imgs = [[sum(fm[i][k] * z[k] for k in range(len(z))) for i in range(rm.dim(n))] for z in zc]
        if _subspace_dim(imgs) != len(zt):
            cocycle_surj = False
    stabilized = False
    last_added: dict = {}
    for stage in range(2, stages + 1):
        new, diff, imgs, added = _stage_candidates(current, f_cur, rm, (lo, hi), stage, taken)
        last_added = added
        if not new:
            stabilized = True
            break
        nxt = adjoin(current, new, diff)
        cert = certify_extension(inclusion(current, nxt), ELEMENTARY)
        f_next = DglaMorphism(nxt, m, {**f_cur.images, **imgs})
        extends = f_next.agrees_with(f_cur, current.names)
        if not f_next.is_chain_map():
            raise AssertionError("stage map is not a DG morphism")
        records.append(StageRecord(stage, added, tuple(nm for nm, _ in new), cert, extends))
        current, f_cur = nxt, f_next
    if not stabilized:
        new, _, _, last_added = _stage_candidates(current, f_cur, rm, (lo, hi), stages + 1, set(taken))
        stabilized = not new
    # degree k still needs work if the last pass wanted generators in degree k - 1
    stab_deg = {n: (n - 1) not in last_added for n in range(lo, hi + 1)}
    composite = certify_extension(inclusion(c0, current), COMPOSITE)
    rft = RealizedMorphism(f_cur, None, rm)
    qr = qis_report(rft, (lo, hi))
    surj = {n: rft.surjective(n) for n in range(lo, hi + 1)}
    return SemifreeFactorization(
        composite, f_cur, tuple(records), stabilized, stab_deg, cocycle_surj, qr, surj, (lo, hi)
    )


# ---------------------------------------------------------------------------
# Free extensions are quasi-isomorphisms


def free_extension_qis(cert: ExtensionCertificate, window: Window) -> QisReport:
    """H(A) -> H(A u L(V)) on the window, for a certified free extension."""
    if cert.kind != FREE:
        raise InputError("certificate is not a free extension")
    return qis_report(RealizedMorphism(cert.inclusion), check_window(window))
