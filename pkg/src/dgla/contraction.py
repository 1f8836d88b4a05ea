"""Contractions of complexes and their extensions to T(V) and L(V).

A contraction (M, N, iota, pi, h) satisfies

    pi iota = Id_M,   iota pi - Id_N = d h + h d,   pi h = 0,  h iota = 0,  h^2 = 0.

To extend it, N is rewritten in a basis adapted to N = iota(M) + ker(pi):
the first letters are the images of M's basis (they keep M's names) and the
remaining ones span ker(pi).  In that basis d and h are block diagonal, a
tensor word has a bidegree (a, b) counting M- and W-letters, and the tensor
homotopy is

    k(x1...xn) = 1/p * sum_i (-1)^{|x1|+...+|x_{i-1}|} x1...h(xi)...xn

where p is the number of W-letters (k = 0 when p = 0).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

from .errors import InputError
from .freelie import (
    DglaPresentation,
    Derivation,
    FreeLieAlgebra,
    GeneratorSet,
    dynkin_rho,
    lie_dims,
)
from .linalg import (
    ChainComplex,
    DegreeMap,
    GradedSpace,
    Matrix,
    cohomology_dims,
    format_scalar,
    inverse,
    kernel,
    matmul,
    transpose,
    zeros,
)
from .tensor import Tensor, Word, concat, word_degree


@dataclass(frozen=True)
class Contraction:
    small: ChainComplex
    big: ChainComplex
    iota: DegreeMap
    pi: DegreeMap
    h: DegreeMap

    def __post_init__(self):
        m, n = self.small.space, self.big.space
        for name, f, src, tgt, shift in (
            ("iota", self.iota, m, n, 0),
            ("pi", self.pi, n, m, 0),
            ("h", self.h, n, n, -1),
        ):
            if f.source != src or f.target != tgt:
                raise InputError(f"{name} has the wrong source or target space")
            if f.shift != shift:
                raise InputError(f"{name} must have degree {shift}")


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    passed: bool
    max_residue: Fraction = Fraction(0)
    witness: dict | None = None


@dataclass(frozen=True)
class ContractionReport:
    passed: bool
    checks: tuple[IdentityCheck, ...]

    def check(self, name: str) -> IdentityCheck:
        return next(c for c in self.checks if c.name == name)

    def failures(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]


IDENTITIES = ("pi iota = Id_M", "iota pi - Id_N = dh + hd", "pi h = 0", "h iota = 0", "h h = 0")


def _residue_check(name: str, res: DegreeMap) -> IdentityCheck:
    best = None
    for n, blk in sorted(res.blocks.items()):
        for i, row in enumerate(blk):
            for j, x in enumerate(row):
                if x and (best is None or abs(x) > abs(best[3])):
                    best = (n, i, j, x)
    if best is None:
        return IdentityCheck(name, True)
    n, i, j, x = best
    witness = {
        "degree": n,
        "source": res.source.names(n)[j],
        "target": res.target.names(n + res.shift)[i],
        "coeff": format_scalar(x),
    }
    return IdentityCheck(name, False, abs(x), witness)


def verify_contraction(c: Contraction) -> ContractionReport:
    """Check the five contraction identities blockwise."""
    d = c.big.differential
    id_m = DegreeMap.identity(c.small.space)
    id_n = DegreeMap.identity(c.big.space)
    residues = (
        c.pi.compose(c.iota) - id_m,
        (c.iota.compose(c.pi) - id_n) - (d.compose(c.h) + c.h.compose(d)),
        c.pi.compose(c.h),
        c.h.compose(c.iota),
        c.h.compose(c.h),
    )
    checks = tuple(_residue_check(nm, r) for nm, r in zip(IDENTITIES, residues))
    return ContractionReport(all(ch.passed for ch in checks), checks)


def contraction_from_splitting(c: ChainComplex) -> Contraction:
    """Contraction of ``c`` onto its cohomology, using a splitting V = H + W."""
    from .linalg import normalize_homotopy, split_complex

    sp = split_complex(c)
    hw = normalize_homotopy(sp.w, sp.gamma)
    h = sp.embed_w.compose(hw).compose(sp.project_w)
    return Contraction(sp.h, c, sp.embed_h, sp.project_h, h)


def identity_contraction(c: ChainComplex) -> Contraction:
    ident = DegreeMap.identity(c.space)
    return Contraction(c, c, ident, ident, DegreeMap.zero(c.space, c.space, -1))


def require_verified(c: Contraction) -> None:
    rep = verify_contraction(c)
    if not rep.passed:
        failed = rep.failures()[0]
        raise InputError(
            f"input is not a contraction: {failed} fails",
            witness=rep.check(failed).witness,
        )


# ---------------------------------------------------------------------------
# Adapted basis


@dataclass(frozen=True)
class Bidegree:
    a: int
    b: int

    @property
    def weight(self) -> int:
        return self.a + self.b


class AdaptedBasis:
    """Basis of N adapted to N = iota(M) + ker(pi), with letter data."""

    def __init__(self, c: Contraction):
        self.contraction = c
        m, n = c.small.space, c.big.space
        self.m_letters: list[str] = []
        self.w_letters: list[str] = []
        self.degrees: dict[str, int] = {}
        self.change: dict[int, Matrix] = {}  # columns: adapted basis in N coords
        self.change_inv: dict[int, Matrix] = {}
        self.letters_by_degree: dict[int, list[str]] = {}
        taken = {nm for nm, _ in m.pairs()}
        for deg in n.degrees:
            cols = [list(col) for col in zip(*c.iota.block(deg))] if m.dim(deg) else []
            ker = kernel(c.pi.block(deg), ncols=n.dim(deg)) if m.dim(deg) else [
                [Fraction(int(i == j)) for i in range(n.dim(deg))] for j in range(n.dim(deg))
            ]
            full = cols + ker
            p = transpose(full)
            self.change[deg] = p
            self.change_inv[deg] = inverse(p)
            names = list(m.names(deg))
            tag = f"m{-deg}" if deg < 0 else str(deg)
            for j in range(len(ker)):
                nm = f"w{tag}_{j}"
                while nm in taken:
                    nm += "'"
                taken.add(nm)
                names.append(nm)
                self.w_letters.append(nm)
            self.m_letters.extend(m.names(deg))
            for nm in names:
                self.degrees[nm] = deg
            self.letters_by_degree[deg] = names
        self.m_set = frozenset(self.m_letters)
        self.w_set = frozenset(self.w_letters)
        self.d_images = self._conjugate(c.big.differential)
        self.h_images = self._conjugate(c.h)
        self.dm_images = {}
        for deg in m.degrees:
            blk = c.small.d(deg)
            for j, nm in enumerate(m.names(deg)):
                img = {(m.names(deg + 1)[i],): blk[i][j] for i in range(m.dim(deg + 1))}
                t = Tensor(img)
                if t:
                    self.dm_images[nm] = t

    def _conjugate(self, f: DegreeMap) -> dict[str, Tensor]:
        out = {}
        n = self.contraction.big.space
        for deg in n.degrees:
            tdeg = deg + f.shift
            if not n.dim(tdeg):
                continue
            blk = matmul(
                matmul(self.change_inv[tdeg], f.block(deg), inner=n.dim(tdeg), cols=n.dim(deg)),
                self.change[deg],
                inner=n.dim(deg), cols=n.dim(deg),
            )
            tnames = self.letters_by_degree[tdeg]
            for j, nm in enumerate(self.letters_by_degree[deg]):
                t = Tensor({(tnames[i],): blk[i][j] for i in range(len(tnames))})
                if t:
                    out[nm] = t
        return out

    def bidegree(self, word: Sequence[str]) -> Bidegree:
        a = b = 0
        for x in word:
            if x in self.m_set:
                a += 1
            elif x in self.w_set:
                b += 1
            else:
                raise InputError(f"letter {x!r} is not in the adapted basis")
        return Bidegree(a, b)

    def to_original(self, x: Tensor) -> Tensor:
        """Rewrite a tensor in adapted letters in terms of N's own basis."""
        n = self.contraction.big.space
        images = {}
        for deg, names in self.letters_by_degree.items():
            p = self.change[deg]
            for j, nm in enumerate(names):
                images[nm] = Tensor({(n.names(deg)[i],): p[i][j] for i in range(n.dim(deg))})
        return substitute(x, images)

    def from_original(self, x: Tensor) -> Tensor:
        n = self.contraction.big.space
        images = {}
        for deg in n.degrees:
            q = self.change_inv[deg]
            names = self.letters_by_degree[deg]
            for j, nm in enumerate(n.names(deg)):
                images[nm] = Tensor({(names[i],): q[i][j] for i in range(len(names))})
        return substitute(x, images)


def substitute(x: Tensor, images: Mapping[str, Tensor], cap: int | None = None) -> Tensor:
    """Associative algebra map sending each letter to a tensor."""
    parts = []
    for w, c in x.terms.items():
        acc = Tensor.word(())
        for a in w:
            acc = concat(acc, images.get(a, Tensor.zero()), cap)
        parts.append(acc * c)
    return Tensor.sum(parts)


def bidegree_of(word: Sequence[str], c) -> Bidegree:
    """(a, b) = (number of M-letters, number of ker(pi)-letters) of an adapted word."""
    basis = c if isinstance(c, AdaptedBasis) else getattr(c, "basis", None)
    if basis is None:
        basis = AdaptedBasis(c)
    return basis.bidegree(word)


# ---------------------------------------------------------------------------
# Tensor extension


class TensorContraction:
    """Contraction of T(M) onto T(N), up to a weight cap, in the adapted basis."""

    def __init__(self, c: Contraction, cap: int):
        if cap < 1:
            raise InputError("weight cap must be >= 1")
        require_verified(c)
        self.contraction = c
        self.cap = cap
        self.basis = AdaptedBasis(c)
        self.degrees = self.basis.degrees
        self.d_big = Derivation(self.degrees, self.basis.d_images, 1)
        self.d_small = Derivation(self.degrees, self.basis.dm_images, 1)
        self._k_cache: dict[Word, Tensor] = {}

    def iota(self, x: Tensor) -> Tensor:
        # iota(M) is spanned by the M-letters of the adapted basis
        return x

    def pi(self, x: Tensor) -> Tensor:
        w_set = self.basis.w_set
        return Tensor._raw({w: c for w, c in x.terms.items() if not any(a in w_set for a in w)})

    def _k_word(self, w: Word) -> Tensor:
        hit = self._k_cache.get(w)
        if hit is not None:
            return hit
        w_set = self.basis.w_set
        p = sum(1 for a in w if a in w_set)
        if p == 0:
            res = Tensor.zero()
        else:
            parts = []
            prefix = 0
            for i, a in enumerate(w):
                if a in w_set:
                    img = self.basis.h_images.get(a)
                    if img is not None:
                        sign = -1 if prefix & 1 else 1
                        pre, post = w[:i], w[i + 1:]
                        parts.append(
                            Tensor._raw({pre + u + post: c * sign for u, c in img.terms.items()})
                        )
                prefix += self.degrees[a]
            res = Tensor.sum(parts) * Fraction(1, p)
        self._k_cache[w] = res
        return res

    def k(self, x: Tensor) -> Tensor:
        return Tensor.sum(self._k_word(w) * c for w, c in x.terms.items())

    def d(self, x: Tensor) -> Tensor:
        return self.d_big(x)

    def words(self, letters: Sequence[str], weight: int) -> dict[int, list[Word]]:
        out: dict[int, list[Word]] = {}
        for w in itertools.product(letters, repeat=weight):
            out.setdefault(word_degree(w, self.degrees), []).append(w)
        return out

    def weight_contraction(self, weight: int) -> Contraction:
        """The weight-``weight`` block as an honest contraction of complexes."""
        if not 1 <= weight <= self.cap:
            raise InputError(f"weight {weight} outside 1..{self.cap}")
        big_words = self.words(self.basis.m_letters + self.basis.w_letters, weight)
        small_words = self.words(self.basis.m_letters, weight)
        return _block_contraction(
            big_words, small_words, self.d_big, self.d_small, self.iota, self.pi, self.k,
            _word_coords,
        )

    def verify(self) -> dict[int, ContractionReport]:
        return {w: verify_contraction(self.weight_contraction(w)) for w in range(1, self.cap + 1)}

    def split_formula_check(self, x: Tensor, y: Tensor) -> SplitFormulaReport:
        return split_formula_check(x, y, self)


def _label(word: Word) -> str:
    return "(x)".join(word)


def _word_coords(elements: Sequence[Word]):
    index = {w: i for i, w in enumerate(elements)}

    def coords(t: Tensor) -> list[Fraction]:
        v = [Fraction(0)] * len(elements)
        for w, c in t.terms.items():
            if w not in index:
                raise AssertionError(f"word {w} outside the expected block")
            v[index[w]] = c
        return v

    return coords, [Tensor.word(w) for w in elements], [_label(w) for w in elements]


def _block_contraction(big, small, d_big, d_small, iota, pi, k, coords_factory) -> Contraction:
    """Assemble matrices of (d, iota, pi, k) on per-degree bases.

    ``big``/``small`` map degree -> list of basis keys; ``coords_factory`` turns
    a key list into (coords function, basis tensors, labels).
    """
    bdata = {n: coords_factory(v) for n, v in big.items() if v}
    sdata = {n: coords_factory(v) for n, v in small.items() if v}
    bspace = GradedSpace({n: tuple(d[2]) for n, d in bdata.items()})
    sspace = GradedSpace({n: tuple(d[2]) for n, d in sdata.items()})

    def matrix(f, src, tgt, n, shift):
        if n not in src or (n + shift) not in tgt:
            return None
        coords = tgt[n + shift][0]
        return transpose([coords(f(b)) for b in src[n][1]])

    def degree_map(f, src, tgt, sspace_, tspace_, shift):
        blocks = {}
        for n in src:
            m = matrix(f, src, tgt, n, shift)
            if m is not None:
                blocks[n] = m
            else:
                for b in src[n][1]:
                    if f(b):
                        raise AssertionError("map leaves the realized block")
        return DegreeMap(sspace_, tspace_, shift, blocks)

    big_cx = ChainComplex(bspace, degree_map(d_big, bdata, bdata, bspace, bspace, 1))
    small_cx = ChainComplex(sspace, degree_map(d_small, sdata, sdata, sspace, sspace, 1))
    return Contraction(
        small_cx,
        big_cx,
        degree_map(iota, sdata, bdata, sspace, bspace, 0),
        degree_map(pi, bdata, sdata, bspace, sspace, 0),
        degree_map(k, bdata, bdata, bspace, bspace, -1),
    )


def extend_to_tensor(c: Contraction, cap: int) -> TensorContraction:
    return TensorContraction(c, cap)


@dataclass(frozen=True)
class SplitFormulaReport:
    passed: bool
    lhs: Tensor
    rhs: Tensor
    bidegrees: tuple[Bidegree, Bidegree]
    vacuous: bool = False


def _homogeneous_bidegree(x: Tensor, basis: AdaptedBasis) -> Bidegree:
    bds = {basis.bidegree(w) for w in x.terms}
    if len(bds) != 1:
        raise InputError("element is not homogeneous in bidegree")
    return next(iter(bds))


def split_formula_check(x: Tensor, y: Tensor, k: TensorContraction) -> SplitFormulaReport:
    """Compare k(x (x) y) by the 1/p definition with the b/(b+q) split formula."""
    basis = k.basis
    bx, by = _homogeneous_bidegree(x, basis), _homogeneous_bidegree(y, basis)
    deg_x = x.degree(k.degrees)
    if deg_x is None or y.degree(k.degrees) is None:
        raise InputError("split formula needs homogeneous elements")
    lhs = k.k(concat(x, y))
    b, q = bx.b, by.b
    if b + q == 0:
        rhs = Tensor.zero()
        return SplitFormulaReport(lhs == rhs, lhs, rhs, (bx, by), vacuous=True)
    sign = -1 if deg_x & 1 else 1
    rhs = concat(k.k(x), y) * Fraction(b, b + q) + concat(x, k.k(y)) * Fraction(sign * q, b + q)
    return SplitFormulaReport(lhs == rhs, lhs, rhs, (bx, by))


# ---------------------------------------------------------------------------
# Lie extension


class LieContraction:
    """Restriction of the tensor contraction to L(M) and L(N)."""

    def __init__(self, c: Contraction, cap: int):
        self.tensor = TensorContraction(c, cap)
        self.cap = cap
        basis = self.tensor.basis
        self.degrees = basis.degrees
        letters = basis.m_letters + basis.w_letters
        self.big_algebra = FreeLieAlgebra(
            GeneratorSet(tuple((a, self.degrees[a]) for a in letters), cap)
        )
        self.small_algebra = FreeLieAlgebra(
            GeneratorSet(tuple((a, self.degrees[a]) for a in basis.m_letters), cap)
        )

    def k(self, x: Tensor) -> Tensor:
        return self.tensor.k(x)

    def rho(self, x: Tensor) -> Tensor:
        return dynkin_rho(x, self.degrees)

    def rho_commutation_failures(self, weights: Sequence[int] | None = None) -> list[Word]:
        """Adapted words w (weight <= cap) with k(rho(w)) != rho(k(w))."""
        bad = []
        letters = self.tensor.basis.m_letters + self.tensor.basis.w_letters
        for n in weights or range(1, self.cap + 1):
            for w in itertools.product(letters, repeat=n):
                t = Tensor.word(w)
                if self.k(self.rho(t)) != self.rho(self.k(t)):
                    bad.append(w)
        return bad

    def weight_contraction(self, weight: int) -> Contraction:
        if not 1 <= weight <= self.cap:
            raise InputError(f"weight {weight} outside 1..{self.cap}")
        big_alg, small_alg = self.big_algebra, self.small_algebra

        def blocks(alg):
            return {
                n: alg.basis(weight, n) for n in alg.block_degrees(weight) if alg.basis(weight, n)
            }

        def factory(alg):
            def make(elems):
                n = elems[0].degree

                def coords(t):
                    return alg.coords(t, weight, n)

                return coords, [e.element for e in elems], [e.label for e in elems]

            return make

        big = blocks(big_alg)
        small = blocks(small_alg)
        # the small letters are a subset of the big ones, so labels are shared;
        # factories are per algebra because coordinates differ
        bdata_maker = factory(big_alg)
        sdata_maker = factory(small_alg)
        tagged_big = {n: ("big", v) for n, v in big.items()}
        tagged_small = {n: ("small", v) for n, v in small.items()}

        def coords_factory(tagged):
            which, elems = tagged
            return (bdata_maker if which == "big" else sdata_maker)(elems)

        t = self.tensor
        return _block_contraction(
            tagged_big, tagged_small, t.d_big, t.d_small, t.iota, t.pi, t.k, coords_factory
        )

    def verify(self) -> dict[int, ContractionReport]:
        return {w: verify_contraction(self.weight_contraction(w)) for w in range(1, self.cap + 1)}

    def bracket_formula_check(self, x: Tensor, y: Tensor) -> bool:
        """k([x,y]) = b/(b+q)[k x, y] + (-1)^|x| q/(b+q)[x, k y] for Lie x, y."""
        basis = self.tensor.basis
        bx, by = _homogeneous_bidegree(x, basis), _homogeneous_bidegree(y, basis)
        b, q = bx.b, by.b
        br = self.big_algebra.bracket
        lhs = self.k(br(x, y))
        if b + q == 0:
            return not lhs
        sign = -1 if x.degree(self.degrees) & 1 else 1
        rhs = br(self.k(x), y) * Fraction(b, b + q) + br(x, self.k(y)) * Fraction(sign * q, b + q)
        return lhs == rhs


def extend_to_lie(c: Contraction, cap: int) -> LieContraction:
    return LieContraction(c, cap)


# ---------------------------------------------------------------------------
# Cohomology of T(V) and L(V)


def linear_presentation(c: ChainComplex, cap: int) -> DglaPresentation:
    """L(V) with the differential extending d_V as a derivation."""
    gens = c.space.pairs()
    diff = {}
    for n in c.degrees:
        blk = c.d(n)
        for j, nm in enumerate(c.space.names(n)):
            t = Tensor({(c.space.names(n + 1)[i],): blk[i][j] for i in range(c.dim(n + 1))})
            if t:
                diff[nm] = t
    return DglaPresentation.free(gens, cap, diff)


def tensor_weight_complex(c: ChainComplex, weight: int) -> ChainComplex:
    """The weight-``weight`` part of T(V) on the word basis."""
    degrees = dict(c.space.pairs())
    p = linear_presentation(c, max(weight, 1))
    deriv = p.derivation
    names = [nm for nm, _ in c.space.pairs()]
    words: dict[int, list[Word]] = {}
    for w in itertools.product(names, repeat=weight):
        words.setdefault(word_degree(w, degrees), []).append(w)
    space = GradedSpace({n: tuple(_label(w) for w in ws) for n, ws in words.items()})
    blocks = {}
    for n, ws in words.items():
        if n + 1 not in words:
            continue
        coords = _word_coords(words[n + 1])[0]
        blocks[n] = transpose([coords(deriv(Tensor.word(w))) for w in ws])
    return ChainComplex.build(space, blocks)


@dataclass(frozen=True)
class CommutationReport:
    passed: bool
    tensor_lhs: dict  # weight -> degree -> dim H(T(V)_w)
    tensor_rhs: dict  # weight -> degree -> dim T(H)_w
    lie_lhs: dict
    lie_rhs: dict


def _drop_zeros(table: dict) -> dict:
    return {w: {n: d for n, d in row.items() if d} for w, row in table.items()}


def cohomology_commutation_check(v: ChainComplex, cap: int) -> CommutationReport:
    """Compare H(T(V)), H(L(V)) with T(H(V)), L(H(V)) weight by weight."""
    hdims = cohomology_dims(v)
    hgens = tuple(
        (f"h{n}_{j}", n) for n in sorted(hdims) for j in range(hdims[n])
    )
    tensor_lhs, tensor_rhs, lie_lhs = {}, {}, {}
    p = linear_presentation(v, cap)
    from .freelie import Realization

    real = Realization(p)
    hdeg = dict(hgens)
    for w in range(1, cap + 1):
        tensor_lhs[w] = cohomology_dims(tensor_weight_complex(v, w))
        row: dict[int, int] = {}
        for word in itertools.product([g for g, _ in hgens], repeat=w):
            n = word_degree(word, hdeg)
            row[n] = row.get(n, 0) + 1
        tensor_rhs[w] = row
        lie_lhs[w] = cohomology_dims(real.weight_complex(w))
    if hgens:
        lie_rhs = lie_dims(GeneratorSet(hgens, cap))
    else:
        lie_rhs = {w: {} for w in range(1, cap + 1)}
    tl, tr, ll, lr = (_drop_zeros(t) for t in (tensor_lhs, tensor_rhs, lie_lhs, lie_rhs))
    return CommutationReport(tl == tr and ll == lr, tl, tr, ll, lr)
