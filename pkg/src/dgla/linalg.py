"""Exact rational linear algebra over graded vector spaces.

Everything here works over ``fractions.Fraction``.  Matrices are lists of
rows; sparse vectors are plain dicts mapping a key (a column index or any
hashable, totally ordered label) to a nonzero Fraction.

The pivot rule is fixed throughout: scan columns left to right, and within a
column take the smallest-index row that is still available.  Every basis the
package produces (kernels, images, cohomology representatives, splittings)
is therefore reproducible bit for bit.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import InputError, NotAComplexError

Matrix = list[list[Fraction]]

_COEFF_RE = re.compile(r"^\s*[+-]?\d+(\s*/\s*[+-]?\d+)?\s*$")


def parse_scalar(text) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` (or a plain int) into a reduced Fraction."""
    if isinstance(text, bool):
        raise InputError(f"invalid coefficient {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str) or not _COEFF_RE.match(text):
        raise InputError(f"invalid coefficient {text!r}: expected 'p/q' or 'p'")
    try:
        return Fraction(text.replace(" ", ""))
    except ZeroDivisionError:
        raise InputError(f"invalid coefficient {text!r}: zero denominator") from None


def format_scalar(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def zeros(rows: int, cols: int) -> Matrix:
    return [[Fraction(0)] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = Fraction(1)
    return m


def _frac(x) -> Fraction:
    return x if type(x) is Fraction else Fraction(x)


def as_matrix(rows) -> Matrix:
    return [[_frac(x) for x in row] for row in rows]


def matmul(a: Matrix, b: Matrix, inner: int | None = None, cols: int | None = None) -> Matrix:
    """Product of an (m x k) and a (k x n) matrix.

    ``inner`` gives k and ``cols`` gives n when they cannot be read off from
    the stored rows (empty matrices).
    """
    m = len(a)
    k = inner if inner is not None else (len(a[0]) if a else len(b))
    n = cols if cols is not None else (len(b[0]) if b else 0)
    out = zeros(m, n)
    for i in range(m):
        row = a[i]
        oi = out[i]
        for t in range(k):
            c = row[t]
            if c:
                bt = b[t]
                for j in range(n):
                    if bt[j]:
                        oi[j] += c * bt[j]
    return out


def matadd(a: Matrix, b: Matrix, scale: Fraction = Fraction(1)) -> Matrix:
    if scale == 1:
        return [[x + y if y else x for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]
    if scale == -1:
        return [[x - y if y else x for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]
    return [[x + scale * y if y else x for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def is_zero(a: Matrix) -> bool:
    return all(not x for row in a for x in row)


def transpose(a: Matrix, rows_of_result: int | None = None) -> Matrix:
    if not a:
        return [[] for _ in range(rows_of_result or 0)]
    return [list(col) for col in zip(*a)]


def matvec(a: Matrix, v: Sequence[Fraction]) -> list[Fraction]:
    return [sum((x * y for x, y in zip(row, v) if x and y), Fraction(0)) for row in a]


def first_nonzero(a: Matrix):
    """Return ``(i, j, value)`` of the first nonzero entry, or None."""
    for i, row in enumerate(a):
        for j, x in enumerate(row):
            if x:
                return i, j, x
    return None


# ---------------------------------------------------------------------------
# Row reduction


@dataclass(frozen=True)
class RowReduction:
    rank: int
    pivot_columns: tuple[int, ...]
    rref: Matrix
    kernel_basis: tuple[tuple[Fraction, ...], ...]
    image_basis: tuple[tuple[Fraction, ...], ...]


def row_reduce(matrix: Sequence[Sequence], ncols: int | None = None) -> RowReduction:
    """Gauss-Jordan elimination with the fixed pivot rule.

    ``ncols`` is only needed for a matrix with zero rows.  The kernel basis
    has one vector per free column (1 in that column); the image basis is the
    list of pivot columns of the input.
    """
    a = as_matrix(matrix)
    m = len(a)
    n = len(a[0]) if a else (ncols or 0)
    rows = [{j: x for j, x in enumerate(r) if x} for r in a]
    pivots: list[int] = []
    r = 0
    for col in range(n):
        if r == m:
            break
        sel = None
        for i in range(r, m):
            if col in rows[i]:
                sel = i
                break
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        piv = rows[r]
        inv = 1 / piv[col]
        if inv != 1:
            for j in piv:
                piv[j] *= inv
        for i in range(m):
            if i != r and col in rows[i]:
                row = rows[i]
                c = row[col]
                for j, x in piv.items():
                    y = row.get(j, 0) - c * x
                    if y:
                        row[j] = y
                    else:
                        row.pop(j, None)
        pivots.append(col)
        r += 1
    rref = [[Fraction(0)] * n for _ in range(m)]
    for i, row in enumerate(rows):
        for j, x in row.items():
            rref[i][j] = x
    piv_set = set(pivots)
    kernel = []
    for f in range(n):
        if f in piv_set:
            continue
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            if rref[i][f]:
                v[p] = -rref[i][f]
        kernel.append(tuple(v))
    image = tuple(tuple(a[i][p] for i in range(m)) for p in pivots)
    return RowReduction(len(pivots), tuple(pivots), rref, tuple(kernel), image)


def rank(matrix, ncols: int | None = None) -> int:
    return row_reduce(matrix, ncols).rank


def kernel(matrix, ncols: int | None = None) -> list[list[Fraction]]:
    return [list(v) for v in row_reduce(matrix, ncols).kernel_basis]


def inverse(matrix: Matrix) -> Matrix:
    n = len(matrix)
    aug = [list(row) + ident for row, ident in zip(as_matrix(matrix), identity(n))]
    rr = row_reduce(aug)
    if rr.pivot_columns[:n] != tuple(range(n)) or len(matrix) != rr.rank:
        raise ValueError("matrix is singular")
    return [row[n:] for row in rr.rref]


def solve(matrix: Matrix, rhs: Sequence[Fraction], ncols: int | None = None):
    """One solution x of ``matrix @ x = rhs`` (free variables set to 0), or None."""
    m = len(matrix)
    n = len(matrix[0]) if matrix else (ncols or 0)
    aug = [list(row) + [Fraction(b)] for row, b in zip(as_matrix(matrix), rhs)]
    rr = row_reduce(aug, n + 1)
    if n in rr.pivot_columns:
        return None
    x = [Fraction(0)] * n
    for i, p in enumerate(rr.pivot_columns):
        x[p] = rr.rref[i][n]
    assert m == len(rhs)
    return x


# ---------------------------------------------------------------------------
# Incremental echelon form on sparse vectors


class Echelon:
    """Incrementally maintained echelon basis of a span of sparse vectors.

    Each stored row remembers how it was obtained from the vectors that were
    accepted by :meth:`add`, so :meth:`coordinates` can express any vector in
    the span in terms of those accepted vectors.
    """

    def __init__(self):
        self._rows: list[tuple[Hashable, dict, dict]] = []
        self.count = 0

    def __len__(self):
        return self.count

    def _reduce(self, vec: Mapping, track: bool):
        v = {k: Fraction(x) for k, x in vec.items() if x}
        combo: dict[int, Fraction] = {}
        for pivot, row, rcombo in self._rows:
            c = v.get(pivot)
            if c:
                for k, x in row.items():
                    y = v.get(k, 0) - c * x
                    if y:
                        v[k] = y
                    else:
                        del v[k]
                if track:
                    for k, x in rcombo.items():
                        y = combo.get(k, 0) - c * x
                        if y:
                            combo[k] = y
                        else:
                            combo.pop(k, None)
        return v, combo

    def add(self, vec: Mapping) -> bool:
        """Insert ``vec``; return True iff it enlarged the span."""
        v, combo = self._reduce(vec, True)
        if not v:
            return False
        pivot = min(v)
        inv = 1 / v[pivot]
        row = {k: x * inv for k, x in v.items()}
        idx = self.count
        combo = {k: x * inv for k, x in combo.items()}
        combo[idx] = combo.get(idx, 0) + inv
        self._rows.append((pivot, row, combo))
        self.count += 1
        return True

    def contains(self, vec: Mapping) -> bool:
        v, _ = self._reduce(vec, False)
        return not v

    def coordinates(self, vec: Mapping):
        """Coefficients on the accepted vectors, or None if outside the span."""
        v, combo = self._reduce(vec, True)
        if v:
            return None
        out = [Fraction(0)] * self.count
        for k, x in combo.items():
            out[k] = -x
        return out


def dense_to_sparse(v: Sequence[Fraction]) -> dict[int, Fraction]:
    return {i: Fraction(x) for i, x in enumerate(v) if x}


def sparse_to_dense(v: Mapping[int, Fraction], n: int) -> list[Fraction]:
    out = [Fraction(0)] * n
    for i, x in v.items():
        out[i] = x
    return out


def extend_basis(base: Iterable[Sequence], candidates: Iterable[Sequence]) -> list[list[Fraction]]:
    """Candidates that are independent modulo ``base`` (and each other), in order."""
    ech = Echelon()
    for b in base:
        ech.add(dense_to_sparse(b))
    chosen = []
    for c in candidates:
        if ech.add(dense_to_sparse(c)):
            chosen.append([Fraction(x) for x in c])
    return chosen


def column_space_basis(vectors: Iterable[Sequence]) -> list[list[Fraction]]:
    return extend_basis([], vectors)


# ---------------------------------------------------------------------------
# Graded spaces and degree maps


@dataclass(frozen=True)
class GradedSpace:
    """Finite graded vector space with a named basis in each degree."""

    basis: Mapping[int, tuple[str, ...]]

    def __post_init__(self):
        clean = {}
        seen = set()
        for deg in sorted(self.basis):
            names = tuple(self.basis[deg])
            if not names:
                continue
            for nm in names:
                if nm in seen:
                    raise InputError(f"duplicate basis name {nm!r}")
                seen.add(nm)
            clean[int(deg)] = names
        object.__setattr__(self, "basis", clean)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, int]]) -> GradedSpace:
        basis: dict[int, list[str]] = {}
        for name, deg in pairs:
            basis.setdefault(deg, []).append(name)
        return cls({d: tuple(v) for d, v in basis.items()})

    @property
    def degrees(self) -> list[int]:
        return sorted(self.basis)

    def dim(self, degree: int) -> int:
        return len(self.basis.get(degree, ()))

    def names(self, degree: int) -> tuple[str, ...]:
        return self.basis.get(degree, ())

    @property
    def total_dim(self) -> int:
        return sum(len(v) for v in self.basis.values())

    def degree_of(self, name: str) -> int:
        for d, names in self.basis.items():
            if name in names:
                return d
        raise KeyError(name)

    def index(self, name: str) -> tuple[int, int]:
        for d, names in self.basis.items():
            if name in names:
                return d, names.index(name)
        raise KeyError(name)

    def pairs(self) -> list[tuple[str, int]]:
        return [(nm, d) for d in self.degrees for nm in self.basis[d]]


@dataclass(frozen=True)
class DegreeMap:
    """Homogeneous linear map of degree ``shift`` between graded spaces.

    ``blocks[n]`` is the matrix from source degree n to target degree
    n + shift, of shape dim(target^{n+shift}) x dim(source^n).  Missing
    blocks are zero.
    """

    source: GradedSpace
    target: GradedSpace
    shift: int
    blocks: Mapping[int, Matrix] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for n, blk in self.blocks.items():
            rows, cols = self.target.dim(n + self.shift), self.source.dim(n)
            blk = as_matrix(blk)
            if rows == 0 or cols == 0:
                if any(any(r) for r in blk):
                    raise InputError(f"nonzero block in degree {n} with an empty side")
                continue
            if len(blk) != rows or any(len(r) != cols for r in blk):
                raise InputError(
                    f"block in degree {n} has wrong shape: expected {rows}x{cols}"
                )
            clean[int(n)] = blk
        object.__setattr__(self, "blocks", clean)

    def block(self, n: int) -> Matrix:
        if n in self.blocks:
            return self.blocks[n]
        return zeros(self.target.dim(n + self.shift), self.source.dim(n))

    def apply(self, n: int, v: Sequence[Fraction]) -> list[Fraction]:
        return matvec(self.block(n), v)

    def compose(self, other: DegreeMap) -> DegreeMap:
        """self o other."""
        blocks = {}
        for n in other.source.degrees:
            mid = n + other.shift
            blocks[n] = matmul(
                self.block(mid), other.block(n), inner=other.target.dim(mid),
                cols=other.source.dim(n),
            )
        return DegreeMap(other.source, self.target, self.shift + other.shift, blocks)

    def __add__(self, other: DegreeMap) -> DegreeMap:
        assert self.shift == other.shift
        return DegreeMap(
            self.source,
            self.target,
            self.shift,
            {n: matadd(self.block(n), other.block(n)) for n in self.source.degrees},
        )

    def __sub__(self, other: DegreeMap) -> DegreeMap:
        return DegreeMap(
            self.source,
            self.target,
            self.shift,
            {n: matadd(self.block(n), other.block(n), Fraction(-1)) for n in self.source.degrees},
        )

    def scaled(self, c) -> DegreeMap:
        c = Fraction(c)
        return DegreeMap(
            self.source,
            self.target,
            self.shift,
            {n: [[c * x for x in row] for row in blk] for n, blk in self.blocks.items()},
        )

    def is_zero(self) -> bool:
        return all(is_zero(b) for b in self.blocks.values())

    def first_nonzero(self):
        """``(source degree, row, col, value)`` of some nonzero entry, or None."""
        for n in sorted(self.blocks):
            hit = first_nonzero(self.blocks[n])
            if hit:
                return (n, *hit)
        return None

    @classmethod
    def identity(cls, space: GradedSpace) -> DegreeMap:
        return cls(space, space, 0, {n: identity(space.dim(n)) for n in space.degrees})

    @classmethod
    def zero(cls, source: GradedSpace, target: GradedSpace, shift: int) -> DegreeMap:
        return cls(source, target, shift, {})


@dataclass(frozen=True)
class ChainComplex:
    """Cochain complex: a graded space with a degree +1 differential, d^2 = 0."""

    space: GradedSpace
    differential: DegreeMap

    def __post_init__(self):
        if self.differential.shift != 1:
            raise InputError("differential must have degree +1")
        if self.differential.source != self.space or self.differential.target != self.space:
            raise InputError("differential must be an endomorphism of the space")
        for n in self.space.degrees:
            dd = matmul(
                self.differential.block(n + 1),
                self.differential.block(n),
                inner=self.space.dim(n + 1),
                cols=self.space.dim(n),
            )
            hit = first_nonzero(dd)
            if hit:
                i, j, val = hit
                raise NotAComplexError(
                    f"d^2 != 0: d(d({self.space.names(n)[j]})) has coefficient "
                    f"{format_scalar(val)} on {self.space.names(n + 2)[i]}",
                    witness={
                        "degree": n,
                        "element": self.space.names(n)[j],
                        "target": self.space.names(n + 2)[i],
                        "coeff": format_scalar(val),
                    },
                )

    @classmethod
    def build(cls, space: GradedSpace, blocks: Mapping[int, Matrix]) -> ChainComplex:
        return cls(space, DegreeMap(space, space, 1, blocks))

    @classmethod
    def zero_differential(cls, space: GradedSpace) -> ChainComplex:
        return cls(space, DegreeMap.zero(space, space, 1))

    def d(self, n: int) -> Matrix:
        return self.differential.block(n)

    @property
    def degrees(self) -> list[int]:
        return self.space.degrees

    def dim(self, n: int) -> int:
        return self.space.dim(n)


# ---------------------------------------------------------------------------
# Cohomology, splittings, homotopies, truncation


@dataclass(frozen=True)
class CohomologyGroup:
    degree: int
    dim: int
    cocycle_dim: int
    coboundary_dim: int
    representatives: tuple[tuple[Fraction, ...], ...]


def _cocycles(c: ChainComplex, n: int) -> list[list[Fraction]]:
    return kernel(c.d(n), ncols=c.dim(n))


def _coboundaries(c: ChainComplex, n: int) -> list[list[Fraction]]:
    if c.dim(n - 1) == 0 or c.dim(n) == 0:
        return []
    return [list(v) for v in row_reduce(c.d(n - 1)).image_basis]


def cohomology(c: ChainComplex) -> dict[int, CohomologyGroup]:
    """Cohomology in every degree of the support of ``c``.

    Representatives extend a basis of the coboundaries to the cocycles under
    the fixed pivot rule; they are cocycles that span a complement of B^n.
    """
    out = {}
    for n in c.degrees:
        cocyc = _cocycles(c, n)
        cobound = _coboundaries(c, n)
        reps = extend_basis(cobound, cocyc)
        out[n] = CohomologyGroup(
            n, len(reps), len(cocyc), len(cobound), tuple(tuple(r) for r in reps)
        )
    return out


def cohomology_dims(c: ChainComplex) -> dict[int, int]:
    return {n: g.dim for n, g in cohomology(c).items()}


def is_acyclic(c: ChainComplex) -> bool:
    return all(g.dim == 0 for g in cohomology(c).values())


@dataclass(frozen=True)
class Splitting:
    """V = H + W with H carrying zero differential and W acyclic.

    ``embed_h``/``project_h`` are the inclusion H -> V and a projection
    V -> H killing W; ``embed_w``/``project_w`` likewise for W.  ``gamma`` is
    a degree -1 self-map of W with d gamma + gamma d = -Id_W.
    """

    h: ChainComplex
    w: ChainComplex
    embed_h: DegreeMap
    project_h: DegreeMap
    embed_w: DegreeMap
    project_w: DegreeMap
    gamma: DegreeMap


def _names(prefix: str, n: int, count: int) -> tuple[str, ...]:
    tag = f"m{-n}" if n < 0 else str(n)
    return tuple(f"{prefix}{tag}_{j}" for j in range(count))


def split_complex(c: ChainComplex) -> Splitting:
    """Split a complex into cohomology plus an acyclic part.

    In degree n the space is H^n + B^n + S^n where H^n are the cohomology
    representatives, B^n the pivot basis of the coboundaries and S^n chosen
    preimages of the pivot basis of B^{n+1}.  On W = B + S, gamma(b) = -s for
    d s = b and gamma(s) = 0.
    """
    coh = cohomology(c)
    hbasis: dict[int, list] = {}
    bbasis: dict[int, list] = {}
    sbasis: dict[int, list] = {}
    for n in c.degrees:
        hbasis[n] = [list(r) for r in coh[n].representatives]
        bbasis[n] = _coboundaries(c, n)
    for n in c.degrees:
        pre = []
        for b in bbasis.get(n + 1, []):
            x = solve(c.d(n), b, ncols=c.dim(n))
            assert x is not None
            pre.append(x)
        sbasis[n] = pre

    hspace = GradedSpace({n: _names("h", n, len(v)) for n, v in hbasis.items()})
    wspace = GradedSpace(
        {n: _names("w", n, len(bbasis[n]) + len(sbasis[n])) for n in c.degrees}
    )
    emb_h, emb_w, proj_h, proj_w = {}, {}, {}, {}
    w_vectors: dict[int, list] = {}
    for n in c.degrees:
        dim = c.dim(n)
        wv = bbasis[n] + sbasis[n]
        w_vectors[n] = wv
        full = hbasis[n] + wv
        if len(full) != dim:
            raise AssertionError("splitting is not a basis")
        # columns of P are the adapted basis vectors
        p = transpose(full) if full else []
        pinv = inverse(p) if full else []
        nh = len(hbasis[n])
        if nh:
            emb_h[n] = transpose(hbasis[n])
            proj_h[n] = pinv[:nh]
        if wv:
            emb_w[n] = transpose(wv)
            proj_w[n] = pinv[nh:]
    # differential on W in the adapted basis: b-part is killed, s_j -> b_j
    wblocks = {}
    gblocks = {}
    for n in c.degrees:
        nb, ns = len(bbasis[n]), len(sbasis[n])
        if ns:
            nb1 = len(bbasis.get(n + 1, []))
            m = zeros(wspace.dim(n + 1), nb + ns)
            g = zeros(nb + ns, wspace.dim(n + 1))
            for j in range(ns):
                m[j][nb + j] = Fraction(1)
                g[nb + j][j] = Fraction(-1)
            assert nb1 == ns
            wblocks[n] = m
            gblocks[n + 1] = g
    wcx = ChainComplex.build(wspace, wblocks)
    hcx = ChainComplex.zero_differential(hspace)
    gamma = DegreeMap(wspace, wspace, -1, gblocks)
    return Splitting(
        hcx,
        wcx,
        DegreeMap(hspace, c.space, 0, emb_h),
        DegreeMap(c.space, hspace, 0, proj_h),
        DegreeMap(wspace, c.space, 0, emb_w),
        DegreeMap(c.space, wspace, 0, proj_w),
        gamma,
    )


def homotopy_defect(c: ChainComplex, gamma: DegreeMap, sign: int = -1) -> DegreeMap:
    """d gamma + gamma d - sign * Id."""
    d = c.differential
    total = d.compose(gamma) + gamma.compose(d)
    return total - DegreeMap.identity(c.space).scaled(sign)


def normalize_homotopy(c: ChainComplex, gamma: DegreeMap) -> DegreeMap:
    """Turn a contracting homotopy into one with square zero.

    Requires d gamma + gamma d = -Id.  Returns h = -gamma d gamma, which
    satisfies d h + h d = -Id and h^2 = 0 (both asserted).  When gamma^2 = 0
    already, h = gamma.
    """
    if gamma.shift != -1:
        raise InputError("homotopy must have degree -1")
    bad = homotopy_defect(c, gamma).first_nonzero()
    if bad:
        raise InputError(f"d gamma + gamma d != -Id (degree {bad[0]})")
    h = gamma.compose(c.differential).compose(gamma).scaled(-1)
    if not homotopy_defect(c, h).is_zero():
        raise AssertionError("normalized homotopy fails d h + h d = -Id")
    if not h.compose(h).is_zero():
        raise AssertionError("normalized homotopy fails h^2 = 0")
    return h


def truncation_inclusion(c: ChainComplex) -> DegreeMap:
    """Inclusion of the canonical truncation into ``c`` (a chain map)."""
    t, inc = _truncate(c)
    return inc


def truncate(c: ChainComplex) -> ChainComplex:
    """Canonical truncation: keep degrees < -1, ker d in degree -1, drop the rest."""
    return _truncate(c)[0]


def _truncate(c: ChainComplex):
    basis = {}
    inc = {}
    blocks = {}
    for n in c.degrees:
        if n < -1:
            basis[n] = c.space.names(n)
            inc[n] = identity(c.dim(n))
    if c.dim(-1):
        ker = _cocycles(c, -1)
        names = []
        used = set(nm for d in c.degrees for nm in c.space.names(d))
        orig = c.space.names(-1)
        for j, v in enumerate(ker):
            nz = [i for i, x in enumerate(v) if x]
            if len(nz) == 1 and v[nz[0]] == 1:
                names.append(orig[nz[0]])
            else:
                nm = f"z_m1_{j}"
                while nm in used:
                    nm += "_"
                used.add(nm)
                names.append(nm)
        if ker:
            basis[-1] = tuple(names)
            inc[-1] = transpose(ker)
    space = GradedSpace(basis)
    for n in space.degrees:
        if n + 1 in space.basis:
            if n + 1 < -1:
                blocks[n] = c.d(n)
            else:
                # d: V^{-2} -> ker(d^{-1}): coordinates in the kernel basis
                cols = []
                kmat = inc[-1]
                for j in range(c.dim(n)):
                    col = [row[j] for row in c.d(n)]
                    x = solve(kmat, col, ncols=space.dim(-1))
                    assert x is not None
                    cols.append(x)
                blocks[n] = transpose(cols)
    tc = ChainComplex.build(space, blocks)
    return tc, DegreeMap(space, c.space, 0, inc)


def is_chain_map(f: DegreeMap, src: ChainComplex, tgt: ChainComplex) -> bool:
    return (tgt.differential.compose(f) - f.compose(src.differential)).is_zero()


def cone(f_blocks: Mapping[int, Matrix], src: ChainComplex, tgt: ChainComplex) -> ChainComplex:
    """Mapping cone of a chain map f: src -> tgt.

    Cone^n = src^{n+1} + tgt^n with d(x, y) = (-d x, f x + d y).
    """
    degrees = set()
    for n in src.degrees:
        degrees.add(n - 1)
    degrees.update(tgt.degrees)
    basis = {}
    for n in sorted(degrees):
        basis[n] = tuple(f"s:{nm}" for nm in src.space.names(n + 1)) + tuple(
            f"t:{nm}" for nm in tgt.space.names(n)
        )
    space = GradedSpace(basis)
    blocks = {}
    for n in space.degrees:
        a, b = src.dim(n + 1), tgt.dim(n)
        a1, b1 = src.dim(n + 2), tgt.dim(n + 1)
        if a1 + b1 == 0 or a + b == 0:
            continue
        m = zeros(a1 + b1, a + b)
        dsrc = src.d(n + 1)
        for i in range(a1):
            for j in range(a):
                m[i][j] = -dsrc[i][j]
        fb = f_blocks.get(n + 1)
        if fb is not None:
            for i in range(b1):
                for j in range(a):
                    m[a1 + i][j] = fb[i][j]
        dt = tgt.d(n)
        for i in range(b1):
            for j in range(b):
                m[a1 + i][a + j] = dt[i][j]
        blocks[n] = m
    return ChainComplex.build(space, blocks)
