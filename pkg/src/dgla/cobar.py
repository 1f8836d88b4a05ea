"""Cocommutative conilpotent coalgebras and their cobar DG-Lie algebras.

The cobar algebra of (C, Delta) is the free graded Lie algebra on the shifted
space sC, where s e has degree |e| + 1, with

    d(s x) = 1/2 * sum_i (-1)^{|x_i|} [s x_i, s x_i']    for Delta x = sum_i x_i (x) x_i'.

For cocommutative Delta this equals the plain tensor sum_i (-1)^{|x_i|} s x_i (x) s x_i';
both are computed and compared.  The conilpotency filtration ker Delta^n
orders the generators so that each level only differentiates into lower
levels, which is what makes the cobar algebra semifree.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .contraction import substitute
from .errors import ExtensionError, InputError, VerificationError
from .freelie import (
    DglaMorphism,
    DglaPresentation,
    GeneratorSet,
    bracket,
    differential_check,
    dynkin_rho,
)
from .linalg import (
    Echelon,
    GradedSpace,
    dense_to_sparse,
    extend_basis,
    inverse,
    kernel,
    parse_scalar,
    transpose,
)
from .model import COMPOSITE, ExtensionCertificate, certify_extension, inclusion
from .tensor import Tensor, Word, koszul, word_degree


@dataclass(frozen=True)
class CoalgebraData:
    basis: GradedSpace
    coproduct: Mapping[str, tuple[tuple[Fraction, str, str], ...]]

    def __post_init__(self):
        names = {nm for nm, _ in self.basis.pairs()}
        clean = {}
        for x, terms in self.coproduct.items():
            if x not in names:
                raise InputError(f"coproduct given for unknown basis element {x!r}")
            rows = []
            for c, left, right in terms:
                for nm in (left, right):
                    if nm not in names:
                        raise InputError(f"coproduct of {x!r} uses unknown basis element {nm!r}")
                c = parse_scalar(c) if isinstance(c, str) else Fraction(c)
                dl, dr = self.basis.degree_of(left), self.basis.degree_of(right)
                if dl + dr != self.basis.degree_of(x):
                    raise InputError(
                        f"coproduct of {x!r} has a term {left}(x){right} of degree {dl + dr}"
                    )
                if c:
                    rows.append((c, left, right))
            if rows:
                clean[x] = tuple(rows)
        object.__setattr__(self, "coproduct", clean)

    @classmethod
    def build(cls, generators: Sequence[tuple[str, int]], coproduct) -> CoalgebraData:
        return cls(GradedSpace.from_pairs(generators), coproduct)

    @property
    def degrees(self) -> dict[str, int]:
        return dict(self.basis.pairs())

    def delta(self, name: str) -> Tensor:
        out: dict = {}
        for c, a, b in self.coproduct.get(name, ()):
            out[(a, b)] = out.get((a, b), Fraction(0)) + c
        return Tensor(out)

    def delta_at(self, x: Tensor, position: int) -> Tensor:
        """Apply Delta to the letter at ``position`` of every word (no signs: |Delta| = 0)."""
        parts = []
        for w, c in x.terms.items():
            d = self.delta(w[position])
            pre, post = w[:position], w[position + 1:]
            parts.append(Tensor._raw({pre + u + post: c * e for u, e in d.terms.items()}))
        return Tensor.sum(parts)


def twist(x: Tensor, degrees: Mapping[str, int]) -> Tensor:
    """tw(a (x) b) = (-1)^{|a||b|} b (x) a on two-letter words."""
    out = {}
    for (a, b), c in x.terms.items():
        out[(b, a)] = out.get((b, a), Fraction(0)) + c * koszul(degrees[a], degrees[b])
    return Tensor(out)


def iterated_coproduct(c: CoalgebraData, x, n: int) -> Tensor:
    """Delta^0 = Id and Delta^n = (Id (x) Delta^{n-1}) Delta, landing in C^{(x) n+1}."""
    if n < 0:
        raise InputError("iterated coproduct needs n >= 0")
    t = Tensor.letter(x) if isinstance(x, str) else x
    for k in range(n):
        # after k steps words have k+1 letters; expand the last one
        t = c.delta_at(t, k)
    return t


@dataclass(frozen=True)
class AxiomCheck:
    name: str
    passed: bool
    witness: str | None = None
    residue: Tensor | None = None


@dataclass(frozen=True)
class CoalgebraReport:
    passed: bool
    checks: tuple[AxiomCheck, ...]

    def check(self, name: str) -> AxiomCheck:
        return next(c for c in self.checks if c.name == name)


def _kernel_by_degree(c: CoalgebraData, n: int) -> dict[int, list[list[Fraction]]]:
    """Basis of ker Delta^n in each degree (coordinates on the basis of C)."""
    out = {}
    for deg in c.basis.degrees:
        names = c.basis.names(deg)
        images = [iterated_coproduct(c, nm, n) for nm in names]
        words = sorted({w for t in images for w in t.terms})
        if not words:
            out[deg] = [[Fraction(int(i == j)) for i in range(len(names))] for j in range(len(names))]
            continue
        index = {w: i for i, w in enumerate(words)}
        mat = [[Fraction(0)] * len(names) for _ in words]
        for j, t in enumerate(images):
            for w, v in t.terms.items():
                mat[index[w]][j] = v
        out[deg] = kernel(mat, ncols=len(names))
    return out


def validate_coalgebra(c: CoalgebraData) -> CoalgebraReport:
    degs = c.degrees
    checks = []
    bad = None
    for deg in c.basis.degrees:
        for x in c.basis.names(deg):
            d = c.delta(x)
            lhs = c.delta_at(d, 0)
            rhs = c.delta_at(d, 1)
            if lhs != rhs:
                bad = (x, lhs - rhs)
                break
        if bad:
            break
    checks.append(AxiomCheck("coassociativity", bad is None, bad and bad[0], bad and bad[1]))
    bad = None
    for x, _ in c.basis.pairs():
        d = c.delta(x)
        tw = twist(d, degs)
        if tw != d:
            bad = (x, tw - d)
            break
    checks.append(AxiomCheck("cocommutativity", bad is None, bad and bad[0], bad and bad[1]))
    total = c.basis.total_dim
    conil = True
    witness = None
    prev = -1
    n = 1
    while True:
        ker = _kernel_by_degree(c, n)
        size = sum(len(v) for v in ker.values())
        if size == total:
            break
        if size == prev or n > total + 1:
            conil = False
            for deg, v in ker.items():
                if len(v) < c.basis.dim(deg):
                    witness = f"degree {deg}"
                    break
            break
        prev = size
        n += 1
    checks.append(AxiomCheck("local conilpotency", conil, witness))
    return CoalgebraReport(all(ch.passed for ch in checks), tuple(checks))


def require_valid(c: CoalgebraData) -> None:
    rep = validate_coalgebra(c)
    if not rep.passed:
        bad = next(ch for ch in rep.checks if not ch.passed)
        raise InputError(
            f"coalgebra fails {bad.name}" + (f" at {bad.witness}" if bad.witness else ""),
            witness={"axiom": bad.name, "element": bad.witness},
        )


# ---------------------------------------------------------------------------
# Conilpotency filtration


@dataclass(frozen=True)
class ConilpotencyFiltration:
    """ker Delta^n for n = 0..N with quotient representatives.

    ``kernels[n][deg]`` is a basis of ker Delta^n in degree ``deg`` that
    extends the basis of ker Delta^{n-1}; ``quotients[n][deg]`` are the added
    vectors, representing A^n = ker Delta^n / ker Delta^{n-1}.
    """

    coalgebra: CoalgebraData
    length: int
    kernels: tuple[dict, ...]
    quotients: tuple[dict, ...]
    lemma_checks: tuple[bool, ...]


def _element(c: CoalgebraData, deg: int, vec: Sequence[Fraction]) -> Tensor:
    return Tensor({(nm,): x for nm, x in zip(c.basis.names(deg), vec)})


def _in_kernel_square(c: CoalgebraData, vec_elem: Tensor, ker: dict) -> bool:
    """Delta(v) in K (x) K where K = span of the vectors ``ker``."""
    d = Tensor.sum(c.delta(w[0]) * x for w, x in vec_elem.terms.items())
    if not d:
        return True
    # adapted coordinates: complete K to a basis of each degree
    adapted = {}
    for deg in c.basis.degrees:
        n = c.basis.dim(deg)
        kb = [list(v) for v in ker.get(deg, [])]
        unit = [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
        full = kb + extend_basis(kb, unit)
        adapted[deg] = (len(kb), inverse(transpose(full)))
    names_idx = {nm: c.basis.index(nm) for nm, _ in c.basis.pairs()}
    # coefficient of adapted (i, j) = sum over words of q_left[i][a] q_right[j][b] coeff
    coeffs: dict = {}
    for (a, b), x in d.terms.items():
        da, ia = names_idx[a]
        db, ib = names_idx[b]
        ka, qa = adapted[da]
        kb_, qb = adapted[db]
        for i in range(len(qa)):
            if not qa[i][ia]:
                continue
            for j in range(len(qb)):
                if not qb[j][ib]:
                    continue
                key = (da, i, db, j)
                coeffs[key] = coeffs.get(key, Fraction(0)) + x * qa[i][ia] * qb[j][ib]
    for (da, i, db, j), x in coeffs.items():
        if x and (i >= adapted[da][0] or j >= adapted[db][0]):
            return False
    return True


def conilpotency_filtration(c: CoalgebraData) -> ConilpotencyFiltration:
    rep = validate_coalgebra(c)
    conil = rep.check("local conilpotency")
    if not conil.passed:
        raise InputError(f"coalgebra is not locally conilpotent ({conil.witness})")
    kernels = [{deg: [] for deg in c.basis.degrees}]
    quotients = [{deg: [] for deg in c.basis.degrees}]
    lemma = [True]
    total = c.basis.total_dim
    n = 0
    while sum(len(v) for v in kernels[-1].values()) < total:
        n += 1
        ker = _kernel_by_degree(c, n)
        prev = kernels[-1]
        level, quo = {}, {}
        for deg in c.basis.degrees:
            base = [list(v) for v in prev[deg]]
            added = extend_basis(base, ker[deg])
            level[deg] = base + added
            quo[deg] = added
        # Delta(ker Delta^n) lies in ker Delta^{n-1} (x) ker Delta^{n-1}
        ok = all(
            _in_kernel_square(c, _element(c, deg, v), prev)
            for deg in c.basis.degrees
            for v in level[deg]
        )
        if not ok:
            raise VerificationError(f"coproduct of ker Delta^{n} leaves ker Delta^{n - 1} (x) ker Delta^{n - 1}")
        kernels.append(level)
        quotients.append(quo)
        lemma.append(ok)
    return ConilpotencyFiltration(c, n, tuple(kernels), tuple(quotients), tuple(lemma))


# ---------------------------------------------------------------------------
# Cobar construction


def suspended(name: str) -> str:
    return "s" + name


def cobar_tensor_differential(c: CoalgebraData, x: str) -> Tensor:
    """sum_i (-1)^{|x_i|} s x_i (x) s x_i' (no symmetrization)."""
    degs = c.degrees
    out = {}
    for coef, a, b in c.coproduct.get(x, ()):
        key = (suspended(a), suspended(b))
        out[key] = out.get(key, Fraction(0)) + coef * (-1 if degs[a] & 1 else 1)
    return Tensor(out)


def cobar_bracket_differential(c: CoalgebraData, x: str) -> Tensor:
    """1/2 sum_i (-1)^{|x_i|} [s x_i, s x_i']."""
    degs = c.degrees
    sdeg = {suspended(nm): d + 1 for nm, d in degs.items()}
    parts = []
    for coef, a, b in c.coproduct.get(x, ()):
        br = bracket(Tensor.letter(suspended(a)), Tensor.letter(suspended(b)), sdeg)
        parts.append(br * (coef * (-1 if degs[a] & 1 else 1) / 2))
    return Tensor.sum(parts)


def cobar_construct(c: CoalgebraData, cap: int = 4) -> DglaPresentation:
    require_valid(c)
    gens = tuple((suspended(nm), d + 1) for nm, d in c.basis.pairs())
    diff = {}
    for nm, _ in c.basis.pairs():
        dv = cobar_bracket_differential(c, nm)
        if dv != cobar_tensor_differential(c, nm):
            raise AssertionError("bracket and tensor forms of the cobar differential differ")
        if dv:
            diff[suspended(nm)] = dv.capped(cap)
    p = DglaPresentation(GeneratorSet(gens, cap), diff)
    rep = differential_check(p)
    if not rep.passed:
        bad = rep.failures[0]
        raise VerificationError(f"cobar differential fails d^2 = 0 on {bad.name}")
    return p


@dataclass(frozen=True)
class SemifreeCertificate:
    certificate: ExtensionCertificate
    presentation: DglaPresentation  # cobar algebra on filtration-adapted generators
    levels: dict  # generator -> filtration level
    iso: DglaMorphism  # adapted presentation -> cobar_construct output
    filtration: ConilpotencyFiltration

    @property
    def stages(self) -> tuple[ExtensionCertificate, ...]:
        return self.certificate.stages


def semifree_certificate(c: CoalgebraData, cap: int = 4) -> SemifreeCertificate:
    """Stage the cobar algebra by conilpotency level and certify each stage."""
    cobar = cobar_construct(c, cap)
    filt = conilpotency_filtration(c)
    gens, levels, images, blocks = [], {}, {}, []
    taken = set(cobar.names)
    # new generator for each quotient representative
    by_degree_vectors: dict[int, list] = {d: [] for d in c.basis.degrees}
    by_degree_names: dict[int, list] = {d: [] for d in c.basis.degrees}
    for n in range(1, filt.length + 1):
        block = []
        for deg in c.basis.degrees:
            for j, vec in enumerate(filt.quotients[n][deg]):
                nz = [k for k, x in enumerate(vec) if x]
                if len(nz) == 1 and vec[nz[0]] == 1:
                    nm = suspended(c.basis.names(deg)[nz[0]])
                else:
                    nm = f"s_A{n}_{'m' + str(-deg) if deg < 0 else deg}_{j}"
                    while nm in taken:
                        nm += "_"
                taken.add(nm)
                gens.append((nm, deg + 1))
                levels[nm] = n
                block.append(nm)
                images[nm] = Tensor({(suspended(a),): x for a, x in zip(c.basis.names(deg), vec)})
                by_degree_vectors[deg].append(vec)
                by_degree_names[deg].append(nm)
        blocks.append(tuple(block))
    # rewrite d on the new generators: old letter s e_k = sum_j Q[j][k] new_j
    back = {}
    for deg in c.basis.degrees:
        q = inverse(transpose(by_degree_vectors[deg]))
        for k, old in enumerate(c.basis.names(deg)):
            back[suspended(old)] = Tensor(
                {(by_degree_names[deg][j],): q[j][k] for j in range(len(q))}
            )
    diff = {}
    for nm, img in images.items():
        dv = cobar.d(img)
        rewritten = substitute(dv, back, cap)
        if rewritten:
            diff[nm] = rewritten
    pres = DglaPresentation(GeneratorSet(tuple(gens), cap), diff, tuple(b for b in blocks if b))
    degs = pres.degrees
    for nm, dv in pres.differential.items():
        n = levels[nm]
        lower = {g for g, lv in levels.items() if lv < n}
        stray = dv.letters() - lower
        if stray:
            raise ExtensionError(
                f"d({nm}) uses generators of level >= {n}: {sorted(stray)}",
                witness={"generator": nm, "letters": sorted(stray)},
            )
        top = {g for g, lv in levels.items() if lv == n - 1}
        lead = Tensor._raw({w: x for w, x in dv.terms.items() if all(a in top for a in w)})
        if lead and (lead.weights() != {2} or dynkin_rho(lead, degs) != lead):
            raise ExtensionError(
                f"leading part of d({nm}) is not a weight-2 bracket of level {n - 1}",
                witness={"generator": nm},
            )
    iso = DglaMorphism(pres, cobar, images)
    if not iso.is_chain_map():
        raise AssertionError("filtration-adapted cobar presentation is not isomorphic")
    cert = certify_extension(inclusion(DglaPresentation.empty(cap), pres), COMPOSITE)
    return SemifreeCertificate(cert, pres, levels, iso, filt)
