"""Maurer-Cartan elements of L (x) m for m the maximal ideal of K[s]/(s^k).

A degree-1 element x = sum_j s^j x_j solves dx + 1/2 [x, x] = 0 iff for
every order m = 1..k-1

    d x_m = -1/2 * sum_{i+j=m} [x_i, x_j],

a system that is triangular in the s-order: the right side only involves
lower orders.  Each order is solved exactly; the solvability conditions are
polynomial equations in the free parameters of lower orders, which are
handed to sympy.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import sympy

from .errors import ExtensionError, InputError
from .freelie import DglaMorphism, DglaPresentation, Realization, nested_bracket
from .linalg import cohomology, matvec, row_reduce, solve
from .model import ELEMENTARY, certify_extension, inclusion
from .tensor import Tensor


@dataclass(frozen=True)
class NilpotentRing:
    """K[s]/(s^order); the maximal ideal (s) satisfies m^order = 0."""

    order: int

    def __post_init__(self):
        if int(self.order) < 2:
            raise InputError("nilpotent ring needs order >= 2")

    @property
    def powers(self) -> range:
        return range(1, self.order)


class TensorDgla:
    """L (x) m, with basis {b s^j}: bracket and d extended s-linearly."""

    def __init__(self, base: DglaPresentation, ring: NilpotentRing):
        self.base = base
        self.ring = ring
        self.real = Realization(base)
        self.dim1 = self.real.dim(1)
        self.dim2 = self.real.dim(2)
        self.labels1 = self.real.labels(1)
        self.labels2 = self.real.labels(2)
        self.d1 = self.real.d_matrix(1) if self.dim1 and self.dim2 else []
        # structure constants [b_i, b_j] for degree-1 basis elements
        self.table = {}
        for i in range(self.dim1):
            for j in range(self.dim1):
                c = self.real.bracket_coords(i, 1, j, 1)
                if any(c):
                    self.table[(i, j)] = c

    def d(self, x: dict) -> dict:
        """d of a degree-1 element {order: coordinates}."""
        out = {}
        for j, v in x.items():
            out[j] = [sum((self.d1[r][c] * v[c] for c in range(self.dim1)), 0) for r in range(self.dim2)]
        return out

    def bracket(self, x: dict, y: dict) -> dict:
        """[x, y] for degree-1 elements; orders >= ring order vanish."""
        out: dict = {}
        for i, u in x.items():
            for j, v in y.items():
                m = i + j
                if m >= self.ring.order:
                    continue
                acc = out.setdefault(m, [0] * self.dim2)
                for (a, b), c in self.table.items():
                    coeff = u[a] * v[b]
                    if coeff != 0:
                        for r in range(self.dim2):
                            if c[r]:
                                acc[r] = acc[r] + c[r] * coeff
        return out

    def mc_residue(self, x: dict) -> dict:
        """dx + 1/2 [x, x] as {order: coordinates} (zero orders omitted)."""
        dx = self.d(x)
        br = self.bracket(x, x)
        out = {}
        for m in self.ring.powers:
            v = [sympy.nsimplify(dx.get(m, [0] * self.dim2)[r] + sympy.Rational(1, 2) * br.get(m, [0] * self.dim2)[r])
                 for r in range(self.dim2)]
            v = [sympy.expand(e) for e in v]
            if any(e != 0 for e in v):
                out[m] = v
        return out

    def is_mc(self, x: dict) -> bool:
        return not self.mc_residue(x)


@dataclass
class MCSolutionSet:
    ring: NilpotentRing
    labels: tuple[str, ...]
    params: list
    general: dict  # order -> list of sympy expressions in params
    constraints: list
    branches: list  # list of dicts param -> value/expression

    def elements(self) -> list[dict]:
        """The general element on every solution branch."""
        out = []
        for br in self.branches:
            out.append(
                {m: [sympy.simplify(e.subs(br)) for e in v] for m, v in self.general.items()}
            )
        return out

    def projection(self, order: int) -> list[dict]:
        """Images in L (x) (s)/(s^order): keep s-orders below ``order``."""
        return [{m: v for m, v in el.items() if m < order} for el in self.elements()]

    def free_parameters(self) -> list:
        """Parameters left undetermined on each branch."""
        out = []
        for el in self.elements():
            syms = set()
            for v in el.values():
                for e in v:
                    syms |= e.free_symbols
            out.append(sorted(syms, key=str))
        return out

    def describe(self) -> list[str]:
        lines = []
        for el in self.elements():
            terms = []
            for m in sorted(el):
                for lab, e in zip(self.labels, el[m]):
                    if e != 0:
                        terms.append(f"({e})*s^{m}*{lab}")
            lines.append(" + ".join(terms) if terms else "0")
        return lines


def mc_elements(L: TensorDgla) -> MCSolutionSet:
    """All degree-1 solutions of dx + 1/2[x,x] = 0 in L (x) m."""
    n1, n2 = L.dim1, L.dim2
    # transformation T with T * D in reduced form: reduce [D | I]
    if n2:
        aug = [list(L.d1[r]) + [Fraction(int(r == c)) for c in range(n2)] for r in range(n2)] if n1 else [
            [Fraction(int(r == c)) for c in range(n2)] for r in range(n2)
        ]
        rr = row_reduce(aug, n1 + n2)
        pivots = [p for p in rr.pivot_columns if p < n1]
        rank = len(pivots)
        tmat = [row[n1:] for row in rr.rref]
        rref_d = [row[:n1] for row in rr.rref]
    else:
        pivots, rank, tmat, rref_d = [], 0, [], []
    free_cols = [c for c in range(n1) if c not in pivots]
    params, general, constraints = [], {}, []
    for m in L.ring.powers:
        br = L.bracket(general, general) if general else {}
        rhs = [-sympy.Rational(1, 2) * br.get(m, [0] * n2)[r] for r in range(n2)]
        t_rhs = [sympy.expand(sum((sympy.Rational(tmat[i][r].numerator, tmat[i][r].denominator) * rhs[r]
                                   for r in range(n2)), 0)) for i in range(n2)]
        for i in range(rank, n2):
            if t_rhs[i] != 0:
                constraints.append(t_rhs[i])
        x = [sympy.Integer(0)] * n1
        new = []
        for c in free_cols:
            a = sympy.Symbol(f"a{m}_{c}")
            new.append(a)
            x[c] = a
        for i, p in enumerate(pivots):
            val = t_rhs[i]
            for c in free_cols:
                coef = rref_d[i][c]
                if coef:
                    val -= sympy.Rational(coef.numerator, coef.denominator) * x[c]
            x[p] = sympy.expand(val)
        params.extend(new)
        general[m] = x
    if constraints:
        branches = sympy.solve(constraints, params, dict=True)
    else:
        branches = [{}]
    return MCSolutionSet(L.ring, tuple(L.labels1), params, general, constraints, branches)


# ---------------------------------------------------------------------------
# The obstruction demo


def free_mc_algebra(cap: int = 3, scale=Fraction(-1, 2), name: str = "t") -> DglaPresentation:
    """L<t> with t of degree 1 and dt = scale [t, t]."""
    br = nested_bracket((name, name), {name: 1})
    diff = {name: br * Fraction(scale)} if scale else {}
    return DglaPresentation.free([(name, 1)], cap, diff)


def rescaling_check(lam: Fraction, cap: int = 3) -> bool:
    """t' = -2 lam t turns dt = lam [t,t] into dt' = -1/2 [t', t']."""
    lam = Fraction(lam)
    if not lam:
        raise InputError("rescaling needs lam != 0")
    src = free_mc_algebra(cap, Fraction(-1, 2), "u")
    tgt = free_mc_algebra(cap, lam, "t")
    forward = DglaMorphism(src, tgt, {"u": Tensor.letter("t") * (-2 * lam)})
    backward = DglaMorphism(tgt, src, {"t": Tensor.letter("u") * (-1 / (2 * lam))})
    round_trip = backward.compose(forward).image("u") == Tensor.letter("u")
    return forward.is_chain_map() and backward.is_chain_map() and round_trip


@dataclass
class ObstructionReport:
    mc_small: MCSolutionSet
    mc_large: MCSolutionSet
    x_is_mc: bool
    large_first_order: list
    lift_exists: bool
    bracket_in_cohomology: list
    bracket_nonzero: bool
    mc_algebra_acyclic: bool
    mc_algebra_semifree: bool
    rescaling: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return (
            self.x_is_mc
            and all(all(e == 0 for e in v) for el in self.large_first_order for v in el.values())
            and not self.lift_exists
            and self.bracket_nonzero
            and self.mc_algebra_acyclic
            and not self.mc_algebra_semifree
            and all(self.rescaling.values())
        )

    def items(self) -> list[tuple[str, bool, str]]:
        small = "; ".join(self.mc_small.describe())
        large = "; ".join(self.mc_large.describe())
        first = all(all(e == 0 for e in v) for el in self.large_first_order for v in el.values())
        return [
            ("(i) x = s t is Maurer-Cartan over K[s]/(s^2)", self.x_is_mc, f"MC = {{{small}}}"),
            ("(ii) MC over K[s]/(s^3) projects to 0 at first order", first, f"MC = {{{large}}}"),
            ("(iii) no lift of s t exists, so L<t> with dt = -1/2[t,t] fails the lifting test",
             not self.lift_exists and not self.mc_algebra_semifree,
             f"acyclic: {self.mc_algebra_acyclic}, elementary semifree over 0: {self.mc_algebra_semifree}"),
            ("(iv) [t,t] != 0 in H^2 of L<t> with d = 0", self.bracket_nonzero,
             f"class of [t,t]: {self.bracket_in_cohomology}"),
            ("rescaling t' = -2 lam t", all(self.rescaling.values()),
             ", ".join(f"lam={k}: {v}" for k, v in self.rescaling.items())),
        ]


def obstruction_demo() -> ObstructionReport:
    """Machine-checked version of the non-cofibrancy argument for L<t>."""
    trivial = free_mc_algebra(3, 0)
    small = TensorDgla(trivial, NilpotentRing(2))
    large = TensorDgla(trivial, NilpotentRing(3))
    mc_s = mc_elements(small)
    mc_l = mc_elements(large)
    x = {1: [sympy.Integer(1)]}
    x_is_mc = small.is_mc(x)
    first = mc_l.projection(2)
    # a lift of x through MC(large) -> MC(small) needs a branch whose first
    # order coefficient can equal 1
    lift = False
    for el in first:
        eq = el.get(1, [0])[0] - 1
        syms = sorted(sympy.sympify(eq).free_symbols, key=str)
        if sympy.sympify(eq) == 0 or (syms and sympy.solve(eq, syms, dict=True)):
            lift = True
    # induced bracket on H^1 x H^1 -> H^2 for d = 0
    real = Realization(trivial)
    tt = real.bracket_coords(0, 1, 0, 1)
    cocycle = not any(matvec(real.d_matrix(2), tt)) if real.dim(3) else True
    exact = solve(real.d_matrix(1), tt, ncols=real.dim(1)) is not None
    nonzero = any(tt) and cocycle and not exact
    mc_alg = free_mc_algebra(3)
    macx = Realization(mc_alg).complex(0, 4)
    acyclic = all(g.dim == 0 for g in cohomology(macx).values())
    try:
        certify_extension(inclusion(DglaPresentation.empty(3), mc_alg), ELEMENTARY)
        semifree = True
    except ExtensionError:
        semifree = False
    resc = {str(lam): rescaling_check(lam) for lam in (Fraction(1), Fraction(-3, 2), Fraction(1, 5))}
    return ObstructionReport(mc_s, mc_l, x_is_mc, first, lift, [str(c) for c in tt], bool(nonzero),
                             acyclic, semifree, resc)
