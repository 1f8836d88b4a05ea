"""Free graded Lie algebras inside the tensor algebra, truncated by weight.

The free graded Lie algebra L(V) is realised as the subspace of T(V) fixed by
the Dynkin projector

    rho(v1 (x) ... (x) vn) = 1/n [v1, [v2, ..., [v_{n-1}, vn]...]],

with the Koszul-signed commutator [v, w] = v (x) w - (-1)^{|v||w|} w (x) v.
A Lie basis in each (weight, degree) block is the set of right-nested
brackets of the first words whose brackets are linearly independent, i.e.
the pivot columns of the projector matrix.

Every DG-Lie algebra handled by the package is presented as a free graded
Lie algebra on generators together with the differential of each generator
(:class:`DglaPresentation`).  Computations are exact up to a hard weight cap
W: components of weight > W are dropped and the result is flagged.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

from .errors import InputError, WeightCapError
from .linalg import ChainComplex, Echelon, GradedSpace, Matrix, transpose, zeros
from .tensor import Tensor, Word, concat, koszul, word_degree


# ---------------------------------------------------------------------------
# Generators, words, brackets


@dataclass(frozen=True)
class GeneratorSet:
    generators: tuple[tuple[str, int], ...]
    weight_cap: int = 4

    def __post_init__(self):
        gens = tuple((str(n), int(d)) for n, d in self.generators)
        names = [n for n, _ in gens]
        if len(set(names)) != len(names):
            dup = next(n for n in names if names.count(n) > 1)
            raise InputError(f"duplicate generator name {dup!r}")
        if int(self.weight_cap) < 1:
            raise InputError("weight cap must be >= 1")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "weight_cap", int(self.weight_cap))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.generators)

    @cached_property
    def degrees(self) -> dict[str, int]:
        return dict(self.generators)

    def __len__(self):
        return len(self.generators)

    def __contains__(self, name):
        return name in self.degrees


def bracket(x: Tensor, y: Tensor, degrees: Mapping[str, int], cap: int | None = None) -> Tensor:
    """Graded commutator [x, y] in T(V), extended bilinearly over words."""
    out: dict = {}
    trunc = x.truncated or y.truncated
    zero = Fraction(0)
    ydeg = [(v, b, len(v), word_degree(v, degrees)) for v, b in y.terms.items()]
    for u, a in x.terms.items():
        lu = len(u)
        du = word_degree(u, degrees)
        for v, b, lv, dv in ydeg:
            if cap is not None and lu + lv > cap:
                trunc = True
                continue
            c = a * b
            w1 = u + v
            w2 = v + u
            s1 = out.get(w1, zero) + c
            if s1:
                out[w1] = s1
            else:
                out.pop(w1, None)
            c2 = c if koszul(du, dv) == 1 else -c
            s2 = out.get(w2, zero) - c2
            if s2:
                out[w2] = s2
            else:
                out.pop(w2, None)
    return Tensor._raw(out, trunc)


def nested_bracket(letters: Sequence[str], degrees: Mapping[str, int]) -> Tensor:
    """[g1, [g2, [..., [g_{n-1}, g_n]...]]] expanded in T(V)."""
    if not letters:
        raise InputError("empty bracket word")
    acc = Tensor.letter(letters[-1])
    for g in reversed(letters[:-1]):
        acc = bracket(Tensor.letter(g), acc, degrees)
    return acc


def bracket_label(word: Sequence[str]) -> str:
    if len(word) == 1:
        return word[0]
    return "[" + word[0] + "," + bracket_label(word[1:]) + "]"


def dynkin_rho(x: Tensor, degrees: Mapping[str, int]) -> Tensor:
    """The Dynkin projector applied wordwise; weight-0 words map to zero."""
    parts = []
    cache: dict[Word, Tensor] = {}
    for w, c in x.terms.items():
        if not w:
            continue
        nb = cache.get(w)
        if nb is None:
            nb = nested_bracket(w, degrees)
            cache[w] = nb
        parts.append(nb * (c / len(w)))
    return Tensor.sum(parts)


def is_lie_element(x: Tensor, degrees: Mapping[str, int]) -> bool:
    return dynkin_rho(x, degrees) == x


def tensor_basis(gens: GeneratorSet, weight: int, degree: int) -> list[Word]:
    """Words of the given length and total degree, lexicographic by generator index."""
    if not 1 <= weight <= gens.weight_cap:
        raise WeightCapError(f"weight {weight} outside [1, {gens.weight_cap}]")
    return list(_words_by_degree(gens.generators, weight).get(degree, ()))


def _words_by_degree(generators, weight: int) -> dict[int, tuple[Word, ...]]:
    out: dict[int, list[Word]] = {}
    degmap = dict(generators)
    names = [n for n, _ in generators]
    for w in itertools.product(names, repeat=weight):
        out.setdefault(sum(degmap[a] for a in w), []).append(w)
    return {d: tuple(ws) for d, ws in out.items()}


@dataclass(frozen=True)
class LieBasisElement:
    word: Word
    element: Tensor
    weight: int
    degree: int

    @property
    def label(self) -> str:
        return bracket_label(self.word)


class FreeLieAlgebra:
    """Lazily computed Lie bases and coordinates for L(V), V = span(gens)."""

    def __init__(self, gens: GeneratorSet):
        self.gens = gens
        self.degrees = gens.degrees
        self.cap = gens.weight_cap
        self._words: dict[int, dict[int, tuple[Word, ...]]] = {}
        self._blocks: dict[tuple[int, int], tuple[tuple[LieBasisElement, ...], Echelon]] = {}

    def words(self, weight: int, degree: int) -> tuple[Word, ...]:
        if weight not in self._words:
            self._words[weight] = _words_by_degree(self.gens.generators, weight)
        return self._words[weight].get(degree, ())

    def block_degrees(self, weight: int) -> list[int]:
        self.words(weight, 0)
        return sorted(self._words[weight])

    def degree_range(self) -> list[int]:
        ds = set()
        for w in range(1, self.cap + 1):
            ds.update(self.block_degrees(w))
        return sorted(ds)

    def _block(self, weight: int, degree: int):
        key = (weight, degree)
        if key not in self._blocks:
            ech = Echelon()
            elems = []
            for w in self.words(weight, degree):
                nb = nested_bracket(w, self.degrees)
                if ech.add(nb.terms):
                    elems.append(LieBasisElement(w, nb, weight, degree))
            self._blocks[key] = (tuple(elems), ech)
        return self._blocks[key]

    def basis(self, weight: int, degree: int) -> tuple[LieBasisElement, ...]:
        if weight < 1 or weight > self.cap:
            return ()
        return self._block(weight, degree)[0]

    def dim(self, weight: int, degree: int) -> int:
        return len(self.basis(weight, degree))

    def coords(self, x: Tensor, weight: int, degree: int) -> list[Fraction]:
        """Coordinates of a Lie element of one (weight, degree) block."""
        _, ech = self._block(weight, degree)
        if not x:
            return [Fraction(0)] * ech.count
        c = ech.coordinates(x.terms)
        if c is None:
            raise InputError(
                f"element {x!r} is not in the Lie subspace of weight {weight}, degree {degree}"
            )
        return c

    def bracket(self, x: Tensor, y: Tensor) -> Tensor:
        return bracket(x, y, self.degrees, self.cap)

    def rho(self, x: Tensor) -> Tensor:
        return dynkin_rho(x, self.degrees)

    def is_lie(self, x: Tensor) -> bool:
        return self.rho(x) == x

    def nested(self, word: Sequence[str]) -> Tensor:
        return nested_bracket(word, self.degrees).capped(self.cap)

    def to_bracket_words(self, x: Tensor) -> list[tuple[Fraction, Word]]:
        """Express a Lie element as a combination of basis bracket words."""
        out = []
        for n, part in x.by_weight().items():
            for d in sorted(part.degrees(self.degrees)):
                sub = Tensor._raw(
                    {w: c for w, c in part.terms.items() if word_degree(w, self.degrees) == d}
                )
                for b, c in zip(self.basis(n, d), self.coords(sub, n, d)):
                    if c:
                        out.append((c, b.word))
        return out


def lie_basis(gens: GeneratorSet, weight: int) -> dict[int, list[Tensor]]:
    """Per degree, the Lie basis of L(V)_weight as rho-fixed tensors."""
    if not 1 <= weight <= gens.weight_cap:
        raise WeightCapError(f"weight {weight} outside [1, {gens.weight_cap}]")
    alg = FreeLieAlgebra(gens)
    out = {}
    for d in alg.block_degrees(weight):
        elems = alg.basis(weight, d)
        if elems:
            out[d] = [e.element for e in elems]
    return out


def lie_dims(gens: GeneratorSet) -> dict[int, dict[int, int]]:
    """``{weight: {degree: dim}}`` for weights 1..W (zero blocks omitted)."""
    alg = FreeLieAlgebra(gens)
    table = {}
    for w in range(1, gens.weight_cap + 1):
        row = {}
        for d in alg.block_degrees(w):
            n = alg.dim(w, d)
            if n:
                row[d] = n
        table[w] = row
    return table


# ---------------------------------------------------------------------------
# Derivations


class Derivation:
    """Degree-r derivation of T(V) determined by its values on generators.

    On words the graded Leibniz rule reads
        phi(g1...gn) = sum_i (-1)^{r(|g1|+...+|g_{i-1}|)} g1...phi(gi)...gn,
    and it restricts to a derivation of the free Lie algebra.
    """

    def __init__(self, degrees: Mapping[str, int], images: Mapping[str, Tensor], degree: int,
                 cap: int | None = None):
        self.degrees = dict(degrees)
        self.images = {k: v for k, v in images.items() if v}
        self.degree = degree
        self.cap = cap
        self._cache: dict[Word, Tensor] = {}

    def _word(self, w: Word) -> Tensor:
        hit = self._cache.get(w)
        if hit is not None:
            return hit
        out: dict = {}
        trunc = False
        prefix_deg = 0
        n = len(w)
        zero = Fraction(0)
        for i, g in enumerate(w):
            img = self.images.get(g)
            if img is not None:
                sign = -1 if (self.degree & 1) and (prefix_deg & 1) else 1
                pre, post = w[:i], w[i + 1:]
                trunc |= img.truncated
                for u, c in img.terms.items():
                    if self.cap is not None and n - 1 + len(u) > self.cap:
                        trunc = True
                        continue
                    nw = pre + u + post
                    v = out.get(nw, zero) + sign * c
                    if v:
                        out[nw] = v
                    else:
                        out.pop(nw, None)
            prefix_deg += self.degrees[g]
        res = Tensor._raw(out, trunc)
        self._cache[w] = res
        return res

    def __call__(self, x: Tensor) -> Tensor:
        parts = []
        for w, c in x.terms.items():
            parts.append(self._word(w) * c)
        res = Tensor.sum(parts)
        if x.truncated:
            res.truncated = True
        return res

    def on_bracket_word(self, letters: Sequence[str]) -> Tensor:
        """phi([x1,[x2,...,xn]]) via the Lie-word Leibniz expansion."""
        letters = tuple(letters)
        total = []
        prefix_deg = 0
        for i, g in enumerate(letters):
            img = self.images.get(g)
            if img is not None:
                sign = -1 if (self.degree & 1) and (prefix_deg & 1) else 1
                acc = None
                # assemble [x1,[...,[phi(xi),[...,xn]]]] from the right
                tail = letters[i + 1:]
                inner = nested_bracket(tail, self.degrees) if tail else None
                mid = img if inner is None else bracket(img, inner, self.degrees, self.cap)
                acc = mid
                for h in reversed(letters[:i]):
                    acc = bracket(Tensor.letter(h), acc, self.degrees, self.cap)
                total.append(acc * sign)
            prefix_deg += self.degrees[g]
        return Tensor.sum(total).capped(self.cap)

    def compose(self, other: Derivation) -> Callable[[Tensor], Tensor]:
        return lambda x: self(other(x))


def derivation_extend(base: Derivation | Mapping[str, Tensor] | None, a_degrees: Mapping[str, int],
                      g: Mapping[str, Tensor], v_degrees: Mapping[str, int], degree: int,
                      cap: int | None = None) -> Derivation:
    """Derivation of A u L(V) from a derivation of A and a map on V.

    ``base`` is the derivation on the A-generators (its values must only
    involve A-letters); ``g`` gives the values on the V-generators.
    """
    base_images = {}
    if base is not None:
        base_images = dict(base.images if isinstance(base, Derivation) else base)
    for a, img in base_images.items():
        if a not in a_degrees:
            raise InputError(f"base derivation defined on unknown generator {a!r}")
        stray = img.letters() - set(a_degrees)
        if stray:
            raise InputError(f"base derivation leaves A on {a!r}: letters {sorted(stray)}")
    overlap = set(a_degrees) & set(v_degrees)
    if overlap:
        raise InputError(f"A and V share generator names {sorted(overlap)}")
    degrees = {**a_degrees, **v_degrees}
    for v, img in g.items():
        if v not in v_degrees:
            raise InputError(f"map g defined on unknown generator {v!r}")
        for w in img.terms:
            if word_degree(w, degrees) != v_degrees[v] + degree:
                raise InputError(f"g({v}) is not of degree {v_degrees[v] + degree}")
    return Derivation(degrees, {**base_images, **g}, degree, cap)


# ---------------------------------------------------------------------------
# Presentations and morphisms


@dataclass(frozen=True, eq=False)
class DglaPresentation:
    """Free graded Lie algebra on ``generators`` with d given on generators.

    ``cofactors`` optionally records a decomposition of the generators into
    blocks, as for an iterated coproduct A u L(V) u ...
    """

    generators: GeneratorSet
    differential: Mapping[str, Tensor] = field(default_factory=dict)
    cofactors: tuple[tuple[str, ...], ...] = ()

    def __post_init__(self):
        degs = self.generators.degrees
        cap = self.generators.weight_cap
        diff = {}
        for g, img in self.differential.items():
            if g not in degs:
                raise InputError(f"differential given for unknown generator {g!r}")
            if not img:
                continue
            for w in img.terms:
                for a in w:
                    if a not in degs:
                        raise InputError(f"d({g}) uses unknown letter {a!r}")
                if len(w) > cap:
                    raise WeightCapError(
                        f"d({g}) has a term of weight {len(w)} above the cap {cap}",
                        witness={"generator": g, "weight": len(w)},
                    )
                if word_degree(w, degs) != degs[g] + 1:
                    raise InputError(
                        f"d({g}) must have degree {degs[g] + 1}, found a term of degree "
                        f"{word_degree(w, degs)}"
                    )
            if dynkin_rho(img, degs) != img:
                raise InputError(f"d({g}) is not a Lie element")
            diff[g] = img
        cof = tuple(tuple(c) for c in self.cofactors if c)
        seen = []
        for block in cof:
            for a in block:
                if a not in degs:
                    raise InputError(f"cofactor lists unknown generator {a!r}")
                seen.append(a)
        if len(seen) != len(set(seen)):
            raise InputError("cofactors overlap")
        if cof and set(seen) != set(degs):
            raise InputError("cofactors must cover all generators")
        object.__setattr__(self, "differential", diff)
        object.__setattr__(self, "cofactors", cof)

    @classmethod
    def free(cls, generators: Iterable[tuple[str, int]], weight_cap: int = 4,
             differential: Mapping[str, Tensor] | None = None, cofactors=()) -> DglaPresentation:
        return cls(GeneratorSet(tuple(generators), weight_cap), dict(differential or {}), cofactors)

    @classmethod
    def empty(cls, weight_cap: int = 4) -> DglaPresentation:
        return cls(GeneratorSet((), weight_cap))

    @property
    def names(self) -> tuple[str, ...]:
        return self.generators.names

    @property
    def degrees(self) -> dict[str, int]:
        return self.generators.degrees

    @property
    def cap(self) -> int:
        return self.generators.weight_cap

    @cached_property
    def algebra(self) -> FreeLieAlgebra:
        return FreeLieAlgebra(self.generators)

    @cached_property
    def derivation(self) -> Derivation:
        return Derivation(self.degrees, self.differential, 1, self.cap)

    def d(self, x: Tensor) -> Tensor:
        return self.derivation(x)

    def dgen(self, g: str) -> Tensor:
        return self.differential.get(g, Tensor.zero())

    def gen(self, name: str) -> Tensor:
        if name not in self.degrees:
            raise KeyError(name)
        return Tensor.letter(name)

    def bracket(self, x: Tensor, y: Tensor) -> Tensor:
        return bracket(x, y, self.degrees, self.cap)

    def element(self, terms: Iterable[tuple[object, Sequence[str]]]) -> Tensor:
        """Lie element from (coefficient, right-nested bracket word) pairs."""
        parts = []
        for c, w in terms:
            for a in w:
                if a not in self.degrees:
                    raise InputError(f"unknown generator {a!r} in bracket word")
            parts.append(nested_bracket(tuple(w), self.degrees) * Fraction(c))
        return Tensor.sum(parts).capped(self.cap)

    def with_cap(self, cap: int) -> DglaPresentation:
        return DglaPresentation(
            GeneratorSet(self.generators.generators, cap),
            {g: v.capped(cap) for g, v in self.differential.items()},
            self.cofactors,
        )

    def restrict(self, names: Sequence[str]) -> DglaPresentation:
        """Sub-presentation on ``names`` (their differentials must stay inside)."""
        keep = set(names)
        gens = tuple((n, d) for n, d in self.generators.generators if n in keep)
        diff = {}
        for g in names:
            img = self.dgen(g)
            if img.letters() - keep:
                raise InputError(f"d({g}) leaves the sub-presentation")
            diff[g] = img
        return DglaPresentation(GeneratorSet(gens, self.cap), diff)

    def same_as(self, other: DglaPresentation) -> bool:
        return (
            self.generators == other.generators
            and set(self.differential) == set(other.differential)
            and all(self.differential[g] == other.differential[g] for g in self.differential)
        )

    def __eq__(self, other):
        if not isinstance(other, DglaPresentation):
            return NotImplemented
        return self.same_as(other) and self.cofactors == other.cofactors

    def __hash__(self):
        return hash(self.generators)


@dataclass(frozen=True)
class CheckEntry:
    name: str
    passed: bool
    residue: Tensor
    truncated: bool = False


@dataclass(frozen=True)
class CheckReport:
    passed: bool
    entries: tuple[CheckEntry, ...]

    @property
    def failures(self) -> list[CheckEntry]:
        return [e for e in self.entries if not e.passed]


def differential_check(p: DglaPresentation) -> CheckReport:
    """d(d(g)) = 0 for every generator, up to the weight cap."""
    entries = []
    for g in p.names:
        img = p.dgen(g)
        if any(len(w) > p.cap for w in img.terms):
            raise WeightCapError(f"d({g}) exceeds the weight cap")
        dd = p.d(img)
        entries.append(CheckEntry(g, not dd, dd, dd.truncated))
    return CheckReport(all(e.passed for e in entries), tuple(entries))


def coproduct_with_renaming(p: DglaPresentation, q: DglaPresentation):
    """p u q together with the renaming applied to q's generators."""
    used = set(p.names)
    rename = {}
    for n in q.names:
        new = n
        k = 0
        while new in used:
            k += 1
            new = f"{n}_{k}"
        rename[n] = new
        used.add(new)
    cap = min(p.cap, q.cap)
    gens = p.generators.generators + tuple((rename[n], d) for n, d in q.generators.generators)
    diff = {g: v.capped(cap) for g, v in p.differential.items()}
    for g, v in q.differential.items():
        diff[rename[g]] = v.rename(rename).capped(cap)
    pc = p.cofactors or ((p.names,) if p.names else ())
    qc = q.cofactors or ((q.names,) if q.names else ())
    cof = pc + tuple(tuple(rename[a] for a in block) for block in qc)
    return DglaPresentation(GeneratorSet(gens, cap), diff, cof), rename


def coproduct(p: DglaPresentation, q: DglaPresentation) -> DglaPresentation:
    return coproduct_with_renaming(p, q)[0]


class DglaMorphism:
    """Morphism of free presentations determined by generator images.

    Evaluation on Lie elements uses the Dynkin-Specht-Wever formula
        F(v1 (x) ... (x) vn) = 1/n [f(v1), [f(v2), ..., f(vn)]...].
    """

    def __init__(self, source: DglaPresentation, target: DglaPresentation,
                 images: Mapping[str, Tensor], check: bool = True):
        self.source = source
        self.target = target
        imgs = {}
        for g, img in images.items():
            if g not in source.degrees:
                raise InputError(f"image given for unknown generator {g!r}")
            img = img.capped(target.cap)
            if check and img:
                for w in img.terms:
                    for a in w:
                        if a not in target.degrees:
                            raise InputError(f"image of {g} uses unknown letter {a!r}")
                    if word_degree(w, target.degrees) != source.degrees[g]:
                        raise InputError(
                            f"image of {g} has degree {word_degree(w, target.degrees)}, "
                            f"expected {source.degrees[g]}",
                            witness={"generator": g},
                        )
                if not target.algebra.is_lie(img):
                    raise InputError(f"image of {g} is not a Lie element")
            imgs[g] = img
        self.images = imgs
        self._nested: dict[Word, Tensor] = {}

    def image(self, g: str) -> Tensor:
        return self.images.get(g, Tensor.zero())

    def _nested_image(self, w: Word) -> Tensor:
        hit = self._nested.get(w)
        if hit is None:
            if len(w) == 1:
                hit = self.image(w[0])
            else:
                hit = self.target.bracket(self.image(w[0]), self._nested_image(w[1:]))
            self._nested[w] = hit
        return hit

    def __call__(self, x: Tensor) -> Tensor:
        parts = []
        for w, c in x.terms.items():
            if not w:
                continue
            parts.append(self._nested_image(w) * (c / len(w)))
        return Tensor.sum(parts)

    def apply_associative(self, x: Tensor) -> Tensor:
        """Extension as an associative algebra map T(V) -> T(U)."""
        parts = []
        cap = self.target.cap
        for w, c in x.terms.items():
            acc = Tensor.word(())
            for a in w:
                acc = concat(acc, self.image(a), cap)
            parts.append(acc * c)
        return Tensor.sum(parts)

    def chain_defects(self) -> dict[str, Tensor]:
        """d f(g) - f(d g) on every source generator (zero entries omitted)."""
        out = {}
        for g in self.source.names:
            r = self.target.d(self.image(g)) - self(self.source.dgen(g))
            if r:
                out[g] = r
        return out

    def is_chain_map(self) -> bool:
        return not self.chain_defects()

    def compose(self, other: DglaMorphism) -> DglaMorphism:
        """self o other."""
        return DglaMorphism(
            other.source, self.target, {g: self(other.image(g)) for g in other.source.names}
        )

    def agrees_with(self, other: DglaMorphism, names: Iterable[str] | None = None) -> bool:
        names = self.source.names if names is None else names
        return all(self.image(g) == other.image(g) for g in names)


def dsw_extend(source: DglaPresentation, target: DglaPresentation,
               f: Mapping[str, Tensor]) -> DglaMorphism:
    """The unique Lie morphism extending a degree-preserving map on generators."""
    return DglaMorphism(source, target, f)


def identity_morphism(p: DglaPresentation) -> DglaMorphism:
    return DglaMorphism(p, p, {g: Tensor.letter(g) for g in p.names})


def inclusion_morphism(sub: DglaPresentation, p: DglaPresentation,
                       mapping: Mapping[str, str] | None = None) -> DglaMorphism:
    mapping = mapping or {}
    return DglaMorphism(sub, p, {g: Tensor.letter(mapping.get(g, g)) for g in sub.names})


def dsw_evaluate(x: Tensor, images: Mapping[str, object], bracket_fn: Callable, zero) -> object:
    """DSW formula into an arbitrary graded Lie algebra given by ``bracket_fn``."""
    total = zero
    for w, c in x.terms.items():
        if not w:
            continue
        acc = images[w[-1]]
        for a in reversed(w[:-1]):
            acc = bracket_fn(images[a], acc)
        total = total + acc * (c / len(w))
    return total


# ---------------------------------------------------------------------------
# Realization as a complex


class Realization:
    """Degreewise basis of a truncated presentation and its differential.

    The basis in degree n is the concatenation over weights 1..W of the Lie
    bases of the (weight, n) blocks.  Since every d(g) has weight >= 1 the
    elements of weight > W span a DG-ideal, so dropping them yields a genuine
    complex; entries where that happened are recorded in ``clipped``.
    """

    def __init__(self, p: DglaPresentation):
        self.p = p
        self.alg = p.algebra
        self._basis: dict[int, tuple[LieBasisElement, ...]] = {}
        self._d: dict[int, Matrix] = {}
        self.clipped: set[tuple[int, int]] = set()

    def basis(self, n: int) -> tuple[LieBasisElement, ...]:
        if n not in self._basis:
            elems = []
            for w in range(1, self.p.cap + 1):
                elems.extend(self.alg.basis(w, n))
            self._basis[n] = tuple(elems)
        return self._basis[n]

    def dim(self, n: int) -> int:
        return len(self.basis(n))

    def labels(self, n: int) -> tuple[str, ...]:
        return tuple(b.label for b in self.basis(n))

    def degrees(self) -> list[int]:
        return [n for n in self.alg.degree_range() if self.dim(n)]

    def coords(self, x: Tensor, n: int) -> list[Fraction]:
        out: list[Fraction] = []
        parts = x.by_weight()
        for n_, part in parts.items():
            if part and part.degree(self.p.degrees) != n:
                raise InputError(f"element {x!r} is not homogeneous of degree {n}")
        for w in range(1, self.p.cap + 1):
            if not self.alg.basis(w, n):
                if parts.get(w):
                    raise InputError(f"element {x!r} is not a Lie element")
                continue
            out.extend(self.alg.coords(parts.get(w, Tensor.zero()), w, n))
        extra = [w for w in parts if w > self.p.cap or w < 1]
        if extra:
            raise InputError(f"element {x!r} has weight outside 1..{self.p.cap}")
        return out

    def element(self, n: int, vec: Sequence[Fraction]) -> Tensor:
        return Tensor.sum(b.element * c for b, c in zip(self.basis(n), vec) if c)

    def d_matrix(self, n: int) -> Matrix:
        """Matrix of d from degree n to n + 1 (rows: target basis)."""
        if n not in self._d:
            cols = []
            for j, b in enumerate(self.basis(n)):
                db = self.p.d(b.element)
                if db.truncated:
                    self.clipped.add((n, j))
                cols.append(self.coords(db, n + 1))
            if not cols or not self.dim(n + 1):
                self._d[n] = zeros(self.dim(n + 1), len(cols))
            else:
                self._d[n] = transpose(cols)
        return self._d[n]

    def complex(self, lo: int | None = None, hi: int | None = None) -> ChainComplex:
        """The realized complex on degrees [lo, hi] (default: full support)."""
        degs = self.degrees()
        if lo is None:
            lo = degs[0] if degs else 0
        if hi is None:
            hi = degs[-1] if degs else -1
        basis = {}
        for n in range(lo, hi + 1):
            basis[n] = tuple(f"{b.label}" for b in self.basis(n))
        space = GradedSpace(basis)
        blocks = {}
        for n in range(lo, hi):
            if self.dim(n) and self.dim(n + 1):
                blocks[n] = self.d_matrix(n)
        return ChainComplex.build(space, blocks)

    def weight_complex(self, weight: int) -> ChainComplex:
        """Weight-``weight`` part, for differentials that preserve weight."""
        alg = self.alg
        degs = alg.block_degrees(weight)
        space = GradedSpace({n: tuple(b.label for b in alg.basis(weight, n)) for n in degs})
        for g in self.p.names:
            if any(len(w) != 1 for w in self.p.dgen(g).terms):
                raise InputError("differential does not preserve weight")
        blocks = {}
        for n in space.degrees:
            if not space.dim(n + 1):
                continue
            cols = [alg.coords(self.p.d(b.element), weight, n + 1) for b in alg.basis(weight, n)]
            blocks[n] = transpose(cols)
        return ChainComplex.build(space, blocks)

    def bracket_coords(self, i: int, n: int, j: int, m: int) -> list[Fraction]:
        x = self.basis(n)[i].element
        y = self.basis(m)[j].element
        return self.coords(self.p.bracket(x, y), n + m)

    def bracket_table(self, lo: int, hi: int) -> dict:
        """Structure constants [b_i, b_j] for basis elements with degrees in [lo, hi]."""
        table = {}
        for n in range(lo, hi + 1):
            for m in range(lo, hi + 1):
                if not (lo <= n + m <= hi):
                    continue
                for i in range(self.dim(n)):
                    for j in range(self.dim(m)):
                        c = self.bracket_coords(i, n, j, m)
                        if any(c):
                            table[(n, i, m, j)] = c
        return table

    def map_matrix(self, f: DglaMorphism, target: Realization, n: int) -> Matrix:
        """Matrix in degree n of a morphism between realized presentations."""
        cols = [target.coords(f(b.element), n) for b in self.basis(n)]
        if not cols:
            return zeros(target.dim(n), 0)
        return transpose(cols) if target.dim(n) else []


def realize(p: DglaPresentation, window: tuple[int, int]):
    """Realized complex of ``p`` on the degree window plus its bracket table."""
    r = Realization(p)
    lo, hi = window
    cx = r.complex(lo, hi)
    return cx, r.bracket_table(lo, hi), r
