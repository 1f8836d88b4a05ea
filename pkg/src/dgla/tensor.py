"""Sparse elements of a tensor algebra T(V) on named letters.

A :class:`Tensor` maps words (tuples of letter names) to nonzero Fractions.
Letter degrees are not stored on the element; operations that need Koszul
signs take a ``degrees`` mapping.  Elements are treated as immutable.

The ``truncated`` flag records that some component of weight above a cap
was dropped while the element was computed.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Word = tuple[str, ...]

_ZERO = Fraction(0)


class Tensor:
    __slots__ = ("terms", "truncated")

    def __init__(self, terms: Mapping[Word, object] | None = None, truncated: bool = False):
        clean = {}
        if terms:
            for w, c in terms.items():
                if c:
                    clean[tuple(w)] = Fraction(c)
        self.terms: dict[Word, Fraction] = clean
        self.truncated = truncated

    @classmethod
    def _raw(cls, terms: dict, truncated: bool = False) -> Tensor:
        t = cls.__new__(cls)
        t.terms = terms
        t.truncated = truncated
        return t

    @classmethod
    def letter(cls, name: str, coeff=1) -> Tensor:
        return cls({(name,): coeff})

    @classmethod
    def word(cls, letters: Sequence[str], coeff=1) -> Tensor:
        return cls({tuple(letters): coeff})

    @classmethod
    def zero(cls) -> Tensor:
        return cls._raw({})

    @classmethod
    def sum(cls, items: Iterable[Tensor]) -> Tensor:
        out: dict = {}
        trunc = False
        for t in items:
            trunc |= t.truncated
            for w, c in t.terms.items():
                v = out.get(w, _ZERO) + c
                if v:
                    out[w] = v
                else:
                    out.pop(w, None)
        return cls._raw(out, trunc)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: Tensor) -> Tensor:
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = out.get(w, _ZERO) + c
            if v:
                out[w] = v
            else:
                del out[w]
        return Tensor._raw(out, self.truncated or other.truncated)

    def __sub__(self, other: Tensor) -> Tensor:
        return self + (-other)

    def __neg__(self) -> Tensor:
        return Tensor._raw({w: -c for w, c in self.terms.items()}, self.truncated)

    def __mul__(self, scalar) -> Tensor:
        s = Fraction(scalar)
        if not s:
            return Tensor._raw({}, self.truncated)
        return Tensor._raw({w: c * s for w, c in self.terms.items()}, self.truncated)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, Tensor):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def coeff(self, word: Sequence[str]) -> Fraction:
        return self.terms.get(tuple(word), _ZERO)

    # -- structure ----------------------------------------------------------

    def weights(self) -> set[int]:
        return {len(w) for w in self.terms}

    def letters(self) -> set[str]:
        return {a for w in self.terms for a in w}

    def weight_part(self, n: int) -> Tensor:
        return Tensor._raw({w: c for w, c in self.terms.items() if len(w) == n})

    def by_weight(self) -> dict[int, Tensor]:
        out: dict[int, dict] = {}
        for w, c in self.terms.items():
            out.setdefault(len(w), {})[w] = c
        return {n: Tensor._raw(t) for n, t in sorted(out.items())}

    def capped(self, cap: int | None) -> Tensor:
        if cap is None:
            return self
        kept = {w: c for w, c in self.terms.items() if len(w) <= cap}
        return Tensor._raw(kept, self.truncated or len(kept) != len(self.terms))

    def degrees(self, degrees: Mapping[str, int]) -> set[int]:
        return {word_degree(w, degrees) for w in self.terms}

    def is_homogeneous(self, degrees: Mapping[str, int]) -> bool:
        return len(self.degrees(degrees)) <= 1

    def degree(self, degrees: Mapping[str, int]):
        """Common degree of all words, or None for zero / inhomogeneous."""
        ds = self.degrees(degrees)
        return next(iter(ds)) if len(ds) == 1 else None

    def rename(self, mapping: Mapping[str, str]) -> Tensor:
        return Tensor._raw(
            {tuple(mapping.get(a, a) for a in w): c for w, c in self.terms.items()},
            self.truncated,
        )

    def sorted_terms(self) -> list[tuple[Word, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: (len(t[0]), t[0]))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.sorted_terms():
            word = "(x)".join(w)
            parts.append(f"{c}*{word}" if c != 1 else word)
        return " + ".join(parts)


def word_degree(word: Sequence[str], degrees: Mapping[str, int]) -> int:
    return sum(degrees[a] for a in word)


def concat(x: Tensor, y: Tensor, cap: int | None = None) -> Tensor:
    """Associative product x (x) y in T(V), truncated at ``cap``."""
    out: dict = {}
    trunc = x.truncated or y.truncated
    for u, a in x.terms.items():
        lu = len(u)
        for v, b in y.terms.items():
            if cap is not None and lu + len(v) > cap:
                trunc = True
                continue
            w = u + v
            c = out.get(w, _ZERO) + a * b
            if c:
                out[w] = c
            else:
                out.pop(w, None)
    return Tensor._raw(out, trunc)


def koszul(p: int, q: int) -> int:
    """(-1)^{pq}."""
    return -1 if (p & 1) and (q & 1) else 1
