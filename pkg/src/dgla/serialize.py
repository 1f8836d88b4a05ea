"""JSON reading and writing for complexes, presentations, contractions,
coalgebras and lifting squares.

Coefficients are strings "p/q" or "p".  Lie elements are stored as
combinations of right-nested bracket words: {"coeff": c, "word": [g1, ..., gn]}
stands for c [g1, [g2, [..., gn]...]].  Output is deterministic: keys are
sorted and basis order is preserved.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any

from .cobar import CoalgebraData
from .contraction import Contraction
from .errors import InputError
from .freelie import DglaMorphism, DglaPresentation, GeneratorSet, nested_bracket
from .linalg import ChainComplex, DegreeMap, GradedSpace, format_scalar, parse_scalar, zeros
from .model import LiftingSquare
from .tensor import Tensor

_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_']*$")


def _expect(value, kind, where: str):
    if not isinstance(value, kind) or isinstance(value, bool) and kind is not bool:
        name = kind.__name__ if isinstance(kind, type) else "/".join(k.__name__ for k in kind)
        raise InputError(f"{where}: expected {name}, got {type(value).__name__}")
    return value


def _field(obj: dict, key: str, where: str, default=...):
    if key not in obj:
        if default is ...:
            raise InputError(f"{where}: missing field {key!r}")
        return default
    return obj[key]


def _name(value, where: str) -> str:
    _expect(value, str, where)
    if not _NAME_RE.match(value):
        raise InputError(f"{where}: {value!r} is not an ASCII identifier")
    return value


def _coeff(value, where: str) -> Fraction:
    try:
        return parse_scalar(value)
    except InputError as e:
        raise InputError(f"{where}: {e}") from None


def _basis(items, where: str) -> list[tuple[str, int]]:
    _expect(items, list, where)
    out = []
    for k, item in enumerate(items):
        at = f"{where}[{k}]"
        _expect(item, dict, at)
        nm = _name(_field(item, "name", at), f"{at}.name")
        deg = _expect(_field(item, "degree", at), int, f"{at}.degree")
        out.append((nm, deg))
    names = [n for n, _ in out]
    if len(set(names)) != len(names):
        dup = next(n for n in names if names.count(n) > 1)
        raise InputError(f"{where}: duplicate name {dup!r}")
    return out


def _basis_json(space: GradedSpace) -> list:
    return [{"name": nm, "degree": d} for nm, d in space.pairs()]


# ---------------------------------------------------------------------------
# Linear maps and complexes


def _map_from_json(obj, source: GradedSpace, target: GradedSpace, shift: int, where: str) -> DegreeMap:
    _expect(obj, dict, where)
    blocks = {}
    for src, entries in obj.items():
        at = f"{where}.{src}"
        try:
            deg, j = source.index(src)
        except KeyError:
            raise InputError(f"{at}: unknown source element {src!r}") from None
        _expect(entries, list, at)
        for k, e in enumerate(entries):
            _expect(e, dict, f"{at}[{k}]")
            c = _coeff(_field(e, "coeff", f"{at}[{k}]"), f"{at}[{k}].coeff")
            tgt = _name(_field(e, "target", f"{at}[{k}]"), f"{at}[{k}].target")
            try:
                tdeg, i = target.index(tgt)
            except KeyError:
                raise InputError(f"{at}[{k}]: unknown target element {tgt!r}") from None
            if tdeg != deg + shift:
                raise InputError(
                    f"{at}[{k}]: {src} (degree {deg}) cannot map to {tgt} (degree {tdeg}) "
                    f"under a map of degree {shift}"
                )
            blk = blocks.setdefault(deg, zeros(target.dim(deg + shift), source.dim(deg)))
            blk[i][j] += c
    return DegreeMap(source, target, shift, blocks)


def _map_json(f: DegreeMap) -> dict:
    out = {}
    for deg in f.source.degrees:
        blk = f.block(deg)
        tnames = f.target.names(deg + f.shift)
        for j, nm in enumerate(f.source.names(deg)):
            entries = [
                {"coeff": format_scalar(blk[i][j]), "target": tnames[i]}
                for i in range(len(tnames)) if blk[i][j]
            ]
            if entries:
                out[nm] = entries
    return out


def complex_from_json(obj, where: str = "complex") -> ChainComplex:
    _expect(obj, dict, where)
    space = GradedSpace.from_pairs(_basis(_field(obj, "basis", where), f"{where}.basis"))
    d = _map_from_json(_field(obj, "differential", where, {}), space, space, 1, f"{where}.differential")
    return ChainComplex(space, d)


def complex_to_json(c: ChainComplex) -> dict:
    return {"basis": _basis_json(c.space), "differential": _map_json(c.differential)}


def contraction_from_json(obj, where: str = "contraction") -> Contraction:
    _expect(obj, dict, where)
    small = complex_from_json(_field(obj, "small", where), f"{where}.small")
    big = complex_from_json(_field(obj, "big", where), f"{where}.big")
    iota = _map_from_json(_field(obj, "iota", where), small.space, big.space, 0, f"{where}.iota")
    pi = _map_from_json(_field(obj, "pi", where), big.space, small.space, 0, f"{where}.pi")
    h = _map_from_json(_field(obj, "h", where, {}), big.space, big.space, -1, f"{where}.h")
    return Contraction(small, big, iota, pi, h)


def contraction_to_json(c: Contraction) -> dict:
    return {
        "small": complex_to_json(c.small),
        "big": complex_to_json(c.big),
        "iota": _map_json(c.iota),
        "pi": _map_json(c.pi),
        "h": _map_json(c.h),
    }


# ---------------------------------------------------------------------------
# Lie elements, presentations, morphisms


def _lie_from_json(items, degrees: dict, where: str) -> Tensor:
    _expect(items, list, where)
    parts = []
    for k, term in enumerate(items):
        at = f"{where}[{k}]"
        _expect(term, dict, at)
        c = _coeff(_field(term, "coeff", at), f"{at}.coeff")
        word = _expect(_field(term, "word", at), list, f"{at}.word")
        if not word:
            raise InputError(f"{at}.word: empty bracket word")
        for a in word:
            _name(a, f"{at}.word")
            if a not in degrees:
                raise InputError(f"{at}.word: unknown generator {a!r}")
        parts.append(nested_bracket(tuple(word), degrees) * c)
    return Tensor.sum(parts)


def _lie_json(p: DglaPresentation, x: Tensor) -> list:
    return [
        {"coeff": format_scalar(c), "word": list(w)}
        for c, w in p.algebra.to_bracket_words(x)
    ]


def presentation_from_json(obj, where: str = "presentation") -> DglaPresentation:
    _expect(obj, dict, where)
    cap = _expect(_field(obj, "weight_cap", where, 4), int, f"{where}.weight_cap")
    gens = _basis(_field(obj, "generators", where), f"{where}.generators")
    degrees = dict(gens)
    raw = _expect(_field(obj, "differential", where, {}), dict, f"{where}.differential")
    diff = {}
    for g, items in raw.items():
        if g not in degrees:
            raise InputError(f"{where}.differential: unknown generator {g!r}")
        diff[g] = _lie_from_json(items, degrees, f"{where}.differential.{g}")
    cof = _expect(_field(obj, "cofactors", where, []), list, f"{where}.cofactors")
    blocks = []
    for k, block in enumerate(cof):
        _expect(block, list, f"{where}.cofactors[{k}]")
        blocks.append(tuple(_name(a, f"{where}.cofactors[{k}]") for a in block))
    return DglaPresentation(GeneratorSet(tuple(gens), cap), diff, tuple(blocks))


def presentation_to_json(p: DglaPresentation) -> dict:
    return {
        "weight_cap": p.cap,
        "generators": [{"name": n, "degree": d} for n, d in p.generators.generators],
        "differential": {g: _lie_json(p, p.dgen(g)) for g in p.names if p.dgen(g)},
        "cofactors": [list(b) for b in p.cofactors],
    }


def morphism_from_json(obj, where: str = "morphism") -> DglaMorphism:
    _expect(obj, dict, where)
    src = presentation_from_json(_field(obj, "source", where), f"{where}.source")
    tgt = presentation_from_json(_field(obj, "target", where), f"{where}.target")
    raw = _expect(_field(obj, "images", where, {}), dict, f"{where}.images")
    images = {}
    for g, items in raw.items():
        if g not in src.degrees:
            raise InputError(f"{where}.images: unknown source generator {g!r}")
        images[g] = _lie_from_json(items, tgt.degrees, f"{where}.images.{g}")
    return DglaMorphism(src, tgt, images)


def morphism_to_json(f: DglaMorphism) -> dict:
    return {
        "source": presentation_to_json(f.source),
        "target": presentation_to_json(f.target),
        "images": {g: _lie_json(f.target, f.image(g)) for g in f.source.names if f.image(g)},
    }


def _window_from_json(value, where: str) -> tuple[int, int]:
    if isinstance(value, str):
        m = re.match(r"^\s*\[?\s*(-?\d+)\s*[,:]\s*(-?\d+)\s*\]?\s*$", value)
        if not m:
            raise InputError(f"{where}: window must look like '[a,b]'")
        return int(m.group(1)), int(m.group(2))
    _expect(value, list, where)
    if len(value) != 2 or not all(isinstance(v, int) and not isinstance(v, bool) for v in value):
        raise InputError(f"{where}: window must be two integers")
    return value[0], value[1]


def square_from_json(obj, where: str = "square") -> LiftingSquare:
    _expect(obj, dict, where)
    maps = {k: morphism_from_json(_field(obj, k, where), f"{where}.{k}") for k in ("i", "g", "gamma", "beta")}
    window = _window_from_json(_field(obj, "window", where), f"{where}.window")
    return LiftingSquare(maps["i"], maps["g"], maps["gamma"], maps["beta"], window)


def square_to_json(sq: LiftingSquare) -> dict:
    out = {k: morphism_to_json(getattr(sq, k)) for k in ("i", "g", "gamma", "beta")}
    out["window"] = f"[{sq.window[0]},{sq.window[1]}]"
    return out


# ---------------------------------------------------------------------------
# Coalgebras


def coalgebra_from_json(obj, where: str = "coalgebra") -> CoalgebraData:
    _expect(obj, dict, where)
    basis = _basis(_field(obj, "basis", where), f"{where}.basis")
    raw = _expect(_field(obj, "coproduct", where, {}), dict, f"{where}.coproduct")
    cop = {}
    for x, items in raw.items():
        at = f"{where}.coproduct.{x}"
        _expect(items, list, at)
        terms = []
        for k, t in enumerate(items):
            _expect(t, dict, f"{at}[{k}]")
            terms.append((
                _coeff(_field(t, "coeff", f"{at}[{k}]"), f"{at}[{k}].coeff"),
                _name(_field(t, "left", f"{at}[{k}]"), f"{at}[{k}].left"),
                _name(_field(t, "right", f"{at}[{k}]"), f"{at}[{k}].right"),
            ))
        cop[x] = tuple(terms)
    return CoalgebraData.build(basis, cop)


def coalgebra_to_json(c: CoalgebraData) -> dict:
    return {
        "basis": _basis_json(c.basis),
        "coproduct": {
            x: [{"coeff": format_scalar(k), "left": a, "right": b} for k, a, b in terms]
            for x, terms in c.coproduct.items()
        },
    }


# ---------------------------------------------------------------------------


def dumps(obj: Any) -> str:
    """Deterministic JSON text (sorted keys, two-space indent, trailing newline)."""
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=True) + "\n"


def load_file(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(f"{path}: cannot read ({e.strerror})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from None
