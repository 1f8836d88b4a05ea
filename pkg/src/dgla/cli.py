"""Batch command line: ``dgla <command> [input] [options]``.

Exit codes: 0 when every check passes, 1 when a check is verified false
(the report carries a witness), 2 on malformed input.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from typing import Callable

from . import serialize as ser
from .cobar import cobar_construct, semifree_certificate, validate_coalgebra
from .contraction import (
    extend_to_lie,
    extend_to_tensor,
    verify_contraction,
)
from .errors import DglaError, InputError, VerificationError
from .freelie import DglaPresentation, Realization, lie_dims
from .linalg import ChainComplex, cohomology_dims, format_scalar
from .maurer_cartan import obstruction_demo
from .model import (
    ELEMENTARY,
    FREE,
    LiftingSquare,
    certify_extension,
    factor_free_surjective,
    factor_semifree_qis,
    lift_free,
    lift_semifree,
    window_cohomology,
)

DEFAULT_SEED = 0
DEFAULT_STAGES = 4


@dataclass
class RunConfig:
    command: str
    inputs: list[str]
    weight_cap: int | None
    window: tuple[int, int] | None
    stages: int
    seed: int
    fmt: str
    out: str | None
    kind: str = "auto"

    def echo(self) -> dict:
        return {
            "command": self.command,
            "inputs": list(self.inputs),
            "weight_cap": self.weight_cap,
            "window": list(self.window) if self.window else None,
            "stages": self.stages,
            "seed": self.seed,
        }


@dataclass
class Report:
    config: RunConfig
    checks: list[dict] = field(default_factory=list)
    tables: dict = field(default_factory=dict)
    witness: dict | None = None
    error: str | None = None
    artifact: dict | None = None  # JSON object written to --out

    def check(self, name: str, passed: bool, detail: str = "", witness=None) -> bool:
        entry = {"name": name, "passed": bool(passed), "detail": detail}
        if witness is not None:
            entry["witness"] = witness
        self.checks.append(entry)
        return bool(passed)

    @property
    def passed(self) -> bool:
        return self.error is None and self.witness is None and all(c["passed"] for c in self.checks)

    def to_json(self) -> dict:
        out = {
            "config": self.config.echo(),
            "passed": self.passed,
            "checks": self.checks,
            "tables": self.tables,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        if self.error is not None:
            out["error"] = self.error
        return out

    def to_text(self) -> str:
        lines = [f"dgla {self.config.command}"]
        if self.error:
            lines.append(f"error: {self.error}")
        for c in self.checks:
            mark = "PASS" if c["passed"] else "FAIL"
            lines.append(f"{mark} {c['name']}" + (f": {c['detail']}" if c["detail"] else ""))
            if "witness" in c:
                lines.append(f"     witness: {c['witness']}")
        for name, table in self.tables.items():
            lines.append(f"{name}:")
            lines.extend(_table_lines(table))
        if self.witness is not None:
            lines.append(f"witness: {self.witness}")
        lines.append("result: " + ("pass" if self.passed else "fail"))
        return "\n".join(lines) + "\n"


def _table_lines(table) -> list[str]:
    if isinstance(table, dict):
        out = []
        for k, v in table.items():
            if isinstance(v, dict):
                row = ", ".join(f"{a}: {b}" for a, b in v.items())
                out.append(f"  {k}: {{{row}}}")
            else:
                out.append(f"  {k}: {v}")
        return out
    if isinstance(table, list):
        return [f"  {row}" for row in table]
    return [f"  {table}"]


# ---------------------------------------------------------------------------
# Input loading


def _load(config: RunConfig, index: int = 0):
    if len(config.inputs) <= index:
        raise InputError(f"{config.command} needs an input file")
    return ser.load_file(config.inputs[index])


def _parse(fn: Callable, obj, what: str):
    """Run a parser, turning anything unexpected into an input error."""
    try:
        return fn(obj)
    except DglaError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError, IndexError) as e:
        raise InputError(f"malformed {what}: {e}") from None


def _presentation(config: RunConfig, obj) -> DglaPresentation:
    p = _parse(ser.presentation_from_json, obj, "presentation")
    if config.weight_cap is not None:
        p = p.with_cap(config.weight_cap)
    return p


def _window(config: RunConfig, default: tuple[int, int]) -> tuple[int, int]:
    return config.window if config.window is not None else default


def _keys(d: dict) -> dict:
    """JSON object keys must be strings; keep numeric order."""
    return {str(k): (_keys(v) if isinstance(v, dict) else v) for k, v in sorted(d.items())}


# ---------------------------------------------------------------------------
# Commands


def cmd_dims(config: RunConfig, report: Report) -> None:
    obj = _load(config)
    p = _presentation(config, obj)
    table = lie_dims(p.generators) if p.names else {}
    report.tables["dims by weight and degree"] = _keys(table)
    report.tables["dims by weight"] = {
        "weights": ",".join(str(sum(row.values())) for _, row in sorted(table.items()))
    }
    report.check("lie basis computed", True, f"weight cap {p.cap}")


def cmd_cohomology(config: RunConfig, report: Report) -> None:
    obj = _load(config)
    if isinstance(obj, dict) and "generators" in obj:
        p = _presentation(config, obj)
        real = Realization(p)
        degs = real.degrees()
        window = _window(config, (degs[0], degs[-1]) if degs else (0, 0))
        dims = window_cohomology(real, window)
        report.tables["H by degree"] = _keys(dims)
        try:
            per_weight = {w: cohomology_dims(real.weight_complex(w)) for w in range(1, p.cap + 1)}
            report.tables["H by weight and degree"] = _keys(
                {w: {n: d for n, d in row.items() if d} for w, row in per_weight.items()}
            )
        except InputError:
            report.tables["H by weight and degree"] = "differential does not preserve weight"
        report.check("realized complex satisfies d^2 = 0", True, f"window [{window[0]},{window[1]}]")
    else:
        c: ChainComplex = _parse(ser.complex_from_json, obj, "complex")
        dims = cohomology_dims(c)
        report.tables["H by degree"] = _keys({n: dims.get(n, 0) for n in c.space.degrees})
        report.check("complex satisfies d^2 = 0", True)


def _contraction(config: RunConfig):
    return _parse(ser.contraction_from_json, _load(config), "contraction")


def _contraction_checks(report: Report, rep, prefix: str = "") -> None:
    for ch in rep.checks:
        report.check(prefix + ch.name, ch.passed,
                     "" if ch.passed else f"max residue {format_scalar(ch.max_residue)}", ch.witness)


def cmd_contract_verify(config: RunConfig, report: Report) -> None:
    _contraction_checks(report, verify_contraction(_contraction(config)))


def cmd_contract_extend(config: RunConfig, report: Report) -> None:
    c = _contraction(config)
    cap = config.weight_cap or 3
    base = verify_contraction(c)
    _contraction_checks(report, base)
    if not base.passed:
        return
    t = extend_to_tensor(c, cap)
    for w, rep in t.verify().items():
        report.check(f"tensor weight {w}", rep.passed, ", ".join(rep.failures()))
    lie = extend_to_lie(c, cap)
    for w, rep in lie.verify().items():
        report.check(f"lie weight {w}", rep.passed, ", ".join(rep.failures()))
    bad = lie.rho_commutation_failures()
    report.check("k rho = rho k on basis words", not bad, "" if not bad else "(x)".join(bad[0]),
                 {"word": list(bad[0])} if bad else None)


def _morphism(config: RunConfig):
    f = _parse(ser.morphism_from_json, _load(config), "morphism")
    return f


def cmd_factorize_free(config: RunConfig, report: Report) -> None:
    f = _morphism(config)
    window = _window(config, (0, 0))
    res = factor_free_surjective(f, window)
    report.check("i is a certified free extension", res.certificate.kind == FREE,
                 f"{len(res.certificate.cofactor)} new generators")
    report.check("V is acyclic", not any(res.v_cohomology.values()))
    report.check("g is surjective on the window", all(res.surjective.values()))
    report.check("g i = f", res.commutes)
    report.tables["surjective by degree"] = _keys(res.surjective)
    report.artifact = {
        "inclusion": ser.morphism_to_json(res.certificate.inclusion),
        "g": ser.morphism_to_json(res.g),
    }


def cmd_factorize_semifree(config: RunConfig, report: Report) -> None:
    g = _morphism(config)
    window = _window(config, (0, 0))
    res = factor_semifree_qis(g, config.stages, window)
    for st in res.stages:
        report.check(f"stage {st.index} is elementary semifree", st.certificate.kind == ELEMENTARY,
                     ", ".join(f"deg {d}: {n}" for d, n in sorted(st.added.items())) or "nothing adjoined")
        report.check(f"stage {st.index} extends the previous map", st.extends_previous)
    report.check("stage-1 cocycles surject onto cocycles of M", res.cocycle_surjective)
    report.check("f~ is surjective on the window", all(res.surjective.values()))
    report.check(f"stabilized within {config.stages} stages", res.stabilized)
    report.check("f~ is a quasi-isomorphism on the window", res.qis.is_qis,
                 f"H(C~) = {res.qis.source_dims}, H(M) = {res.qis.target_dims}")
    report.tables["stabilized by degree"] = _keys(res.stabilized_degrees)
    report.tables["H dims of C~"] = _keys(res.qis.source_dims)
    report.tables["H dims of M"] = _keys(res.qis.target_dims)
    report.artifact = {
        "inclusion": ser.morphism_to_json(res.certificate.inclusion),
        "f_tilde": ser.morphism_to_json(res.f_tilde),
    }


def cmd_lift(config: RunConfig, report: Report) -> None:
    sq = _parse(ser.square_from_json, _load(config), "lifting square")
    if config.window is not None:
        sq = LiftingSquare(sq.i, sq.g, sq.gamma, sq.beta, config.window)
    kind = config.kind
    if kind == "auto":
        try:
            certify_extension(sq.i, ELEMENTARY)
            kind = "semifree"
        except VerificationError:
            kind = "free"
    res = lift_semifree(sq) if kind == "semifree" else lift_free(sq)
    report.check(f"lift against {'a surjective qis' if kind == 'semifree' else 'a surjection'}", True,
                 f"i treated as {kind}")
    report.check("h i = gamma", res.upper_triangle)
    report.check("g h = beta", res.lower_triangle)
    report.check("h commutes with d", res.chain_map)
    report.artifact = ser.morphism_to_json(res.lift)


def cmd_cobar(config: RunConfig, report: Report) -> None:
    c = _parse(ser.coalgebra_from_json, _load(config), "coalgebra")
    cap = config.weight_cap or 4
    val = validate_coalgebra(c)
    for ch in val.checks:
        report.check(ch.name, ch.passed, "", {"element": ch.witness} if ch.witness else None)
    if not val.passed:
        raise InputError("coalgebra failed validation; cobar construction refused",
                         witness={"axiom": next(ch.name for ch in val.checks if not ch.passed)})
    p = cobar_construct(c, cap)
    report.check("d^2 = 0 on cobar generators", True, f"weight cap {cap}")
    cert = semifree_certificate(c, cap)
    filt = cert.filtration
    report.check("coproduct containments at every filtration level", all(filt.lemma_checks),
                 f"filtration length {filt.length}")
    for n, st in enumerate(cert.stages, start=1):
        report.check(f"level {n} differentiates into lower levels", st.kind == ELEMENTARY,
                     ", ".join(st.cofactor))
    report.tables["filtration levels"] = {g: lv for g, lv in sorted(cert.levels.items())}
    report.artifact = ser.presentation_to_json(p)


def cmd_mc_obstruction(config: RunConfig, report: Report) -> None:
    rep = obstruction_demo()
    for name, ok, detail in rep.items():
        report.check(name, ok, detail)
    report.tables["constraints over K[s]/(s^3)"] = [str(e) for e in rep.mc_large.constraints]


def cmd_selftest(config: RunConfig, report: Report) -> None:
    from .selftest import run_selftest

    for name, ok, detail in run_selftest(config.seed):
        report.check(name, ok, detail)


COMMANDS = {
    "dims": cmd_dims,
    "cohomology": cmd_cohomology,
    "contract-verify": cmd_contract_verify,
    "contract-extend": cmd_contract_extend,
    "factorize-free": cmd_factorize_free,
    "factorize-semifree": cmd_factorize_semifree,
    "lift": cmd_lift,
    "cobar": cmd_cobar,
    "mc-obstruction": cmd_mc_obstruction,
    "selftest": cmd_selftest,
}


# ---------------------------------------------------------------------------


def _window_arg(text: str) -> tuple[int, int]:
    try:
        a, b = text.split(":")
        lo, hi = int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must be a:b, got {text!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty window {text!r}")
    return lo, hi


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return v


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(2)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-weight", type=_positive, default=None, help="weight cap W")
    common.add_argument("--window", type=_window_arg, default=None, help="degree window a:b")
    common.add_argument("--stages", type=_positive, default=DEFAULT_STAGES,
                        help=f"stage cap S for factorize-semifree (default {DEFAULT_STAGES})")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help=f"RNG seed for selftest (default {DEFAULT_SEED})")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", default=None, help="write the constructed object here as JSON")
    parser = _Parser(prog="dgla", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name not in ("mc-obstruction", "selftest"):
            p.add_argument("input", help="input JSON file")
        if name == "lift":
            p.add_argument("--kind", choices=("auto", "semifree", "free"), default="auto",
                           help="which lifting algorithm to run (default: detect from i)")
    return parser


def run(argv: list[str] | None = None) -> tuple[int, Report]:
    args = build_parser().parse_args(argv)
    config = RunConfig(
        command=args.command,
        inputs=[args.input] if getattr(args, "input", None) else [],
        weight_cap=args.max_weight,
        window=args.window,
        stages=args.stages,
        seed=args.seed,
        fmt=args.format,
        out=args.out,
        kind=getattr(args, "kind", "auto"),
    )
    report = Report(config)
    try:
        COMMANDS[args.command](config, report)
    except InputError as e:
        report.error = str(e)
        report.witness = e.witness
        return 2, report
    except VerificationError as e:
        report.error = str(e)
        report.witness = e.witness if e.witness is not None else {"message": str(e)}
        return 1, report
    except AssertionError as e:
        report.error = f"internal consistency check failed: {e}"
        return 1, report
    return (0 if report.passed else 1), report


def main(argv: list[str] | None = None) -> int:
    code, report = run(argv)
    text = ser.dumps(report.to_json()) if report.config.fmt == "json" else report.to_text()
    sys.stdout.write(text)
    if report.config.out and report.artifact is not None and code == 0:
        with open(report.config.out, "w", encoding="utf-8") as fh:
            fh.write(ser.dumps(report.artifact))
    if code == 2 and report.config.fmt == "text":
        sys.stderr.write(f"dgla: {report.error}\n")
    return code


if __name__ == "__main__":
    raise SystemExit(main())
