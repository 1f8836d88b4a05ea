import json
import random

import pytest

from dgla import serialize as ser
from dgla.cli import main, run
from dgla.cobar import CoalgebraData
from dgla.corpus import random_free_square, random_semifree_square
from dgla.errors import InputError
from dgla.freelie import DglaMorphism, DglaPresentation, bracket
from dgla.maurer_cartan import free_mc_algebra
from dgla.model import LiftingSquare, inclusion
from dgla.samples import random_contraction
from dgla.tensor import Tensor

L = Tensor.letter


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(obj if isinstance(obj, str) else ser.dumps(obj))
    return str(path)


def presentation(gens, cap=4, diff=None):
    return ser.presentation_to_json(DglaPresentation.free(gens, cap, diff or {}))


# -- round trips ---------------------------------------------------------------


def test_contraction_round_trip():
    c = random_contraction(random.Random(4))
    back = ser.contraction_from_json(json.loads(ser.dumps(ser.contraction_to_json(c))))
    assert ser.contraction_to_json(back) == ser.contraction_to_json(c)


def test_presentation_round_trip_keeps_the_differential():
    t = free_mc_algebra(3)
    back = ser.presentation_from_json(ser.presentation_to_json(t))
    assert back.dgen("t") == t.dgen("t")
    x = DglaPresentation.free([("x", 1), ("y", 1), ("z", 2)], 3,
                              {"z": bracket(L("x"), bracket(L("x"), L("y"), {"x": 1, "y": 1}), {"x": 1, "y": 1})})
    assert ser.presentation_from_json(ser.presentation_to_json(x)).dgen("z") == x.dgen("z")


@pytest.mark.parametrize("make", [random_semifree_square, random_free_square])
def test_square_round_trip(make):
    sq = make(random.Random(7))
    obj = ser.square_to_json(sq)
    back = ser.square_from_json(json.loads(ser.dumps(obj)))
    assert ser.square_to_json(back) == obj


def test_coalgebra_round_trip():
    c = CoalgebraData.build([("x", 2), ("y", 4)], {"y": [("1/2", "x", "x")]})
    back = ser.coalgebra_from_json(ser.coalgebra_to_json(c))
    assert back.coproduct == c.coproduct


def test_parse_errors_name_the_field():
    with pytest.raises(InputError, match=r"presentation.generators\[0\]"):
        ser.presentation_from_json({"generators": [{"name": "x"}]})
    with pytest.raises(InputError, match="unknown generator"):
        ser.presentation_from_json({"generators": [{"name": "x", "degree": 0}],
                                    "differential": {"x": [{"coeff": "1", "word": ["q"]}]}})
    with pytest.raises(InputError):
        ser.complex_from_json([])


# -- CLI -----------------------------------------------------------------------


def test_dims_examples(tmp_path, capsys):
    path = write(tmp_path, "xy.json", presentation([("x", 0), ("y", 0)]))
    assert main(["dims", path]) == 0
    assert "weights: 2,1,2,3" in capsys.readouterr().out
    path = write(tmp_path, "t.json", presentation([("t", 1)], cap=3))
    assert main(["dims", path]) == 0
    assert "weights: 1,1,0" in capsys.readouterr().out
    empty = write(tmp_path, "empty.json", {"generators": [], "weight_cap": 3})
    code, report = run(["dims", empty])
    assert code == 0 and not any(report.tables.get("dims", {}).values())


def test_cohomology_of_mc_algebra_vanishes(tmp_path):
    path = write(tmp_path, "t.json", ser.presentation_to_json(free_mc_algebra(3)))
    code, report = run(["cohomology", path, "--window=0:3"])
    assert code == 0
    assert all(v == 0 for v in report.tables["H by degree"].values())


def test_cohomology_rejects_non_complex(tmp_path):
    bad = {"basis": [{"name": "a", "degree": 0}, {"name": "b", "degree": 1}, {"name": "c", "degree": 2}],
           "differential": {"a": [{"coeff": "1", "target": "b"}], "b": [{"coeff": "1", "target": "c"}]}}
    code, report = run(["cohomology", write(tmp_path, "bad.json", bad)])
    assert code == 2 and report.witness


def test_exit_codes(tmp_path):
    assert run(["dims", write(tmp_path, "broken.json", "{not json")])[0] == 2
    assert run(["dims", str(tmp_path / "missing.json")])[0] == 2
    good = ser.contraction_to_json(random_contraction(random.Random(1)))
    assert run(["contract-verify", write(tmp_path, "c.json", good)])[0] == 0
    pair = {
        "small": {"basis": []},
        "big": {"basis": [{"name": "e", "degree": 0}, {"name": "f", "degree": 1}],
                "differential": {"e": [{"coeff": "1", "target": "f"}]}},
        # h(f) = +e: the sign that breaks the homotopy identity
        "iota": {}, "pi": {}, "h": {"f": [{"coeff": "1", "target": "e"}]},
    }
    code, report = run(["contract-verify", write(tmp_path, "bad.json", pair)])
    assert code == 1
    assert any(not c["passed"] for c in report.checks)


def test_json_reports_are_byte_identical(tmp_path, capsys):
    path = write(tmp_path, "c.json", ser.contraction_to_json(random_contraction(random.Random(2))))
    outs = []
    for _ in range(2):
        main(["contract-extend", path, "--max-weight", "3", "--format", "json"])
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]
    json.loads(outs[0])
    main(["selftest", "--seed", "3", "--format", "json"])
    a = capsys.readouterr().out
    main(["selftest", "--seed", "3", "--format", "json"])
    assert capsys.readouterr().out == a


def test_lift_with_non_surjective_g(tmp_path):
    empty = DglaPresentation.empty(3)
    target = DglaPresentation.free([("x", 0)], 3)
    b = DglaPresentation.free([("p", 0), ("dp", 1)], 3, {"p": L("dp")})
    sq = LiftingSquare(inclusion(empty, b), DglaMorphism(empty, target, {}), DglaMorphism(empty, empty, {}),
                       DglaMorphism(b, target, {"p": L("x")}), (0, 0))
    code, report = run(["lift", write(tmp_path, "sq.json", ser.square_to_json(sq))])
    assert code == 2
    assert "not surjective in degree 0" in report.error
    assert report.witness == {"degree": 0}


def test_lift_random_squares(tmp_path):
    for k, sq in enumerate([random_semifree_square(random.Random(3)), random_free_square(random.Random(3))]):
        out = tmp_path / f"lift{k}.json"
        path = write(tmp_path, f"sq{k}.json", ser.square_to_json(sq))
        assert main(["lift", path, "--out", str(out)]) == 0
        lift = ser.morphism_from_json(json.loads(out.read_text()))
        assert lift.is_chain_map()


def test_factorize_commands(tmp_path):
    p = DglaPresentation.free([("x", 2)], 3)
    path = write(tmp_path, "f.json", ser.morphism_to_json(DglaMorphism(p, p, {"x": L("x")})))
    assert run(["factorize-free", path, "--window=1:3"])[0] == 0
    code, report = run(["factorize-semifree", path, "--window=1:3", "--stages", "4"])
    assert code == 0
    assert report.tables["H dims of C~"] == report.tables["H dims of M"]


def test_cobar_on_zero_coproduct_writes_zero_differential(tmp_path):
    c = {"basis": [{"name": "a", "degree": 0}, {"name": "b", "degree": 2}], "coproduct": {}}
    out = tmp_path / "cobar.json"
    assert main(["cobar", write(tmp_path, "c.json", c), "--out", str(out)]) == 0
    p = json.loads(out.read_text())
    assert p["differential"] == {}
    assert [g["degree"] for g in p["generators"]] == [1, 3]


def test_cobar_refuses_non_cocommutative(tmp_path):
    c = {"basis": [{"name": "x", "degree": 1}, {"name": "y", "degree": 2}],
         "coproduct": {"y": [{"coeff": "1", "left": "x", "right": "x"}]}}
    code, report = run(["cobar", write(tmp_path, "c.json", c)])
    assert code == 2
    assert report.witness == {"axiom": "cocommutativity"}


def test_mc_obstruction_report(capsys):
    assert main(["mc-obstruction"]) == 0
    out = capsys.readouterr().out
    for item in ("(i)", "(ii)", "(iii)", "(iv)"):
        assert f"PASS {item}" in out
    assert "-a1_0**2/2" in out


def test_bad_window_flag_exits_2():
    with pytest.raises(SystemExit) as e:
        run(["mc-obstruction", "--window", "3:1"])
    assert e.value.code == 2
