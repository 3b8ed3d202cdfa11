import io
import json

import jsonschema
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toroidal_yangian.cli import (
    GEN_NAMES,
    Add,
    AntiCommutator,
    Commutator,
    DialectMismatch,
    ExprSyntaxError,
    Gen,
    Mul,
    Power,
    Scalar,
    Sub,
    evaluate,
    main,
    parse_expression,
    print_expression,
    report_schema,
    run_command,
)
from toroidal_yangian.qtor import canonical_form


def run(*argv):
    buf = io.StringIO()
    code = run_command(list(argv), buf)
    return code, buf.getvalue()


def test_parse_examples():
    e = parse_expression("[X+(1,0), X-(1,1)] - hbar*H(1,1)^2")
    assert e == Sub(Commutator(Gen("X+", 1, 0), Gen("X-", 1, 1)),
                    Mul(Scalar("hbar"), Power(Gen("H", 1, 1), 2)))
    assert parse_expression("{e(1,-2), f(0,3)}", "classical") == AntiCommutator(Gen("e", 1, -2), Gen("f", 0, 3))
    assert parse_expression("qi(2)*Phi-(1,-1)") == Mul(Scalar(("qi", 2)), Gen("Phi-", 1, -1))
    # + and - associate to the left
    assert parse_expression("x+(1,0) - x+(1,1) + 2", "yangian") == Add(
        Sub(Gen("x+", 1, 0), Gen("x+", 1, 1)), Scalar(2))


@pytest.mark.parametrize("text,dialect", [
    ("e(1,0)", "quantum"),
    ("X+(1,0)", "classical"),
    ("hbar*e(1,0)", "classical"),
    ("q*x+(1,0)", "yangian"),
])
def test_dialect_mismatch(text, dialect):
    with pytest.raises(DialectMismatch):
        parse_expression(text, dialect)


def test_syntax_error_position():
    with pytest.raises(ExprSyntaxError) as err:
        parse_expression("X+(1,0) *\n  ) ")
    assert (err.value.line, err.value.col) == (2, 3)
    with pytest.raises(ExprSyntaxError) as err:
        parse_expression("[X+(1,0) X-(1,0)]")
    assert (err.value.line, err.value.col) == (1, 10)
    with pytest.raises(ExprSyntaxError):
        parse_expression("X+(1,0) $")


def test_printer_brackets_only_where_needed():
    e = parse_expression("X+(1,0) - (X+(1,1) - X+(1,2))")
    assert print_expression(e) == "X+(1,0) - (X+(1,1) - X+(1,2))"
    e = parse_expression("(X+(1,0) + 2)*H(1,0)^3")
    assert print_expression(e) == "(X+(1,0) + 2)*H(1,0)^3"


def _asts(dialect):
    names = GEN_NAMES[dialect]
    gens = st.builds(Gen, st.sampled_from(names), st.integers(0, 2), st.integers(-3, 3))
    scal = [st.integers(0, 9)]
    if dialect != "classical":
        scal.append(st.just("hbar"))
    if dialect == "quantum":
        scal += [st.just("q"), st.tuples(st.just("qi"), st.integers(0, 2))]
    leaves = gens | st.builds(Scalar, st.one_of(*scal))

    def grow(sub):
        binary = st.sampled_from([Add, Sub, Mul, Commutator, AntiCommutator])
        return (st.builds(lambda c, a, b: c(a, b), binary, sub, sub)
                | st.builds(Power, sub, st.integers(0, 3)))

    return st.recursive(leaves, grow, max_leaves=8)


@settings(max_examples=500)
@given(st.sampled_from(["quantum", "classical", "yangian"]).flatmap(lambda d: st.tuples(st.just(d), _asts(d))))
def test_print_parse_round_trip(case):
    dialect, e = case
    assert parse_expression(print_expression(e), dialect) == e


def test_evaluate_qt4_matches_phi_ratio(A1):
    from toroidal_yangian.qtor import phi_ratio

    val = evaluate(parse_expression("[X+(1,1), X-(1,-1)]"), "quantum", A1, 4)
    assert canonical_form(val - phi_ratio(1, 0, 4, A1), A1)[0].is_zero()


def test_evaluate_rejects_bad_node(A1):
    with pytest.raises(ValueError):
        evaluate(parse_expression("X+(5,0)"), "quantum", A1, 4)


def test_cartan_show_b3():
    code, out = run("cartan", "show", "--type", "B3")
    assert code == 0
    assert "d = 1 1 1 1/2" in out


def test_straighten_command():
    code, out = run("straighten", "--type", "A1", "--expr", "X+(1,0)*X-(1,0)")
    assert code == 0 and "X-(1,0)*X+(1,0)" in out.replace(" ", "")


def test_order_command():
    code, out = run("order", "--type", "A2", "--expr", "X+(1,1) - X+(1,0)")
    assert code == 0 and out.strip() == "f_order 1"
    code, out = run("order", "--dialect", "classical", "--type", "A2", "--expr", "e(1,1) - e(1,0)")
    assert code == 0 and out.strip() == "kappa_order 1"


def test_exit_codes(tmp_path):
    assert run("degen", "verify", "--suite", "step1", "--type", "A1", "--trunc", "3")[0] == 0
    assert run("degen", "verify", "--suite", "k-membership", "--type", "A1")[0] == 1
    assert run("degen", "verify", "--bogus")[0] == 2
    assert run("straighten", "--dialect", "classical", "--expr", "X+(1,0)")[0] == 2
    assert run("straighten", "--expr", "X+(1,0) *")[0] == 2
    assert run("cartan", "show", "--type", "Z9")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"trunc": "four"}))
    assert run("cartan", "show", "--config", str(bad))[0] == 2


def test_json_report_validates_and_is_reproducible(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"type": "A1", "trunc": 3, "window": 1}))
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        code, _ = run("qtor", "verify", "--suite", "classical-limit", "--config", str(cfg), "--json", str(p))
        assert code == 0
    data = json.loads(paths[0].read_text())
    jsonschema.validate(data, report_schema())
    assert data and all(e["status"] == "pass" for e in data)
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_main_entry_point():
    assert main(["cartan", "show", "--type", "A1"]) == 0
