"""Parser, printer, and executor tests for the scripting language."""

from __future__ import annotations

import math
import random

import pytest

from bkcube.core import INF, Degree, Mode, Profile
from bkcube.pipeline import replay
from bkcube.script import (
    Apply,
    AssertStmt,
    PrintStmt,
    ProfileDecl,
    Repeat,
    Script,
    ScriptParseError,
    ScriptRuntimeError,
    execute,
    parse,
    print_script,
    tokenize,
)

ONE_STEP = "profile p dim=2 { conn1=1, cocart 2=inf }; apply step r=1; assert cart 2 >= 2;"
FIXED_POINT = (
    "profile p dim=3 { conn1=2, cart 2=3, cart 3=4 }; "
    "repeat 5 { apply step r=1; }; assert conn1 = 2;"
)


def test_parse_one_step_script():
    script = parse(ONE_STEP)
    assert script.statements == (
        ProfileDecl("p", 2, Degree(1), ((2, INF),), Mode.COCARTESIAN),
        Apply("step", None, 1),
        AssertStmt(Mode.CARTESIAN, 2, ">=", Degree(2)),
    )


def test_parse_fixed_point_script():
    script = parse(FIXED_POINT)
    assert script.statements == (
        ProfileDecl("p", 3, Degree(2), ((2, Degree(3)), (3, Degree(4))), Mode.CARTESIAN),
        Repeat(5, (Apply("step", None, 1),)),
        AssertStmt(None, None, "=", Degree(2)),
    )


def test_positions_do_not_affect_equality():
    compact = parse(ONE_STEP)
    spread = parse(ONE_STEP.replace("; ", ";\n\n  "))
    assert compact == spread


def test_comments_and_crlf():
    text = (
        "# header comment\r\n"
        "profile p dim=2 {  # inline\r\n"
        "  conn1=1,\r\n"
        "  cocart 2=inf\r\n"
        "};\r\n"
        "apply step r=1;\r\napply step;  # trailing\r\n"
    )
    script = parse(text)
    assert len(script.statements) == 3
    assert script.statements[0] == parse(ONE_STEP).statements[0]


def test_canonical_print():
    assert print_script(parse(ONE_STEP)) == (
        "profile p dim=2 { conn1=1, cocart 2=inf };\n"
        "apply step r=1;\n"
        "assert cart 2 >= 2;\n"
    )
    assert print_script(parse(FIXED_POINT)) == (
        "profile p dim=3 { conn1=2, cart 2=3, cart 3=4 };\n"
        "repeat 5 { apply step r=1; };\n"
        "assert conn1 = 2;\n"
    )


def test_print_empty_script():
    assert print_script(Script(())) == ""


def test_round_trip_examples():
    for text in (ONE_STEP, FIXED_POINT):
        script = parse(text)
        assert parse(print_script(script)) == script


def test_optional_fields_stay_omitted():
    text = (
        "profile p dim=1 { conn1=0 };\n"
        "apply suspend;\n"
        "apply loop 2;\n"
        "apply step;\n"
        "apply step r=inf;\n"
        "repeat 2 { };\n"
        "print;\n"
    )
    script = parse(text)
    assert print_script(script) == text
    assert script.statements[1] == Apply("suspend", None, None)
    assert script.statements[2] == Apply("loop", 2, None)
    assert script.statements[3] == Apply("step", None, None)
    assert script.statements[4] == Apply("step", None, math.inf)
    assert script.statements[5] == Repeat(2, ())


def test_tokenizer_details():
    tokens = tokenize("cart>=-3 # gone\n<= ;")
    assert [(t.kind, t.text) for t in tokens] == [
        ("word", "cart"),
        ("punct", ">="),
        ("int", "-3"),
        ("punct", "<="),
        ("punct", ";"),
        ("eof", ""),
    ]
    assert (tokens[3].line, tokens[3].col) == (2, 1)


# -- script generation for the round-trip and corruption properties --


def _gen_degree(rng: random.Random) -> Degree:
    return INF if rng.random() < 0.25 else Degree(rng.randint(-3, 9))


def _gen_decl(rng: random.Random, counter: list[int]) -> ProfileDecl:
    name = f"p{counter[0]}"
    counter[0] += 1
    dim = rng.randint(1, 4)
    entries: tuple[tuple[int, Degree], ...] = ()
    mode = None
    if dim > 1:
        dims = sorted(rng.sample(range(2, dim + 1), rng.randint(0, dim - 1)))
        if rng.random() < 0.8:
            dims = list(range(2, dim + 1))
        entries = tuple((d, _gen_degree(rng)) for d in dims)
        if entries:
            mode = rng.choice((Mode.CARTESIAN, Mode.COCARTESIAN))
    return ProfileDecl(name, dim, _gen_degree(rng), entries, mode)


def _gen_apply(rng: random.Random) -> Apply:
    op = rng.choice(("dualize", "hbm", "stable", "suspend", "loop", "step"))
    amount = None
    r = None
    if op in ("suspend", "loop") and rng.random() < 0.5:
        amount = rng.randint(0, 5)
    if op == "step" and rng.random() < 0.5:
        r = rng.choice((1, 2, 3, math.inf))
    return Apply(op, amount, r)


def _gen_assert(rng: random.Random) -> AssertStmt:
    cmp = rng.choice((">=", "=", "<="))
    if rng.random() < 0.4:
        return AssertStmt(None, None, cmp, _gen_degree(rng))
    mode = rng.choice((Mode.CARTESIAN, Mode.COCARTESIAN))
    return AssertStmt(mode, rng.randint(2, 4), cmp, _gen_degree(rng))


def _gen_stmt(rng: random.Random, counter: list[int], nested: bool) -> object:
    roll = rng.random()
    if counter[0] == 0 or roll < 0.25:
        return _gen_decl(rng, counter)
    if roll < 0.55:
        return _gen_apply(rng)
    if roll < 0.75:
        return _gen_assert(rng)
    if roll < 0.85 and not nested:
        body = tuple(_gen_stmt(rng, counter, True) for _ in range(rng.randint(0, 3)))
        return Repeat(rng.randint(1, 4), body)
    return PrintStmt()


def _gen_script(rng: random.Random) -> Script:
    counter = [0]
    return Script(tuple(_gen_stmt(rng, counter, False) for _ in range(rng.randint(1, 8))))


def test_round_trip_generated_scripts():
    rng = random.Random(4071)
    for _ in range(1000):
        script = _gen_script(rng)
        text = print_script(script)
        assert parse(text) == script
        assert print_script(parse(text)) == text


_CORRUPTIONS = (
    "@",
    "q",
    "zz",
    "profile",
    "dim",
    "conn1",
    "cart",
    "cocart",
    "inf",
    "apply",
    "repeat",
    "print",
    "{",
    "}",
    ";",
    "=",
    ",",
    ">=",
    "42",
    "-7",
    "0",
)


def _offset(text: str, line: int, col: int) -> int:
    lines = text.split("\n")
    return sum(len(ln) + 1 for ln in lines[: line - 1]) + col - 1


def test_corruption_reports_at_or_before_the_corrupted_token():
    rng = random.Random(90125)
    raised = 0
    for _ in range(400):
        text = print_script(_gen_script(rng))
        tokens = [t for t in tokenize(text) if t.kind != "eof"]
        for _ in range(3):
            victim = rng.choice(tokens)
            replacement = rng.choice(_CORRUPTIONS)
            if replacement == victim.text:
                continue
            at = _offset(text, victim.line, victim.col)
            corrupted = text[:at] + replacement + text[at + len(victim.text) :]
            try:
                parse(corrupted)
            except ScriptParseError as err:
                raised += 1
                assert (err.line, err.col) <= (victim.line, victim.col), corrupted
    assert raised > 300


def test_duplicate_declaration_anchors_at_first_occurrence():
    text = "profile a dim=1 { conn1=0 }; profile a dim=1 { conn1=0 };"
    with pytest.raises(ScriptParseError) as exc:
        parse(text)
    err = exc.value
    assert (err.line, err.col) == (1, 9)
    assert (err.found_line, err.found_col) == (1, 38)
    assert err.found == "'a'"


@pytest.mark.parametrize(
    "text,expected_bit,found",
    [
        ("apply step;", "profile declaration", "'apply'"),
        ("assert conn1 = 1;", "profile declaration", "'assert'"),
        ("print;", "profile declaration", "'print'"),
        ("profile cart dim=1 { conn1=0 };", "a profile name", "'cart'"),
        ("profile p dim=0 { conn1=0 };", "dimension >= 1", "'0'"),
        ("profile p dim=2 { conn1=1, cart 1=3 };", "dimension >= 2", "'1'"),
        ("profile p dim=3 { conn1=1, cart 2=3, cocart 3=4 };", "one mode", "'cocart'"),
        ("profile p dim=3 { conn1=1, cart 2=3, cart 2=4 };", "not yet given", "'2'"),
        ("profile p dim=1 { conn1=0 }; repeat 0 { };", "count >= 1", "'0'"),
        ("profile p dim=1 { conn1=0 }; apply suspend -1;", "non-negative", "'-1'"),
        ("profile p dim=1 { conn1=0 }; apply step r=0;", "positive integer", "'0'"),
        ("profile p dim=1 { conn1=0 }; assert cart 1 >= 0;", "dimension >= 2", "'1'"),
        ("profile p dim=1 { conn1=0 }; apply shrink;", "'dualize'", "'shrink'"),
        ("profile p dim=1 { conn1=0 }", "';'", "end of script"),
        ("profile p dim=1 { conn1=0 }; $", "a token", "character '$'"),
    ],
)
def test_parse_error_cases(text, expected_bit, found):
    with pytest.raises(ScriptParseError) as exc:
        parse(text)
    err = exc.value
    assert any(expected_bit in piece for piece in err.expected) or expected_bit in str(err)
    assert err.found == found


def test_syntax_error_anchors_at_statement_start():
    text = "profile p dim=1 { conn1=0 };\napply step\nassert conn1 = 0;"
    with pytest.raises(ScriptParseError) as exc:
        parse(text)
    err = exc.value
    assert (err.line, err.col) == (2, 1)
    assert (err.found_line, err.found_col) == (3, 1)
    assert err.expected == ("';'",)


# -- execution --


def test_execute_one_step_script():
    result = execute(parse(ONE_STEP))
    assert result.passed
    assert result.final == Profile(2, Degree(1), Mode.CARTESIAN, {2: Degree(2)})
    assert result.asserts[0].actual == Degree(2)
    d = result.derivation
    assert d.initial == Profile(2, Degree(1), Mode.COCARTESIAN, {2: INF})
    assert len(d.steps) == 1
    assert [rec.transform for rec in d.steps[0].records] == [
        "suspend",
        "cartesianize",
        "loop",
    ]


def test_sharpened_assert_fails():
    result = execute(parse(ONE_STEP.replace(">= 2", ">= 3")))
    assert not result.passed
    outcome = result.asserts[0]
    assert outcome.actual == Degree(2)
    assert outcome.detail == "actual 2"
    assert outcome.text == "assert cart 2 >= 3"


def test_execute_fixed_point_script():
    result = execute(parse(FIXED_POINT))
    assert result.passed
    assert result.final == result.derivation.initial
    assert len(result.derivation.steps) == 5
    assert result.derivation.stabilized_at == 1
    first = result.derivation.steps[0]
    assert [rec.transform for rec in first.records] == [
        "dualize",
        "suspend",
        "cartesianize",
        "loop",
    ]


def test_script_derivation_replays():
    result = execute(parse(FIXED_POINT))
    assert replay(result.derivation) == result.derivation


def test_plain_transform_chain():
    text = (
        "profile p dim=2 { conn1=1, cocart 2=inf };"
        "apply suspend 2; apply hbm; apply loop 2;"
        "assert cart 2 = 3; assert conn1 = 1; print;"
    )
    result = execute(parse(text))
    assert result.passed
    assert result.final == Profile(2, Degree(1), Mode.CARTESIAN, {2: Degree(3)})
    assert result.printed == ("2-cube cartesian (conn1=1; cart 2=3)",)
    transforms = [rec.transform for step in result.derivation.steps for rec in step.records]
    assert transforms == ["suspend", "cartesianize", "loop"]


def test_stable_step_script():
    text = (
        "profile q dim=3 { conn1=1, cocart 2=inf, cocart 3=inf };"
        "apply step r=inf; assert cart 3 = inf; assert cart 2 = inf;"
    )
    result = execute(parse(text))
    assert result.passed
    assert result.derivation.steps[0].records[0].transform == "stabilize"


def test_repeat_runs_asserts_each_pass():
    text = (
        "profile p dim=2 { conn1=2, cart 2=3 };"
        "repeat 3 { apply step r=1; assert cart 2 = 3; };"
    )
    result = execute(parse(text))
    assert result.passed
    assert len(result.asserts) == 3
    assert len(result.derivation.steps) == 3


def test_later_declaration_becomes_a_declare_record():
    text = (
        "profile a dim=1 { conn1=0 };"
        "apply suspend;"
        "profile b dim=2 { conn1=1, cocart 2=inf };"
        "apply step;"
    )
    result = execute(parse(text))
    d = result.derivation
    assert d.initial == Profile(1, Degree(0), Mode.COCARTESIAN)
    assert d.steps[1].records[0].transform == "declare"
    assert d.steps[1].profile == Profile(2, Degree(1), Mode.COCARTESIAN, {2: INF})
    assert result.final.mode is Mode.CARTESIAN
    assert replay(d) == d


def test_dim1_declaration_defaults_to_cocartesian():
    result = execute(parse("profile p dim=1 { conn1=3 }; apply suspend;"))
    assert result.final == Profile(1, Degree(4), Mode.COCARTESIAN)


def test_assert_mode_mismatch_fails_instead_of_raising():
    text = "profile p dim=2 { conn1=1, cart 2=3 }; assert cocart 2 >= 1;"
    result = execute(parse(text))
    assert not result.passed
    outcome = result.asserts[0]
    assert outcome.actual is None
    assert outcome.detail == "profile is cartesian"


def test_assert_out_of_range_dim_is_a_runtime_error():
    text = "profile p dim=2 { conn1=1, cart 2=3 }; assert cart 3 >= 1;"
    with pytest.raises(ScriptRuntimeError) as exc:
        execute(parse(text))
    assert "no dimension 3" in str(exc.value)
    assert exc.value.line == 1


def test_incomplete_declaration_is_a_runtime_error():
    with pytest.raises(ScriptRuntimeError) as exc:
        execute(parse("profile p dim=2 { conn1=1 };"))
    assert "degrees" in str(exc.value)


def test_wrong_mode_transform_is_a_runtime_error():
    text = "profile p dim=2 { conn1=1, cart 2=3 }; apply suspend;"
    with pytest.raises(ScriptRuntimeError) as exc:
        execute(parse(text))
    assert "suspend" in str(exc.value)


def test_comparisons():
    base = "profile p dim=1 { conn1=2 };"
    assert execute(parse(base + "assert conn1 <= inf;")).passed
    assert execute(parse(base + "assert conn1 >= 2;")).passed
    assert not execute(parse(base + "assert conn1 = inf;")).passed
    assert not execute(parse(base + "assert conn1 <= 1;")).passed


def test_empty_script_executes_to_nothing():
    result = execute(Script(()))
    assert result.final is None
    assert result.derivation is None
    assert result.passed
