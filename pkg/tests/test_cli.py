import json
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from grhom.cli import (
    Call,
    Let,
    Name,
    Num,
    Poly,
    Print,
    RingDecl,
    Script,
    ScriptError,
    dumps,
    execute,
    format_expr,
    format_script,
    main,
    parse,
)

SCRIPTS = Path(__file__).resolve().parent.parent / "scripts"

HEADER = "ring 32003 [x0, x1, x2];\n"


def _write(tmp_path, text, name="s.gx"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_parse_examples():
    s = parse(HEADER + "let K = koszul(x0, x1^2 - x2*x0); -- comment\nprint complex(K; top=1);")
    assert s.statements[0] == RingDecl(32003, ("x0", "x1", "x2"))
    let = s.statements[1]
    assert isinstance(let, Let) and let.name == "K"
    assert let.expr == Call("koszul", (Name("x0"), Poly("x1^2-x2*x0")), ())
    pr = s.statements[2]
    assert isinstance(pr, Print) and pr.expr.func == "complex"
    assert dict(pr.expr.kwargs) == {"top": Num(1)}


def test_empty_script():
    assert parse("") == Script(())
    assert parse("# nothing\n").statements == ()
    assert json.loads(dumps(execute(parse("")))) == {"results": [], "ring": {}}


@pytest.mark.parametrize("path", sorted(SCRIPTS.glob("*.gx")), ids=lambda p: p.name)
def test_format_round_trip(path):
    s = parse(path.read_text())
    again = parse(format_script(s))
    assert again == s
    assert format_script(again) == format_script(s)


leaves = st.one_of(
    st.integers(-5, 5).map(Num),
    st.sampled_from(["A", "B"]).map(Name),
    st.sampled_from(["2*x0", "x1*x2", "x0^2-3*x1*x2"]).map(Poly),
)
exprs = st.recursive(
    leaves,
    lambda kids: st.builds(
        lambda f, args: Call(f, tuple(args), ()),
        st.sampled_from(["shift", "twist", "cone", "koszul"]),
        st.lists(kids, min_size=1, max_size=3),
    ),
    max_leaves=8,
)


@settings(max_examples=80, deadline=None)
@given(exprs)
def test_expression_round_trip(e):
    text = HEADER + "let A = O(0);\nlet B = O(1);\nprint " + format_expr(e) + ";\n"
    assert parse(text).statements[-1].expr == e


@pytest.mark.parametrize(
    "text, where, needle",
    [
        (HEADER + "let K = koszul(y);", (2, 9), "y"),
        (HEADER + "let K = koszul(x0 x1);", (2, 16), "missing operator"),
        ("let A = O(0);", (1, 1), "ring"),
        (HEADER + "let K = koszul(x0;", (2, 18), ""),
        (HEADER + HEADER, (2, 1), "ring"),
        (HEADER + "let x0 = O(1);", (2, 1), "x0"),
    ],
)
def test_errors_carry_positions(text, where, needle):
    with pytest.raises(ScriptError) as info:
        parse(text)
    assert (info.value.line, info.value.col)[0] == where[0]
    assert needle in str(info.value)


def test_json_is_deterministic(tmp_path):
    text = HEADER + "let O1 = O(1);\nprint cohomology(O1, 0, 0);\nprint betti(coker(map(free(0), free(-2), matrix [[x0*x1]])));\n"
    a = dumps(execute(parse(text)), timing=False)
    b = dumps(execute(parse(text)), timing=False)
    assert a == b
    doc = json.loads(a)
    assert doc["ring"] == {"p": 32003, "variables": ["x0", "x1", "x2"], "ideal": []}
    assert doc["results"][0]["command"] == "cohomology(O1, 0, 0)"


def test_exit_codes(tmp_path, capsys):
    ok = _write(tmp_path, HEADER + "print cohomology(O(2), 0, 0);\n")
    assert main(["run", ok]) == 0
    assert "o1 = " in capsys.readouterr().out
    bad = _write(tmp_path, HEADER + "let K = koszul(y);\n", "bad.gx")
    assert main(["run", bad]) == 1
    assert "bad.gx:2:" in capsys.readouterr().err
    math = _write(tmp_path, HEADER + "let K = koszul(x0 + x1^2);\n", "math.gx")
    assert main(["run", math]) == 2
    assert main(["run", str(tmp_path / "missing.gx")]) == 1


def test_two_lines_script(tmp_path):
    out = tmp_path / "out.json"
    assert main(["run", str(SCRIPTS / "ex_two_lines.gx"), "--json", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["ring"]["ideal"] == ["x0*x1"]
    ext = doc["results"][1]
    assert ext["command"].startswith("ext(")
    assert "time" in ext


def test_beilinson_json(tmp_path):
    out = tmp_path / "out.json"
    assert main(["run", str(SCRIPTS / "beilinson.gx"), "--json", str(out)]) == 0
    res = json.loads(out.read_text())["results"]
    assert res[0]["result"]["matrix"] == [[1, 3, 6], [0, 1, 3], [0, 0, 1]]
    assert res[-1]["result"]["matrix"] == [[1, 3, 3], [0, 1, 3], [0, 0, 1]]
    assert res[-1]["result"]["exceptional"]


def test_prime_override(tmp_path):
    out = tmp_path / "out.json"
    script = _write(tmp_path, HEADER + "print cohomology(O(1), 0, 0);\n")
    assert main(["run", script, "--prime", "101", "--json", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["ring"]["p"] == 101


def test_fmt(tmp_path, capsys):
    script = _write(tmp_path, "ring   32003 [x0,x1,x2]; let K=koszul( x0 ,x1);print   K;")
    assert main(["fmt", script]) == 0
    out = capsys.readouterr().out
    assert parse(out) == parse("ring 32003 [x0, x1, x2]; let K = koszul(x0, x1); print K;")
