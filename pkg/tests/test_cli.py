from __future__ import annotations

import io

import pytest

from eff.cli import EXIT_OK, EXIT_RUNTIME, EXIT_SYNTAX, EXIT_TYPE, RunConfig, main, repl

from .test_acceptance import YINYANG


def run_main(tmp_path, capsys, source: str, *flags: str):
    path = tmp_path / "prog.eff"
    path.write_text(source)
    code = main([*flags, str(path)])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize(
    "source,code,fragment",
    [
        ("1 + 2", EXIT_OK, "3 : int"),
        ("let c = new choice in c#decide ()", EXIT_RUNTIME, "uncaught operation"),
        ("1 / 0", EXIT_RUNTIME, "runtime error"),
        ("1 + true", EXIT_TYPE, "type error"),
        ("let x = in 3", EXIT_SYNTAX, "syntax error"),
    ],
)
def test_exit_codes(tmp_path, capsys, source, code, fragment):
    got, out, err = run_main(tmp_path, capsys, source)
    assert got == code
    assert fragment in (out + err)


def test_type_error_location(tmp_path, capsys):
    code, _, err = run_main(tmp_path, capsys, "let f x = x + 1\n;; f true")
    assert code == EXIT_TYPE
    assert "prog.eff:2:" in err


def test_sequencing_modes(tmp_path, capsys):
    src = '(std#write "a"; "x") ^ (std#write "b"; "y")'
    assert run_main(tmp_path, capsys, src, "--sequencing=error")[0] == EXIT_SYNTAX
    code, _, err = run_main(tmp_path, capsys, src)
    assert code == EXIT_OK and "warning" in err
    code, _, err = run_main(tmp_path, capsys, src, "--sequencing=silent")
    assert code == EXIT_OK and err == ""


def test_ast_prints_core_without_running(tmp_path, capsys):
    code, out, _ = run_main(tmp_path, capsys, 'std#write "hi"; 1 + 2', "--ast")
    assert code == EXIT_OK
    assert "std#write" in out and "3 : int" not in out


def test_checked_yinyang_is_rejected(tmp_path, capsys):
    assert run_main(tmp_path, capsys, YINYANG)[0] == EXIT_TYPE


def test_output_is_deterministic(tmp_path, capsys):
    src = "let c = new choice in with choose_all c handle (c#decide (), c#decide ())"
    first = run_main(tmp_path, capsys, src)
    assert first == run_main(tmp_path, capsys, src)
    assert "[(true, true); (true, false); (false, true); (false, false)]" in first[1]


def test_repl_session():
    stdin = io.StringIO(
        "let x = 4\n"
        ";; x *\n x\n"
        ";; 1 + true\n"
        ";; let a = new choice\n"
        ";; let b = new choice\n"
        ";; type t = A | B\n"
    )
    out, err = io.StringIO(), io.StringIO()
    assert repl(RunConfig(), stdin=stdin, stdout=out, stderr=err) == EXIT_OK
    lines = out.getvalue().splitlines()
    assert lines[0] == "val x : int = 4"
    assert lines[1] == "16 : int"
    assert "type error" in err.getvalue()
    assert "#1" in lines[2] and "#2" in lines[3]
    assert len(lines) == 4
