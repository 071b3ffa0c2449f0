import io
import subprocess
import sys

import pytest

from progring.cli import EXHAUSTED, FALSE, INPUT_ERROR, OK, main

REGISTERS = ("f.(get+(set:+testeq:)(0+1+2)(0+1+2)(0+1+2))"
            "+g.(get+(set+testeq)(:)(true+false+error))")
J = "(push:+topeq:)(0+1+2)+pop"
BODY = "+g.get;f.set:012;-f.testeq:012;!;f.get;!"


def cli(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return write


# -- interface commands ---------------------------------------------------------

def test_eq_true():
    assert cli("eq", "b1.get+b4.set:false+b4.set:true", "b(1.get+4.set:(fals+tru)e)") == (OK, "true\n")


def test_eq_false():
    assert cli("eq", "a", "b") == (FALSE, "false\n")


def test_leq():
    assert cli("leq", "b2.set:false", "b2.set:false+f.g") == (OK, "true\n")
    assert cli("leq", "ab", "a") == (FALSE, "false\n")


def test_normalize():
    assert cli("normalize", "b+a(c+d)") == (OK, "ac+ad+b\n")
    assert cli("normalize", "a@b+@") == (OK, "a@\n")
    assert cli("normalize", "@") == (OK, "@\n")


def test_derive_and_filter():
    assert cli("derive", "a.b", "a.+a.b+a.bc") == (OK, "c\n")
    assert cli("filter", "a.b", "a.+a.b+a.bc") == (OK, "a.\n")
    assert cli("derive", "z", "a") == (OK, "@\n")


def test_classify_example_interface():
    code, text = cli("classify", REGISTERS)
    lines = text.splitlines()
    assert code == OK
    assert lines[0] == "FMI, 62 words"
    assert lines[2] == "g: get+set:error+set:false+set:true+testeq:error+testeq:false+testeq:true"
    assert lines[1].startswith("f: get+set:000+")


@pytest.mark.parametrize("expr, first", [
    (J, "MI, 7 words"),
    ("@", "FMI and MI, 0 words"),
    ("a.b.c", "neither, 1 word"),
])
def test_classify_kinds(expr, first):
    assert cli("classify", expr)[1].splitlines()[0] == first


# -- programs -----------------------------------------------------------------------

def test_pglb_parse(files):
    path = files("p.pglb", "-b1.get;#3;b4.set:false;#3;b4.set:true;!\n")
    assert cli("pglb", "parse", path) == (OK, (
        "1: negative-test -b1.get\n2: forward-jump #3\n3: basic b4.set:false\n"
        "4: forward-jump #3\n5: basic b4.set:true\n6: termination !\n"))
    assert cli("pglb", "render", path) == (OK, "-b1.get;#3;b4.set:false;#3;b4.set:true;!\n")
    assert cli("pglb", "basics", path) == (OK, "b1.get+b4.set:false+b4.set:true\n")


def test_extract(files):
    path = files("p.pglb", "-b1.get;#3;b4.set:false;#3;b4.set:true;!")
    assert cli("extract", path) == (OK, (
        "0: b1.get ? 1 : 2\n1: b4.set:false ? 3 : 3\n2: b4.set:true ? 4 : 4\n3: D\n4: S\n"))
    assert cli("extract", path, "--unfold", "2") == (
        OK, "((cut <| b4.set:false |> cut) <| b1.get |> (cut <| b4.set:true |> cut))\n")


def test_check(files):
    path = files("p.pglb", "#3;b2.set:false;!;!")
    assert cli("check", "requires", "b2.set:false", path) == (OK, "true\n")
    assert cli("check", "subrequires", "b2.set:false+f.g", path) == (OK, "true\n")
    assert cli("check", "subrequires", "b2.set:false+" + REGISTERS, path) == (OK, "true\n")
    assert cli("check", "n-requires 1", "@", path) == (OK, "true\n")
    assert cli("check", "n-requires 2", "b2.set:false", path) == (OK, "true\n")
    assert cli("check", "n-requires 1", "b2.set:false", path) == (FALSE, "false\n")
    assert cli("check", "subrequires", "b2.set:false", path, "--proper") == (FALSE, "false\n")


def test_run_trace(files):
    path = files("p.pglb", "c.push:1;+c.topeq:1;b.set:true;f.m;!")
    code, text = cli("run", path, "--service", "c=stack", "--service", "b=boolreg false")
    assert code == FALSE
    assert text == ("c.push:1 -> true\nc.topeq:1 -> true\nb.set:true -> true\n"
                    "f.m -> no service\nD\n")


def test_run_to_stop(files):
    path = files("p.pglb", "+c.pop;\\#1;!")
    assert cli("run", path, "--service", "c=counter 2") == (
        OK, "c.pop -> true\nc.pop -> true\nc.pop -> false\nS\n")


# -- compositions --------------------------------------------------------------------

@pytest.fixture
def bundle(files):
    return files("comp.txt", f"# component\ninterface: {REGISTERS} + c.({J})\n"
                             f"mode: subrequires\nbody: c.push:0;\n  {BODY}\n")


def test_use_component(bundle):
    code, text = cli("use", bundle, "c", "counter 2")
    assert code == OK
    lines = text.splitlines()
    assert lines[0].startswith("f.get+f.set:000+") and "c." not in lines[0]
    assert lines[1] == "0: g.get ? 1 : 2"


def test_use_component_unfolded(files):
    path = files("c.txt", "interface: c.(push:0+pop)\nbody: c.push:0;-c.pop;!;\\#2\n")
    for n in range(3):
        a = cli("use", path, "c", f"counter {n}", "--unfold", "50")
        assert a == (OK, "@\nS\n")


def test_use_non_matching(files):
    path = files("c.txt", f"interface: {REGISTERS}\nbody: c.push:0;{BODY}\n")
    assert cli("use", path, "c", "counter 1") == (FALSE, "@\n0: D\n")


def test_apply_component(files):
    path = files("c.txt", f"interface: c.({J})\nbody: c.push:0;c.push:0;!\n")
    assert cli("apply", path, "c", "counter 1") == (OK, f"{normal(J)}\nstack 0,0,0\n")
    bad = files("d.txt", f"interface: {REGISTERS}\nbody: c.push:0;c.push:0;!\n")
    assert cli("apply", bad, "c", "counter 1") == (FALSE, "@\nempty\n")


def normal(expr):
    return cli("normalize", expr)[1].strip()


def test_service_files(files):
    files("toggle.fsm", "service toggle\ninterface flip+read\ninitial off\n"
                        "off flip -> true on\noff read -> false off\n"
                        "on flip -> false off\non read -> true on\n")
    svc = files("svc.txt", "service: toggle.fsm\ninterface: flip\n")
    comp = files("c.txt", "interface: c.flip\nbody: c.flip;!\n")
    assert cli("apply", comp, "c", svc) == (OK, "flip\nfsm toggle state on\n")
    fsm = svc.replace("svc.txt", "toggle.fsm")
    assert cli("apply", comp, "c", fsm) == (OK, "flip+read\nfsm toggle state on\n")
    builtin = files("b.txt", "service: boolreg true\n")
    comp2 = files("c2.txt", "interface: c.get\nbody: c.get;!\n")
    assert cli("apply", comp2, "c", builtin) == (OK, "get+set:false+set:true\nboolreg true\n")


# -- errors ---------------------------------------------------------------------------

def test_budget_exhausted(files):
    path = files("c.txt", "interface: f.x+c.push:0\nbody: f.x;c.push:0;\\#1\n")
    code, text = cli("use", path, "c", "counter 0", "--budget", "30")
    assert code == EXHAUSTED
    assert text == "f.x\n"
    path = files("d.txt", "interface: c.push:0\nbody: c.push:0;\\#1\n")
    assert cli("apply", path, "c", "counter 0", "--budget", "30")[0] == EXHAUSTED


@pytest.mark.parametrize("argv", [
    ["normalize", "a+"],
    ["eq", "a", "(b"],
    ["bogus"],
    ["check", "2-requires", "a.b", "/nonexistent"],
    ["use", "/nonexistent", "c", "counter 1"],
])
def test_input_errors(argv, capsys):
    assert cli(*argv)[0] == INPUT_ERROR
    err = capsys.readouterr().err.strip()
    assert err and "\n" not in err


def test_bad_files(files, capsys):
    bad_prog = files("p.pglb", "f.m;;!")
    assert cli("extract", bad_prog)[0] == INPUT_ERROR
    assert "position 4" in capsys.readouterr().err
    no_body = files("c.txt", "interface: f.m\n")
    assert cli("use", no_body, "c", "counter 0")[0] == INPUT_ERROR
    not_fmi = files("d.txt", "interface: a.b.c\nbody: !\n")
    assert cli("use", not_fmi, "c", "counter 0")[0] == INPUT_ERROR
    comp = files("e.txt", "interface: c.m\nbody: c.m;!\n")
    assert cli("use", comp, "c", "counter x")[0] == INPUT_ERROR
    bad_fsm = files("t.fsm", "service t\ninterface m\ninitial a\n")
    assert cli("use", comp, "c", bad_fsm)[0] == INPUT_ERROR


def test_module_entry_point():
    done = subprocess.run([sys.executable, "-m", "progring", "derive", "a.b", "a.+a.b+a.bc"],
                          capture_output=True, text=True)
    assert done.returncode == 0 and done.stdout == "c\n"
