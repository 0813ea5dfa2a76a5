import sys

import pytest

from nilkahler import catalog, framework, process

KT = """\
dimension 2
d phi2 = phi[1;1]
form gamma = (1/4)*i*(phi[2;] - phi[;2])
form beta (1,0) = phi[1;]
"""


@pytest.fixture
def run(monkeypatch, capsys):
    monkeypatch.setattr(sys, "excepthook", sys.excepthook)

    def inner(*argv):
        code = framework.main(list(argv))
        return code, capsys.readouterr().out.splitlines()
    return inner


def test_verify_flags(run):
    code, lines = run("verify", "catalog:iwasawa", "--check", "parallelizable")
    assert code == 0
    assert lines[0].startswith("d2 outcome=certified")
    assert lines[1].startswith("verify outcome=certified")
    code, _ = run("verify", "catalog:kodaira-thurston", "--check", "parallelizable")
    assert code == 1
    code, lines = run("verify", "catalog:kodaira-thurston")
    assert code == 0
    assert len(lines) == 5


def test_structure_pkahler(run):
    code, lines = run("structure", "catalog:etabeta5", "--kind", "pkahler", "--p", "3", "--form", "Omega_star")
    assert code == 0
    assert lines[0].startswith("structure kind=pkahler p=3 closed=yes")
    assert lines[-1] == "verdict kind=pkahler outcome=certified"


def test_structure_metric(run):
    code, lines = run("structure", "catalog:iwasawa", "--kind", "kahler")
    assert code == 1
    assert lines[-1] == "verdict kind=kahler outcome=refuted"
    code, _ = run("structure", "catalog:iwasawa", "--kind", "balanced")
    assert code == 0


def test_structure_needs_a_form(run):
    code, lines = run("structure", "catalog:etabeta5", "--kind", "pkahler")
    assert code == 2
    assert lines == []


def test_transverse(run):
    code, lines = run("transverse", "catalog:etabeta5", "--form", "Omega_star", "--method", "split")
    assert code == 0
    assert lines[0].startswith("transverse outcome=certified method=split")


def test_minimizer_reports_are_deterministic(run):
    argv = ("transverse", "catalog:torus3", "--form", "omega", "--method", "minimize", "--seed", "7")
    first = run(*argv)
    second = run(*argv)
    assert first == second


def test_cohomology(run):
    code, lines = run("cohomology", "catalog:iwasawa", "--theory", "delbar", "--bidegree", "1,0")
    assert code == 0
    assert lines == ["cohomology theory=delbar bidegree=(1,0) dim=3"]
    _, lines = run("cohomology", "catalog:torus2", "--theory", "dR")
    assert [line.split()[-1] for line in lines] == ["dim=1", "dim=4", "dim=6", "dim=4", "dim=1"]


def test_class(run):
    code, lines = run("class", "catalog:etabeta5", "--form", "probe", "--theory", "delbar")
    assert code == 1
    assert "class=nonzero" in lines[0]
    code, lines = run("class", "catalog:kodaira-thurston", "--form", "beta", "--theory", "delbar")
    assert code == 1


def test_deform(run):
    code, lines = run("deform", "--curve", "catalog:etabeta5-psi", "--omega", "Omega", "--expect-curve")
    assert code == 1
    assert lines[0].startswith("maurer-cartan outcome=certified")
    assert "class=nonzero" in lines[2]
    code, lines = run("deform", "--curve", "catalog:etabeta5-psi", "--omega", "Omega_star", "--expect-curve",
                      "--t", "1/3")
    assert code == 0
    assert lines[-1].startswith("deformed-delbar t=1/3 zero=yes")
    code, _ = run("deform", "--curve", "catalog:etabeta5-psi", "--omega", "Omega")
    assert code == 0


def test_catalog_commands(run):
    code, lines = run("catalog", "list")
    assert code == 0
    assert len(lines) == len(catalog.names())
    code, lines = run("catalog", "show", "iwasawa")
    assert "dimension 3" in lines
    assert any(line.startswith("# expect [PAPER] ab") for line in lines)
    code, lines = run("catalog", "selftest", "torus2")
    assert code == 0
    assert lines[-1] == "selftest-summary total=3 failed=0"
    code, _ = run("catalog", "show")
    assert code == 2


def test_structure_file(run, tmp_path):
    path = tmp_path / "kt.nil"
    path.write_text(KT, encoding="utf-8")
    code, lines = run("diff", str(path), "--form", "gamma", "--op", "d")
    assert code == 0
    assert lines[0].startswith("diff op=d form=gamma zero=no")
    code, _ = run("structure", str(path), "--kind", "skt")
    assert code == 0


def test_input_errors(run, tmp_path):
    assert run("diff", "catalog:iwasawa", "--form", "nothing")[0] == 2
    assert run("verify", "catalog:klein-bottle")[0] == 2
    broken = tmp_path / "broken.nil"
    broken.write_text("dimension 2\nd phi2 = phi[1;1] +\n", encoding="utf-8")
    assert run("verify", str(broken))[0] == 2


def test_usage_errors(run):
    with pytest.raises(SystemExit) as info:
        run("cohomology", "catalog:iwasawa", "--bidegree", "one")
    assert info.value.code == 2
    with pytest.raises(SystemExit):
        run("structure", "catalog:iwasawa", "--kind", "hyperkahler")


def test_unreadable_files_are_input_errors(run, tmp_path):
    assert run("verify", str(tmp_path / "missing.nil"))[0] == 2
    binary = tmp_path / "binary.nil"
    binary.write_bytes(b"dimension 2\n\xff\xfe\n")
    assert run("verify", str(binary))[0] == 2


def test_bad_parameter_is_a_usage_error(run):
    with pytest.raises(SystemExit) as info:
        run("deform", "--curve", "catalog:etabeta5-psi", "--omega", "Omega", "--t", "abc")
    assert info.value.code == 2
    with pytest.raises(SystemExit):
        run("deform", "--curve", "catalog:etabeta5-psi", "--omega", "Omega", "--t", "1/0")


def test_unexpected_errors_fail_the_process(run, monkeypatch):
    def broken(args):
        raise ZeroDivisionError("boom")
    monkeypatch.setitem(process.COMMANDS, "verify", broken)
    with pytest.raises(RuntimeError):
        run("verify", "catalog:iwasawa")
