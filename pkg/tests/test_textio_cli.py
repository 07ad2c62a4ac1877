import json
import os
from fractions import Fraction

import pytest
from click.testing import CliRunner

from conftest import rand_series, series
from sigma_nabla import textio
from sigma_nabla.cli import main
from sigma_nabla.lfunctions import CharPolyTable
from sigma_nabla.modules import SigmaNablaModule
from sigma_nabla.padic import IntPolynomial, PadicNumber
from sigma_nabla.series import LaurentSeries, RingLabel

P, N = 3, 12


def S(terms, **kw):
    return series(P, N, terms, **kw)


def fixture_module():
    return SigmaNablaModule(
        RingLabel("EDagger"), P,
        [[S([(1, 1)])]],
        [[S([(-1, Fraction(1, P - 1))])]])


# ---------------------------------------------------------------------------
# Serialization roundtrips.
# ---------------------------------------------------------------------------


def test_scalar_roundtrip(rng):
    vals = [PadicNumber.from_rational(P, N, Fraction(7, 9)),
            PadicNumber.zero(P, N),
            PadicNumber.inexact_zero(P, N, 4),
            PadicNumber.from_int(P, N, -6)]
    for x in vals:
        back = textio.parse_scalar(P, N, textio.emit_scalar(x))
        assert back.compare(x) in ("equal", "indistinguishable")
        assert back.valuation == x.valuation


def test_series_roundtrip(rng):
    for _ in range(10):
        s = rand_series(rng, P, N, -5, 5, -1, 3, 4)
        doc = textio.emit_series_body(s)
        back = textio.parse_series_body(P, N, doc)
        assert back.window == s.window
        assert back.tail_free == s.tail_free
        assert back.base_floor == s.base_floor
        assert set(back.coeffs) == set(s.coeffs)
        for e in s.coeffs:
            assert back.coeffs[e].agrees(s.coeffs[e])


def test_module_roundtrip():
    mod = fixture_module()
    doc = textio.emit_module(mod)
    back = textio.parse_module(doc)
    assert back.ring == mod.ring
    assert back.q == mod.q
    assert back.phi[0][0].coefficient(1).agrees(mod.phi[0][0].coefficient(1))
    # through text
    text = textio.dumps(doc)
    again = textio.parse_module(textio.loads(text))
    assert again.rank == 1


def test_table_roundtrip(rng):
    t = CharPolyTable(4, ["a", "b"], [(0, 1), (1, 2)],
                      {("a", 0): IntPolynomial([1, -3, 4]),
                       ("b", 0): IntPolynomial([1, -3, 4]),
                       ("a", 1): IntPolynomial([1, 0, -8, 0, 16])})
    back = textio.parse_table(textio.loads(textio.dumps(textio.emit_table(t))))
    assert back.q == t.q and back.places == t.places
    assert back.polys[("a", 1)] == t.polys[("a", 1)]


def test_scalar_matrix_and_polynomial_roundtrip():
    mat = [[PadicNumber.from_int(P, N, 3), PadicNumber.zero(P, N)],
           [PadicNumber.from_rational(P, N, Fraction(1, 2)),
            PadicNumber.from_int(P, N, -1)]]
    doc = textio.emit_scalar_matrix(mat, P, N)
    back = textio.parse_scalar_matrix(doc)
    for ra, rb in zip(mat, back):
        for a, b in zip(ra, rb):
            assert a.compare(b) in ("equal", "indistinguishable")
    frs = [[Fraction(7, 3), Fraction(-2)]]
    assert textio.parse_scalar_matrix(textio.emit_scalar_matrix(frs)) == frs
    poly = IntPolynomial([1, 0, -4, 9])
    assert textio.parse_int_polynomial(
        textio.emit_int_polynomial(poly)) == poly


def test_ring_label_certificate_roundtrip():
    lab = RingLabel("GammaDagger", Fraction(1, 3), Fraction(5, 2))
    assert textio.parse_label(textio.emit_label(lab)) == lab


def test_env_var_overrides_window_cap(tmp_path):
    import subprocess
    import sys

    env = dict(os.environ, SIGMA_NABLA_MAX_WINDOW="64")
    out = subprocess.run(
        [sys.executable, "-m", "sigma_nabla.cli", "--help"],
        capture_output=True, text=True, env=env)
    assert out.returncode == 0
    assert "[default: 64]" in out.stdout


def test_parse_errors_carry_position():
    with pytest.raises(textio.ParseError) as exc:
        textio.loads("{\n  broken")
    assert exc.value.line is not None
    with pytest.raises(textio.ParseError):
        textio.loads('{"format_version": 99, "kind": "module"}')
    with pytest.raises(textio.ParseError):
        textio.loads('{"format_version": 1}')


def test_deterministic_output():
    doc = textio.emit_module(fixture_module())
    assert textio.dumps(doc) == textio.dumps(textio.emit_module(
        fixture_module()))


# ---------------------------------------------------------------------------
# CLI.
# ---------------------------------------------------------------------------


@pytest.fixture
def runner():
    return CliRunner()


def test_cli_check_module_holds(runner, tmp_path):
    path = tmp_path / "mod.json"
    textio.dump_path(str(path), textio.emit_module(fixture_module()))
    res = runner.invoke(main, ["check-module", str(path)])
    assert res.exit_code == 0
    rep = json.loads(res.output)
    assert rep["verdict"] == "holds"
    assert rep["floor"] >= N - 3


def test_cli_check_module_fails(runner, tmp_path):
    bad = SigmaNablaModule(RingLabel("Gamma"), P, [[S([(1, 1)])]],
                           [[S([])]])
    path = tmp_path / "bad.json"
    textio.dump_path(str(path), textio.emit_module(bad))
    res = runner.invoke(main, ["check-module", str(path)])
    assert res.exit_code == 1
    rep = json.loads(res.output)
    assert rep["verdict"] == "fails"
    assert rep["position"] == [0, 0]


def test_cli_factor_gamma_and_check_product(runner, tmp_path):
    x = [[S([(1, Fraction(1, P))]), S([])], [S([]), S([(0, 1)])]]
    xp = tmp_path / "x.json"
    textio.dump_path(str(xp), textio.emit_series_matrix(x, P, N))
    res = runner.invoke(main, ["factor", "gamma", str(xp)])
    assert res.exit_code == 0
    rep = json.loads(res.output)
    res2 = runner.invoke(main, ["check-product", rep["y_path"],
                                rep["z_path"], str(xp)])
    assert res2.exit_code == 0


def test_cli_compat_mismatch_exit_one(runner, tmp_path):
    t = CharPolyTable(2, ["a", "b"], [(0, 1)],
                      {("a", 0): IntPolynomial([1, -2]),
                       ("b", 0): IntPolynomial([1, -3])})
    path = tmp_path / "t.json"
    textio.dump_path(str(path), textio.emit_table(t))
    res = runner.invoke(main, ["compat", str(path)])
    assert res.exit_code == 1
    rep = json.loads(res.output)
    assert rep["verdict"] == "mismatch"


def test_cli_parse_error_exit_two(runner, tmp_path):
    path = tmp_path / "junk.json"
    path.write_text("{not json", encoding="utf-8")
    res = runner.invoke(main, ["check-module", str(path)])
    assert res.exit_code == 2


def test_cli_purity_and_pole_order(runner, tmp_path):
    t = CharPolyTable(4, ["a"], [(0, 1)],
                      {("a", 0): IntPolynomial([1, -3, 4])})
    tp = tmp_path / "t.json"
    textio.dump_path(str(tp), textio.emit_table(t))
    res = runner.invoke(main, ["purity", "-w", "1", str(tp)])
    assert res.exit_code == 0
    rep = json.loads(res.output)
    assert rep["verdict"] == "pure"

    poly = IntPolynomial([1, -4]) * IntPolynomial([1, -4])
    pp = tmp_path / "poly.json"
    textio.dump_path(str(pp), textio.emit_int_polynomial(poly))
    res2 = runner.invoke(main, ["pole-order", "--q", "2", "--d", "2",
                                str(pp)])
    assert res2.exit_code == 0
    assert json.loads(res2.output)["order"] == 2


def test_cli_lfunction_and_trace(runner, tmp_path):
    from conftest import affine_line_table, count_monic_irreducibles
    table = affine_line_table(2, 6, count_monic_irreducibles)
    tp = tmp_path / "table.json"
    textio.dump_path(str(tp), textio.emit_table(table))
    res = runner.invoke(main, ["lfunction", "--place", "p", "-T", "6",
                               str(tp)])
    assert res.exit_code == 0
    rep = json.loads(res.output)
    assert rep["coefficients"] == [str(2 ** k) for k in range(7)]

    coh = {"format_version": 1, "kind": "cohomology",
           "p0": ["1"], "p1": ["1"], "p2": ["1", "-2"]}
    cp = tmp_path / "coh.json"
    textio.dump_path(str(cp), coh)
    res2 = runner.invoke(main, ["trace-check", "--place", "p", "-T", "6",
                                str(tp), str(cp)])
    assert res2.exit_code == 0


def test_cli_slopes_and_probe(runner, tmp_path):
    mat = [[PadicNumber.from_int(5, 10, 0), PadicNumber.from_int(5, 10, 5)],
           [PadicNumber.from_int(5, 10, 1), PadicNumber.from_int(5, 10, 0)]]
    mp = tmp_path / "mat.json"
    textio.dump_path(str(mp), textio.emit_scalar_matrix(mat, 5, 10))
    res = runner.invoke(main, ["--p", "5", "slopes", str(mp)])
    assert res.exit_code == 0
    rep = json.loads(res.output)
    assert rep["slopes"] == [["1/2", 2]]
    assert rep["unit_root"] is False

    mod = SigmaNablaModule(RingLabel("E"), P, [[S([(0, 1)])]],
                           [[S([(0, Fraction(1, P))])]])
    mp2 = tmp_path / "mod.json"
    textio.dump_path(str(mp2), textio.emit_module(mod))
    res2 = runner.invoke(main, ["probe-nilpotence", str(mp2)])
    assert res2.exit_code == 1
    assert json.loads(res2.output)["verdict"] == "refuted"


def test_cli_average_and_companion(runner, tmp_path):
    job = {"format_version": 1, "kind": "projector_job", "field": "rational",
           "pi": [["0", "1"], ["0", "1"]],
           "frobenius": [["0", "1"], ["1", "0"]], "n": 2}
    jp = tmp_path / "job.json"
    textio.dump_path(str(jp), job)
    res = runner.invoke(main, ["average-projector", str(jp)])
    assert res.exit_code == 0
    assert json.loads(res.output)["projector"] == \
        [["1/2", "1/2"], ["1/2", "1/2"]]

    cjob = {"format_version": 1, "kind": "companion_job",
            "field": "rational", "f_g": [["5"]], "n": 2}
    cp = tmp_path / "cjob.json"
    textio.dump_path(str(cp), cjob)
    res2 = runner.invoke(main, ["companion", str(cp)])
    assert res2.exit_code == 0
    rep = json.loads(res2.output)
    assert rep["companion"] == [["0", "1"], ["5", "0"]]
    assert rep["nth_iterate"] == [["5", "0"], ["0", "5"]]


def test_cli_descend_and_glue(runner, tmp_path):
    import random

    from conftest import (
        const_series_matrix,
        rand_const_invertible,
        rand_gammaplus_dieudonne,
    )
    from dataclasses import replace

    from sigma_nabla.modules import basis_transform

    rng = random.Random(11)
    m_plus = rand_gammaplus_dieudonne(rng, P, N, 2)
    m1 = replace(m_plus, ring=RingLabel("Gamma"))
    z0, z0_inv = rand_const_invertible(rng, P, N, 2)
    x = const_series_matrix(z0, P, N)
    m2 = replace(basis_transform(m_plus, x, const_series_matrix(z0_inv, P, N)),
                 ring=RingLabel("EPlus"))
    for name, obj in (("m1", m1), ("m2", m2)):
        textio.dump_path(str(tmp_path / f"{name}.json"),
                         textio.emit_module(obj))
    textio.dump_path(str(tmp_path / "x.json"),
                     textio.emit_series_matrix(x, P, N))
    res = runner.invoke(main, ["glue", str(tmp_path / "m1.json"),
                               str(tmp_path / "m2.json"),
                               str(tmp_path / "x.json")])
    assert res.exit_code == 0
    rep = json.loads(res.output)
    assert rep["verdict"] == "holds"
    assert rep["module"]["ring"]["kind"] == "GammaPlus"

    from conftest import rand_eplus_module
    mod = replace(rand_eplus_module(rng, P, N, 2), ring=RingLabel("EDagger"))
    textio.dump_path(str(tmp_path / "mod.json"), textio.emit_module(mod))
    from sigma_nabla.linalg import smat_identity
    textio.dump_path(str(tmp_path / "ident.json"),
                     textio.emit_series_matrix(smat_identity(2, P, N), P, N))
    res2 = runner.invoke(main, ["descend", str(tmp_path / "mod.json"),
                                str(tmp_path / "ident.json")])
    assert res2.exit_code == 0
    assert json.loads(res2.output)["module"]["ring"]["kind"] == "EPlus"


def test_cli_horizontal(runner, tmp_path):
    mod = SigmaNablaModule(RingLabel("RPlus"), P, [[S([(0, 1)])]],
                           [[S([])]])
    mp = tmp_path / "mod.json"
    textio.dump_path(str(mp), textio.emit_module(mod))
    res = runner.invoke(main, ["--kmax", "6", "horizontal", str(mp)])
    assert res.exit_code == 0
    rep = json.loads(res.output)
    assert rep["degree_achieved"] == 6
    assert not rep["exhausted"]
