import cmath
import math

import numpy as np
import pytest

from mzqfi import engine
from mzqfi.engine import (
    StateSpecError,
    build_mode_state,
    heatmap,
    loss_scan,
    parse_complex,
    parse_state_spec,
    phase_scan,
    single_qfi_report,
)
from mzqfi.fock import TruncationError

TANH1 = math.tanh(1.0)


def test_parse_complex():
    assert parse_complex("2i") == 2j
    assert parse_complex("1+1i") == 1 + 1j
    assert parse_complex("-0.5") == -0.5
    got = parse_complex("1.5@0.5")
    assert abs(got - cmath.rect(1.5, 0.5)) < 1e-15
    for bad in ("zz", "", "1e999", "1@@2"):
        with pytest.raises(StateSpecError):
            parse_complex(bad)


def test_parse_state_spec():
    s = parse_state_spec("coherent:2i")
    assert s.kind == "coherent" and s.param == 2j and s.dim is None
    s = parse_state_spec("squeezed:0.8:40")
    assert s.kind == "squeezed" and s.dim == 40
    s = parse_state_spec("fock:3")
    assert s.param == 3
    for bad in ("gaussian:1", "coherent", "fock:1.5", "fock:-2", "coherent:1:0", "coherent:1:xx"):
        with pytest.raises(StateSpecError):
            parse_state_spec(bad)


def test_build_mode_state_dims():
    spec = parse_state_spec("coherent:1")
    assert build_mode_state(spec, 30).dim == 30
    spec_fixed = parse_state_spec("coherent:1:25")
    assert build_mode_state(spec_fixed, 30).dim == 25  # explicit dim wins
    with pytest.raises(TruncationError):
        build_mode_state(parse_state_spec("coherent:1:4"))
    with pytest.raises(StateSpecError):
        build_mode_state(parse_state_spec("cat-:0"))


def test_report_fock_port():
    rep = single_qfi_report("coherent:2i", "fock:3")
    assert abs(rep["f_numeric"] - 31.0) < 1e-6
    assert abs(rep["f_analytic"] - 31.0) < 1e-12
    assert rep["pmc_vacuous"] and rep["pmc_satisfied"]
    assert rep["parity_b"] == "odd"
    assert rep["matches_matched"] is True
    assert rep["rel_discrepancy"] < 1e-8
    assert rep["support_rank"] == 1
    assert rep["loss_T"] is None


def test_report_matched_cat():
    rep = single_qfi_report("coherent:1i", "cat+:1")
    assert abs(rep["f_numeric"] - 5.284782467867295) < 1e-8
    assert rep["pmc_satisfied"] and not rep["pmc_vacuous"]
    assert rep["pmc_residual"] < 1e-9
    assert rep["matches_matched"] is True
    assert abs(rep["nbar_b"] - TANH1) < 1e-9


def test_report_unmatched_cat():
    rep = single_qfi_report("coherent:1", "cat+:1")
    assert not rep["pmc_satisfied"]
    assert abs(rep["pmc_residual"] - math.pi) < 1e-9
    assert rep["matches_matched"] is False
    assert rep["f_numeric"] < rep["f_matched"]


def test_report_lossy():
    rep = single_qfi_report("coherent:1i", "cat+:1", loss_t=0.8)
    assert rep["loss_T"] == 0.8
    assert rep["f_analytic"] is not None
    assert rep["rel_discrepancy"] < 1e-8
    assert rep["matches_matched"] is None
    assert rep["support_rank"] > 1


def test_report_unbalanced_has_no_analytic():
    rep = single_qfi_report("coherent:1i", "cat+:1", tau=math.pi / 4)
    assert rep["f_analytic"] is None and rep["f_matched"] is None
    assert rep["f_numeric"] > 0


def test_phase_scan_cat_example():
    out = phase_scan("coherent:1", "cat+:1", scan="a-phase", points=36)
    assert out["columns"][0] == "phi"
    assert len(out["rows"]) == 36
    foot = out["footer"]
    assert abs(foot["argmax_phi_numeric"] - math.pi / 2) < 1e-12
    assert abs(foot["predicted_phi"] - math.pi / 2) < 1e-12
    assert foot["residual_from_predicted"] < 1e-12
    assert all(row[4] == 0 for row in out["rows"])  # no truncation warnings
    assert all(row[3] is not None and row[3] < 1e-6 for row in out["rows"])


def test_phase_scan_squeezed_example():
    beta = f"coherent:1@{math.pi / 8}"
    out = phase_scan(beta, "squeezed:0.6", scan="b-phase", points=36)
    foot = out["footer"]
    assert abs(foot["argmax_phi_numeric"] - math.pi / 4) < 1e-12
    assert abs(foot["predicted_phi"] - math.pi / 4) < 1e-12
    assert foot["residual_from_predicted"] < 1e-12


def test_phase_scan_lossy():
    out = phase_scan("coherent:1.2i", "cat+:1.2", points=24, loss_t=0.8)
    foot = out["footer"]
    assert abs(foot["argmax_phi_numeric"] - math.pi / 2) < 1e-12
    assert foot["residual_from_predicted"] < 1e-12
    assert all(row[3] < 1e-6 for row in out["rows"])


def test_phase_scan_rejections():
    with pytest.raises(StateSpecError):
        phase_scan("fock:2", "cat+:1", scan="a-phase", points=8)
    with pytest.raises(StateSpecError):
        phase_scan("coherent:1", "cat+:1", scan="sideways", points=8)
    with pytest.raises(StateSpecError):
        phase_scan("coherent:1", "cat+:1", points=1)
    with pytest.raises(StateSpecError):
        phase_scan("coherent:1", "fock:2", points=8, loss_t=0.9)


def test_loss_scan_schema_and_lossless_row():
    out = loss_scan("coherent:1i", "cat+:1", t_min=0.5, t_max=1.0, points=5)
    assert out["columns"][0] == "transmission"
    last = out["rows"][-1]
    assert abs(last[0] - 1.0) < 1e-12
    assert abs(last[1] - 5.284782467867295) < 1e-6
    n_total = 1.0 + TANH1
    assert abs(out["footer"]["shot_noise"] - n_total) < 1e-12
    rc = 2.0 / (1.0 + 4.0 * (n_total + 1.0))
    assert abs(out["footer"]["critical_reflection"] - rc) < 1e-12
    assert last[6] == 1  # beats shot noise when lossless
    assert all(row[8] == 0 for row in out["rows"])
    # monotone non-decreasing in T
    f_vals = [row[1] for row in out["rows"]]
    assert all(lo <= hi + 1e-9 for lo, hi in zip(f_vals, f_vals[1:]))


def test_loss_scan_rejects_other_families():
    with pytest.raises(StateSpecError):
        loss_scan("coherent:1i", "squeezed:0.5", points=3)
    with pytest.raises(StateSpecError):
        loss_scan("coherent:2i", "cat+:1", points=3)  # magnitudes differ
    with pytest.raises(StateSpecError):
        loss_scan("coherent:1i", "cat+:1", t_min=0.0, points=3)


def test_heatmap_cat_diagonal():
    out = heatmap(family="cat", n_min=1.0, n_max=8.0, points=8)
    assert len(out["rows"]) == 64
    for na, nb, ratio in out["rows"]:
        if na == nb:
            assert abs(ratio - (1.0 + 1.0 / (2.0 * na))) < 1e-12
    foot = out["footer"]
    assert all(flag == 1 for flag in foot["antidiagonal_within_one_cell"])
    assert len(foot["antidiagonal_n_total"]) == len(foot["antidiagonal_argmax_offset"])


def test_heatmap_squeezed_ratio_exceeds_one_region():
    out = heatmap(family="squeezed", n_min=0.5, n_max=12.0, points=12)
    ratios = [r for _, _, r in out["rows"]]
    assert max(ratios) > 1.0
    with pytest.raises(StateSpecError):
        heatmap(family="thermal")


def test_scan_determinism():
    a = phase_scan("coherent:1", "cat+:1", points=12, workers=4)
    b = phase_scan("coherent:1", "cat+:1", points=12, workers=1)
    assert a["rows"] == b["rows"]
    assert a["footer"] == b["footer"]
