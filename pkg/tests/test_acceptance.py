"""The ten acceptance criteria, each at its stated tolerance.

Every test prints one ``PASS``/``FAIL`` line; the lines are collected again in
the terminal summary.  Criterion 6 cannot be met as stated and is a strict
xfail: it still prints its ``FAIL`` line, and a supplementary test records
what the ladder does achieve.
"""
import math

import numpy as np
import pytest

from swirlbound import SigmaSchedule, make_grid, reference, simulate
from swirlbound.io import emit_diagnostics, read_checkpoint, write_checkpoint
from swirlbound.manufactured import mms_convergence
from swirlbound.norms import SpaceTimeSample, exponent_series, moser_ladder, omega_bar_sample
from swirlbound.verification import (axial_family, check_scaling, check_swirl_bounds,
                                     check_theorem_i, check_theorem_ii, collect_inputs,
                                     operator_convergence, refinement_spread,
                                     swirling_family, vortex_family)
from swirlbound.verification import helmholtz as hz

RADII = (0.25, 0.5, 1.0)


def test_exponent_series(verdict):
    res = exponent_series(5 / 3, "shifted", 40)
    closed = abs(res.limit - 2.5)
    sched = SigmaSchedule(40)
    sigma_gap = abs(sched.sigma(40) - 0.75)
    ok = closed <= 1e-12 and res.error <= 1e-6 and sigma_gap <= 2.0 ** -42
    verdict(1, ok, f"series limit off by {closed:.1e}, partial sum (40 terms) off by "
                   f"{res.error:.1e}, sigma_40 - 3/4 = {sigma_gap:.1e}")
    assert ok


def test_operator_convergence(verdict):
    res = operator_convergence((65, 129, 257))
    ratios = [q for qs in res.ratios.values() for q in qs]
    ok = all(3.2 <= q <= 4.8 for q in ratios)
    verdict(2, ok, "error ratios per halving " + ", ".join(
        f"{k} {min(v):.2f}..{max(v):.2f}" for k, v in res.ratios.items()))
    assert ok


def test_swirl_maximum_principle(annulus_run, verdict):
    rep = check_swirl_bounds(annulus_run)
    ok = annulus_run.error is None and rep.passed
    verdict(3, ok, f"tolerance {rep.tolerance:.2e}: sup increase {rep.sup_increase:.1e}, "
                   f"pointwise excess {rep.pointwise_excess:.1e} over "
                   f"{len(annulus_run)} outputs")
    assert ok, rep.failures


def test_manufactured_solution_order(verdict):
    res = mms_convergence((17, 33, 65))
    orders = res.gamma_orders + res.omega_orders
    ok = all(abs(p - 2.0) <= 0.3 for p in orders)
    verdict(4, ok, "orders Gamma " + ", ".join(f"{p:.3f}" for p in res.gamma_orders)
            + "; Omega " + ", ".join(f"{p:.3f}" for p in res.omega_orders))
    assert ok


def test_scaling_identities(verdict):
    worst, unit_exact = 0.0, True
    for family in (swirling_family(), axial_family(), vortex_family()):
        for k in (1.0, 0.5, 0.25):
            d = max(check_scaling(family, k, n_quad=64).discrepancies.values())
            worst = max(worst, d)
            unit_exact &= k != 1.0 or d == 0.0
    ok = worst <= 1e-8 and unit_exact
    verdict(5, ok, f"largest relative discrepancy {worst:.1e} over 3 families x 3 k; "
                   f"k = 1 exact: {unit_exact}")
    assert ok


# -- criterion 6 -------------------------------------------------------------------------

def _bump(r, z, t):
    return 1 + np.exp(-((r - 2.5) ** 2 + z ** 2)) * (1 + 0.5 * t)


def _wave(r, z, t):
    return 2 + np.sin(r) * np.cos(z / 2) * np.exp(t)


def _samples(extended_coarse):
    g = make_grid(0.8, 4.4, -4.4, 4.4, 181, 441)
    times = np.linspace(-1, 0, 129)
    out = {"Omega_plus": omega_bar_sample(extended_coarse)[1]}
    for name, f in (("bump", _bump), ("wave", _wave)):
        out[name] = SpaceTimeSample(g, times, np.array([g.evaluate(f, t) for t in times]))
    out["f=2"] = SpaceTimeSample(g, times, np.full((times.size,) + g.shape, 2.0))
    return out


@pytest.fixture(scope="module")
def ladder_samples(extended_coarse):
    return _samples(extended_coarse)


@pytest.mark.xfail(strict=True, reason="L^p at p = 2 (5/3)**8 is still 6-7% from the "
                                       "sup for smooth data; the gap decays like log(p)/p")
def test_moser_ladder_depth_eight(ladder_samples, verdict):
    gaps = {name: moser_ladder(s).relative_gap
            for name, s in ladder_samples.items() if name != "f=2"}
    const = moser_ladder(ladder_samples["f=2"]).tail
    ok = all(abs(g) <= 0.05 for g in gaps.values()) and abs(const / 4 - 1) <= 0.01
    verdict(6, ok, "L_8 / sup^2 - 1: " + ", ".join(f"{k} {g:+.2%}" for k, g in gaps.items())
            + f"; f=2 gives L_8 = {const:.4f}")
    assert ok


def test_moser_ladder_deeper_and_extrapolated(ladder_samples, verdict):
    deep = {name: moser_ladder(s, SigmaSchedule(12)) for name, s in ladder_samples.items()}
    smooth = {k: v for k, v in deep.items() if k != "f=2"}
    const = deep["f=2"]
    ok = (all(abs(r.relative_gap) <= 0.05 for r in smooth.values())
          and all(abs(r.extrapolated_gap) <= 0.01 for r in smooth.values())
          and abs(const.tail / 4 - 1) <= 0.01 and abs(const.extrapolated / 4 - 1) <= 0.01)
    verdict("6+", ok, "depth 12 gaps " + ", ".join(
        f"{k} {r.relative_gap:+.2%} (extrapolated {r.extrapolated_gap:+.2%})"
        for k, r in smooth.items()) + f"; f=2 gives {const.tail:.4f}, "
        f"extrapolated {const.extrapolated:.5f}")
    assert ok


# -- criteria 7 and 8 --------------------------------------------------------------------

@pytest.fixture(scope="module")
def proxy_inputs(extended_coarse, extended_fine):
    return (collect_inputs(extended_coarse, RADII), collect_inputs(extended_fine, RADII))


def _theorem(criterion, check, runs, inputs, verdict):
    coarse = check(runs[0], RADII, inputs=inputs[0])
    fine = check(runs[1], RADII, inputs=inputs[1])
    spread = refinement_spread(coarse, fine)
    finite = all(math.isfinite(r.ratio) for r in list(coarse) + list(fine))
    ok = (finite and spread < 2.0 and coarse.proxy_non_increasing
          and fine.proxy_non_increasing and coarse.passed and fine.passed)
    ratios = ", ".join(f"R={a.R:g} {a.ratio:.3g}/{b.ratio:.3g}" for a, b in zip(coarse, fine))
    verdict(criterion, ok, f"ratios coarse/fine {ratios}; spread {spread:.3f}; "
                           f"proxy monotone {coarse.proxy_non_increasing and fine.proxy_non_increasing}")
    return ok


def test_theorem_part_i(extended_coarse, extended_fine, proxy_inputs, verdict):
    assert _theorem(7, check_theorem_i, (extended_coarse, extended_fine), proxy_inputs,
                    verdict)


def test_theorem_part_ii(extended_coarse, extended_fine, proxy_inputs, verdict):
    assert _theorem(8, check_theorem_ii, (extended_coarse, extended_fine), proxy_inputs,
                    verdict)


def test_gradient_estimate_families(verdict):
    worst_spread, worst_scale, finite, parts = 0.0, 0.0, True, []
    for kind, solenoidal in (("helmholtz", False), ("axisym", True)):
        specs = hz.random_family(50, 7, solenoidal)
        for q in (2.0, 10 / 3):
            coarse = hz.family_sweep(specs, hz.family_grid(97), q, kind)
            fine = hz.family_sweep(specs, hz.family_grid(193), q, kind)
            scaled = hz.family_sweep(specs, hz.family_grid(97), q, kind, scale=3.0)
            finite &= bool(np.all(np.isfinite(coarse.ratios)) and np.all(np.isfinite(fine.ratios)))
            worst_spread = max(worst_spread, hz.relative_spread(coarse.max_ratio, fine.max_ratio))
            worst_scale = max(worst_scale, float(np.max(np.abs(scaled.ratios / coarse.ratios - 1))))
            parts.append(f"{kind} q={q:.3g} max {coarse.max_ratio:.4f}")
    ok = finite and worst_scale <= 1e-12 and worst_spread <= 0.10
    verdict(9, ok, "; ".join(parts) + f"; resolution spread {worst_spread:.1e}, "
                                      f"scale defect {worst_scale:.1e}")
    assert ok


def test_determinism_and_io(annulus_run, tmp_path, verdict):
    last = annulus_run.state(len(annulus_run) - 1)
    path = tmp_path / "final.axns"
    write_checkpoint(last, path)
    back = read_checkpoint(path, expected_grid=last.grid)
    exact = (back.t == last.t and np.array_equal(back.gamma, last.gamma)
             and np.array_equal(back.omega, last.omega))
    again = simulate(reference.annulus_config())
    emit_diagnostics(annulus_run.records, tmp_path / "a.csv")
    emit_diagnostics(again.records, tmp_path / "b.csv")
    same = (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    ok = exact and same
    verdict(10, ok, f"checkpoint round trip bit-exact: {exact}; repeated run CSV "
                    f"byte-identical: {same}")
    assert ok
