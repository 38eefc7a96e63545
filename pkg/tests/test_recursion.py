from __future__ import annotations

import numpy as np
import pytest

from entnet import PureState, distill_pair, scp
from entnet.merit import one_repeater_max_wce, square_singlet_threshold
from entnet.recursion import (
    FixedPointReport,
    analyze,
    centipede_step,
    diamond_step,
    fixed_points,
    make_map,
    threshold,
    tree_step,
    tree_threshold_closed_form,
    wce_swap,
)


def _compose_wce_distill_equal(e):
    """Independent route for the diamond step: swap two identical bonds, distill."""
    phi = PureState.from_ent(e)
    w = one_repeater_max_wce(phi, phi)
    psi = PureState.from_ent(w)
    return scp(distill_pair(psi, psi))


def test_diamond_step_examples():
    assert diamond_step(1.0) == 1.0
    assert diamond_step(0.0) == 0.0
    assert diamond_step(0.2) < 0.2
    e_th = threshold("diamond")
    assert diamond_step(e_th) == pytest.approx(e_th, abs=1e-9)


def test_diamond_step_matches_composition():
    for e in np.linspace(0.0, 1.0, 101):
        assert diamond_step(float(e)) == pytest.approx(_compose_wce_distill_equal(float(e)), abs=1e-12)


def test_diamond_fixed_points_and_stability():
    report = analyze(make_map("diamond"), start=0.36, max_iters=1000)
    values = [round(v, 3) for v, _ in report.fixed_points]
    labels = {round(v, 3): s for v, s in report.fixed_points}
    assert values == [0.0, 0.349, 1.0]
    assert labels[0.0] == "stable"
    assert labels[1.0] == "stable"
    assert labels[0.349] == "unstable"
    assert report.reaches_one and report.steps_to_one is not None


def test_diamond_below_threshold_decays():
    report = analyze(make_map("diamond"), start=0.3, max_iters=2000)
    assert not report.reaches_one


def test_diamond_one_step_singlet_region():
    # E >= E* = 2 (1 - phi0*) maps to exactly 1 in one step
    e_star = 2.0 * (1.0 - square_singlet_threshold())
    for e in np.linspace(e_star, 1.0, 20):
        assert diamond_step(float(e)) == 1.0
    assert diamond_step(e_star - 1e-6) < 1.0
    assert threshold("diamond") < e_star


def test_thresholds():
    assert threshold("diamond") == pytest.approx(0.349, abs=1e-3)
    assert threshold("tree") == pytest.approx(tree_threshold_closed_form(), abs=1e-4)
    assert threshold("tree") == pytest.approx(0.70029, abs=1e-4)
    assert threshold("centipede") == pytest.approx(0.649, abs=1e-3)


def test_tree_threshold_equals_diamond_one_step_boundary():
    assert tree_threshold_closed_form() == pytest.approx(
        2.0 * (1.0 - square_singlet_threshold()), abs=1e-12
    )


def test_tree_step_examples():
    e_th = threshold("tree")
    # a perfect singlet survives a contraction exactly down to the threshold
    assert tree_step(1.0, e_th) == 1.0
    assert tree_step(1.0, e_th - 1e-3) < 1.0
    assert tree_step(0.0, 0.8) == 0.0
    assert tree_step(0.5, 0.5) < 0.5


def test_tree_step_matches_composition():
    for e0 in (0.3, 0.6, 0.85):
        bond = PureState.from_ent(e0)
        for e in np.linspace(0.0, 1.0, 101):
            e_i = one_repeater_max_wce(bond, PureState.from_ent(float(e)))
            e_ii = one_repeater_max_wce(bond, PureState.from_ent(e_i))
            pair = PureState.from_ent(e_ii)
            expected = scp(distill_pair(pair, pair))
            assert tree_step(float(e), e0) == pytest.approx(expected, abs=1e-12)


def test_tree_fixed_points_below_threshold():
    report = analyze(make_map("tree", e0=0.3), start=0.29, max_iters=400)
    assert report.fixed_points == ((0.0, "stable"),)
    assert not report.reaches_one


def test_tree_reaches_one_above_threshold():
    report = analyze(make_map("tree", e0=0.75), start=0.75, max_iters=400)
    assert report.reaches_one
    assert report.steps_to_one is not None and report.steps_to_one < 50


def test_centipede_step_examples():
    e_th = threshold("centipede")
    assert centipede_step(1.0, e_th) == pytest.approx(1.0, abs=1e-9)
    # legs inject entanglement: E' > 0 even from E = 0
    assert centipede_step(0.0, 0.3) == pytest.approx(0.3, abs=1e-12)
    assert centipede_step(0.0, 0.0) == 0.0


def test_centipede_step_matches_composition():
    for e0 in (0.3, 0.65, 0.9):
        bond = PureState.from_ent(e0)
        for e in np.linspace(0.0, 1.0, 101):
            e_i = one_repeater_max_wce(bond, PureState.from_ent(float(e)))
            e_ii = one_repeater_max_wce(bond, PureState.from_ent(e_i))
            expected = scp(distill_pair(bond, PureState.from_ent(e_ii)))
            assert centipede_step(float(e), e0) == pytest.approx(expected, abs=1e-12)


def test_centipede_interior_fixed_point_small_e0():
    report = analyze(make_map("centipede", e0=0.3), start=0.0, max_iters=2000)
    interior = [(v, s) for v, s in report.fixed_points if 0.3 < v < 1.0]
    assert len(interior) == 1
    value, stability = interior[0]
    assert stability == "stable"
    assert not report.reaches_one


def test_centipede_finite_steps_above_threshold():
    e_th = threshold("centipede")
    report = analyze(make_map("centipede", e0=e_th + 1e-6), start=e_th, max_iters=10_000)
    assert report.reaches_one
    assert report.steps_to_one is not None


def test_steps_to_one_is_literal():
    rmap = make_map("diamond")
    report = analyze(rmap, start=0.8, max_iters=10)
    e = 0.8
    for i in range(1, report.steps_to_one + 1):
        e = rmap.eval(e)
    assert e == 1.0


def test_step_functions_monotone():
    grid = np.linspace(0.0, 1.0, 400)
    diamond = [diamond_step(float(e)) for e in grid]
    assert all(b >= a - 1e-12 for a, b in zip(diamond, diamond[1:]))
    for e0 in (0.2, 0.5, 0.8):
        tree = [tree_step(float(e), e0) for e in grid]
        centi = [centipede_step(float(e), e0) for e in grid]
        assert all(b >= a - 1e-12 for a, b in zip(tree, tree[1:]))
        assert all(b >= a - 1e-12 for a, b in zip(centi, centi[1:]))


def test_map_eval_bounds_and_zero():
    for kind, e0 in (("diamond", None), ("tree", 0.6), ("centipede", 0.0)):
        rmap = make_map(kind, e0)
        assert rmap.eval(0.0) == 0.0
        for e in np.linspace(0, 1, 50):
            assert 0.0 <= rmap.eval(float(e)) <= 1.0
    with pytest.raises(ValueError):
        make_map("diamond").eval(1.5)


def test_make_map_validation():
    with pytest.raises(ValueError):
        make_map("tree")
    with pytest.raises(ValueError):
        make_map("centipede", e0=1.5)
    with pytest.raises(ValueError):
        make_map("pyramid")
    with pytest.raises(ValueError):
        threshold("pyramid")
    with pytest.raises(ValueError):
        analyze(make_map("diamond"), start=0.5, max_iters=0)


def test_wce_swap_matches_one_repeater_wce():
    for ea in np.linspace(0, 1, 21):
        for eb in np.linspace(0, 1, 21):
            expected = one_repeater_max_wce(PureState.from_ent(float(ea)), PureState.from_ent(float(eb)))
            assert wce_swap(float(ea), float(eb)) == pytest.approx(expected, abs=1e-12)


def test_report_type():
    report = analyze(make_map("diamond"), start=0.5, max_iters=5)
    assert isinstance(report, FixedPointReport)
    assert isinstance(fixed_points(make_map("diamond")), tuple)
