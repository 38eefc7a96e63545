from __future__ import annotations

import math

import pytest

from entnet import PureState
from entnet.chain import (
    ChainSpec,
    basis_for_strategy,
    decay_rate,
    enumerate_chain,
    scp_zz_closed_form,
    strategy_scp,
    walk_label_s1,
    zz_walk,
    zz_walk_scp,
)
from entnet.merit import merits
from entnet.measurement import xz_basis, zz_basis

PHI = PureState(0.7)


def test_zero_repeaters_is_the_bond_itself():
    ens = enumerate_chain(ChainSpec(0, PHI), [])
    assert len(ens.outcomes) == 1
    assert ens.outcomes[0].state.s0 == PHI.s0
    assert merits(ens).scp == pytest.approx(0.6, abs=1e-15)


def test_single_zz_swap_scp():
    ens = enumerate_chain(ChainSpec(1, PHI), zz_basis())
    assert merits(ens).scp == pytest.approx(0.6, abs=1e-12)


def test_two_zz_swaps_scp():
    ens = enumerate_chain(ChainSpec(2, PHI), zz_basis())
    assert merits(ens).scp == pytest.approx(0.432, abs=1e-12)
    assert merits(ens).scp == pytest.approx(scp_zz_closed_form(2, PHI), abs=1e-12)


def test_closed_form_examples():
    assert scp_zz_closed_form(1, PHI) == pytest.approx(0.6, abs=1e-15)
    assert scp_zz_closed_form(2, PHI) == pytest.approx(0.432, abs=1e-15)
    assert scp_zz_closed_form(3, PHI) == pytest.approx(0.432, abs=1e-15)
    for n in range(0, 12):
        assert scp_zz_closed_form(n, PureState(0.5)) == 1.0


def test_closed_form_matches_enumeration():
    for phi0 in (0.55, 0.7, 0.9):
        phi = PureState(phi0)
        for n in range(0, 9):
            exact = merits(enumerate_chain(ChainSpec(n, phi), zz_basis())).scp
            assert abs(exact - scp_zz_closed_form(n, phi)) <= 1e-12


def test_even_step_only_decrease():
    values = [scp_zz_closed_form(n, PHI) for n in range(0, 21)]
    for n in range(len(values) - 1):
        assert values[n + 1] <= values[n] + 1e-15
    for k in range(0, 10):
        assert values[2 * k + 1] == values[2 * k]
        if 2 * k + 2 < len(values):
            assert values[2 * k + 2] < values[2 * k + 1]


def test_zz_walk_single_step():
    walk = zz_walk(ChainSpec(1, PHI))
    dist = {w.m: w.prob for w in walk}
    assert dist[0] == pytest.approx(0.42, abs=1e-12)
    assert dist[2] == pytest.approx(0.58, abs=1e-12)


def test_zz_walk_matches_closed_form():
    for n in range(1, 21):
        assert zz_walk_scp(ChainSpec(n, PHI)) == pytest.approx(
            scp_zz_closed_form(n, PHI), abs=1e-12
        )


def test_zz_walk_deterministic_for_product_bonds():
    walk = zz_walk(ChainSpec(6, PureState(1.0)))
    assert len(walk) == 1 and walk[0].m == 7
    assert zz_walk_scp(ChainSpec(6, PureState(1.0))) == 0.0


def test_zz_walk_path_weights_depend_only_on_length():
    # branch-tree enumeration rooted one step before the chain starts (the
    # root holds m = 0 and both of its branches reach m = 1 with weight 1/2):
    # every branch path back to m = 0 after n swaps carries the same weight
    # (phi0 phi1)^k with k = (n+1)/2, and there are binom(2k, k) of them
    p0, p1 = PHI.s0, PHI.s1

    def up(m):
        return (p0 ** (m + 1) + p1 ** (m + 1)) / (p0 ** m + p1 ** m)

    for n in range(1, 10, 2):
        weights = []

        def walk_paths(m, step, weight):
            if step == n + 1:
                if m == 0:
                    weights.append(weight)
                return
            walk_paths(m + 1, step + 1, weight * up(m))
            walk_paths(abs(m - 1), step + 1, weight * (1 - up(m)))

        walk_paths(0, 0, 1.0)
        k = (n + 1) // 2
        expected = (p0 * p1) ** k
        assert len(weights) == math.comb(2 * k, k)
        for w in weights:
            assert w == pytest.approx(expected, rel=1e-12)
        dist = {w.m: w.prob for w in zz_walk(ChainSpec(n, PHI))}
        assert dist.get(0, 0.0) == pytest.approx(sum(weights), rel=1e-12)


def test_walk_label_coefficients():
    assert walk_label_s1(0, PHI) == 0.5
    assert walk_label_s1(1, PHI) == pytest.approx(0.3, abs=1e-15)
    assert walk_label_s1(50, PHI) < 1e-15


def test_strategy_cs_power_rule():
    assert strategy_scp(ChainSpec(3, PHI), "cs") == pytest.approx(0.6**3, abs=1e-15)


def test_strategy_xz_matches_enumeration():
    for n in (1, 2, 3):
        ens = enumerate_chain(ChainSpec(n, PHI), xz_basis())
        assert strategy_scp(ChainSpec(n, PHI), "xz") == pytest.approx(
            merits(ens).scp, abs=1e-12
        )


def test_strategy_ordering_at_large_n():
    n = 30
    cs = strategy_scp(ChainSpec(n, PHI), "cs")
    xz = strategy_scp(ChainSpec(n, PHI), "xz")
    zz = strategy_scp(ChainSpec(n, PHI), "zz")
    assert cs < xz < zz


def test_scp_nonincreasing_in_n():
    for strategy in ("cs", "xz", "zz"):
        values = [strategy_scp(ChainSpec(n, PHI), strategy) for n in range(0, 25)]
        for a, b in zip(values, values[1:]):
            assert b <= a + 1e-15


def test_scp_below_concurrence_bound():
    # ensemble SCP never exceeds the ensemble average concurrence
    for basis in (zz_basis(), xz_basis()):
        for n in (1, 2, 4):
            r = merits(enumerate_chain(ChainSpec(n, PHI), basis))
            assert r.scp <= r.avg_concurrence + 1e-12


def test_chain_concurrence_product_formula():
    # any Bell-basis chain attains the average concurrence (2 sqrt(p0 p1))^(N+1)
    for basis in (zz_basis(), xz_basis()):
        for n in range(0, 7):
            r = merits(enumerate_chain(ChainSpec(n, PHI), basis))
            expected = (2.0 * math.sqrt(PHI.s0 * PHI.s1)) ** (n + 1)
            assert r.avg_concurrence == pytest.approx(expected, abs=1e-12)


def test_mixed_bases_enumeration():
    ens = enumerate_chain(ChainSpec(2, PHI), [zz_basis(), xz_basis()])
    assert math.fsum(o.prob for o in ens.outcomes) == pytest.approx(1.0, abs=1e-12)


def test_decay_rates():
    assert decay_rate("cs", PHI, range(2, 40)) == pytest.approx(math.log(0.6), abs=1e-10)
    assert decay_rate("xz", PHI, range(2, 241)) == pytest.approx(math.log(0.84), abs=1e-6)
    assert decay_rate("zz", PHI, range(20, 61)) == pytest.approx(0.5 * math.log(0.84), abs=2e-2)


def test_preconditions():
    with pytest.raises(ValueError):
        ChainSpec(-1, PHI)
    with pytest.raises(ValueError):
        enumerate_chain(ChainSpec(13, PHI), zz_basis())
    with pytest.raises(ValueError):
        enumerate_chain(ChainSpec(2, PHI), [zz_basis()])
    with pytest.raises(ValueError):
        strategy_scp(ChainSpec(2, PHI), "bogus")
    with pytest.raises(ValueError):
        decay_rate("cs", PHI, range(2, 8))
    with pytest.raises(ValueError):
        zz_walk(ChainSpec(0, PHI))
    with pytest.raises(ValueError):
        basis_for_strategy("cs")
