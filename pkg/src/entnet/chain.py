"""Repeater chains: exact outcome enumeration, the ZZ closed form, and decay rates.

A chain of N repeaters joins N+1 identical bonds; swapping sequentially and
merging outcomes with equal Schmidt pairs keeps the exact ensemble tractable.
Under ZZ measurements every reachable state has Schmidt coefficients
proportional to (phi0^m, phi1^m) for an integer label m, so the chain reduces
to a random walk on the labels: m -> m+1 with probability
(phi0^(m+1) + phi1^(m+1)) / (phi0^m + phi1^m), else m -> |m-1|.  Summing over
walk paths gives the closed form

    S_zz(N) = 1 - (phi0 - phi1) * sum_{k=0}^{floor(N/2)} (phi0 phi1)^k binom(2k, k),

which decreases only when the walk can sit at the singlet label m = 0, i.e.
only on even steps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .measurement import (
    OutcomeEnsemble,
    ProjectiveMeasurement,
    SwapOutcome,
    swap,
    xz_basis,
    zz_basis,
)
from .states import PureState, clamp01

#: exact enumeration bound (4^N raw outcomes before merging)
MAX_EXACT_REPEATERS = 12

STRATEGIES = ("cs", "xz", "zz")


@dataclass(frozen=True)
class ChainSpec:
    """A 1D chain of ``n_repeaters`` joining identical bonds in ``state``."""

    n_repeaters: int
    state: PureState

    def __post_init__(self) -> None:
        if self.n_repeaters < 0:
            raise ValueError("number of repeaters must be nonnegative")


@dataclass(frozen=True)
class ZzWalkState:
    """Walk label m and its probability after a number of ZZ swaps."""

    m: int
    prob: float


def _bond_outcome(state: PureState) -> SwapOutcome:
    lam = state.s1
    conc = 2.0 * math.sqrt(state.s0 * state.s1)
    return SwapOutcome(1.0, state, lam, conc)


def enumerate_chain(
    spec: ChainSpec,
    basis_per_repeater: ProjectiveMeasurement | Sequence[ProjectiveMeasurement],
    merge_tol: float = 1e-12,
) -> OutcomeEnsemble:
    """Exact outcome ensemble of the chain, merging equal Schmidt pairs."""
    n = spec.n_repeaters
    if n > MAX_EXACT_REPEATERS:
        raise ValueError(f"exact enumeration supports at most {MAX_EXACT_REPEATERS} repeaters")
    if isinstance(basis_per_repeater, ProjectiveMeasurement):
        bases = [basis_per_repeater] * n
    else:
        bases = list(basis_per_repeater)
        if len(bases) != n:
            raise ValueError(f"need one basis per repeater ({n}), got {len(bases)}")

    current = [_bond_outcome(spec.state)]
    for basis in bases:
        expanded: list[SwapOutcome] = []
        for out in current:
            for sub in swap(out.state, spec.state, basis).outcomes:
                expanded.append(
                    SwapOutcome(out.prob * sub.prob, sub.state, sub.lam, sub.conc)
                )
        expanded.sort(key=lambda o: o.lam)
        merged: list[SwapOutcome] = []
        for o in expanded:
            if merged and abs(o.lam - merged[-1].lam) <= merge_tol:
                prev = merged[-1]
                merged[-1] = SwapOutcome(prev.prob + o.prob, prev.state, prev.lam, prev.conc)
            else:
                merged.append(o)
        current = merged
    return OutcomeEnsemble(tuple(current))


def _central_binomial_weight(k: int, x: float) -> float:
    """(x)^k * binom(2k, k); exact integers up to k = 30, log-gamma beyond."""
    if k <= 30:
        return (x ** k) * float(math.comb(2 * k, k))
    if x <= 0.0:
        return 0.0
    return math.exp(
        k * math.log(x) + math.lgamma(2 * k + 1) - 2.0 * math.lgamma(k + 1)
    )


def scp_zz_closed_form(n_repeaters: int, phi: PureState) -> float:
    """SCP of ZZ measurements on an N-repeater chain (exact summation)."""
    if n_repeaters < 0:
        raise ValueError("number of repeaters must be nonnegative")
    p0, p1 = phi.s0, phi.s1
    total = math.fsum(
        _central_binomial_weight(k, p0 * p1) for k in range(n_repeaters // 2 + 1)
    )
    return clamp01(1.0 - (p0 - p1) * total)


def zz_walk(spec: ChainSpec) -> list[ZzWalkState]:
    """Distribution over walk labels after the chain's ZZ swaps (start m = 1)."""
    if spec.n_repeaters < 1:
        raise ValueError("the walk needs at least one repeater")
    p0, p1 = spec.state.s0, spec.state.s1
    dist = {1: 1.0}
    for _ in range(spec.n_repeaters):
        nxt: dict[int, float] = {}
        for m, prob in dist.items():
            up = (p0 ** (m + 1) + p1 ** (m + 1)) / (p0 ** m + p1 ** m)
            if up > 0.0:
                nxt[m + 1] = nxt.get(m + 1, 0.0) + prob * up
            if up < 1.0:
                down = abs(m - 1)
                nxt[down] = nxt.get(down, 0.0) + prob * (1.0 - up)
        dist = nxt
    return [ZzWalkState(m, dist[m]) for m in sorted(dist)]


def walk_label_s1(m: int, phi: PureState) -> float:
    """Smaller Schmidt coefficient of the label-m walk state."""
    if m == 0:
        return 0.5
    ratio = (phi.s0 / phi.s1) ** m if phi.s1 > 0.0 else math.inf
    return 0.0 if math.isinf(ratio) else 1.0 / (1.0 + ratio)


def zz_walk_scp(spec: ChainSpec) -> float:
    """SCP evaluated from the walk distribution, 2 * sum prob * s1(m)."""
    phi = spec.state
    return clamp01(
        2.0 * math.fsum(w.prob * walk_label_s1(w.m, phi) for w in zz_walk(spec))
    )


def strategy_scp(spec: ChainSpec, strategy: str) -> float:
    """SCP of a named chain strategy.

    "cs" converts every bond into a singlet independently, (2 phi1)^N;
    "xz" iterates the worst-case-entanglement map once per repeater;
    "zz" is the closed form.
    """
    phi = spec.state
    n = spec.n_repeaters
    if strategy == "cs":
        return (2.0 * phi.s1) ** n
    if strategy == "xz":
        s = 2.0 * phi.s1
        k4 = 4.0 * phi.s0 * phi.s1
        for _ in range(n):
            # 1 - sqrt(1 - x) written stably; the direct form underflows once
            # the SCP drops near machine epsilon
            x = min(1.0, k4 * s * (2.0 - s))
            s = x / (1.0 + math.sqrt(1.0 - x))
        return clamp01(s)
    if strategy == "zz":
        return scp_zz_closed_form(n, phi)
    raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")


def decay_rate(strategy: str, phi: PureState, n_range: Sequence[int]) -> float:
    """Least-squares slope of log SCP versus N over the upper half of ``n_range``.

    The lower half is discarded to suppress transients of the asymptotic decay.
    """
    ns = sorted(int(n) for n in n_range)
    if len(ns) < 10:
        raise ValueError("need at least 10 chain lengths for a decay fit")
    upper = ns[len(ns) // 2 :]
    xs = np.array(upper, dtype=float)
    ys = np.array(
        [math.log(strategy_scp(ChainSpec(n, phi), strategy)) for n in upper]
    )
    return float(np.polyfit(xs, ys, 1)[0])


def basis_for_strategy(strategy: str) -> ProjectiveMeasurement:
    """Measurement basis used at every repeater by the xz / zz strategies."""
    if strategy == "xz":
        return xz_basis()
    if strategy == "zz":
        return zz_basis()
    raise ValueError(f"strategy {strategy!r} has no per-repeater basis")
