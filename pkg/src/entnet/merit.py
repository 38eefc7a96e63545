"""Figures of merit and optimal-strategy solvers for one/two repeaters and the square cell.

Bell-restricted optima reduce to choosing the four outcome probabilities
inside [pmin, pmax]: the payoff of an outcome with probability p is
h(p) = min(f(p), g(p)) with f(p) = 2*g1*p linear increasing and
g(p) = p - sqrt(p^2 - K) decreasing convex, so the optimal distribution
clusters probabilities around the crossing point p* of f and g.  Four
regimes result, selected by comparing p* against pmin, (1-pmax)/3 and 1/4.

General (non-Bell) measurements are searched numerically: the four vectors
are the columns of a 4x4 unitary built from 16 angles (a product of complex
plane rotations and phases), maximized by coordinate descent with a
golden-section line search from many restarts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numba import njit

from .measurement import (
    OutcomeEnsemble,
    ProjectiveMeasurement,
    bell_from_probabilities,
    prob_interval,
    xz_basis,
    zz_basis,
)
from .states import PureState, clamp01


@dataclass(frozen=True)
class MeritReport:
    """Average concurrence, worst-case entanglement, and average SCP of an ensemble."""

    avg_concurrence: float
    wce: float
    scp: float


def merits(e: OutcomeEnsemble) -> MeritReport:
    """Evaluate the three figures of merit over an outcome ensemble."""
    outs = e.outcomes
    if not outs:
        raise ValueError("cannot evaluate merits of an empty ensemble")
    avg_c = math.fsum(o.prob * o.conc for o in outs)
    wce = 2.0 * min(o.lam for o in outs)
    avg_s = 2.0 * math.fsum(o.prob * o.lam for o in outs)
    return MeritReport(avg_c, wce, avg_s)


# --- one repeater -----------------------------------------------------------

def one_repeater_max_concurrence(a: PureState, b: PureState) -> float:
    """Best average concurrence, reached by any Bell measurement: 4*sqrt(a0 a1 b0 b1)."""
    return 4.0 * math.sqrt(a.s0 * a.s1 * b.s0 * b.s1)


def one_repeater_max_wce(a: PureState, b: PureState) -> float:
    """Best worst-case entanglement, reached by the XZ basis: 1 - sqrt(1 - 16 a0 a1 b0 b1)."""
    x = min(1.0, 16.0 * a.s0 * a.s1 * b.s0 * b.s1)
    return x / (1.0 + math.sqrt(1.0 - x))


def one_repeater_max_scp(a: PureState, b: PureState) -> float:
    """Best average SCP, reached by the ZZ basis: 2*min(a1, b1)."""
    return 2.0 * min(a.s1, b.s1)


# --- shared Bell-restricted machinery ---------------------------------------

@njit(cache=True)
def _h_payoff(p: float, k_prod: float, g1: float) -> float:
    f = 2.0 * g1 * p
    disc = p * p - k_prod
    g = p - math.sqrt(disc) if disc > 0.0 else p
    return f if f < g else g


@njit(cache=True)
def _bell_probs(pstar: float, pmin: float, pmax: float) -> np.ndarray:
    probs = np.empty(4)
    if pmax - pmin < 1e-15 or pstar >= 0.25:
        probs[:] = 0.25
    elif pstar <= pmin:
        probs[0] = pmin
        probs[1] = pmin
        probs[2] = pmax
        probs[3] = pmax
    elif pstar <= (1.0 - pmax) / 3.0:
        probs[0] = pstar
        probs[1] = pstar
        probs[2] = pmax
        probs[3] = 1.0 - 2.0 * pstar - pmax
    else:
        probs[0] = pstar
        probs[1] = pstar
        probs[2] = pstar
        probs[3] = 1.0 - 3.0 * pstar
    return probs


@njit(cache=True)
def _two_rep_bell_value(k_prod: float, pmin: float, pmax: float, g0: float, g1: float) -> float:
    if g1 <= 1e-15:
        return 0.0
    pstar = 0.5 * math.sqrt(k_prod / (g0 * g1))
    probs = _bell_probs(pstar, pmin, pmax)
    s = 0.0
    for i in range(4):
        s += _h_payoff(probs[i], k_prod, g1)
    return s


@njit(cache=True)
def _triangle_max(alpha0: float, phi0: float) -> float:
    # best SCP across the diagonal of the square, given a first-swap outcome
    # with larger coefficient alpha0 and two fresh phi bonds: the remaining
    # optimization is a two-repeater problem with third state 1/(2*alpha0)
    phi1 = 1.0 - phi0
    g0 = 1.0 / (2.0 * alpha0)
    g1 = 1.0 - g0
    k_prod = (phi0 * phi1) * (phi0 * phi1)
    pmin = phi0 * phi1
    pmax = 0.5 * (phi0 * phi0 + phi1 * phi1)
    return 2.0 * (1.0 - alpha0) + alpha0 * _two_rep_bell_value(k_prod, pmin, pmax, g0, g1)


def _select_probs(pstar: float, pmin: float, pmax: float) -> tuple[str, tuple[float, float, float, float]]:
    if pmax - pmin < 1e-15 or pstar >= 0.25:
        return "uniform", (0.25, 0.25, 0.25, 0.25)
    if pstar <= pmin:
        return "endpoints", (pmin, pmin, pmax, pmax)
    if pstar <= (1.0 - pmax) / 3.0:
        return "pair_at_crossing", (pstar, pstar, pmax, 1.0 - 2.0 * pstar - pmax)
    return "triple_at_crossing", (pstar, pstar, pstar, 1.0 - 3.0 * pstar)


# --- two repeaters -----------------------------------------------------------

@dataclass(frozen=True)
class TwoRepeaterPlan:
    """Bell-optimal strategy for two consecutive swaps (second one in ZZ)."""

    pstar: float
    regime: str
    probs: tuple[float, float, float, float]
    scp_bell: float
    scp_numeric: float | None = None


def two_repeater_pstar(a: PureState, b: PureState, c: PureState) -> float:
    """Crossing point p* = sqrt(a0 a1 b0 b1 / (c0 c1)) / 2 of the payoff branches."""
    k_prod = a.s0 * a.s1 * b.s0 * b.s1
    denom = c.s0 * c.s1
    if denom <= 0.0:
        return math.inf
    return 0.5 * math.sqrt(k_prod / denom)


def two_repeater_bell_plan(a: PureState, b: PureState, c: PureState) -> TwoRepeaterPlan:
    """Best Bell measurement for the first swap of the chain a-b-c.

    The first measurement acts on (a, b); every outcome is then swapped with c
    in the ZZ basis, which is optimal for the last step.
    """
    iv = prob_interval(a, b)
    pstar = two_repeater_pstar(a, b, c)
    regime, probs = _select_probs(pstar, iv.pmin, iv.pmax)
    k_prod = a.s0 * a.s1 * b.s0 * b.s1
    value = math.fsum(_h_payoff(p, k_prod, c.s1) for p in probs)
    return TwoRepeaterPlan(pstar, regime, probs, clamp01(value))


def window_bounds(b: PureState, c: PureState, grid: int = 4096) -> tuple[float, float] | None:
    """Range of first-state a0 where non-Bell measurements can beat the Bell plan.

    The endpoints solve p*(a1) = (1 - pmax(a1))/3 and p*(a2) = pmin(a2) in
    a0 over (1/2, 1); returns None when either equation has no root there.
    """
    b0, b1 = b.s0, b.s1
    denom = c.s0 * c.s1

    def pstar(a0: float) -> float:
        if denom <= 0.0:
            return math.inf
        return 0.5 * math.sqrt(a0 * (1.0 - a0) * b0 * b1 / denom)

    def f_upper(a0: float) -> float:
        pmax = 0.5 * (a0 * b0 + (1.0 - a0) * b1)
        return pstar(a0) - (1.0 - pmax) / 3.0

    def f_lower(a0: float) -> float:
        pmin = 0.5 * (a0 * b1 + (1.0 - a0) * b0)
        return pstar(a0) - pmin

    a_lo = _first_downcrossing(f_upper, grid)
    a_hi = _first_downcrossing(f_lower, grid)
    if a_lo is None or a_hi is None or a_lo >= a_hi:
        return None
    return a_lo, a_hi


def _first_downcrossing(f: Callable[[float], float], grid: int) -> float | None:
    xs = np.linspace(0.5 + 1e-9, 1.0 - 1e-12, grid)
    prev_x, prev_f = xs[0], f(xs[0])
    for x in xs[1:]:
        cur = f(x)
        if prev_f > 0.0 >= cur:
            lo, hi = prev_x, x
            for _ in range(100):
                mid = 0.5 * (lo + hi)
                if f(mid) > 0.0:
                    lo = mid
                else:
                    hi = mid
            return 0.5 * (lo + hi)
        prev_x, prev_f = x, cur
    return None


# --- numeric optimizer over general projective measurements ------------------
#
# Parameterization: U(4) = G01 G02 G03 G12 G13 G23 D, where G_ij(theta, phi)
# is a complex plane rotation in coordinates (i, j) and D carries four column
# phases (irrelevant to any figure of merit, kept for completeness).  The same
# Givens order recovers the angles of an arbitrary unitary by QR-style
# elimination, which lets the search start from any known-good measurement.

_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
_PAIRS_ARR = np.array(_PAIRS, dtype=np.int64)
_TWO_PI = 2.0 * math.pi


@njit(cache=True)
def _unitary_from_angles(angles: np.ndarray) -> np.ndarray:
    u = np.zeros((4, 4), dtype=np.complex128)
    for d in range(4):
        u[d, d] = complex(math.cos(angles[12 + d]), math.sin(angles[12 + d]))
    for pi in range(5, -1, -1):
        i = _PAIRS_ARR[pi, 0]
        j = _PAIRS_ARR[pi, 1]
        c = math.cos(angles[2 * pi])
        s = math.sin(angles[2 * pi])
        e = complex(math.cos(angles[2 * pi + 1]), math.sin(angles[2 * pi + 1]))
        ec = e.conjugate()
        for col in range(4):
            vi = u[i, col]
            vj = u[j, col]
            u[i, col] = c * vi - s * ec * vj
            u[j, col] = s * e * vi + c * vj
    return u


def _angles_from_unitary(v: np.ndarray) -> np.ndarray:
    """Invert :func:`_unitary_from_angles` by Givens elimination."""
    a = np.array(v, dtype=complex)
    angles = np.zeros(16)
    for pi, (i, j) in enumerate(_PAIRS):
        mag_ji = abs(a[j, i])
        if mag_ji < 1e-15:
            continue
        ph = math.atan2(a[j, i].imag, a[j, i].real) - math.atan2(a[i, i].imag, a[i, i].real)
        th = math.atan2(mag_ji, abs(a[i, i]))
        c, s = math.cos(th), math.sin(th)
        e = complex(math.cos(ph), math.sin(ph))
        row_i = c * a[i, :] + e.conjugate() * s * a[j, :]
        row_j = -e * s * a[i, :] + c * a[j, :]
        a[i, :], a[j, :] = row_i, row_j
        angles[2 * pi] = th
        angles[2 * pi + 1] = ph
    angles[12:16] = np.angle(np.diag(a))
    return angles


@njit(cache=True)
def _abs2(z: complex) -> float:
    return z.real * z.real + z.imag * z.imag


@njit(cache=True)
def _objective(kind: int, angles: np.ndarray, q0: float, q1: float, q2: float) -> float:
    # kind 0: two-repeater SCP, params (a0, b0, c1)
    # kind 1: square-cell SCP, params (phi0, -, -)
    u = _unitary_from_angles(angles)
    if kind == 0:
        a0, b0, g1 = q0, q1, q2
        a1 = 1.0 - a0
        b1 = 1.0 - b0
        four_k = 4.0 * a0 * a1 * b0 * b1
        s = 0.0
        for m in range(4):
            p = a0 * (b0 * _abs2(u[0, m]) + b1 * _abs2(u[1, m])) + a1 * (
                b0 * _abs2(u[2, m]) + b1 * _abs2(u[3, m])
            )
            det = u[0, m] * u[3, m] - u[1, m] * u[2, m]
            disc = p * p - four_k * _abs2(det)
            g = p - math.sqrt(disc) if disc > 0.0 else p
            f = 2.0 * g1 * p
            s += f if f < g else g
        return s
    phi0 = q0
    phi1 = 1.0 - phi0
    four_k = 4.0 * (phi0 * phi1) * (phi0 * phi1)
    s = 0.0
    for m in range(4):
        p = phi0 * (phi0 * _abs2(u[0, m]) + phi1 * _abs2(u[1, m])) + phi1 * (
            phi0 * _abs2(u[2, m]) + phi1 * _abs2(u[3, m])
        )
        if p < 1e-15:
            continue
        det = u[0, m] * u[3, m] - u[1, m] * u[2, m]
        c2 = four_k * _abs2(det) / (p * p)
        if c2 > 1.0:
            c2 = 1.0
        lam = 0.5 * (1.0 - math.sqrt(1.0 - c2))
        s += p * _triangle_max(1.0 - lam, phi0)
    return s


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@njit(cache=True)
def _descend(kind: int, angles: np.ndarray, q0: float, q1: float, q2: float,
             tol: float, max_sweeps: int) -> float:
    value = _objective(kind, angles, q0, q1, q2)
    n_scan = 12
    stall = 0
    for _ in range(max_sweeps):
        sweep_start = value
        for i in range(16):
            best_t = angles[i]
            best_v = value
            for ksc in range(n_scan):
                t = _TWO_PI * ksc / n_scan
                angles[i] = t
                v = _objective(kind, angles, q0, q1, q2)
                if v > best_v:
                    best_v = v
                    best_t = t
            lo = best_t - _TWO_PI / n_scan
            hi = best_t + _TWO_PI / n_scan
            c = hi - _INVPHI * (hi - lo)
            d = lo + _INVPHI * (hi - lo)
            angles[i] = c
            fc = _objective(kind, angles, q0, q1, q2)
            angles[i] = d
            fd = _objective(kind, angles, q0, q1, q2)
            for _ in range(45):
                if fc > fd:
                    hi, d, fd = d, c, fc
                    c = hi - _INVPHI * (hi - lo)
                    angles[i] = c
                    fc = _objective(kind, angles, q0, q1, q2)
                else:
                    lo, c, fc = c, d, fd
                    d = lo + _INVPHI * (hi - lo)
                    angles[i] = d
                    fd = _objective(kind, angles, q0, q1, q2)
            t_ref = c if fc > fd else d
            v_ref = fc if fc > fd else fd
            if v_ref > best_v:
                best_v = v_ref
                best_t = t_ref
            angles[i] = best_t
            value = best_v
        if value - sweep_start < tol:
            stall += 1
            if stall >= 2:
                break
        else:
            stall = 0
    return value


def _measurement_angles(m: ProjectiveMeasurement) -> np.ndarray:
    u = np.column_stack([v.amps for v in m.vectors])
    return _angles_from_unitary(u)


def _optimize_measurement(kind: int, params: tuple[float, float, float],
                          starts: list[np.ndarray], rng: np.random.Generator,
                          restarts: int, tol: float, max_sweeps: int) -> float:
    best = -math.inf
    for r in range(restarts):
        if r < len(starts):
            angles = starts[r].copy()
        else:
            angles = rng.uniform(0.0, _TWO_PI, size=16)
        value = _descend(kind, angles, params[0], params[1], params[2], tol, max_sweeps)
        if value > best:
            best = value
    return best


def two_repeater_numeric_scp(
    a: PureState,
    b: PureState,
    c: PureState,
    restarts: int = 50,
    seed: int = 42,
    tol: float = 1e-9,
    max_sweeps: int = 250,
) -> float:
    """Best SCP over general first measurements (second swap fixed to ZZ).

    The Bell-optimal plan is one of the starting points, so the result never
    falls below the Bell value.
    """
    plan = two_repeater_bell_plan(a, b, c)
    rng = np.random.default_rng(seed)
    starts = [
        _measurement_angles(bell_from_probabilities(plan.probs, a, b)),
        _measurement_angles(zz_basis()),
        _measurement_angles(xz_basis()),
    ]
    value = _optimize_measurement(0, (a.s0, b.s0, c.s1), starts, rng, restarts, tol, max_sweeps)
    return clamp01(max(value, plan.scp_bell))


# --- the square cell ----------------------------------------------------------

def square_singlet_threshold() -> float:
    """Largest phi0 for which two XZ swaps plus distillation yield a certain singlet."""
    return 0.5 * (1.0 + math.sqrt(1.0 - math.sqrt(2.0 * (math.sqrt(2.0) - 1.0))))


def square_alpha_star(phi: PureState) -> float:
    """First-outcome coefficient below which the second (XZ) stage finishes the singlet."""
    w = 4.0 * phi.s0 * phi.s1
    return 1.0 / (1.0 + math.sqrt(max(0.0, 1.0 - w * w)))


def square_pstar(phi: PureState) -> float:
    """Crossing probability p* of the square payoff: phi0 phi1 / (2 sqrt(a* (1-a*)))."""
    a_star = square_alpha_star(phi)
    denom = a_star * (1.0 - a_star)
    if denom <= 0.0:
        return math.inf  # singlet bonds: the flat branch covers the whole range
    return phi.s0 * phi.s1 / (2.0 * math.sqrt(denom))


def square_bell_limit() -> float:
    """phi0 above which three outcome probabilities can no longer sit at p*.

    Solves 1 - 3 p*(phi0) = pmax(phi0); beyond this point Bell measurements
    stop being optimal for the square.
    """
    lo = square_singlet_threshold()
    hi = 0.75

    def gap(phi0: float) -> float:
        phi = PureState(phi0)
        pmax = 0.5 * (phi0 * phi0 + (1.0 - phi0) ** 2)
        return (1.0 - 3.0 * square_pstar(phi)) - pmax

    if not (gap(lo) < 0.0 < gap(hi)):
        raise RuntimeError("square feasibility bracket failed")
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if gap(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _square_h(p: float, phi0: float) -> float:
    if p <= 0.0:
        return 0.0
    phi1 = 1.0 - phi0
    c = min(1.0, phi0 * phi1 / p)
    lam = c * c / (2.0 * (1.0 + math.sqrt(max(0.0, 1.0 - c * c))))
    return p * _triangle_max(1.0 - lam, phi0)


@dataclass(frozen=True)
class SquarePlan:
    """Bell-optimal strategy for the square cell (swap, adaptive swap, distill)."""

    phi0: float
    singlet_threshold: float
    bell_limit: float
    pstar: float
    regime: str
    probs: tuple[float, float, float, float]
    scp_bell: float
    scp_numeric: float | None = None


def square_plan(phi: PureState) -> SquarePlan:
    """Best Bell first measurement for a square of four identical bonds."""
    iv = prob_interval(phi, phi)
    pstar = square_pstar(phi)
    regime, probs = _select_probs(pstar, iv.pmin, iv.pmax)
    value = math.fsum(_square_h(p, phi.s0) for p in probs)
    return SquarePlan(
        phi0=phi.s0,
        singlet_threshold=square_singlet_threshold(),
        bell_limit=square_bell_limit(),
        pstar=pstar,
        regime=regime,
        probs=probs,
        scp_bell=clamp01(value),
    )


def square_numeric_scp(
    phi: PureState,
    restarts: int = 50,
    seed: int = 42,
    tol: float = 1e-9,
    max_sweeps: int = 250,
) -> float:
    """Best square-cell SCP over general first measurements."""
    plan = square_plan(phi)
    rng = np.random.default_rng(seed)
    starts = [
        _measurement_angles(bell_from_probabilities(plan.probs, phi, phi)),
        _measurement_angles(zz_basis()),
        _measurement_angles(xz_basis()),
    ]
    value = _optimize_measurement(1, (phi.s0, 0.0, 0.0), starts, rng, restarts, tol, max_sweeps)
    return clamp01(max(value, plan.scp_bell))
