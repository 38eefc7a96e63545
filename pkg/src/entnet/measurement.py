"""Projective two-qubit measurements and entanglement swapping.

A swap is a projective measurement on the middle qubits of two shared pairs.
For a measurement vector u with amplitude matrix u_hat, the outcome reached
from Schmidt-form states alpha and beta is governed by X = alpha_hat @ u_hat
@ beta_hat: outcome probability p = sum_ij alpha_i beta_j |u_ij|^2, outcome
concurrence C = 2 |det X| / p, and smaller Schmidt coefficient
lam = (1 - sqrt(1 - C^2)) / 2.

Bell measurements (all four vectors maximally entangled) are characterized by
their outcome probabilities alone, each lying in [p_min, p_max] with
p_min = (a0 b1 + a1 b0)/2 and p_max = (a0 b0 + a1 b1)/2.  Conversely, any
probability vector in that interval summing to one is realized by some Bell
measurement; ``bell_from_probabilities`` constructs one explicitly by solving
the orthogonality system in the magic basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InfeasibleRegimeError
from .states import PureState, TwoQubitVector, clamp01, concurrence

#: orthonormality tolerance for measurement vectors
ORTHO_TOL = 1e-10

_INV_SQRT2 = 1.0 / math.sqrt(2.0)

# Columns are the four magic-basis vectors expressed over |00>,|01>,|10>,|11>.
# In this basis maximally entangled states have coordinates of a common phase,
# and the concurrence of coordinates mu is |sum_i mu_i^2|.
MAGIC_BASIS = _INV_SQRT2 * np.array(
    [
        [1.0, -1.0j, 0.0, 0.0],
        [0.0, 0.0, 1.0, -1.0j],
        [0.0, 0.0, -1.0, -1.0j],
        [1.0, 1.0j, 0.0, 0.0],
    ],
    dtype=complex,
)


def magic_coords(v: TwoQubitVector) -> np.ndarray:
    """Coordinates of ``v`` in the magic basis (complex in general)."""
    return MAGIC_BASIS.conj().T @ v.amps


def from_magic_coords(mu: Iterable[complex]) -> TwoQubitVector:
    """Inverse of :func:`magic_coords`."""
    return TwoQubitVector(MAGIC_BASIS @ np.asarray(list(mu), dtype=complex))


@dataclass(frozen=True)
class MagicBasisVector:
    """Real magic-basis coordinates; the natural form of a Bell-basis vector."""

    mu: tuple[float, float, float, float]

    def vector(self) -> TwoQubitVector:
        return from_magic_coords(self.mu)

    @classmethod
    def from_vector(cls, v: TwoQubitVector, tol: float = 1e-9) -> "MagicBasisVector":
        """Extract real coordinates, fixing the global phase; rejects non-Bell vectors."""
        c = magic_coords(v)
        s = complex(np.sum(c * c))
        if abs(abs(s) - 1.0) > tol:
            raise ValueError("vector is not maximally entangled; magic coordinates are not real")
        phase = np.exp(-0.5j * np.angle(s))
        real = (c * phase).real
        return cls(tuple(float(x) for x in real))


@dataclass(frozen=True)
class ProjectiveMeasurement:
    """Four orthonormal two-qubit vectors defining a projective measurement."""

    vectors: tuple[TwoQubitVector, ...]

    def __post_init__(self) -> None:
        vecs = tuple(self.vectors)
        if len(vecs) != 4:
            raise ValueError(f"a projective two-qubit measurement needs 4 vectors, got {len(vecs)}")
        g = np.array([[u.inner(v) for v in vecs] for u in vecs])
        if np.max(np.abs(g - np.eye(4))) > ORTHO_TOL:
            raise ValueError("measurement vectors are not orthonormal")
        object.__setattr__(self, "vectors", vecs)

    def magic_matrix(self) -> np.ndarray:
        """4x4 matrix of magic-basis coordinates, one row per vector."""
        return np.array([magic_coords(v) for v in self.vectors])


def bell_basis(u: np.ndarray) -> ProjectiveMeasurement:
    """Bell basis on the single-qubit basis obtained by rotating the first qubit.

    Rows of the 2x2 unitary ``u`` are the new up/down states of the first
    qubit; the second qubit keeps the computational basis.  Vectors are
    returned in the order (Phi+, Phi-, Psi+, Psi-).
    """
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2) or np.max(np.abs(u @ u.conj().T - np.eye(2))) > ORTHO_TOL:
        raise ValueError("basis rotation must be a 2x2 unitary")
    up, dn = u[0], u[1]
    phi_p = _INV_SQRT2 * np.array([up[0], 0, up[1], 0]) + _INV_SQRT2 * np.array([0, dn[0], 0, dn[1]])
    phi_m = _INV_SQRT2 * np.array([up[0], 0, up[1], 0]) - _INV_SQRT2 * np.array([0, dn[0], 0, dn[1]])
    psi_p = _INV_SQRT2 * np.array([0, up[0], 0, up[1]]) + _INV_SQRT2 * np.array([dn[0], 0, dn[1], 0])
    psi_m = _INV_SQRT2 * np.array([0, up[0], 0, up[1]]) - _INV_SQRT2 * np.array([dn[0], 0, dn[1], 0])
    return ProjectiveMeasurement(tuple(TwoQubitVector(a) for a in (phi_p, phi_m, psi_p, psi_m)))


def zz_basis() -> ProjectiveMeasurement:
    """Bell basis on the computational (sigma_z) basis of both qubits."""
    return bell_basis(np.eye(2))


def xz_basis() -> ProjectiveMeasurement:
    """Bell basis with the first qubit rotated to the sigma_x eigenbasis."""
    return bell_basis(_INV_SQRT2 * np.array([[1.0, 1.0], [1.0, -1.0]]))


@dataclass(frozen=True)
class SwapOutcome:
    """One measurement outcome: probability, resulting state, and its invariants."""

    prob: float
    state: PureState
    lam: float
    conc: float


@dataclass(frozen=True)
class OutcomeEnsemble:
    """Outcomes of one or more swaps; probabilities sum to one."""

    outcomes: tuple[SwapOutcome, ...]

    def __post_init__(self) -> None:
        outs = tuple(self.outcomes)
        if not outs:
            raise ValueError("outcome ensemble must not be empty")
        total = math.fsum(o.prob for o in outs)
        if abs(total - 1.0) > 1e-10:
            raise ValueError(f"outcome probabilities sum to {total}, not 1")
        object.__setattr__(self, "outcomes", outs)

    @property
    def probs(self) -> tuple[float, ...]:
        return tuple(o.prob for o in self.outcomes)

    def merged(self, tol: float = 1e-12) -> "OutcomeEnsemble":
        """Merge outcomes whose Schmidt pairs agree within ``tol``."""
        outs = sorted(self.outcomes, key=lambda o: o.lam)
        merged: list[SwapOutcome] = []
        for o in outs:
            if merged and abs(o.lam - merged[-1].lam) <= tol:
                prev = merged[-1]
                merged[-1] = SwapOutcome(prev.prob + o.prob, prev.state, prev.lam, prev.conc)
            else:
                merged.append(o)
        return OutcomeEnsemble(tuple(merged))


def swap(alpha: PureState, beta: PureState, m: ProjectiveMeasurement) -> OutcomeEnsemble:
    """Entanglement swapping of ``alpha`` and ``beta`` through measurement ``m``.

    Degenerate zero-probability outcomes are retained with lam = conc = 0 and
    a product outcome state.
    """
    a0, a1 = alpha.s0, alpha.s1
    b0, b1 = beta.s0, beta.s1
    w00, w01, w10, w11 = a0 * b0, a0 * b1, a1 * b0, a1 * b1
    outcomes = []
    for v in m.vectors:
        u = v.amps
        e00, e01, e10, e11 = _abs2(u[0]), _abs2(u[1]), _abs2(u[2]), _abs2(u[3])
        p = w00 * e00 + w01 * e01 + w10 * e10 + w11 * e11
        if p <= 1e-15:
            outcomes.append(SwapOutcome(max(p, 0.0), PureState(1.0), 0.0, 0.0))
            continue
        det_u = u[0] * u[3] - u[1] * u[2]
        # squared-gap expansion of p^2 - 4 K |det u|^2 = (sigma0^2 - sigma1^2)^2,
        # exact where the concurrence approaches 1 (plain 1 - C^2 cancels there)
        diag = w00 * e00 + w11 * e11
        off = w01 * e01 + w10 * e10
        cross = (u[0] * u[3]) * (u[1] * u[2]).conjugate()
        k_prod = w00 * w11
        disc = (
            (w00 * e00 - w11 * e11) ** 2
            + (w01 * e01 - w10 * e10) ** 2
            + 2.0 * diag * off
            + 8.0 * k_prod * cross.real
        )
        disc = max(disc, 0.0)
        four_k_det2 = 4.0 * k_prod * _abs2(det_u)
        lam = min(0.5, four_k_det2 / (2.0 * p * (p + math.sqrt(disc))))
        conc = clamp01(2.0 * math.sqrt(k_prod) * abs(det_u) / p)
        outcomes.append(SwapOutcome(p, PureState(1.0 - lam), lam, conc))
    return OutcomeEnsemble(tuple(outcomes))


def _abs2(z: complex) -> float:
    return z.real * z.real + z.imag * z.imag


@dataclass(frozen=True)
class ProbInterval:
    """Range of outcome probabilities reachable by Bell measurements."""

    pmin: float
    pmax: float


def prob_interval(alpha: PureState, beta: PureState) -> ProbInterval:
    """Endpoints (a0 b1 + a1 b0)/2 and (a0 b0 + a1 b1)/2 of the Bell-swap range."""
    a0, a1 = alpha.s0, alpha.s1
    b0, b1 = beta.s0, beta.s1
    return ProbInterval((a0 * b1 + a1 * b0) / 2.0, (a0 * b0 + a1 * b1) / 2.0)


# --- constructive Bell measurement from prescribed outcome probabilities ---
#
# Working representation: each Bell vector is a real unit 4-vector of magic
# coordinates, ordered so that a vector with weight k on its first two
# coordinates has outcome probability p = pmin*k + pmax*(1-k).  The map
# _paired_coords translates to the column convention of MAGIC_BASIS.

_EDGE_TOL = 1e-13


def _paired_coords(row: np.ndarray) -> np.ndarray:
    # swap coordinate pairs: (mu1, mu2) carries pmin weight in the working
    # convention but pmax weight in the MAGIC_BASIS column order
    return np.array([row[2], row[3], row[0], row[1]])


def _cross4(rows: np.ndarray) -> np.ndarray:
    """Unit 4-vector orthogonal to three orthonormal rows (cofactor expansion)."""
    out = np.empty(4)
    cols = [0, 1, 2, 3]
    for i in range(4):
        sub = rows[:, [c for c in cols if c != i]]
        out[i] = ((-1.0) ** i) * np.linalg.det(sub)
    n = np.linalg.norm(out)
    if n < 1e-9:
        raise RuntimeError("degenerate triple while completing the Bell basis")
    return out / n


def _rows_first_is_plane(k: np.ndarray) -> np.ndarray:
    """Solve for k sorted descending with k[0] = 1 (first vector in the pmin plane)."""
    k2, k3 = k[1], k[2]
    rows = np.zeros((4, 4))
    rows[0] = (1.0, 0.0, 0.0, 0.0)
    if k2 >= 1.0 - _EDGE_TOL:
        # two vectors pinned to the pmin plane forces the other two to the pmax plane
        rows[1] = (0.0, 1.0, 0.0, 0.0)
        rows[2] = (0.0, 0.0, 1.0, 0.0)
    else:
        rows[1] = (0.0, math.sqrt(k2), math.sqrt(1.0 - k2), 0.0)
        cw = -math.sqrt((k2 * k3) / ((1.0 - k2) * (1.0 - k3))) if k3 > _EDGE_TOL else 0.0
        cw = min(max(cw, -1.0), 1.0)
        sw = math.sqrt(max(0.0, 1.0 - cw * cw))
        rows[2] = (0.0, math.sqrt(k3), math.sqrt(1.0 - k3) * cw, math.sqrt(1.0 - k3) * sw)
    rows[3] = _cross4(rows[:3])
    return rows


def _rows_interior(k: np.ndarray) -> np.ndarray:
    """Solve the orthogonality system for 0 < k[3] <= k[0] < 1, k sorted descending.

    With theta_1 = omega_1 = 0 the first two orthogonality equations fix
    omega_a(theta_a) and omega_b(theta_b); along the slice theta_b = theta_b*
    (where omega_b = pi) the third equation's residual changes sign between
    the ends of the feasible theta_a interval, so plain bisection lands on a
    root of the full system.
    """
    k1, k2, k3 = k[0], k[1], k[2]
    q1, q2, q3 = 1.0 - k1, 1.0 - k2, 1.0 - k3
    ca_star = math.sqrt((q1 * q2) / (k1 * k2))  # <= 1 since k1 + k2 >= 1
    cb_star = math.sqrt((q1 * q3) / (k1 * k3))  # <= 1 since k1 + k3 >= 1
    theta_b = math.acos(min(cb_star, 1.0))
    c23 = math.sqrt(k2 * k3)
    q23 = math.sqrt(q2 * q3)

    def residual(theta_a: float) -> float:
        c_oa = min(max(-math.cos(theta_a) / ca_star, -1.0), 1.0)
        omega_a = math.acos(c_oa)
        return c23 * math.cos(theta_a - theta_b) + q23 * math.cos(omega_a - math.pi)

    lo = math.acos(min(ca_star, 1.0))
    hi = math.pi - lo
    r_lo, r_hi = residual(lo), residual(hi)
    if r_lo < -1e-12 or r_hi > 1e-12:
        raise RuntimeError("orthogonality bracket failed; weights violate the sum rule")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        r_mid = residual(mid)
        if abs(r_mid) < 1e-15 or hi - lo < 1e-16:
            lo = hi = mid
            break
        if (r_mid > 0.0) == (r_lo > 0.0):
            lo, r_lo = mid, r_mid
        else:
            hi, r_hi = mid, r_mid
    theta_a = 0.5 * (lo + hi)
    omega_a = math.acos(min(max(-math.cos(theta_a) / ca_star, -1.0), 1.0))
    omega_b = math.pi

    rows = np.zeros((4, 4))
    rows[0] = (math.sqrt(k1), 0.0, math.sqrt(q1), 0.0)
    rows[1] = (
        math.sqrt(k2) * math.cos(theta_a),
        -math.sqrt(k2) * math.sin(theta_a),
        math.sqrt(q2) * math.cos(omega_a),
        -math.sqrt(q2) * math.sin(omega_a),
    )
    rows[2] = (
        math.sqrt(k3) * math.cos(theta_b),
        -math.sqrt(k3) * math.sin(theta_b),
        math.sqrt(q3) * math.cos(omega_b),
        -math.sqrt(q3) * math.sin(omega_b),
    )
    rows[3] = _cross4(rows[:3])
    return rows


def _magic_rows_from_weights(k: np.ndarray) -> np.ndarray:
    """Orthonormal real rows with prescribed weights on the first coordinate pair."""
    if k[0] >= 1.0 - _EDGE_TOL:
        return _rows_first_is_plane(k)
    if k[3] <= _EDGE_TOL:
        # mirror: swap the coordinate-pair roles and reverse the order
        mirrored = _magic_rows_from_weights((1.0 - k)[::-1].copy())
        rows = mirrored[::-1].copy()
        return np.hstack([rows[:, 2:], rows[:, :2]])
    return _rows_interior(k)


def bell_from_probabilities(
    x: Sequence[float], alpha: PureState, beta: PureState
) -> ProjectiveMeasurement:
    """Construct a Bell measurement whose swap outcome probabilities equal ``x``.

    Feasibility requires sum(x) = 1 and every entry inside the closed interval
    [pmin, pmax] of :func:`prob_interval`; infeasible targets raise
    :class:`InfeasibleRegimeError`.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (4,):
        raise ValueError("need exactly four target probabilities")
    if abs(float(x.sum()) - 1.0) > 1e-10:
        raise InfeasibleRegimeError(f"target probabilities sum to {x.sum()}, not 1")
    iv = prob_interval(alpha, beta)
    width = iv.pmax - iv.pmin
    if width < 1e-12:
        if np.max(np.abs(x - 0.25)) > 1e-10:
            raise InfeasibleRegimeError(
                "both states are singlets: every Bell swap is uniform, so only x = 1/4 is reachable"
            )
        return xz_basis()
    if np.min(x) < iv.pmin - 1e-10 or np.max(x) > iv.pmax + 1e-10:
        raise InfeasibleRegimeError(
            f"target probabilities must lie in [{iv.pmin}, {iv.pmax}], got {x.tolist()}"
        )

    k = np.clip((iv.pmax - x) / width, 0.0, 1.0)
    total = float(k.sum())
    if abs(total - 2.0) > 1e-8:
        raise AssertionError(f"weight sum rule violated: sum k = {total}")
    order = np.argsort(-k, kind="stable")
    rows_sorted = _magic_rows_from_weights(k[order])
    rows = np.empty_like(rows_sorted)
    rows[order] = rows_sorted

    vectors = tuple(from_magic_coords(_paired_coords(rows[m])) for m in range(4))
    return ProjectiveMeasurement(vectors)
