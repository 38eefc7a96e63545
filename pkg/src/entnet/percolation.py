"""Bond-percolation Monte Carlo on 2D lattices and quantum-preprocessing strategies.

Lattices are plain bond lists with a per-bond singlet probability.  Each
Monte Carlo trial opens every bond independently and clusters nodes with
union-find; theta is the fraction of trials in which a designated central
node lies in the largest cluster, tau the fraction in which the two probe
nodes share a cluster, and pi the fraction in which at least one probe node
lies in the largest cluster.

Randomness is counter-based: the open/closed decision for a bond is a pure
hash of (seed, trial, bond index), so results are identical no matter how
trials are chunked across threads, and a large-lattice connectivity trial
can sample bonds lazily while exploring.

The quantum-preprocessing constructions contract a lattice by performing the
SCP-optimal (ZZ) swap at marked nodes, which preserves the per-bond singlet
probability exactly: doubled honeycomb -> triangular, asymmetric triangular
-> sparser triangular, and square -> two interleaved squares of doubled
spacing.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator

import numpy as np
from numba import njit

from .errors import InfeasibleRegimeError
from .states import PureState

LATTICE_KINDS = ("square", "triangular", "honeycomb", "honeycomb_doubled", "square_doubled_pair")
BOUNDARIES = ("torus", "open")


@dataclass(frozen=True, eq=False)
class LatticeGraph:
    """Node/bond graph with per-bond singlet probability.

    ``center`` is the node used for largest-cluster membership; ``probe_a``
    and ``probe_b`` are the connectivity probe pair (for the square lattice,
    the diagonal A/A' pair of the doubled-lattice comparison).
    """

    kind: str
    L: int
    boundary: str
    n_nodes: int
    bond_u: np.ndarray
    bond_v: np.ndarray
    bond_p: np.ndarray
    center: int
    probe_a: int
    probe_b: int

    def __post_init__(self) -> None:
        if self.kind not in LATTICE_KINDS:
            raise ValueError(f"unknown lattice kind {self.kind!r}")
        if self.boundary not in BOUNDARIES:
            raise ValueError(f"unknown boundary {self.boundary!r}")
        bu = np.ascontiguousarray(self.bond_u, dtype=np.int32)
        bv = np.ascontiguousarray(self.bond_v, dtype=np.int32)
        bp = np.ascontiguousarray(self.bond_p, dtype=np.float64)
        if not (bu.shape == bv.shape == bp.shape):
            raise ValueError("bond arrays must have matching shapes")
        if bp.size and (bp.min() < 0.0 or bp.max() > 1.0):
            raise ValueError("bond probabilities must lie in [0, 1]")
        object.__setattr__(self, "bond_u", bu)
        object.__setattr__(self, "bond_v", bv)
        object.__setattr__(self, "bond_p", bp)

    @property
    def n_bonds(self) -> int:
        return int(self.bond_u.shape[0])

    def bonds(self) -> Iterator[tuple[int, int, float]]:
        for u, v, p in zip(self.bond_u, self.bond_v, self.bond_p):
            yield int(u), int(v), float(p)

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n_nodes, dtype=np.int64)
        np.add.at(deg, self.bond_u, 1)
        np.add.at(deg, self.bond_v, 1)
        return deg


def _check_size(L: int, minimum: int = 3) -> None:
    if L < minimum:
        raise ValueError(f"lattice size must be at least {minimum}, got {L}")


def _check_p(p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"bond probability must lie in [0, 1], got {p}")


def square_lattice(L: int, p: float, boundary: str = "torus") -> LatticeGraph:
    """L x L square lattice; probe pair is the diagonal (c, c) / (c+1, c+1)."""
    _check_size(L)
    _check_p(p)
    torus = boundary == "torus"
    us, vs = [], []
    for x in range(L):
        for y in range(L):
            i = x * L + y
            if torus or y + 1 < L:
                us.append(i)
                vs.append(x * L + (y + 1) % L)
            if torus or x + 1 < L:
                us.append(i)
                vs.append(((x + 1) % L) * L + y)
    c = L // 2
    return LatticeGraph(
        "square", L, boundary, L * L,
        np.array(us), np.array(vs), np.full(len(us), p),
        center=c * L + c, probe_a=c * L + c, probe_b=((c + 1) % L) * L + (c + 1) % L,
    )


def triangular_lattice(L: int, p: float, boundary: str = "torus") -> LatticeGraph:
    """Square lattice plus one diagonal per cell (degree 6)."""
    _check_size(L)
    _check_p(p)
    torus = boundary == "torus"
    us, vs = [], []
    for x in range(L):
        for y in range(L):
            i = x * L + y
            if torus or y + 1 < L:
                us.append(i)
                vs.append(x * L + (y + 1) % L)
            if torus or x + 1 < L:
                us.append(i)
                vs.append(((x + 1) % L) * L + y)
            if torus or (x + 1 < L and y + 1 < L):
                us.append(i)
                vs.append(((x + 1) % L) * L + (y + 1) % L)
    c = L // 2
    return LatticeGraph(
        "triangular", L, boundary, L * L,
        np.array(us), np.array(vs), np.full(len(us), p),
        center=c * L + c, probe_a=c * L + c, probe_b=c * L + (c + 1) % L,
    )


def honeycomb_lattice(L: int, p: float, boundary: str = "torus", doubled: bool = False) -> LatticeGraph:
    """Brick-wall honeycomb of L x L two-site cells; ``doubled`` doubles every bond."""
    _check_size(L)
    _check_p(p)
    torus = boundary == "torus"
    us, vs = [], []

    def add(a: int, b: int) -> None:
        reps = 2 if doubled else 1
        for _ in range(reps):
            us.append(a)
            vs.append(b)

    for x in range(L):
        for y in range(L):
            a = 2 * (x * L + y)
            b = a + 1
            add(a, b)
            if torus or x + 1 < L:
                add(b, 2 * (((x + 1) % L) * L + y))
            if torus or y + 1 < L:
                add(b, 2 * (x * L + (y + 1) % L))
    c = L // 2
    center = 2 * (c * L + c)
    return LatticeGraph(
        "honeycomb_doubled" if doubled else "honeycomb", L, boundary, 2 * L * L,
        np.array(us), np.array(vs), np.full(len(us), p),
        center=center, probe_a=center, probe_b=center + 1,
    )


def asymmetric_triangular_lattice(L: int, phi: PureState, phi_tilde: PureState,
                                  boundary: str = "torus") -> LatticeGraph:
    """Triangular lattice mixing strong (phi) and weak (phi_tilde) bonds.

    Strong bonds form disjoint two-bond paths through the marked nodes (all
    nodes except the even/even sublattice), arranged so that swapping at the
    marked nodes leaves a triangular lattice of doubled spacing.
    """
    if L % 2 or L < 4:
        raise ValueError("asymmetric triangular construction needs an even size >= 4")
    if boundary != "torus":
        raise ValueError("asymmetric triangular construction is built on a torus")
    if phi_tilde.s0 <= phi.s0:
        raise ValueError("the discarded state must be strictly less entangled")
    p_ok = 2.0 * phi.s1
    p_weak = 2.0 * phi_tilde.s1
    us, vs, ps = [], [], []
    for x in range(L):
        for y in range(L):
            i = x * L + y
            # horizontal: strong on even rows
            us.append(i)
            vs.append(x * L + (y + 1) % L)
            ps.append(p_ok if x % 2 == 0 else p_weak)
            # vertical: strong on even columns
            us.append(i)
            vs.append(((x + 1) % L) * L + y)
            ps.append(p_ok if y % 2 == 0 else p_weak)
            # diagonal: strong when both parities agree
            us.append(i)
            vs.append(((x + 1) % L) * L + (y + 1) % L)
            ps.append(p_ok if x % 2 == y % 2 else p_weak)
    c = L // 2
    return LatticeGraph(
        "triangular", L, boundary, L * L,
        np.array(us), np.array(vs), np.array(ps),
        center=c * L + c, probe_a=c * L + c, probe_b=c * L + (c + 1) % L,
    )


# --- closed-form thresholds ---------------------------------------------------

def classical_threshold(kind: str) -> float:
    """Classical bond-percolation threshold of a regular lattice."""
    if kind == "triangular":
        return 2.0 * math.sin(math.pi / 18.0)
    if kind == "square":
        return 0.5
    if kind == "honeycomb":
        return 1.0 - 2.0 * math.sin(math.pi / 18.0)
    raise ValueError(f"no classical threshold for lattice kind {kind!r}")


def strategy_thresholds() -> dict[str, float]:
    """Critical bond entanglement 2*phi1 of each doubled-honeycomb strategy.

    ``naive_doubling`` converts the two copies independently,
    ``cep_distillation`` converts the doubled state jointly, and
    ``quantum_triangular`` swaps the lattice into a triangular one first.
    Smaller is better: the quantum mapping needs the least entanglement.
    """
    s = math.sin(math.pi / 18.0)
    return {
        "naive_doubling": 1.0 - math.sqrt(2.0 * s),
        "cep_distillation": 2.0 * (1.0 - math.sqrt(0.5 + s)),
        "quantum_triangular": 2.0 * s,
    }


# --- counter-based RNG and Monte Carlo kernels --------------------------------

_GOLD = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_BKEY = np.uint64(0xD1B54A32D192ED03)
_TO_U01 = 1.0 / 9007199254740992.0  # 2^-53


@njit(cache=True, inline="always")
def _mix64(z):
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


@njit(cache=True, inline="always")
def _trial_key(seed, trial):
    return _mix64(np.uint64(seed) + _GOLD * (np.uint64(trial) + np.uint64(1)))


@njit(cache=True, inline="always")
def _bond_u01(key, bond):
    z = _mix64(key ^ (_BKEY * (np.uint64(bond) + np.uint64(1))))
    return float(z >> np.uint64(11)) * _TO_U01


@njit(cache=True, inline="always")
def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


@njit(cache=True, nogil=True)
def _cluster_counts(bond_u, bond_v, bond_p, n_nodes, center, probe_a, probe_b,
                    seed, t_lo, t_hi):
    """Per-trial union-find tallies: (theta, tau, pi, open bonds)."""
    parent = np.empty(n_nodes, dtype=np.int32)
    size = np.empty(n_nodes, dtype=np.int32)
    n_bonds = bond_u.shape[0]
    c_theta = 0
    c_tau = 0
    c_pi = 0
    c_open = 0
    for trial in range(t_lo, t_hi):
        key = _trial_key(seed, trial)
        for i in range(n_nodes):
            parent[i] = i
            size[i] = 1
        for k in range(n_bonds):
            if _bond_u01(key, k) < bond_p[k]:
                c_open += 1
                ra = _find(parent, bond_u[k])
                rb = _find(parent, bond_v[k])
                if ra != rb:
                    if size[ra] < size[rb]:
                        ra, rb = rb, ra
                    parent[rb] = ra
                    size[ra] += size[rb]
        largest = 0
        largest_size = 0
        for i in range(n_nodes):
            if parent[i] == i and size[i] > largest_size:
                largest_size = size[i]
                largest = i
        ra = _find(parent, probe_a)
        rb = _find(parent, probe_b)
        if _find(parent, center) == largest:
            c_theta += 1
        if ra == rb:
            c_tau += 1
        if ra == largest or rb == largest:
            c_pi += 1
    return c_theta, c_tau, c_pi, c_open


@njit(cache=True, nogil=True)
def _square_pair_connected_counts(L, torus, p, ax, ay, bx, by, seed, t_lo, t_hi):
    """Trials where (ax, ay) and (bx, by) are connected on a uniform square lattice.

    Bonds are sampled lazily from the counter RNG while two searches expand
    alternately from both probes, so the cost per trial scales with the
    smaller explored cluster instead of the whole lattice.
    """
    n = L * L
    tag = np.full(n, -1, dtype=np.int64)
    side = np.zeros(n, dtype=np.uint8)
    stack_a = np.empty(n, dtype=np.int32)
    stack_b = np.empty(n, dtype=np.int32)
    count = 0
    a = ax * L + ay
    b = bx * L + by
    for trial in range(t_lo, t_hi):
        key = _trial_key(seed, trial)
        tag[a] = trial
        side[a] = 1
        tag[b] = trial
        side[b] = 2
        stack_a[0] = a
        stack_b[0] = b
        na = 1
        nb = 1
        connected = False
        while na > 0 and nb > 0 and not connected:
            if na <= nb:
                na -= 1
                node = stack_a[na]
                mine = np.uint8(1)
            else:
                nb -= 1
                node = stack_b[nb]
                mine = np.uint8(2)
            x = node // L
            y = node - x * L
            for d in range(4):
                if d == 0:  # right, bond owner (x, y)
                    if not torus and y + 1 >= L:
                        continue
                    ny_ = (y + 1) % L
                    nx_ = x
                    bond = 2 * (x * L + y)
                elif d == 1:  # left, bond owner (x, y-1)
                    if not torus and y == 0:
                        continue
                    ny_ = (y - 1) % L
                    nx_ = x
                    bond = 2 * (x * L + ny_)
                elif d == 2:  # down, bond owner (x, y)
                    if not torus and x + 1 >= L:
                        continue
                    nx_ = (x + 1) % L
                    ny_ = y
                    bond = 2 * (x * L + y) + 1
                else:  # up, bond owner (x-1, y)
                    if not torus and x == 0:
                        continue
                    nx_ = (x - 1) % L
                    ny_ = y
                    bond = 2 * (nx_ * L + y) + 1
                if _bond_u01(key, bond) >= p:
                    continue
                nb_node = nx_ * L + ny_
                if tag[nb_node] == trial:
                    if side[nb_node] != mine:
                        connected = True
                        break
                else:
                    tag[nb_node] = trial
                    side[nb_node] = mine
                    if mine == 1:
                        stack_a[na] = nb_node
                        na += 1
                    else:
                        stack_b[nb] = nb_node
                        nb += 1
        if connected:
            count += 1
    return count


def _chunks(trials: int, threads: int) -> list[tuple[int, int]]:
    threads = max(1, min(threads, trials))
    step = (trials + threads - 1) // threads
    return [(lo, min(lo + step, trials)) for lo in range(0, trials, step)]


def _bernoulli_err(q: float, n: int) -> float:
    return math.sqrt(max(q * (1.0 - q), 0.0) / n)


@dataclass(frozen=True)
class TrialStats:
    """Monte Carlo estimates with binomial standard errors."""

    trials: int
    theta_hat: float | None = None
    theta_err: float | None = None
    tau_hat: float | None = None
    tau_err: float | None = None
    pi_hat: float | None = None
    pi_err: float | None = None
    open_fraction: float | None = None


def run_percolation(g: LatticeGraph, seed: int = 0, trials: int = 1000,
                    threads: int = 1) -> TrialStats:
    """Estimate theta (plus tau/pi for the probe pair) by union-find trials."""
    if trials < 1:
        raise ValueError("need at least one trial")
    parts = _chunks(trials, threads)
    args = (g.bond_u, g.bond_v, g.bond_p, g.n_nodes, g.center, g.probe_a, g.probe_b, seed)
    if len(parts) == 1:
        results = [_cluster_counts(*args, 0, trials)]
    else:
        with ThreadPoolExecutor(max_workers=len(parts)) as ex:
            futures = [ex.submit(_cluster_counts, *args, lo, hi) for lo, hi in parts]
            results = [f.result() for f in futures]
    c_theta = sum(r[0] for r in results)
    c_tau = sum(r[1] for r in results)
    c_pi = sum(r[2] for r in results)
    c_open = sum(r[3] for r in results)
    theta = c_theta / trials
    tau = c_tau / trials
    pi = c_pi / trials
    return TrialStats(
        trials=trials,
        theta_hat=theta,
        theta_err=_bernoulli_err(theta, trials),
        tau_hat=tau,
        tau_err=_bernoulli_err(tau, trials),
        pi_hat=pi,
        pi_err=_bernoulli_err(pi, trials),
        open_fraction=c_open / (trials * g.n_bonds),
    )


def tau_estimate(g: LatticeGraph, seed: int = 0, trials: int = 10_000,
                 threads: int = 1) -> TrialStats:
    """Probability that the diagonal probe pair of a square lattice is connected.

    Uses lazy bond sampling with early termination, so large lattices and
    many trials stay cheap; the lattice must be square with uniform bonds.
    """
    if g.kind != "square":
        raise ValueError("tau estimation expects a square lattice")
    if trials < 1:
        raise ValueError("need at least one trial")
    p = float(g.bond_p[0])
    if np.max(np.abs(g.bond_p - p)) > 0.0:
        raise ValueError("tau estimation expects uniform bond probabilities")
    ax, ay = divmod(g.probe_a, g.L)
    bx, by = divmod(g.probe_b, g.L)
    torus = g.boundary == "torus"
    parts = _chunks(trials, threads)
    if len(parts) == 1:
        counts = [_square_pair_connected_counts(g.L, torus, p, ax, ay, bx, by, seed, 0, trials)]
    else:
        with ThreadPoolExecutor(max_workers=len(parts)) as ex:
            futures = [
                ex.submit(_square_pair_connected_counts, g.L, torus, p, ax, ay, bx, by, seed, lo, hi)
                for lo, hi in parts
            ]
            counts = [f.result() for f in futures]
    tau = sum(counts) / trials
    return TrialStats(trials=trials, tau_hat=tau, tau_err=_bernoulli_err(tau, trials))


def tau_short_path_bound(p: float) -> float:
    """Analytic lower bound on tau from the six shortest probe-to-probe paths."""
    q = p * p + 2.0 * p ** 4 - 2.0 * p ** 5
    return 2.0 * q - q * q


# --- lattice transformations ---------------------------------------------------

def _uniform_p(g: LatticeGraph) -> float:
    p = float(g.bond_p[0])
    if np.max(np.abs(g.bond_p - p)) > 1e-12:
        raise ValueError("transformation expects uniform bond probabilities")
    return p


def transform_honeycomb_to_triangular(g: LatticeGraph) -> LatticeGraph:
    """Swap out the marked honeycomb sublattice, yielding a triangular lattice.

    Each removed node holds two copies of every bond to its three neighbors;
    three SCP-optimal swaps (one per neighbor pair) turn them into a triangle
    with the same per-bond singlet probability.
    """
    if g.kind != "honeycomb_doubled":
        raise ValueError("expected a doubled honeycomb lattice")
    if g.boundary != "torus":
        raise ValueError("the honeycomb contraction is built on a torus")
    p = _uniform_p(g)
    L = g.L
    us, vs = [], []
    for x in range(L):
        for y in range(L):
            i = x * L + y
            right = x * L + (y + 1) % L
            down = ((x + 1) % L) * L + y
            us.append(i)
            vs.append(right)
            us.append(i)
            vs.append(down)
            us.append(down)
            vs.append(right)
    c = L // 2
    return LatticeGraph(
        "triangular", L, g.boundary, L * L,
        np.array(us), np.array(vs), np.full(len(us), p),
        center=c * L + c, probe_a=c * L + c, probe_b=c * L + (c + 1) % L,
    )


def transform_asymmetric_triangular(g: LatticeGraph, phi: PureState,
                                    phi_tilde: PureState) -> LatticeGraph:
    """Discard weak bonds and swap at marked nodes, rebuilding a triangular lattice.

    Requires the strong-bond conversion probability p_ok = 2*phi1 to satisfy
    p_c < p_ok < sqrt(p_c) on the triangular lattice: above p_c so the
    contracted lattice percolates, below sqrt(p_c) so plain conversion of the
    strong two-bond paths (probability p_ok^2) would not.
    """
    if g.kind != "triangular":
        raise ValueError("expected a (mixed-bond) triangular lattice")
    p_ok = 2.0 * phi.s1
    p_weak = 2.0 * phi_tilde.s1
    p_c = classical_threshold("triangular")
    if not p_c < p_ok < math.sqrt(p_c):
        raise InfeasibleRegimeError(
            f"strong-bond conversion probability {p_ok} outside ({p_c}, {math.sqrt(p_c)})"
        )
    strong = np.abs(g.bond_p - p_ok) <= 1e-12
    weak = np.abs(g.bond_p - p_weak) <= 1e-12
    if not bool(np.all(strong | weak)):
        raise ValueError("lattice bonds do not match the two given states")

    deg = np.zeros(g.n_nodes, dtype=np.int64)
    np.add.at(deg, g.bond_u[strong], 1)
    np.add.at(deg, g.bond_v[strong], 1)
    marked = deg == 2
    if not bool(np.all(marked | (deg == 6))):
        raise ValueError("strong bonds do not form disjoint two-bond paths")

    partner: dict[int, list[int]] = {}
    for u, v in zip(g.bond_u[strong], g.bond_v[strong]):
        u, v = int(u), int(v)
        if marked[u] == marked[v]:
            raise ValueError("every strong bond must join a marked and an unmarked node")
        mid, end = (u, v) if marked[u] else (v, u)
        partner.setdefault(mid, []).append(end)

    keep = np.flatnonzero(~marked)
    relabel = {int(old): new for new, old in enumerate(keep)}
    us, vs = [], []
    for mid in sorted(partner):
        ends = partner[mid]
        if len(ends) != 2:
            raise ValueError("every marked node must touch exactly two strong bonds")
        us.append(relabel[ends[0]])
        vs.append(relabel[ends[1]])
    L_new = g.L // 2
    c = L_new // 2
    return LatticeGraph(
        "triangular", L_new, g.boundary, len(keep),
        np.array(us), np.array(vs), np.full(len(us), p_ok),
        center=c * L_new + c, probe_a=c * L_new + c, probe_b=c * L_new + (c + 1) % L_new,
    )


def transform_square_doubling(g: LatticeGraph) -> LatticeGraph:
    """Swap every second bond pair, splitting a square torus into two sublattices.

    Marked nodes (mixed parity) swap their horizontal and vertical bond pairs;
    the even/even and odd/odd nodes are left holding two disjoint square
    lattices of doubled spacing with the original per-bond probability.
    """
    if g.kind != "square":
        raise ValueError("expected a square lattice")
    if g.boundary != "torus" or g.L % 2:
        raise ValueError("square doubling needs an even-sized torus")
    p = _uniform_p(g)
    L = g.L
    half = L // 2
    offset = half * half

    def sub1(x: int, y: int) -> int:
        return (x // 2) * half + y // 2

    def sub2(x: int, y: int) -> int:
        return offset + ((x - 1) // 2) * half + (y - 1) // 2

    us, vs = [], []
    for x in range(0, L, 2):
        for y in range(0, L, 2):
            us.append(sub1(x, y))
            vs.append(sub1(x, (y + 2) % L))
            us.append(sub1(x, y))
            vs.append(sub1((x + 2) % L, y))
    for x in range(1, L, 2):
        for y in range(1, L, 2):
            us.append(sub2(x, y))
            vs.append(sub2(x, (y + 2) % L))
            us.append(sub2(x, y))
            vs.append(sub2((x + 2) % L, y))
    cx = 2 * (L // 4)
    a = sub1(cx, cx)
    b = sub2(cx + 1, cx + 1)
    return LatticeGraph(
        "square_doubled_pair", half, "torus", 2 * offset,
        np.array(us), np.array(vs), np.full(len(us), p),
        center=a, probe_a=a, probe_b=b,
    )


@dataclass(frozen=True)
class DoublingReport:
    """Single-lattice estimates against the doubled-pair strategy at the same p."""

    p: float
    L: int
    trials: int
    theta_hat: float
    theta_err: float
    tau_hat: float
    tau_err: float
    pi_hat: float
    pi_err: float
    p_double: float
    pi_squared: float
    lhs: float
    rhs: float

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs


def doubling_comparison(p: float, L: int, seed: int = 0, trials: int = 10_000,
                        threads: int = 1) -> DoublingReport:
    """Compare connecting probe pairs on one square lattice versus two doubled ones.

    Estimates theta, tau, and pi on an L x L torus; the doubled strategy
    connects at least one pair with probability theta^2 (2 - theta^2), the
    single lattice with pi^2 <= theta^2 (2 - tau)^2, so the doubled strategy
    wins whenever (2 - tau)^2 <= 2 - theta^2.
    """
    if p < 0.5:
        raise InfeasibleRegimeError("the doubling comparison targets p >= 0.5")
    if L % 2:
        raise ValueError("doubling comparison needs an even lattice size")
    g = square_lattice(L, p, boundary="torus")
    pair = transform_square_doubling(g)
    if abs(float(pair.bond_p.min()) - p) > 0.0 or abs(float(pair.bond_p.max()) - p) > 0.0:
        raise AssertionError("doubling must preserve the per-bond singlet probability")
    stats = run_percolation(g, seed=seed, trials=trials, threads=threads)
    theta, tau, pi = stats.theta_hat, stats.tau_hat, stats.pi_hat
    return DoublingReport(
        p=p, L=L, trials=trials,
        theta_hat=theta, theta_err=stats.theta_err,
        tau_hat=tau, tau_err=stats.tau_err,
        pi_hat=pi, pi_err=stats.pi_err,
        p_double=theta * theta * (2.0 - theta * theta),
        pi_squared=pi * pi,
        lhs=(2.0 - tau) ** 2,
        rhs=2.0 - theta * theta,
    )
