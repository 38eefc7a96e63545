"""Two-qubit pure states in Schmidt form, concurrence/SCP, and deterministic distillation.

A pure state of two qubits is kept in its Schmidt form, i.e. as the ordered
pair of Schmidt coefficients (s0, s1) with s0 >= s1 >= 0 and s0 + s1 = 1.
All protocol-level quantities (SCP, WCE) are derived from these two numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

#: tolerance used when validating Schmidt coefficients and vector norms
COEFF_TOL = 1e-9


def clamp01(x: float) -> float:
    """Clamp a probability-like quantity to [0, 1]."""
    if x < 0.0:
        return 0.0
    if x > 1.0:
        return 1.0
    return x


@dataclass(frozen=True)
class TwoQubitVector:
    """Amplitudes a_ij over |ij>, stored row-major as (a00, a01, a10, a11).

    Vectors held by this type are at most unit norm; unnormalized intermediate
    vectors that appear while contracting a swap are plain ndarrays instead.
    """

    amps: np.ndarray

    def __post_init__(self) -> None:
        a = np.asarray(self.amps, dtype=complex).reshape(4)
        n2 = float(np.vdot(a, a).real)
        if n2 > 1.0 + 1e-12:
            raise ValueError(f"two-qubit vector has norm^2 {n2} > 1")
        object.__setattr__(self, "amps", a)

    def hat(self) -> np.ndarray:
        """The 2x2 amplitude matrix ((a00, a01), (a10, a11))."""
        return self.amps.reshape(2, 2)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def inner(self, other: "TwoQubitVector") -> complex:
        return complex(np.vdot(self.amps, other.amps))


@dataclass(frozen=True)
class PureState:
    """Schmidt-form state sqrt(s0)|00> + sqrt(s1)|11> with s0 in [1/2, 1]."""

    s0: float

    def __post_init__(self) -> None:
        s0 = float(self.s0)
        if not (0.5 - COEFF_TOL <= s0 <= 1.0 + COEFF_TOL):
            raise ValueError(f"larger Schmidt coefficient must lie in [1/2, 1], got {s0}")
        object.__setattr__(self, "s0", min(max(s0, 0.5), 1.0))

    @classmethod
    def from_schmidt(cls, a: float, b: float) -> "PureState":
        """Build from an unnormalized, unordered coefficient pair."""
        if a < -COEFF_TOL or b < -COEFF_TOL:
            raise ValueError(f"Schmidt coefficients must be nonnegative, got ({a}, {b})")
        a, b = max(a, 0.0), max(b, 0.0)
        total = a + b
        if total <= 0.0:
            raise ValueError("Schmidt coefficients must not both vanish")
        return cls(max(a, b) / total)

    @classmethod
    def from_ent(cls, e: float) -> "PureState":
        """Build from the SCP-measured entanglement E = 2*s1."""
        if not (-COEFF_TOL <= e <= 1.0 + COEFF_TOL):
            raise ValueError(f"entanglement must lie in [0, 1], got {e}")
        return cls(1.0 - clamp01(e) / 2.0)

    @property
    def s1(self) -> float:
        return 1.0 - self.s0

    @property
    def ent(self) -> float:
        """SCP-measured entanglement E = 2*s1 in [0, 1]."""
        return 2.0 * self.s1

    def vector(self) -> TwoQubitVector:
        return TwoQubitVector(np.array([math.sqrt(self.s0), 0.0, 0.0, math.sqrt(self.s1)], dtype=complex))


SINGLET = PureState(0.5)


def concurrence(v: TwoQubitVector) -> float:
    """Concurrence 2*|det| of the amplitude matrix; 1 for maximally entangled."""
    a = v.amps
    return 2.0 * abs(a[0] * a[3] - a[1] * a[2])


def scp(state: PureState) -> float:
    """Singlet conversion probability 2*s1 (Procrustean concentration)."""
    return 2.0 * state.s1


def distill_pair(a: PureState, b: PureState) -> PureState:
    """Deterministic (probability-1) distillation of a state pair.

    Majorization allows the pair to be turned into a single state whose larger
    Schmidt coefficient is max(1/2, a.s0 * b.s0); the result is a singlet
    whenever the product drops below 1/2.
    """
    return PureState(max(0.5, a.s0 * b.s0))


def double_state_scp(phi: PureState) -> float:
    """SCP of two copies of ``phi`` converted jointly: min(1, 2*(1 - s0^2))."""
    return clamp01(2.0 * (1.0 - phi.s0 * phi.s0))
