"""Scalar entanglement recursions for hierarchical lattices and their thresholds.

Entanglement flows are tracked by the SCP E = 2*s1 of the bond state.  Each
lattice family reduces to a one-dimensional map E -> E':

* diamond: worst-case swap of two identical bonds, then distillation of the
  resulting pair, E' = min(1, 1 + (2-E)^2 E^2 / 2 - sqrt(1 - (2-E)^2 E^2));
* tree (double Cayley tree, branching two): two worst-case swaps against
  fresh bonds of entanglement E0, then distillation of the equal pair;
* centipede (strip of a square lattice): two worst-case swaps along a leg,
  then distillation of the E0 / E_II pair at the spine.

A singlet spreads to the whole lattice in finitely many steps exactly when
the map reaches the clamp E' = 1, which happens above a threshold bond
entanglement found here by bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

KINDS = ("diamond", "tree", "centipede")


def wce_swap(e_a: float, e_b: float) -> float:
    """Worst-case entanglement after swapping bonds of SCP ``e_a`` and ``e_b``."""
    x = min(1.0, e_a * (2.0 - e_a) * e_b * (2.0 - e_b))
    return x / (1.0 + math.sqrt(1.0 - x))


def diamond_step(e: float) -> float:
    """One diamond-lattice contraction step (clamped to 1)."""
    x2 = (e * (2.0 - e)) ** 2
    return min(1.0, 1.0 + 0.5 * x2 - math.sqrt(max(0.0, 1.0 - x2)))


def tree_step(e: float, e0: float) -> float:
    """One double-Cayley-tree contraction step with bond entanglement ``e0``."""
    e_i = wce_swap(e0, e)
    e_ii = wce_swap(e0, e_i)
    t = 1.0 - 0.5 * e_ii
    return min(1.0, 2.0 * (1.0 - t * t))


def centipede_step(e: float, e0: float) -> float:
    """One centipede-leg contraction step with bond entanglement ``e0``."""
    e_i = wce_swap(e0, e)
    e_ii = wce_swap(e0, e_i)
    return min(1.0, 2.0 * (1.0 - (1.0 - 0.5 * e0) * (1.0 - 0.5 * e_ii)))


@dataclass(frozen=True)
class RecursionMap:
    """A kind-tagged scalar recursion E -> E' on [0, 1]."""

    kind: str
    e0: float | None = None
    _fn: Callable[[float], float] = field(repr=False, default=None)  # type: ignore[assignment]

    def eval(self, e: float) -> float:
        if not 0.0 <= e <= 1.0:
            raise ValueError(f"entanglement must lie in [0, 1], got {e}")
        return self._fn(e)


def make_map(kind: str, e0: float | None = None) -> RecursionMap:
    """Build the recursion map for a lattice kind; tree/centipede need ``e0``."""
    if kind == "diamond":
        return RecursionMap(kind, None, diamond_step)
    if kind in ("tree", "centipede"):
        if e0 is None or not 0.0 <= e0 <= 1.0:
            raise ValueError(f"{kind} recursion needs a bond entanglement e0 in [0, 1]")
        step = tree_step if kind == "tree" else centipede_step
        return RecursionMap(kind, e0, lambda e: step(e, e0))
    raise ValueError(f"unknown recursion kind {kind!r}; expected one of {KINDS}")


@dataclass(frozen=True)
class FixedPointReport:
    """Fixed points with stability labels, plus the fate of one iteration trace."""

    fixed_points: tuple[tuple[float, str], ...]
    reaches_one: bool
    steps_to_one: int | None


_STABILITY_STEP = 1e-6


def _stability(fn: Callable[[float], float], x: float) -> str:
    h = _STABILITY_STEP
    lo = max(0.0, x - h)
    hi = min(1.0, x + h)
    deriv = (fn(hi) - fn(lo)) / (hi - lo)
    return "stable" if abs(deriv) < 1.0 else "unstable"


def fixed_points(rmap: RecursionMap, grid: int = 10_000) -> tuple[tuple[float, str], ...]:
    """Fixed points of the map located by sign-change bisection on a grid."""
    fn = rmap.eval
    xs = [i / grid for i in range(grid + 1)]
    gaps = [fn(x) - x for x in xs]
    roots: list[float] = []
    for i, x in enumerate(xs):
        if abs(gaps[i]) < 1e-14:
            roots.append(x)
    for i in range(grid):
        if gaps[i] == 0.0 or gaps[i + 1] == 0.0 or (gaps[i] > 0.0) == (gaps[i + 1] > 0.0):
            continue
        lo, hi = xs[i], xs[i + 1]
        sign_lo = gaps[i] > 0.0
        for _ in range(100):
            mid = 0.5 * (lo + hi)
            if (fn(mid) - mid > 0.0) == sign_lo:
                lo = mid
            else:
                hi = mid
        roots.append(0.5 * (lo + hi))
    roots.sort()
    dedup: list[float] = []
    for r in roots:
        if not dedup or r - dedup[-1] > 1e-9:
            dedup.append(r)
    return tuple((r, _stability(fn, r)) for r in dedup)


def analyze(rmap: RecursionMap, start: float, max_iters: int = 10_000) -> FixedPointReport:
    """Locate and classify fixed points, and iterate the map from ``start``.

    ``steps_to_one`` counts iterations until the clamp yields exactly 1.0;
    None when 1 is not reached within ``max_iters``.
    """
    if max_iters < 1:
        raise ValueError("max_iters must be at least 1")
    points = fixed_points(rmap)
    e = start
    steps: int | None = None
    for i in range(1, max_iters + 1):
        e = rmap.eval(e)
        if e >= 1.0 - 1e-12:
            steps = i
            break
    return FixedPointReport(points, steps is not None, steps)


def _bisect_increasing(fn: Callable[[float], float], lo: float, hi: float, tol: float = 1e-10) -> float:
    f_lo = fn(lo)
    if f_lo > 0.0:
        raise RuntimeError("threshold bracket failed at the lower end")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if fn(mid) <= 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def threshold(kind: str) -> float:
    """Bond entanglement above which the recursion can reach a perfect singlet.

    diamond: smallest nontrivial (unstable) fixed point of the map;
    tree / centipede: smallest e0 for which E = 1 survives one step, i.e.
    F(1; e0) = 1 before clamping.
    """
    if kind == "diamond":
        pts = fixed_points(make_map("diamond"))
        interior = [r for r, _ in pts if 1e-6 < r < 1.0 - 1e-6]
        if not interior:
            raise RuntimeError("diamond recursion lost its interior fixed point")
        return min(interior)
    if kind == "tree":
        def gap(e0: float) -> float:
            e_i = wce_swap(e0, e0)
            t = 1.0 - 0.5 * e_i
            return 2.0 * (1.0 - t * t) - 1.0

        return _bisect_increasing(gap, 0.0, 1.0)
    if kind == "centipede":
        def gap(e0: float) -> float:
            root = math.sqrt(max(0.0, 1.0 - (e0 * (2.0 - e0)) ** 2))
            return 2.0 * (1.0 - (1.0 - 0.5 * e0) * 0.5 * (1.0 + root)) - 1.0

        return _bisect_increasing(gap, 0.0, 1.0)
    raise ValueError(f"unknown recursion kind {kind!r}; expected one of {KINDS}")


def tree_threshold_closed_form() -> float:
    """Closed form 1 - sqrt(1 - sqrt(2 (sqrt 2 - 1))) of the tree threshold."""
    return 1.0 - math.sqrt(1.0 - math.sqrt(2.0 * (math.sqrt(2.0) - 1.0)))
