"""
Instantaneous multi-bubble extraction from radial data.

Scales are found one at a time from the outside in.  With the remainder
``m_j = u0 - v_L - sum_{k<j} zeta_k W_{lam_k}`` and the level
``theta = c2^{1/2} W(c2)``, the next scale is ``lam_j = r_j / c2`` where
``r_j`` is the largest radius below ``lam_{j-1}`` at which
``r^{1/2} |m_j(r)| = theta``, and ``zeta_j`` is the sign of ``m_j(r_j)``.
By construction ``m_{j+1}(c2 lam_j) = 0``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from .core_fields import GridError, RadialProfile, StatePair, h_norm
from .ground_state import Bubble, BubbleList, eval_W

CASE_COMPLETE = "complete-a"
CASE_EXTERIOR = "exterior-b"


class DegenerateInputError(ValueError):
    """The remainder vanishes exactly at an accepted crossing."""


@dataclass
class DecompositionResult:
    """Output of :func:`extract_bubbles`.

    Attributes
    ----------
    bubbles : BubbleList
    case_tag : str
        ``"complete-a"`` when no crossing remains below the last scale,
        ``"exterior-b"`` when ``n_max`` bubbles were found and a crossing
        remains.
    residual_full : float or None
        Energy norm of the remainder on all of space (complete case).
    residual_exterior : float or None
        Energy norm of the remainder outside ``c2 lam_n`` (exterior case).
    ratios : ndarray
        ``lam_{j+1} / lam_j``.
    c2 : float
    crossing_tolerance : float
        Relative bisection tolerance.
    posthoc_zeros : ndarray
        ``|m_{j+1}(c2 lam_j)|`` relative to ``|W_{lam_j}(c2 lam_j)|``.
    refined : bool
    """

    bubbles: BubbleList
    case_tag: str
    residual_full: float | None
    residual_exterior: float | None
    ratios: np.ndarray
    c2: float
    crossing_tolerance: float = 1e-10
    posthoc_zeros: np.ndarray = field(default_factory=lambda: np.zeros(0))
    refined: bool = False

    @property
    def J(self) -> int:
        return len(self.bubbles)

    def to_dict(self) -> dict:
        return {
            "bubbles": [{"sign": b.sign, "scale": b.scale} for b in self.bubbles],
            "J": self.J,
            "case": self.case_tag,
            "residual_full": self.residual_full,
            "residual_exterior": self.residual_exterior,
            "ratios": [float(x) for x in self.ratios],
            "c2": self.c2,
            "crossing_tolerance": self.crossing_tolerance,
            "posthoc_zeros": [float(x) for x in self.posthoc_zeros],
            "refined": self.refined,
        }

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True))

    @classmethod
    def from_dict(cls, d: dict) -> "DecompositionResult":
        bl = BubbleList.from_pairs((b["sign"], b["scale"]) for b in d["bubbles"])
        return cls(bl, d["case"], d["residual_full"], d["residual_exterior"],
                   np.array(d["ratios"]), d["c2"], d["crossing_tolerance"],
                   np.array(d.get("posthoc_zeros", [])), d.get("refined", False))


def threshold(c2: float) -> float:
    """Crossing level ``c2^{1/2} W(c2)``."""
    return math.sqrt(c2) * float(eval_W(c2))


def _base(state: StatePair, vL_state: StatePair | None):
    if vL_state is None:
        return state.u0
    if not np.array_equal(vL_state.grid.nodes, state.grid.nodes):
        raise GridError("state and free wave must share a grid")
    vl = vL_state.u0
    return lambda r: state.u0(r) - vl(r)


def _remainder(base, bubbles: Sequence[Bubble]):
    def m(r):
        out = base(r)
        for b in bubbles:
            out = out - b(r)
        return out
    return m


def _last_crossing(m, theta: float, nodes: np.ndarray, upper: float, tol: float) -> float | None:
    """Largest ``r < upper`` with ``sqrt(r) |m(r)| = theta``, or None."""
    r = nodes[nodes < upper]
    if r.size == 0:
        return None
    if upper < math.inf:
        r = np.append(r, upper)
    g = np.sqrt(r) * np.abs(m(r)) - theta
    if upper == math.inf and g[-1] >= 0.0:
        raise GridError(f"outermost node above threshold at r = {r[-1]:.6g}; "
                        "the grid must extend past the largest crossing")
    pos = g >= 0.0
    change = np.nonzero(pos[:-1] != pos[1:])[0]
    if change.size == 0:
        return None
    i = int(change[-1])
    lo, hi = float(r[i]), float(r[i + 1])
    if g[i] == 0.0:
        return lo
    f = lambda x: math.sqrt(x) * abs(float(m(np.array([x]))[0])) - theta
    return brentq(f, lo, hi, xtol=1e-300, rtol=max(tol, 4.5e-16), maxiter=400)


def _check_bottom(m, theta: float, nodes: np.ndarray, upper: float, c2: float) -> None:
    """Raise when the remainder is still above threshold at the innermost node."""
    r0 = nodes[0]
    if r0 < upper and math.sqrt(r0) * abs(float(m(np.array([r0]))[0])) >= theta:
        raise GridError(f"crossing not bracketed: remainder above threshold at the innermost "
                        f"node r = {r0:.6g}; suspect scale near {r0 / c2:.6g}")


def _refine(base, bubbles: list[Bubble], c2: float, theta: float, nodes: np.ndarray,
            tol: float, max_iter: int = 60) -> list[Bubble]:
    """Re-extract every scale with all other bubbles removed until stationary."""
    cur = list(bubbles)
    for _ in range(max_iter):
        change = 0.0
        for j in range(len(cur)):
            others = cur[:j] + cur[j + 1:]
            m = _remainder(base, others)
            upper = cur[j - 1].scale if j > 0 else math.inf
            # search the window of this bubble only: below the previous scale
            # and above the next crossing
            r_star = _last_crossing(m, theta, nodes, upper, tol)
            if r_star is None:
                raise GridError("refinement lost a crossing")
            lam = r_star / c2
            zeta = int(np.sign(m(np.array([r_star]))[0]))
            change = max(change, abs(lam / cur[j].scale - 1.0))
            cur[j] = Bubble(zeta, lam)
        if change < 10 * tol:
            break
    return cur


def extract_bubbles(state: StatePair, vL_state: StatePair | None = None, c2: float = 100.0,
                    n_max: int = 10, *, tol: float = 1e-10, refine: bool = False
                    ) -> DecompositionResult:
    """Extract signed bubble scales from ``state`` minus a free wave.

    Parameters
    ----------
    state : StatePair
        Data ``(u0, u1)``; only ``u0`` enters the crossing identities.
    vL_state : StatePair, optional
        Free-wave data at the same instant (zero when omitted).
    c2 : float
        Large parameter, at least 10.
    n_max : int
        Maximal number of bubbles.
    tol : float
        Relative bisection tolerance.
    refine : bool
        After the inductive pass, re-solve each crossing with all other
        bubbles subtracted until the scales stop changing.  This removes
        the bias of size ``(lam_{j+1}/lam_j)^{1/2}`` that the inductive
        pass carries from the smaller bubbles.

    Returns
    -------
    DecompositionResult

    Raises
    ------
    GridError
        A crossing lies outside the grid.
    DegenerateInputError
        The remainder vanishes exactly at an accepted crossing.
    """
    if c2 < 10:
        raise ValueError("c2 must be at least 10")
    if n_max < 1:
        raise ValueError("n_max must be positive")
    base = _base(state, vL_state)
    nodes = state.grid.nodes
    theta = threshold(c2)
    found: list[Bubble] = []
    upper = math.inf
    remaining = False
    while True:
        m = _remainder(base, found)
        r_star = _last_crossing(m, theta, nodes, upper, tol)
        if r_star is None:
            break
        if len(found) == n_max:
            remaining = True
            break
        mval = float(m(np.array([r_star]))[0])
        if mval == 0.0:
            raise DegenerateInputError(f"remainder vanishes at r = {r_star:.6g}")
        found.append(Bubble(1 if mval > 0 else -1, r_star / c2))
        upper = found[-1].scale
    if not remaining:
        _check_bottom(_remainder(base, found), theta, nodes, upper, c2)
    if refine and found:
        found = _refine(base, found, c2, theta, nodes, tol)
    zeros = []
    for j, b in enumerate(found):
        # the accepted crossing forces the remainder to vanish at c2 lam_j
        x = np.array([c2 * b.scale])
        used = found if refine else found[: j + 1]
        zeros.append(abs(_remainder(base, used)(x)[0]) / abs(b(x)[0]))
    bl = BubbleList(tuple(found))
    s = bl.scales
    ratios = s[1:] / s[:-1] if len(bl) > 1 else np.zeros(0)
    case = CASE_EXTERIOR if remaining else CASE_COMPLETE
    result = DecompositionResult(bl, case, None, None, ratios, float(c2), tol, np.array(zeros),
                                 refine)
    res = resolution_residual(state, result, vL_state)
    if case == CASE_COMPLETE:
        result.residual_full = res
    else:
        result.residual_exterior = res
    return result


def remainder_state(state: StatePair, bubbles: BubbleList,
                    vL_state: StatePair | None = None) -> StatePair:
    """``state - sum zeta_j (W_{lam_j}, 0) - vL_state`` on the state grid."""
    g = state.grid
    r = g.nodes
    if vL_state is not None and not np.array_equal(vL_state.grid.nodes, r):
        raise GridError("state and free wave must share a grid")
    v0 = state.u0.values - bubbles(r)
    v1 = state.u1.values.copy()
    slope = None
    if state.u0.slope is not None:
        slope = state.u0.slope - bubbles.derivative(r)
    tail0 = state.u0.tail_exponent
    tail1 = state.u1.tail_exponent
    if vL_state is not None:
        v0 = v0 - vL_state.u0.values
        v1 = v1 - vL_state.u1.values
        if slope is not None and vL_state.u0.slope is not None:
            slope = slope - vL_state.u0.slope
        else:
            slope = None
        tail0 = _min(tail0, vL_state.u0.tail_exponent)
        tail1 = _min(tail1, vL_state.u1.tail_exponent)
    if slope is None:
        # differentiate the smooth parts separately so that bubbles keep exact slopes
        base = state.u0.values if vL_state is None else state.u0.values - vL_state.u0.values
        slope = RadialProfile(g, base).derivative() - bubbles.derivative(r)
    return StatePair(RadialProfile(g, v0, tail0 if tail0 is not None else 1.0, slope),
                     RadialProfile(g, v1, tail1 if tail1 is not None else 2.0))


def _min(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def resolution_residual(state: StatePair, result: DecompositionResult,
                        vL_state: StatePair | None = None) -> float:
    """Energy norm of the remainder.

    On all of space for a complete decomposition, outside ``c2 lam_n`` for
    an exterior one.
    """
    rem = remainder_state(state, result.bubbles, vL_state)
    if result.case_tag == CASE_EXTERIOR:
        R = result.c2 * result.bubbles[-1].scale
    else:
        R = 0.0
    return h_norm(rem, R)


def ratio_report(result: DecompositionResult, delta: float) -> list[tuple[int, float, float]]:
    """Rows ``(j, lam_{j+1}/lam_j, ratio/delta^2)`` for ``j = 1..J-1``."""
    if result.J < 2:
        raise ValueError("ratio report needs at least two bubbles (J < 2)")
    if not delta > 0:
        raise ValueError("delta must be positive")
    return [(j + 1, float(q), float(q) / delta**2) for j, q in enumerate(result.ratios)]
