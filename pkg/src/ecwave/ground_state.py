"""
Ground state W(r) = (1/3 + r^2)^{-1/2}, its dilates, and the energy.

W solves -Delta W = W^5 on R^3.  A bubble is ``zeta * lam^{-1/2} W(r/lam)``
with sign ``zeta`` and scale ``lam``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np
import numpy.typing as npt

from .core_fields import (
    RadialGrid,
    RadialProfile,
    StatePair,
    _power_tail,
    radial_integral,
)

#: E(W, 0) = sqrt(3) pi^2 / 4
GROUND_STATE_ENERGY = math.sqrt(3.0) * math.pi**2 / 4.0
#: ||grad W||_{L^2}^2 = ||W||_{L^6}^6 = 3 sqrt(3) pi^2 / 4
GROUND_STATE_GRADIENT_SQ = 3.0 * math.sqrt(3.0) * math.pi**2 / 4.0


@dataclass(frozen=True)
class Bubble:
    """Signed dilate of the ground state.

    Parameters
    ----------
    sign : int
        +1 or -1.
    scale : float
        Positive dilation parameter.
    """

    sign: int
    scale: float

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise ValueError("bubble sign must be +1 or -1")
        if not self.scale > 0:
            raise ValueError("bubble scale must be positive")

    def __call__(self, r: npt.ArrayLike) -> np.ndarray:
        return eval_W(r, self)

    def derivative(self, r: npt.ArrayLike) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        lam = self.scale
        return self.sign * lam**-1.5 * eval_dW(r / lam)


@dataclass(frozen=True)
class BubbleList:
    """Bubbles ordered by strictly decreasing scale."""

    bubbles: tuple[Bubble, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "bubbles", tuple(self.bubbles))
        scales = [b.scale for b in self.bubbles]
        if any(s2 >= s1 for s1, s2 in zip(scales, scales[1:])):
            raise ValueError("bubble scales must be strictly decreasing")

    def __len__(self) -> int:
        return len(self.bubbles)

    def __iter__(self) -> Iterator[Bubble]:
        return iter(self.bubbles)

    def __getitem__(self, i: int) -> Bubble:
        return self.bubbles[i]

    @property
    def scales(self) -> np.ndarray:
        return np.array([b.scale for b in self.bubbles])

    @property
    def signs(self) -> np.ndarray:
        return np.array([b.sign for b in self.bubbles], dtype=int)

    def __call__(self, r: npt.ArrayLike) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        out = np.zeros_like(r)
        for b in self.bubbles:
            out = out + b(r)
        return out

    def derivative(self, r: npt.ArrayLike) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        out = np.zeros_like(r)
        for b in self.bubbles:
            out = out + b.derivative(r)
        return out

    def check_separation(self, delta: float) -> bool:
        """True if consecutive scale ratios are all below ``delta``."""
        s = self.scales
        return bool(np.all(s[1:] / s[:-1] < delta))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, float]]) -> "BubbleList":
        return cls(tuple(Bubble(int(z), float(lam)) for z, lam in pairs))


def eval_W(r: npt.ArrayLike, bubble: Bubble | None = None) -> np.ndarray:
    """Ground state, or a bubble when ``bubble`` is given.

    Parameters
    ----------
    r : array_like
        Radii, non-negative.
    bubble : Bubble, optional

    Returns
    -------
    ndarray
    """
    r = np.asarray(r, dtype=float)
    if bubble is None:
        return 1.0 / np.sqrt(1.0 / 3.0 + r * r)
    lam = bubble.scale
    return bubble.sign * lam**-0.5 / np.sqrt(1.0 / 3.0 + (r / lam) ** 2)


def eval_dW(r: npt.ArrayLike) -> np.ndarray:
    """Radial derivative of W."""
    r = np.asarray(r, dtype=float)
    return -r * (1.0 / 3.0 + r * r) ** -1.5


def nonlinearity(u: npt.ArrayLike) -> np.ndarray:
    """F(u) = |u|^4 u."""
    u = np.asarray(u, dtype=float)
    return u**5


def ground_state_data(grid: RadialGrid, bubble: Bubble | None = None) -> StatePair:
    """``(W_lam, 0)`` sampled on ``grid`` with exact slope and 1/r tail."""
    b = bubble if bubble is not None else Bubble(1, 1.0)
    r = grid.nodes
    return StatePair(RadialProfile(grid, b(r), 1.0, b.derivative(r)),
                     RadialProfile(grid, np.zeros_like(r), 2.0))


def radial_laplacian(r: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Second-order ``u'' + 2u'/r`` at interior nodes of a possibly non-uniform grid."""
    hm = r[1:-1] - r[:-2]
    hp = r[2:] - r[1:-1]
    um, u0, up = u[:-2], u[1:-1], u[2:]
    d2 = 2.0 * (hm * up - (hm + hp) * u0 + hp * um) / (hm * hp * (hm + hp))
    d1 = (hm**2 * up - hp**2 * um + (hp**2 - hm**2) * u0) / (hm * hp * (hm + hp))
    return d2 + 2.0 * d1 / r[1:-1]


def stationarity_residual(grid: RadialGrid, u: np.ndarray | None = None,
                          *, return_array: bool = False):
    """Max-norm residual of ``Delta u + u^5`` at interior nodes.

    Parameters
    ----------
    grid : RadialGrid
    u : ndarray, optional
        Samples; defaults to W on the grid.
    return_array : bool
        Also return the node-wise residual.

    Returns
    -------
    float or (float, ndarray)
    """
    r = grid.nodes
    if r.size < 3:
        raise ValueError("need at least three nodes")
    u = eval_W(r) if u is None else np.asarray(u, dtype=float)
    res = radial_laplacian(r, u) + nonlinearity(u[1:-1])
    m = float(np.max(np.abs(res)))
    return (m, res) if return_array else m


def energy(state: StatePair, R: float = 0.0) -> float:
    """``int_{r>R} (|u0'|^2/2 + |u1|^2/2 - |u0|^6/6) 4 pi r^2 dr``.

    Tails beyond the grid follow the profiles' power-law exponents.
    """
    grid = state.grid
    u0 = state.u0.values
    du0 = state.u0.derivative()
    g = 0.5 * du0**2 + 0.5 * state.u1.values**2 - u0**6 / 6.0
    tail = 0.0
    p0 = state.u0.tail_exponent
    if R < grid.r_max:
        if u0[-1] != 0.0:
            dv = (p0 or 0.0) * u0[-1] / grid.r_max
            tail += 0.5 * _power_tail(dv, grid.r_max, p0, 2, 1)
            tail -= _power_tail(u0[-1], grid.r_max, p0, 6, 0) / 6.0
        tail += 0.5 * _power_tail(state.u1.values[-1], grid.r_max, state.u1.tail_exponent, 2, 0)
    return radial_integral(grid, g, R, tail)


def superpose(grid: RadialGrid, bubbles: BubbleList | Sequence[Bubble]) -> StatePair:
    """``(sum_j W_j, 0)`` on ``grid``."""
    bl = bubbles if isinstance(bubbles, BubbleList) else BubbleList(tuple(bubbles))
    r = grid.nodes
    return StatePair(RadialProfile(grid, bl(r), 1.0, bl.derivative(r)),
                     RadialProfile(grid, np.zeros_like(r), 2.0))
