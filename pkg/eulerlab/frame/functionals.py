"""
Functionals (L1, L2) of the moving frame.

On the truncated space V = {zero-mean sigma_1 modes} + {all U_1 modes} with
|xi|_inf <= K, the rows l1, l2 solve

    (l1, l2) . T = b,
    T(sigma_1, U_1) = ((I-P)(U.grad sigma_1 + (1+theta sigma) div U_1),
                       (1+theta sigma) grad sigma_1 + U_1 + U.grad U_1),
    b(sigma_1, U_1) = P(U.grad sigma_1 + theta sigma div U_1),

where products are exact Fourier convolutions of the state truncated to the
same box. A functional acts on a real field f as Re sum_xi l(xi) f^(xi).
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg
from loguru import logger

from ..dynamics.gas import GasParameters
from ..errors import FrameSolveError
from ..spectral.fields import ScalarField, State
from ..spectral.grid import GridSpec, retained_modes
from ..utils.parallel import ordered_map

SOLVE_RTOL = 1e-10
SOLVE_ATOL = 1e-14
PIVOT_RTOL = 1e-13


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@lru_cache(maxsize=32)
def frame_modes(grid: GridSpec, K: int) -> np.ndarray:
    """Box modes |xi|_inf <= K in lexicographic order, shape (m, dim)."""
    return _frozen(retained_modes(grid, K))


@lru_cache(maxsize=32)
def _mode_lookup(grid: GridSpec, K: int) -> Tuple[np.ndarray, ...]:
    """Fancy index into a grid-shaped array for every frame mode."""
    modes = frame_modes(grid, K)
    return tuple(_frozen(modes[:, a] % grid.N) for a in range(grid.dim))


@lru_cache(maxsize=32)
def _difference_lookup(grid: GridSpec, K: int) -> Tuple[np.ndarray, Tuple[np.ndarray, ...]]:
    """(in-box mask, fancy index) of xi - eta for every pair of frame modes."""
    modes = frame_modes(grid, K)
    diff = modes[:, None, :] - modes[None, :, :]
    inside = np.max(np.abs(diff), axis=-1) <= K
    return _frozen(inside), tuple(_frozen(diff[..., a] % grid.N) for a in range(grid.dim))


def zero_mode_position(grid: GridSpec, K: int) -> int:
    modes = frame_modes(grid, K)
    return int(np.flatnonzero(~modes.any(axis=1))[0])


def gather(grid: GridSpec, coeffs: np.ndarray, K: int) -> np.ndarray:
    """Coefficients at the frame modes; leading axes of coeffs are kept."""
    return coeffs[(Ellipsis,) + _mode_lookup(grid, K)]


def convolution_matrix(grid: GridSpec, coeffs: np.ndarray, K: int) -> np.ndarray:
    """Conv(a)[xi, eta] = a^(xi - eta) for a truncated to the box of radius K."""
    inside, index = _difference_lookup(grid, K)
    return np.where(inside, coeffs[index], 0.0)


@dataclass(frozen=True, eq=False)
class FrameFunctionals:
    """
    Rows of L1 (over zero-mean sigma modes) and L2 (over U modes).

    l1 has shape (m,) with l1 = 0 at xi = 0; l2 has shape (dim, m); m is the
    number of modes with |xi|_inf <= frame_truncation.
    """
    grid: GridSpec
    frame_truncation: int
    l1: np.ndarray
    l2: np.ndarray
    base_state: Optional[State] = None

    @property
    def modes(self) -> np.ndarray:
        return frame_modes(self.grid, self.frame_truncation)

    def apply_l1(self, sigma: ScalarField) -> float:
        return float(np.real(np.sum(self.l1 * gather(self.grid, sigma.coeffs, self.frame_truncation))))

    def apply_l2(self, velocity: Sequence[ScalarField]) -> float:
        coeffs = np.stack([u.coeffs for u in velocity])
        return float(np.real(np.sum(self.l2 * gather(self.grid, coeffs, self.frame_truncation))))

    def apply(self, state: State) -> float:
        """L1 sigma + L2 U (L1 ignores the mean)."""
        return self.apply_l1(state.sigma) + self.apply_l2(state.velocity)

    def row_norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.l1) ** 2) + np.sum(np.abs(self.l2) ** 2)))

    def __sub__(self, other: "FrameFunctionals") -> "FrameFunctionals":
        if other.grid != self.grid or other.frame_truncation != self.frame_truncation:
            raise ValueError("frames differ in grid or truncation")
        return FrameFunctionals(self.grid, self.frame_truncation, self.l1 - other.l1, self.l2 - other.l2)

    def __mul__(self, scalar: float) -> "FrameFunctionals":
        return FrameFunctionals(self.grid, self.frame_truncation, self.l1 * scalar, self.l2 * scalar)

    __rmul__ = __mul__


def effective_truncation(grid: GridSpec, K_frame: int) -> int:
    if K_frame < 1:
        raise ValueError(f"K_frame must be >= 1, got {K_frame}")
    if K_frame > grid.cutoff:
        logger.warning(f"K_frame={K_frame} exceeds the dealias cutoff {grid.cutoff}; clamping")
        return grid.cutoff
    return K_frame


def assemble_frame_system(state: State, params: GasParameters, K_frame: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Dense T and b of the frame equation.

    Unknown ordering: sigma_1 modes without xi = 0, then U_1 component by
    component, each over the box modes in lexicographic order.

    Returns:
        (T of shape (n, n), b of shape (n,)) with n = (dim+1) m - 1
    """
    grid = state.grid
    K = effective_truncation(grid, K_frame)
    modes = frame_modes(grid, K)
    m, dim = modes.shape
    zero = zero_mode_position(grid, K)

    symbol = 2j * np.pi * modes.T
    identity = np.eye(m)
    advection = sum(convolution_matrix(grid, state.data[j + 1], K) * symbol[j][None, :] for j in range(dim))
    scaling = identity + params.theta * convolution_matrix(grid, state.data[0], K)

    full = np.zeros(((dim + 1) * m, (dim + 1) * m), dtype=np.complex128)
    full[:m, :m] = advection
    for i in range(dim):
        rows = slice((i + 1) * m, (i + 2) * m)
        full[:m, rows] = scaling * symbol[i][None, :]
        full[rows, :m] = scaling * symbol[i][None, :]
        full[rows, rows] = identity + advection

    keep = np.ones((dim + 1) * m, dtype=bool)
    keep[zero] = False
    T = full[np.ix_(keep, keep)]
    b = full[zero, keep]
    return T, b


def solve_frame(state: State, params: GasParameters, K_frame: int) -> FrameFunctionals:
    """
    Solve (l1, l2) T = b.

    Raises:
        FrameSolveError: If T is numerically singular or the solve residual is too large
    """
    grid = state.grid
    K = effective_truncation(grid, K_frame)
    T, b = assemble_frame_system(state, params, K)
    lu, piv = scipy.linalg.lu_factor(T.T, check_finite=False)
    pivots = np.abs(np.diag(lu))
    if not np.all(np.isfinite(pivots)) or pivots.min() <= PIVOT_RTOL * pivots.max():
        raise FrameSolveError(f"frame matrix singular at K_frame={K} (pivot ratio {pivots.min() / pivots.max():.3e})")
    row = scipy.linalg.lu_solve((lu, piv), b, check_finite=False)

    residual = float(np.linalg.norm(row @ T - b))
    if not np.isfinite(residual) or residual >= SOLVE_RTOL * float(np.linalg.norm(b)) + SOLVE_ATOL:
        raise FrameSolveError(f"frame solve residual {residual:.3e} above tolerance")

    m = frame_modes(grid, K).shape[0]
    zero = zero_mode_position(grid, K)
    l1 = np.zeros(m, dtype=np.complex128)
    l1[np.arange(m) != zero] = row[: m - 1]
    l2 = row[m - 1:].reshape(grid.dim, m)
    logger.debug(f"Solved frame at K={K}: |l|={np.sqrt(np.sum(np.abs(row) ** 2)):.3e}, residual={residual:.3e}")
    return FrameFunctionals(grid, K, l1, l2, state)


def solve_frames(states: Sequence[State], params: GasParameters, K_frame: int) -> List[FrameFunctionals]:
    """solve_frame at every state, in order."""
    return ordered_map(lambda state: solve_frame(state, params, K_frame), states)
