"""Three-point difference scheme for linear reaction-diffusion problems.

For ``-eps^2 u'' + b(x) u = g(x)`` on a (possibly strongly nonuniform)
mesh, interior row ``i`` of the discrete system reads

    -eps^2/(hbar_i h_i) y_{i-1}
      + [eps^2/hbar_i (1/h_i + 1/h_{i+1}) + b(x_i)] y_i
      - eps^2/(hbar_i h_{i+1}) y_{i+1}  =  g(x_i),

with Dirichlet data folded into the first and last right-hand sides.
With ``b > 0`` the matrix is an irreducibly diagonally dominant M-matrix,
so the Thomas elimination below needs no pivoting.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mesh import Mesh


class NonpositiveCoefficientError(ValueError):
    """Reaction coefficient b(x_i) <= 0 at some interior node."""


class ZeroPivotError(RuntimeError):
    """Vanishing pivot during elimination; diagonal dominance is broken."""


@dataclass(frozen=True)
class TridiagonalSystem:
    """Interior system for unknowns ``y_1 ... y_{n-1}``.

    All four arrays have length ``n - 1``; ``sub[0]`` and ``sup[-1]`` are
    zero by convention.
    """

    sub: np.ndarray
    diag: np.ndarray
    sup: np.ndarray
    rhs: np.ndarray

    @property
    def m(self) -> int:
        return len(self.diag)


def _values(func_or_array, x: np.ndarray) -> np.ndarray:
    if callable(func_or_array):
        return np.asarray(func_or_array(x), dtype=float)
    vals = np.asarray(func_or_array, dtype=float)
    if vals.shape != x.shape:
        raise ValueError("coefficient array length does not match interior nodes")
    return vals


def assemble(mesh: Mesh, eps: float, b, g,
             bc_left: float = 0.0, bc_right: float = 0.0) -> TridiagonalSystem:
    """Assemble the interior tridiagonal system.

    ``b`` and ``g`` may be callables of the interior nodes or plain arrays
    of interior values.
    """
    xi = mesh.interior()
    bvals = _values(b, xi)
    if np.any(bvals <= 0.0):
        raise NonpositiveCoefficientError("b(x) must be strictly positive")
    gvals = _values(g, xi).copy()
    h = mesh.steps
    hbar = mesh.half_steps
    e2 = eps * eps
    lower = -e2 / (hbar * h[:-1])
    upper = -e2 / (hbar * h[1:])
    diag = -(lower + upper) + bvals
    gvals[0] -= lower[0] * bc_left
    gvals[-1] -= upper[-1] * bc_right
    sub = np.concatenate(([0.0], lower[1:]))
    sup = np.concatenate((upper[:-1], [0.0]))
    return TridiagonalSystem(sub=sub, diag=diag, sup=sup, rhs=gvals)


def thomas_solve(sys: TridiagonalSystem) -> np.ndarray:
    """Forward elimination and back substitution, no pivoting.

    Plain-float loops; substantially faster than per-element ndarray
    indexing at the sizes used here (up to ~1e5 unknowns).
    """
    sub = sys.sub.tolist()
    diag = sys.diag.tolist()
    sup = sys.sup.tolist()
    rhs = sys.rhs.tolist()
    m = len(diag)
    c = [0.0] * m
    d = [0.0] * m
    piv = diag[0]
    if abs(piv) < 1e-300:
        raise ZeroPivotError("zero pivot in row 0")
    c[0] = sup[0] / piv
    d[0] = rhs[0] / piv
    for i in range(1, m):
        piv = diag[i] - sub[i] * c[i - 1]
        if abs(piv) < 1e-300:
            raise ZeroPivotError(f"zero pivot in row {i}")
        c[i] = sup[i] / piv
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / piv
    y = [0.0] * m
    y[-1] = d[-1]
    for i in range(m - 2, -1, -1):
        y[i] = d[i] - c[i] * y[i + 1]
    return np.asarray(y)


def residual_norm(sys: TridiagonalSystem, y: np.ndarray) -> float:
    """Max-norm of ``A y - rhs`` for an interior solution vector."""
    ay = sys.diag * y
    ay[1:] += sys.sub[1:] * y[:-1]
    ay[:-1] += sys.sup[:-1] * y[1:]
    return float(np.max(np.abs(ay - sys.rhs)))


def solve_linear(mesh: Mesh, eps: float, b, g,
                 bc_left: float = 0.0, bc_right: float = 0.0) -> np.ndarray:
    """Assemble and solve; returns the full vector ``y_0 ... y_n``."""
    sys = assemble(mesh, eps, b, g, bc_left, bc_right)
    y = np.empty(mesh.n + 1)
    y[0] = bc_left
    y[-1] = bc_right
    y[1:-1] = thomas_solve(sys)
    return y
