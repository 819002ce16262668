"""Radial finite-element eigensolvers on geodesic balls.

The membrane problem uses continuous quadratic elements; the clamped and
buckling plates use Hermite cubics so that ``u`` and ``u'`` are continuous and
``int Lap(u) Lap(v) w`` is finite.  All forms are integrated against the exact
polar density ``w(t)``, so the discrete spaces are conforming and the computed
eigenvalues bound the radial infimum from above.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.sparse.linalg import ArpackError, ArpackNoConvergence, eigsh, splu

from .errors import EigenSolveError
from .modelspace import ModelSpace, ct_kappa, log_volume_weight
from .report import SweepReport

KINDS = ("membrane", "clamped", "buckling")
MIN_MESH = 64
EXTRAPOLATION_ORDER = 4


@dataclass(frozen=True)
class RadialEigenProblem:
    """Lowest radial eigenvalues of a membrane, clamped or buckling problem on ``B_R``.

    ``mesh`` is the number of vertices of the uniform grid on ``[0, R]``.
    ``clamp_origin`` imposes ``u'(0) = 0`` on the plate problems; without it the
    plate energy of a Hermite element with nonzero slope at the centre is
    infinite in dimension two.
    """

    kind: str
    space: ModelSpace
    R: float
    mesh: int = 256
    quad_order: int = 8
    clamp_origin: bool = True

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if not (self.R > 0 and math.isfinite(self.R)):
            raise ValueError("R must be finite and > 0")
        if int(self.mesh) != self.mesh or self.mesh < MIN_MESH:
            raise ValueError(f"mesh must be an integer >= {MIN_MESH}")
        if int(self.quad_order) != self.quad_order or self.quad_order < 4:
            raise ValueError("quad_order must be an integer >= 4")

    @property
    def grid(self):
        return np.linspace(0.0, self.R, int(self.mesh))

    def with_mesh(self, mesh):
        return RadialEigenProblem(self.kind, self.space, self.R, mesh, self.quad_order,
                                  self.clamp_origin)


@dataclass
class SpectralResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # nodal values at the grid vertices, one column per pair
    residuals: np.ndarray
    mesh_used: int
    extrapolated: np.ndarray | None = None
    coarse_eigenvalues: np.ndarray | None = None
    observed_order: float | None = None
    log: list = field(default_factory=list)


# --- reference elements ------------------------------------------------------

def _hermite(xi, h):
    """Hermite cubic shape functions and their first two derivatives in ``t``."""
    x2, x3 = xi * xi, xi**3
    val = np.stack([1 - 3 * x2 + 2 * x3, h * (xi - 2 * x2 + x3), 3 * x2 - 2 * x3, h * (x3 - x2)])
    d1 = np.stack([(-6 * xi + 6 * x2) / h, 1 - 4 * xi + 3 * x2, (6 * xi - 6 * x2) / h,
                   3 * x2 - 2 * xi])
    d2 = np.stack([(-6 + 12 * xi) / h**2, (-4 + 6 * xi) / h, (6 - 12 * xi) / h**2,
                   (6 * xi - 2) / h])
    return val, d1, d2


def _quadratic(xi, h):
    val = np.stack([2 * (xi - 0.5) * (xi - 1), -4 * xi * (xi - 1), 2 * xi * (xi - 0.5)])
    d1 = np.stack([4 * xi - 3, 4 - 8 * xi, 4 * xi - 1]) / h
    return val, d1


def _element_points(prob: RadialEigenProblem):
    nodes, weights = np.polynomial.legendre.leggauss(int(prob.quad_order))
    xi = 0.5 * (nodes + 1)
    grid = prob.grid
    h = grid[1] - grid[0]
    t = grid[:-1, None] + h * xi[None, :]  # (elements, points)
    w = 0.5 * h * weights[None, :] * np.exp(log_volume_weight(t, prob.space))
    return xi, h, t, w


def _scatter(local, dofs, size):
    ne, k, _ = local.shape
    rows = np.repeat(dofs, k, axis=1).ravel()
    cols = np.tile(dofs, (1, k)).ravel()
    return sp.coo_matrix((local.ravel(), (rows, cols)), shape=(size, size)).tocsr()


def _free_dofs(prob: RadialEigenProblem):
    m = int(prob.mesh)
    if prob.kind == "membrane":
        size = 2 * (m - 1) + 1
        fixed = [size - 1]
    else:
        size = 2 * m
        fixed = [2 * (m - 1), 2 * (m - 1) + 1]
        if prob.clamp_origin:
            fixed.append(1)
    return size, np.setdiff1d(np.arange(size), fixed)


def assemble(prob: RadialEigenProblem):
    """Stiffness-like ``A`` and mass-like ``B`` restricted to the free degrees of freedom.

    Rows are ordered as the unknowns: ``(u_0, u'_0, u_1, u'_1, ...)`` for the plates
    and vertex/midpoint values for the membrane.
    """
    xi, h, t, w = _element_points(prob)
    ne = t.shape[0]
    size, free = _free_dofs(prob)
    if prob.kind == "membrane":
        _, d1 = _quadratic(xi, h)
        Ae = np.einsum("iq,jq,eq->eij", d1, d1, w)
        val, _ = _quadratic(xi, h)
        Be = np.einsum("iq,jq,eq->eij", val, val, w)
        dofs = 2 * np.arange(ne)[:, None] + np.arange(3)[None, :]
    else:
        val, d1, d2 = _hermite(xi, h)
        L = (prob.space.n - 1) * ct_kappa(t, prob.space.kappa)
        lap = d2[:, None, :] + L[None, :, :] * d1[:, None, :]  # (4, elements, points)
        Ae = np.einsum("ieq,jeq,eq->eij", lap, lap, w)
        if prob.kind == "clamped":
            Be = np.einsum("iq,jq,eq->eij", val, val, w)
        else:
            Be = np.einsum("iq,jq,eq->eij", d1, d1, w)
        dofs = 2 * np.arange(ne)[:, None] + np.arange(4)[None, :]
    A = _scatter(Ae, dofs, size)[free][:, free]
    B = _scatter(Be, dofs, size)[free][:, free]
    return A.tocsc(), B.tocsc()


def _jacobi(A, B):
    d = 1.0 / np.sqrt(B.diagonal())
    D = sp.diags(d)
    return (D @ A @ D).tocsc(), (D @ B @ D).tocsc(), d


def _nodal_values(prob: RadialEigenProblem, vec):
    size, free = _free_dofs(prob)
    full = np.zeros((size, vec.shape[1]))
    full[free] = vec
    return full[0::2]  # vertex values for both element families


def _solve_once(prob: RadialEigenProblem, m, log):
    A, B = assemble(prob)
    As, Bs, d = _jacobi(A, B)
    try:
        vals, vecs = eigsh(As, k=m, M=Bs, sigma=0.0, which="LM", tol=1e-13)
    except (ArpackNoConvergence, ArpackError) as exc:
        log.append(f"mesh={prob.mesh}: {exc}")
        raise EigenSolveError(f"eigensolver failed on mesh {prob.mesh}", log) from exc
    order = np.argsort(vals)
    vals, vecs = vals[order], vecs[:, order]
    # residual of the shift-inverted operator, x - lambda A^-1 B x; the direct
    # residual A x - lambda B x has a rounding floor near eps * |A| / lambda ~ h^-4
    lu = splu(As)
    res = np.linalg.norm(vecs - vals * lu.solve(Bs @ vecs), axis=0)
    res /= np.linalg.norm(vecs, axis=0)
    log.append(f"mesh={prob.mesh}: dofs={A.shape[0]} lambda_1={vals[0]!r} max_residual={res.max():.2e}")
    return vals, d[:, None] * vecs, res


def solve(prob: RadialEigenProblem, m: int = 1, extrapolate: bool = True) -> SpectralResult:
    """Lowest ``m`` radial eigenpairs by shift-invert Lanczos at zero.

    With ``extrapolate`` the problem is also solved on the half mesh and a
    fourth-order Richardson value is reported next to the raw eigenvalues.
    """
    if not (1 <= m <= prob.mesh // 4):
        raise ValueError("need 1 <= m <= mesh/4")
    log: list[str] = []
    vals, vecs, res = _solve_once(prob, m, log)
    if np.any(vals <= 0) or np.any(np.diff(vals) < 0):
        raise EigenSolveError("eigenvalues are not positive and ascending", log)
    if res.max() >= 1e-8:
        raise EigenSolveError(f"eigenpair residual {res.max():.2e} exceeds 1e-8", log)
    nodal = _nodal_values(prob, vecs)
    nodal *= np.sign(nodal[0] + (nodal[0] == 0))
    out = SpectralResult(vals, nodal, res, int(prob.mesh), log=log)
    if extrapolate:
        coarse_mesh = (int(prob.mesh) + 1) // 2
        coarse = _solve_once(_coarse(prob, coarse_mesh), m, log)[0]
        r = (prob.mesh - 1) / (coarse_mesh - 1)
        out.coarse_eigenvalues = coarse
        out.extrapolated = vals + (vals - coarse) / (r**EXTRAPOLATION_ORDER - 1)
        quarter = (coarse_mesh + 1) // 2
        if quarter >= 8:
            q = _solve_once(_coarse(prob, quarter), 1, log)[0][0]
            a, b = q - coarse[0], coarse[0] - vals[0]
            if a != 0 and b != 0 and a / b > 0:
                out.observed_order = math.log(abs(a / b)) / math.log(r)
    return out


def _coarse(prob: RadialEigenProblem, mesh):
    # below the user-facing minimum, only used internally for extrapolation
    obj = object.__new__(RadialEigenProblem)
    for k, v in dict(kind=prob.kind, space=prob.space, R=prob.R, mesh=int(mesh),
                     quad_order=prob.quad_order, clamp_origin=prob.clamp_origin).items():
        object.__setattr__(obj, k, v)
    return obj


def dense_eigenvalues(prob: RadialEigenProblem, m: int = 5):
    """Lowest ``m`` eigenvalues from a dense symmetric-definite factorization.

    The pencil is inverted to ``(B, A)`` so the wanted eigenvalues become the
    largest ones, which a dense solver resolves to full relative accuracy.
    """
    As, Bs, _ = _jacobi(*assemble(prob))
    k = As.shape[0]
    mu = scipy.linalg.eigh(Bs.toarray(), As.toarray(), subset_by_index=[k - m, k - 1],
                           eigvals_only=True)
    return np.sort(1.0 / mu)


def gap_limit(kind, space: ModelSpace):
    """Domain-independent lower bound of the first eigenvalue."""
    h = (space.n - 1) * space.kappa / 2
    return {"membrane": h**2, "clamped": h**4, "buckling": h**2}[kind]


_GAP_THEOREM = {"membrane": "T2.1", "clamped": "T1.1", "buckling": "T1.2"}


def gap_convergence_study(kind, space: ModelSpace, R_list, m: int = 1, mesh: int = 512,
                          quad_order: int = 8) -> SweepReport:
    """First radial eigenvalue on growing balls against the spectral gap.

    Rows hold ``(R, lambda_1, limit, gap)``; every row must sit strictly above
    the limit and the gaps must decrease strictly along ``R_list``.  The
    relative decay of the last gap is reported as a solver-derived quantity.
    """
    if not space.kappa > 0:
        raise ValueError("gap studies need kappa > 0")
    R_list = [float(r) for r in R_list]
    if any(b <= a for a, b in zip(R_list, R_list[1:])):
        raise ValueError("R_list must be increasing")
    limit = gap_limit(kind, space)
    rep = SweepReport(_GAP_THEOREM[kind], f"{kind} spectral gap on growing balls",
                      dict(kind=kind, n=space.n, kappa=space.kappa, mesh=mesh, m=m),
                      columns=("R", "lambda_1", "limit", "gap"))
    for R in R_list:
        prob = RadialEigenProblem(kind, space, R, mesh, quad_order)
        try:
            res = solve(prob, m, extrapolate=False)
        except EigenSolveError as exc:
            rep.add(R, math.nan, limit, math.nan, False, error=str(exc))
            continue
        lam = float(res.eigenvalues[0])
        rep.add(R, lam, limit, lam - limit, lam > limit, residual_norm=float(res.residuals[0]))
    gaps = [r.residual for r in rep.rows]
    rep.checks["gap_strictly_decreasing"] = all(b < a for a, b in zip(gaps, gaps[1:]))
    if rep.rows and rep.rows[0].computed > 0:
        rep.notes.append("relative_final_gap is solver-derived, not a proven rate")
        rep.params["relative_final_gap"] = gaps[-1] / rep.rows[0].computed
    return rep
