"""Fully entangled fraction of d x d' states.

For ``d' = K d + r`` the fully entangled fraction is the largest total
overlap of the state with K orthogonal maximally entangled vectors,
maximized over a unitary V on the second subsystem:

    F(rho) = max_V sum_i <psi_i| (I x V) rho (I x V)^dagger |psi_i>.

The numerical route maximizes this with a polar-decomposition fixed
point; closed forms and bounds for the Werner and isotropic complements
live alongside it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapabilityError, DegeneratePolarError, DimensionError
from .linalg import DensityOperator, haar_random_unitary, polar_unitary
from .optim import OptimizerConfig, OptimizerReport, restart_generators
from .states import (
    _iso,
    _werner,
    isotropic_angles,
    isotropic_c_index,
    isotropic_complement_paper_vectors,
    werner_c_index,
    werner_spectrum,
    werner_angles,
)

MAX_SECOND_DIM = 9
DEFAULT_RESTARTS = 20
DEFAULT_RESTARTS_LARGE = 40
DEFAULT_MAX_ITERATIONS = 200
DEFAULT_TOLERANCE = 1e-11


@dataclass(frozen=True)
class MaxEntangledSet:
    """K orthonormal vectors on d x d', each with d equal Schmidt coefficients."""

    vectors: np.ndarray  # shape (K, d * d')
    d: int
    d_prime: int

    @property
    def k(self) -> int:
        return self.vectors.shape[0]

    def projector(self) -> np.ndarray:
        return self.vectors.T @ self.vectors.conj()

    def overlap_sum(self, rho) -> float:
        """``sum_i <v_i| rho |v_i>``."""
        m = rho.matrix if isinstance(rho, DensityOperator) else np.asarray(rho)
        return float(np.real(np.einsum("ia,ab,ib->", self.vectors.conj(), m, self.vectors)))


@dataclass
class FefResult:
    value: float
    report: OptimizerReport


@dataclass(frozen=True)
class TwoAngleScan:
    gamma: float
    gamma_prime: float
    value: float
    maximizers: np.ndarray  # (n, 2) grid points tied with the maximum
    step: float


def schmidt_coefficients(vec: np.ndarray, d: int, d_prime: int) -> np.ndarray:
    """Schmidt coefficients of a vector on d x d', descending (length d)."""
    return np.linalg.svd(np.asarray(vec).reshape(d, d_prime), compute_uv=False)


def max_entangled_basis(d: int, d_prime: int) -> MaxEntangledSet:
    """The K = floor(d'/d) vectors (1/sqrt d) sum_j |j>|j + i d>."""
    if d > d_prime:
        raise DimensionError(f"need d <= d', got d={d}, d'={d_prime}")
    k = d_prime // d
    vecs = np.zeros((k, d * d_prime), dtype=complex)
    for i in range(k):
        for j in range(d):
            vecs[i, j * d_prime + j + i * d] = 1 / math.sqrt(d)
    return MaxEntangledSet(vecs, d, d_prime)


# -- numerical maximization --------------------------------------------------


def _environment(p4: np.ndarray, rho4: np.ndarray, v: np.ndarray) -> np.ndarray:
    # derivative of the objective with respect to conj(V); objective = Re Tr(V^dag E)
    return np.einsum("beac,cx,axby->ey", p4, v, rho4, optimize=True)


def fef_objective(rho: DensityOperator, v: np.ndarray, mes: MaxEntangledSet | None = None) -> float:
    d, dp = rho.dims
    mes = mes or max_entangled_basis(d, dp)
    x = np.kron(np.eye(d), v)
    return mes.overlap_sum(x @ rho.matrix @ x.conj().T)


def fef_gradient(rho: DensityOperator, v: np.ndarray, mes: MaxEntangledSet | None = None) -> np.ndarray:
    """Wirtinger derivative of :func:`fef_objective` with respect to ``conj(V)``."""
    d, dp = rho.dims
    mes = mes or max_entangled_basis(d, dp)
    return _environment(
        mes.projector().reshape(d, dp, d, dp), rho.matrix.reshape(d, dp, d, dp), np.asarray(v, dtype=complex)
    )


def fef_numeric(
    rho: DensityOperator,
    cfg: OptimizerConfig | None = None,
    rng: np.random.Generator | None = None,
    *,
    trace: list | None = None,
) -> FefResult:
    """Fully entangled fraction by multi-restart polar fixed-point ascent.

    Each restart draws a Haar-random V and iterates ``V <- polar(E(V))``
    where E is the gradient with respect to conj(V). The objective is a
    convex quadratic form in V, so every step is non-decreasing. When E
    is rank deficient (common at the family endpoints, where it is so for
    every V) the SVD completion of the polar factor is used; it is still a
    maximizer of the linearized objective, so monotonicity is kept.
    When ``trace`` is a list, the per-iteration objective values of every
    restart are appended to it.
    """
    cfg = cfg or OptimizerConfig()
    d, dp = rho.dims
    if d > dp:
        raise DimensionError(f"need d <= d', got dims {rho.dims}")
    if dp > MAX_SECOND_DIM:
        raise CapabilityError(f"second subsystem dimension {dp} exceeds guard {MAX_SECOND_DIM}")
    restarts = cfg.restarts or (DEFAULT_RESTARTS_LARGE if dp >= 9 else DEFAULT_RESTARTS)
    max_iter = cfg.max_iterations or DEFAULT_MAX_ITERATIONS
    tol = cfg.tolerance or DEFAULT_TOLERANCE

    mes = max_entangled_basis(d, dp)
    p4 = mes.projector().reshape(d, dp, d, dp)
    rho4 = rho.matrix.reshape(d, dp, d, dp)

    best = -math.inf
    history = []
    iterations = 0
    converged = False
    for gen in restart_generators(rng, cfg, restarts):
        v = haar_random_unitary(dp, gen)
        env = _environment(p4, rho4, v)
        value = float(np.real(np.vdot(v, env)))
        values = [value]
        for _ in range(max_iter):
            iterations += 1
            try:
                v = polar_unitary(env)
            except DegeneratePolarError:
                v = polar_unitary(env, allow_degenerate=True)
            env = _environment(p4, rho4, v)
            new = float(np.real(np.vdot(v, env)))
            values.append(new)
            if new - value < tol:
                value = max(value, new)
                converged = True
                break
            value = new
        if trace is not None:
            trace.append(values)
        if value > best:
            best = value
        history.append(best)

    return FefResult(best, OptimizerReport(best, restarts, iterations, converged, cfg.seed, history))


# -- Werner complement -------------------------------------------------------


def fef_werner_complement_closed(d, x=None) -> float:
    p = _werner(d, x)
    d, x = p.d, p.x
    return (d + x + math.sqrt(max((d * d - 1) * (1 - x * x), 0.0))) / (2 * d)


def fef_werner_complement_closed_spectral(d, x=None) -> float:
    """Same value written through the Werner eigenvalues."""
    p = _werner(d, x)
    s = werner_spectrum(p)
    return 0.25 * ((p.d + 1) * math.sqrt(s.lambda_plus) + (p.d - 1) * math.sqrt(s.lambda_minus)) ** 2


def werner_complement_max_set(d: int) -> MaxEntangledSet:
    """The d maximally entangled vectors the Werner complement tends to at x = 1/d.

    |Psi_r^max> = (1/sqrt d) sum_k |k>|mu_k^(r)> with mu_r^(r) = mu_rr^+ and
    mu_k^(r) = (mu^+ +- mu^-)/sqrt2 on the pair {k, r} (+ for k < r).
    """
    idx = werner_c_index(d)
    dc = d * d
    vecs = np.zeros((d, d * dc), dtype=complex)
    for r in range(d):
        vecs[r, r * dc + idx["+", r, r]] = 1.0
        for k in range(d):
            if k == r:
                continue
            lo, hi = min(k, r), max(k, r)
            sign = 1.0 if k < r else -1.0
            vecs[r, k * dc + idx["+", lo, hi]] = 1 / math.sqrt(2)
            vecs[r, k * dc + idx["-", lo, hi]] = sign / math.sqrt(2)
    return MaxEntangledSet(vecs / math.sqrt(d), d, dc)


# -- isotropic complement ----------------------------------------------------


def eta_max_set(d: int) -> MaxEntangledSet:
    """|eta_r> = (1/sqrt d) sum_k |k>|mu_kr>, r = 1..d, in the isotropic C basis."""
    idx = isotropic_c_index(d)
    dc = d * d
    vecs = np.zeros((d, d * dc), dtype=complex)
    for r in range(d):
        for k in range(d):
            vecs[r, k * dc + idx[k, r]] = 1 / math.sqrt(d)
    return MaxEntangledSet(vecs, d, dc)


def fef_isotropic_complement_lower_bound(d, f=None) -> float:
    """Overlap of the angle-parametrized isotropic complement with the eta set.

    This lower-bounds the fully entangled fraction of that state.
    """
    p = _iso(d, f)
    d = p.d
    a = isotropic_angles(p)
    root = math.sqrt(d - 1)
    first = (a.cos_beta * a.cos_vartheta + root * a.sin_beta) ** 2
    rest = (a.cos_beta_t * a.sin_vartheta_t + root * a.sin_beta_t) ** 2
    return (a.p * first + (1 - a.p) * rest) / d


def phi_max_special(d: int) -> tuple[float | None, list[np.ndarray]]:
    """Fidelity at which |Phi_1> of the isotropic complement is maximally entangled.

    Solutions exist only for d = 2, 3; otherwise returns ``(None, [])``.
    The vectors returned are the angle-parametrized |Phi_r> at that fidelity.
    """
    if d not in (2, 3):
        return None, []
    f1 = (3 - d) / (d * d - d + 2)
    return f1, isotropic_complement_paper_vectors(d, f1)


def phi_r_max_fidelity(d: int) -> float:
    """Fidelity at which |Phi_r>, r >= 2, are maximally entangled (any d)."""
    return d / (2 * (d * d - 1) + d)


# -- two-angle scan for 2 x 4 ------------------------------------------------


def two_angle_objective(x: float, gamma, gamma_prime):
    """(f1 + f2) / 4 for the two-parameter family of 2 x 4 maximally entangled pairs."""
    a = werner_angles(2, x)
    ca, sa, ct, st = a.cos_alpha, a.sin_alpha, a.cos_theta, a.sin_theta
    g, gp = np.asarray(gamma), np.asarray(gamma_prime)
    f1 = (np.cos(g) * ca + sa * ct * np.cos(gp) + sa * st * np.sin(gp)) ** 2
    f2 = (np.cos(g) * ca + sa * ct * np.sin(gp) + sa * st * np.cos(gp)) ** 2
    return (f1 + f2) / 4


def appendix_two_angle_scan(x: float, grid_size: int = 721, tie_tol: float = 1e-12) -> TwoAngleScan:
    """Grid maximization of :func:`two_angle_objective` over [-pi/2, pi/2]^2.

    Endpoints are included. Values within ``tie_tol`` of the maximum are
    ties; the reported argmax is the lexicographically smallest tie and
    ``maximizers`` lists them all.
    """
    if grid_size < 3:
        raise ValueError("grid_size must be >= 3")
    axis = np.linspace(-np.pi / 2, np.pi / 2, grid_size)
    g, gp = np.meshgrid(axis, axis, indexing="ij")
    vals = two_angle_objective(x, g, gp)
    vmax = float(vals.max())
    ties = np.argwhere(vals >= vmax - tie_tol)  # row-major, so lexicographic
    i, j = ties[0]
    return TwoAngleScan(
        gamma=float(axis[i]),
        gamma_prime=float(axis[j]),
        value=vmax,
        maximizers=np.column_stack([axis[ties[:, 0]], axis[ties[:, 1]]]),
        step=float(axis[1] - axis[0]),
    )
