"""Entropies, entanglement of formation, classical correlation and discord.

Discord is one-way with rank-1 projective measurements on the second
subsystem. Two routes are provided: a brute-force measurement oracle that
works for any small bipartite state, and closed forms for the complements
of Werner and isotropic states obtained from the Koashi-Winter identity
``E_f(rho_AB) + J(rho_AC) = S(rho_A)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import CapabilityError, DomainError, StateError
from .linalg import (
    ZERO_EIGENVALUE,
    DensityOperator,
    as_matrix,
    eigh,
    haar_random_unitary,
    partial_trace,
    unitary_from_hermitian,
    xlog2x,
)
from .optim import OptimizerConfig, OptimizerReport, restart_generators
from .states import (
    IsotropicParams,
    WernerParams,
    _iso,
    _werner,
    isotropic_complement_canonical,
    werner_complement,
)

MAX_MEASURED_DIM = 16
DEFAULT_RESTARTS = 20
DEFAULT_MAX_ITERATIONS = 500
DEFAULT_TOLERANCE = 1e-7  # BFGS gradient-norm tolerance


@dataclass
class DiscordResult:
    discord: float
    classical_correlation: float
    mutual_information: float
    report: OptimizerReport


class EofValue(float):
    """Isotropic EoF value; ``conjectured`` marks the d > 3 piecewise formula."""

    def __new__(cls, value, conjectured=False):
        obj = float.__new__(cls, value)
        obj.conjectured = conjectured
        return obj


# -- entropies ---------------------------------------------------------------


def _entropy_of_spectrum(lam: np.ndarray) -> float:
    if np.min(lam, initial=0.0) < -1e-10:
        raise StateError(f"negative eigenvalue {np.min(lam):.3e} in entropy")
    lam = lam[lam > ZERO_EIGENVALUE]
    return float(-np.sum(lam * np.log2(lam)))


def von_neumann_entropy(rho) -> float:
    """Von Neumann entropy in bits; eigenvalues below 1e-12 count as zero."""
    return max(_entropy_of_spectrum(eigh(as_matrix(rho))[0]), 0.0)


def binary_entropy(p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"binary entropy argument {p!r} outside [0, 1]")
    return -xlog2x(p) - xlog2x(1.0 - p)


def mutual_information(rho: DensityOperator) -> float:
    return (
        von_neumann_entropy(partial_trace(rho, "first"))
        + von_neumann_entropy(partial_trace(rho, "second"))
        - von_neumann_entropy(rho)
    )


# -- entanglement of formation ------------------------------------------------


def concurrence_eof(g: float) -> float:
    """``h((1 + sqrt(1 - g^2)) / 2)``, the two-qubit EoF as a function of concurrence."""
    return binary_entropy(0.5 * (1.0 + math.sqrt(max(1.0 - g * g, 0.0))))


def eof_werner(d, x=None) -> float:
    p = _werner(d, x)
    if p.x >= 0.0:
        return 0.0
    return concurrence_eof(p.x)


def eof_isotropic(d, f=None) -> EofValue:
    """EoF of the isotropic state.

    d = 2 uses the concurrence formula with g = 2f - 1. For d >= 3 the
    convex hull is the explicit three-piece function (zero, h(xi) +
    (1 - xi) log2(d - 1), then linear); it is established for d = 3 and
    only conjectured beyond, which the returned flag records.
    """
    p = _iso(d, f)
    d, f = p.d, p.f
    conjectured = d > 3
    if f <= 1.0 / d:
        return EofValue(0.0, conjectured)
    if d == 2:
        return EofValue(concurrence_eof(2 * f - 1), False)
    if f < 4.0 * (d - 1) / d**2:
        xi = (math.sqrt(f) + math.sqrt((d - 1) * (1 - f))) ** 2 / d
        xi = min(xi, 1.0)
        return EofValue(binary_entropy(xi) + (1 - xi) * math.log2(d - 1), conjectured)
    return EofValue(d * (f - 1) / (d - 2) * math.log2(d - 1) + math.log2(d), conjectured)


# -- closed-form discords ----------------------------------------------------


def _plogq(p: float, q: float) -> float:
    return 0.0 if p == 0.0 else p * math.log2(q)


def werner_entropy(d, x=None) -> float:
    """S(rho_w) from the two eigenvalues and their multiplicities."""
    p = _werner(d, x)
    d, x = p.d, p.x
    return -_plogq((1 + x) / 2, (1 + x) / (d * d + d)) - _plogq((1 - x) / 2, (1 - x) / (d * d - d))


def isotropic_entropy(d, f=None) -> float:
    p = _iso(d, f)
    d, f = p.d, p.f
    return -_plogq(f, f) - _plogq(1 - f, (1 - f) / (d * d - 1))


def discord_werner_complement_closed(d, x=None) -> float:
    """Discord of the Werner complement (measurement on C), in bits."""
    p = _werner(d, x)
    return eof_werner(p) + werner_entropy(p) - math.log2(p.d)


def discord_isotropic_complement_closed(d, f=None) -> float:
    p = _iso(d, f)
    return float(eof_isotropic(p)) + isotropic_entropy(p) - math.log2(p.d)


# -- measurement oracle ------------------------------------------------------


def _hermitian_from_params(theta: np.ndarray, n: int) -> np.ndarray:
    h = np.zeros((n, n), dtype=complex)
    iu = np.triu_indices(n, 1)
    m = len(iu[0])
    h[np.diag_indices(n)] = theta[:n]
    h[iu] = theta[n : n + m] + 1j * theta[n + m :]
    return h + np.triu(h, 1).conj().T


def conditional_entropy(rho: DensityOperator, basis: np.ndarray) -> float:
    """Average entropy of A after measuring C in the columns of ``basis``.

    Returns ``sum_i p_i S(rho_A|i)``.
    """
    da, dc = rho.dims
    t = rho.matrix.reshape(da, dc, da, dc)
    sig = np.einsum("acbd,ci,di->iab", t, basis.conj(), basis)
    lam = np.linalg.eigvalsh(0.5 * (sig + np.conj(np.swapaxes(sig, 1, 2))))
    probs = lam.sum(axis=1)
    lam = lam[lam > 1e-15]
    probs = probs[probs > 1e-15]
    return float(-np.sum(lam * np.log2(lam)) + np.sum(probs * np.log2(probs)))


def classical_correlation_oracle(
    rho: DensityOperator,
    cfg: OptimizerConfig | None = None,
    rng: np.random.Generator | None = None,
) -> tuple[float, OptimizerReport]:
    """Maximize ``S(rho_A) - sum_i p_i S(rho_A|i)`` over orthonormal bases of C.

    Each restart starts from a Haar-random basis ``U0`` and runs BFGS
    (finite-difference gradients) on ``U0 exp(iH)`` over the real
    parameters of the Hermitian ``H``.
    """
    cfg = cfg or OptimizerConfig()
    da, dc = rho.dims
    if dc > MAX_MEASURED_DIM:
        raise CapabilityError(f"measured subsystem dimension {dc} exceeds guard {MAX_MEASURED_DIM}")
    restarts = cfg.restarts or DEFAULT_RESTARTS
    max_iter = cfg.max_iterations or DEFAULT_MAX_ITERATIONS
    tol = cfg.tolerance or DEFAULT_TOLERANCE
    s_a = von_neumann_entropy(partial_trace(rho, "first"))

    best = math.inf
    history = []
    iterations = 0
    converged = False
    for gen in restart_generators(rng, cfg, restarts):
        u0 = haar_random_unitary(dc, gen)

        def objective(theta, u0=u0):
            return conditional_entropy(rho, u0 @ unitary_from_hermitian(_hermitian_from_params(theta, dc)))

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            res = minimize(
                objective,
                np.zeros(dc * dc),
                method="BFGS",
                options={"maxiter": max_iter, "gtol": tol},
            )
        iterations += int(res.nit)
        converged = converged or bool(res.success)
        # strict < keeps the first-found minimum on ties
        if res.fun < best:
            best = float(res.fun)
        history.append(s_a - best)

    value = s_a - best
    report = OptimizerReport(value, restarts, iterations, converged, cfg.seed, history)
    return value, report


def discord_oracle(
    rho: DensityOperator,
    cfg: OptimizerConfig | None = None,
    rng: np.random.Generator | None = None,
) -> DiscordResult:
    j, report = classical_correlation_oracle(rho, cfg, rng)
    mi = mutual_information(rho)
    return DiscordResult(discord=mi - j, classical_correlation=j, mutual_information=mi, report=report)


def koashi_winter_residual(
    params: WernerParams | IsotropicParams,
    cfg: OptimizerConfig | None = None,
    rng: np.random.Generator | None = None,
) -> float:
    """``|E_f(rho_AB) + J(rho_AC) - S(rho_A)|`` with J from the measurement oracle."""
    if isinstance(params, WernerParams):
        eof = eof_werner(params)
        rho = werner_complement(params)
    elif isinstance(params, IsotropicParams):
        eof = float(eof_isotropic(params))
        rho = isotropic_complement_canonical(params)
    else:
        raise TypeError(f"expected WernerParams or IsotropicParams, got {type(params).__name__}")
    j, _ = classical_correlation_oracle(rho, cfg, rng)
    return abs(eof + j - math.log2(params.d))
