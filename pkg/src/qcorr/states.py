"""Werner and isotropic states, their purifications and d x d^2 complements.

A complement ("B complement") of a two-qudit state rho_AB is the reduced
state on A and C of a purification |psi_ABC>. Subsystem C has dimension
d^2 and is spanned by one basis vector per eigenvector of rho_AB.

Werner C basis ordering: the symmetric diagonal slots mu_kk first, then the
symmetric off-diagonal slots mu_kl (k < l, lexicographic), then the
antisymmetric slots (k < l, lexicographic). Isotropic C basis ordering:
mu_kk first, then mu_kl for k != l in lexicographic order. Indices are
0-based in code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import numpy as np

from .errors import DomainError
from .linalg import DensityOperator, PureStateVector


@dataclass(frozen=True)
class WernerParams:
    d: int
    x: float

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise DomainError(f"d must be an integer >= 2, got {self.d!r}")
        if not (-1.0 <= self.x <= 1.0):
            raise DomainError(f"Werner parameter x={self.x!r} outside [-1, 1]")


@dataclass(frozen=True)
class IsotropicParams:
    d: int
    f: float

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise DomainError(f"d must be an integer >= 2, got {self.d!r}")
        if not (0.0 <= self.f <= 1.0):
            raise DomainError(f"isotropic fidelity f={self.f!r} outside [0, 1]")


@dataclass(frozen=True)
class WernerSpectrum:
    lambda_plus: float
    lambda_minus: float
    d_plus: int
    d_minus: int


@dataclass(frozen=True)
class IsotropicSpectrum:
    lambda_phi: float
    lambda_perp: float


@dataclass(frozen=True)
class WernerAngles:
    cos_alpha: float
    sin_alpha: float
    cos_theta: float
    sin_theta: float


@dataclass(frozen=True)
class IsotropicAngles:
    cos_beta: float
    sin_beta: float
    cos_vartheta: float
    sin_vartheta: float
    cos_beta_t: float
    sin_beta_t: float
    cos_vartheta_t: float
    sin_vartheta_t: float
    p: float


@dataclass(frozen=True)
class ConsistencyReport:
    gram_deviation: float
    trace_back_deviation: float


def _werner(d, x=None) -> WernerParams:
    return d if isinstance(d, WernerParams) else WernerParams(d, x)


def _iso(d, f=None) -> IsotropicParams:
    return d if isinstance(d, IsotropicParams) else IsotropicParams(d, f)


def _sqrt(v: float) -> float:
    # clamps the -1e-17 style rounding that 1 - cos^2 can produce
    return math.sqrt(max(v, 0.0))


def _ket(d: int, k: int) -> np.ndarray:
    v = np.zeros(d, dtype=complex)
    v[k] = 1.0
    return v


def _pair(d: int, k: int, l: int) -> np.ndarray:
    return np.kron(_ket(d, k), _ket(d, l))


# -- Werner ------------------------------------------------------------------


def flip_operator(d: int) -> np.ndarray:
    """The swap ``F = sum_kl |kl><lk|`` on ``d x d``."""
    f = np.zeros((d * d, d * d), dtype=complex)
    for k in range(d):
        for l in range(d):
            f[k * d + l, l * d + k] = 1.0
    return f


def werner_spectrum(d, x=None) -> WernerSpectrum:
    p = _werner(d, x)
    d, x = p.d, p.x
    return WernerSpectrum(
        lambda_plus=(1 + x) / (d * (d + 1)),
        lambda_minus=(1 - x) / (d * (d - 1)),
        d_plus=d * (d + 1) // 2,
        d_minus=d * (d - 1) // 2,
    )


def werner_state(d, x=None) -> DensityOperator:
    p = _werner(d, x)
    d, x = p.d, p.x
    n = d**3 - d
    m = (d - x) / n * np.eye(d * d) + (d * x - 1) / n * flip_operator(d)
    return DensityOperator(m, (d, d))


def symmetric_antisymmetric_basis(d: int) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Eigenvectors of the flip operator.

    Returns the ``d(d+1)/2`` symmetric vectors (diagonal |kk> first, then
    (|kl>+|lk>)/sqrt2 for k < l) and the ``d(d-1)/2`` antisymmetric vectors
    (|kl>-|lk>)/sqrt2, in the same order as the Werner C basis.
    """
    sym = [_pair(d, k, k) for k in range(d)]
    anti = []
    for k, l in werner_offdiagonal_pairs(d):
        sym.append((_pair(d, k, l) + _pair(d, l, k)) / math.sqrt(2))
        anti.append((_pair(d, k, l) - _pair(d, l, k)) / math.sqrt(2))
    return sym, anti


def werner_offdiagonal_pairs(d: int) -> list[tuple[int, int]]:
    return [(k, l) for k in range(d) for l in range(k + 1, d)]


@lru_cache(maxsize=None)
def werner_c_index(d: int) -> dict[tuple[str, int, int], int]:
    """Map ``('+', k, l)`` / ``('-', k, l)`` labels (k <= l) to C-basis slots."""
    idx = {("+", k, k): k for k in range(d)}
    pairs = werner_offdiagonal_pairs(d)
    for n, (k, l) in enumerate(pairs):
        idx[("+", k, l)] = d + n
        idx[("-", k, l)] = d + len(pairs) + n
    return idx


def werner_angles(d, x=None) -> WernerAngles:
    p = _werner(d, x)
    s = werner_spectrum(p)
    total = s.lambda_plus + s.lambda_minus
    # sines from the spectrum directly; sqrt(1 - cos^2) loses digits near x = 1
    return WernerAngles(
        cos_alpha=_sqrt(p.d * s.lambda_plus),
        sin_alpha=_sqrt((p.d - p.x) / (p.d + 1)),
        cos_theta=_sqrt(s.lambda_plus / total),
        sin_theta=_sqrt(s.lambda_minus / total),
    )


def werner_purification(d, x=None) -> PureStateVector:
    p = _werner(d, x)
    d = p.d
    s = werner_spectrum(p)
    idx = werner_c_index(d)
    sym, anti = symmetric_antisymmetric_basis(d)
    # symmetric vectors are already in C-slot order 0..d(d+1)/2-1
    psi = np.zeros(d**4, dtype=complex)
    dc = d * d
    for n, v in enumerate(sym):
        psi += math.sqrt(s.lambda_plus) * np.kron(v, _ket(dc, n))
    for (k, l), v in zip(werner_offdiagonal_pairs(d), anti):
        psi += math.sqrt(s.lambda_minus) * np.kron(v, _ket(dc, idx["-", k, l]))
    return PureStateVector(psi, (d, d, dc))


def werner_complement_vectors(d, x=None) -> list[np.ndarray]:
    """The ``d`` orthonormal eigenvectors |Psi_r> of the Werner complement."""
    p = _werner(d, x)
    d = p.d
    a = werner_angles(p)
    idx = werner_c_index(d)
    dc = d * d
    side = a.sin_alpha / math.sqrt(d - 1)
    vecs = []
    for r in range(d):
        v = np.zeros(d * dc, dtype=complex)
        v[r * dc + idx[("+", r, r)]] += a.cos_alpha
        for k in range(d):
            if k == r:
                continue
            lo, hi = min(k, r), max(k, r)
            sign = 1.0 if k < r else -1.0
            v[k * dc + idx[("+", lo, hi)]] += side * a.cos_theta
            v[k * dc + idx[("-", lo, hi)]] += sign * side * a.sin_theta
        vecs.append(v)
    return vecs


def werner_complement(d, x=None) -> DensityOperator:
    """The d x d^2 complement of the Werner state: (1/d) sum_r |Psi_r><Psi_r|."""
    p = _werner(d, x)
    vecs = werner_complement_vectors(p)
    m = sum(np.outer(v, v.conj()) for v in vecs) / p.d
    return DensityOperator(m, (p.d, p.d * p.d))


# -- isotropic ---------------------------------------------------------------


def max_entangled_vector(d: int) -> np.ndarray:
    return sum(_pair(d, k, k) for k in range(d)) / math.sqrt(d)


def isotropic_spectrum(d, f=None) -> IsotropicSpectrum:
    p = _iso(d, f)
    return IsotropicSpectrum(lambda_phi=p.f, lambda_perp=(1 - p.f) / (p.d**2 - 1))


def isotropic_state(d, f=None) -> DensityOperator:
    p = _iso(d, f)
    d, f = p.d, p.f
    phi = max_entangled_vector(d)
    m = (1 - f) / (d * d - 1) * np.eye(d * d) + (d * d * f - 1) / (d * d - 1) * np.outer(phi, phi.conj())
    return DensityOperator(m, (d, d))


@lru_cache(maxsize=None)
def isotropic_c_labels(d: int) -> tuple[tuple[int, int], ...]:
    diag = [(k, k) for k in range(d)]
    off = [(k, l) for k in range(d) for l in range(d) if k != l]
    return tuple(diag + off)


@lru_cache(maxsize=None)
def isotropic_c_index(d: int) -> dict[tuple[int, int], int]:
    return {lab: n for n, lab in enumerate(isotropic_c_labels(d))}


def isotropic_eigenbasis(d: int) -> list[np.ndarray]:
    """Orthonormal eigenbasis of the isotropic state, aligned with the C labels.

    Slot (0, 0) is |phi>. Slots (k, k), k >= 1, come from Gram-Schmidt over
    |kk> - |00> taken in increasing k (after removing |phi>); slots (k, l)
    are the product vectors |kl>.
    """
    phi = max_entangled_vector(d)
    basis = [phi]
    for k in range(1, d):
        v = _pair(d, k, k) - _pair(d, 0, 0)
        for b in basis:
            v = v - np.vdot(b, v) * b
        basis.append(v / np.linalg.norm(v))
    for k, l in isotropic_c_labels(d)[d:]:
        basis.append(_pair(d, k, l))
    return basis


def isotropic_purification_canonical(d, f=None) -> PureStateVector:
    p = _iso(d, f)
    d = p.d
    s = isotropic_spectrum(p)
    weights = np.full(d * d, math.sqrt(s.lambda_perp))
    weights[0] = math.sqrt(s.lambda_phi)
    psi = np.zeros(d**4, dtype=complex)
    for n, (w, v) in enumerate(zip(weights, isotropic_eigenbasis(d))):
        psi += w * np.kron(v, _ket(d * d, n))
    return PureStateVector(psi, (d, d, d * d))


def isotropic_complement_canonical(d, f=None) -> DensityOperator:
    """Complement of the isotropic state from an orthonormal purification."""
    rho = isotropic_purification_canonical(d, f).reduced((0, 2))
    return DensityOperator(rho.matrix, rho.dims)


def isotropic_angles(d, f=None) -> IsotropicAngles:
    p = _iso(d, f)
    d = p.d
    s = isotropic_spectrum(p)
    lp, lq = s.lambda_phi, s.lambda_perp
    cb = _sqrt((2 * lp + d * (d - 1) * lq) / (2 * lp + 3 * d * (d - 1) * lq))
    cv = _sqrt(2 * lp / (2 * lp + d * (d - 1) * lq))
    cbt = _sqrt((2 * lp + d * lq) / (2 * lp + d * (2 * d - 1) * lq))
    cvt = _sqrt(2 * lp / (2 * lp + d * lq))
    return IsotropicAngles(
        cos_beta=cb,
        sin_beta=_sqrt(1 - cb**2),
        cos_vartheta=cv,
        sin_vartheta=_sqrt(1 - cv**2),
        cos_beta_t=cbt,
        sin_beta_t=_sqrt(1 - cbt**2),
        cos_vartheta_t=cvt,
        sin_vartheta_t=_sqrt(1 - cvt**2),
        p=lp / d + 1.5 * (d - 1) * lq,
    )


def isotropic_complement_paper_vectors(d, f=None) -> list[np.ndarray]:
    """Angle-parametrized |Phi_1>, ..., |Phi_d> of the isotropic complement.

    Built from the non-orthogonal eigenbasis of :func:`paper_eigenbasis`,
    with the angles of :func:`isotropic_angles` taken as given.
    """
    p = _iso(d, f)
    d = p.d
    a = isotropic_angles(p)
    idx = isotropic_c_index(d)
    dc = d * d
    root = math.sqrt(d - 1)

    v1 = np.zeros(d * dc, dtype=complex)
    v1[idx[0, 0]] += a.cos_beta * a.cos_vartheta
    for k in range(1, d):
        v1[idx[k, k]] -= a.cos_beta * a.sin_vartheta / root
        v1[k * dc + idx[k, 0]] += a.sin_beta / root
    vecs = [v1]
    for r in range(1, d):
        v = np.zeros(d * dc, dtype=complex)
        v[r * dc + idx[0, 0]] += a.cos_beta_t * a.cos_vartheta_t
        v[r * dc + idx[r, r]] += a.cos_beta_t * a.sin_vartheta_t
        for k in range(d):
            if k != r:
                v[k * dc + idx[k, r]] += a.sin_beta_t / root
        vecs.append(v)
    return vecs


def isotropic_complement_paper(d, f=None) -> DensityOperator:
    """p |Phi_1><Phi_1| + (1-p)/(d-1) sum_{r>=2} |Phi_r><Phi_r| from the angle vectors.

    Coincides with the true complement only for d = 2; see
    :func:`paper_purification_consistency`.
    """
    p = _iso(d, f)
    w = isotropic_angles(p).p
    vecs = isotropic_complement_paper_vectors(p)
    m = w * np.outer(vecs[0], vecs[0].conj())
    for v in vecs[1:]:
        m = m + (1 - w) / (p.d - 1) * np.outer(v, v.conj())
    return DensityOperator(m, (p.d, p.d * p.d))


def paper_eigenbasis(d: int) -> list[np.ndarray]:
    """Isotropic eigenvectors |phi>, (|kk>-|00>)/sqrt2 and |kl>; not orthogonal for d >= 3."""
    basis = [max_entangled_vector(d)]
    basis += [(_pair(d, k, k) - _pair(d, 0, 0)) / math.sqrt(2) for k in range(1, d)]
    basis += [_pair(d, k, l) for k, l in isotropic_c_labels(d)[d:]]
    return basis


def paper_purification_consistency(d, f=None) -> ConsistencyReport:
    """How far the angle construction's eigenbasis and purification are from exact."""
    p = _iso(d, f)
    d = p.d
    basis = np.array(paper_eigenbasis(d)).T
    gram = basis.conj().T @ basis
    gram_dev = float(np.max(np.abs(gram - np.eye(d * d))))

    s = isotropic_spectrum(p)
    weights = np.full(d * d, math.sqrt(s.lambda_perp))
    weights[0] = math.sqrt(s.lambda_phi)
    # purification coefficients taken as given (C slots are orthonormal)
    t = basis * weights
    rho_ab = t @ t.conj().T
    dev = float(np.max(np.abs(rho_ab - isotropic_state(p).matrix)))
    return ConsistencyReport(gram_deviation=gram_dev, trace_back_deviation=dev)


# -- 2 x 4 fixture -----------------------------------------------------------

def _render_token(tok: str, lp: float, lm: float) -> float:
    sign = -1.0 if tok.startswith("-") else 1.0
    tok = tok.lstrip("-")
    sym, _, div = tok.partition("/")
    value = {"0": 0.0, "lp": lp, "lm": lm, "r": math.sqrt(lp * lm)}[sym]
    scale = {"": 1.0, "2": 0.5, "s2": 1 / math.sqrt(2)}[div]
    return sign * value * scale


def werner_fixture_template() -> list[list[str]]:
    """Symbolic 8 x 8 template of the d = 2 Werner complement in lambda_+-.

    Tokens: ``lp`` = lambda_+, ``lm`` = lambda_-, ``r`` = sqrt(lambda_+ lambda_-),
    optional ``/2`` or ``/s2`` (divide by sqrt 2) and a leading ``-``.
    """
    text = resources.files("qcorr").joinpath("data/werner_2x4.txt").read_text()
    rows = [line.split() for line in text.splitlines() if line.strip() and not line.startswith("#")]
    return rows


def werner_fixture_matrix(x: float) -> np.ndarray:
    s = werner_spectrum(2, x)
    return np.array(
        [[_render_token(t, s.lambda_plus, s.lambda_minus) for t in row] for row in werner_fixture_template()],
        dtype=complex,
    )
