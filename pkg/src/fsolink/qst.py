"""Satellite-based qubit state tomography over the lossy optical channel.

A four-outcome SIC-POVM measures identically prepared photons; counts follow
independent Poisson statistics at the effective photon number that survives
the link. States are reconstructed by least squares over a Cholesky
parameterization (which keeps every candidate physical) and compared to the
input via the Uhlmann-Jozsa fidelity.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import minimize

from .budget import ChannelParams, compose, fading_variance
from .fading import FadingModel, sample
from .geometry import EARTH_RADIUS_M, LinkGeometry

# Poisson means above this use a rounded/clamped Gaussian draw instead of the
# exact sampler; relative moment error there is < 1e-3.
_POISSON_EXACT_MAX = 1e7

_PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
_PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

# Bloch vectors of a regular tetrahedron; pairwise dot products are -1/3.
_TETRAHEDRON = np.array(
    [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float
) / math.sqrt(3.0)


class ReconstructionError(RuntimeError):
    """No optimizer restart converged within the iteration budget."""


class EnsembleKind(enum.Enum):
    HAAR_PURE = "haar_pure"
    BURES_MIXED = "bures_mixed"


class FadingResample(enum.Enum):
    """Whether the intensity factor is redrawn per tomography trial or held
    fixed per zenith grid point."""

    PER_TRIAL = "per_trial"
    PER_POINT = "per_point"


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 5
    tol: float = 1e-9
    max_iter: int = 10_000

    def __post_init__(self) -> None:
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.tol <= 0:
            raise ValueError("tol must be > 0")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


@dataclass(frozen=True)
class TomographyConfig:
    photons: int = 1_000_000
    transmittance: float = 1.0
    ensemble_size: int = 220
    seed: int = 0
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    ensemble_kind: EnsembleKind = EnsembleKind.HAAR_PURE

    def __post_init__(self) -> None:
        if self.photons < 1:
            raise ValueError("photons must be >= 1")
        if not 0.0 <= self.transmittance <= 1.0:
            raise ValueError("transmittance must lie in [0, 1]")
        if self.ensemble_size < 1:
            raise ValueError("ensemble_size must be >= 1")


@dataclass(frozen=True)
class TomographyResult:
    fidelities: np.ndarray
    mean_fidelity: float
    sd_fidelity: float
    failures: int


@dataclass(frozen=True)
class Reconstruction:
    rho: np.ndarray
    cost: float
    converged: bool
    degenerate: bool


@dataclass(frozen=True)
class FidelityTable:
    """Ensemble fidelity statistics per (diameter, zenith) cell."""

    zenith_deg: np.ndarray
    diameters_m: np.ndarray
    photons: int
    mean_fidelity: np.ndarray
    sd_fidelity: np.ndarray
    failures: np.ndarray


def round_half_away(x: float) -> int:
    """Nearest integer, ties away from zero."""
    return int(math.floor(x + 0.5)) if x >= 0 else -int(math.floor(-x + 0.5))


def sic_povm_qubit() -> np.ndarray:
    """The four-element qubit SIC-POVM, shape (4, 2, 2).

    M_k = (I + s_k . sigma) / 4 with the tetrahedron Bloch vectors s_k; the
    effects sum to the identity and have pairwise overlaps tr(M_j M_k) = 1/12.
    """
    effects = np.empty((4, 2, 2), dtype=complex)
    for k, s in enumerate(_TETRAHEDRON):
        effects[k] = 0.25 * (np.eye(2) + s[0] * _PAULI_X + s[1] * _PAULI_Y + s[2] * _PAULI_Z)
    return effects


def born_probabilities(rho: np.ndarray, povm: np.ndarray) -> np.ndarray:
    """Outcome probabilities tr(M_k rho) for every effect."""
    return np.einsum("kij,ji->k", povm, rho).real


def cholesky_to_rho(t) -> np.ndarray:
    """Density matrix T^dagger T / tr(T^dagger T) from four real parameters.

    T is lower triangular with diagonal (t1, t2) and off-diagonal t3 + i t4;
    any non-degenerate parameter vector maps to a valid state.
    """
    t = np.asarray(t, dtype=float)
    if t.shape != (4,):
        raise ValueError("t must have exactly four entries")
    norm2 = float(np.dot(t, t))
    if norm2 < 1e-30:
        raise ValueError("parameter vector is degenerate (norm below 1e-15)")
    tmat = np.array([[t[0], 0.0], [t[2] + 1.0j * t[3], t[1]]], dtype=complex)
    rho = tmat.conj().T @ tmat
    return rho / np.trace(rho).real


def expected_counts(rho: np.ndarray, povm: np.ndarray, n_photons: int) -> np.ndarray:
    """Noise-free counts: the Born-rule means rounded to integers."""
    if n_photons < 0:
        raise ValueError("n_photons must be >= 0")
    probs = born_probabilities(rho, povm)
    return np.array([round_half_away(n_photons * p) for p in probs], dtype=np.int64)


def _poisson(rng: np.random.Generator, lam: np.ndarray) -> np.ndarray:
    lam = np.asarray(lam, dtype=float)
    out = np.empty(lam.shape, dtype=np.int64)
    small = lam <= _POISSON_EXACT_MAX
    if np.any(small):
        out[small] = rng.poisson(lam[small])
    if np.any(~small):
        big = lam[~small]
        draws = rng.normal(big, np.sqrt(big))
        out[~small] = np.maximum(np.floor(draws + 0.5), 0.0).astype(np.int64)
    return out


def simulate_counts(
    rho_in: np.ndarray,
    povm: np.ndarray,
    n_photons: int,
    eta: float,
    rng: np.random.Generator | int | None = None,
) -> np.ndarray:
    """Poisson-fluctuated counts at the effective photon number eta * N."""
    if not 0.0 <= eta <= 1.0:
        raise ValueError("eta must lie in [0, 1]")
    gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    n_eff = round_half_away(eta * n_photons)
    means = np.array(
        [round_half_away(n_eff * p) for p in born_probabilities(rho_in, povm)], dtype=float
    )
    return _poisson(gen, means)


# T(t) is linear in the four Cholesky parameters; these are its basis slices.
_CHOLESKY_BASIS = np.array(
    [
        [[1.0, 0.0], [0.0, 0.0]],
        [[0.0, 0.0], [0.0, 1.0]],
        [[0.0, 0.0], [1.0, 0.0]],
        [[0.0, 0.0], [1.0j, 0.0]],
    ],
    dtype=complex,
)


def _born_quadratic_forms(povm: np.ndarray) -> np.ndarray:
    """Matrices A_k with tr(M_k T(t)^dag T(t)) = t^T A_k t.

    Born probabilities are then (A t . t) / (t . t), which the optimizer can
    evaluate without rebuilding 2x2 matrices at every step.
    """
    gram = np.einsum("kab,ibc,jca->kij", povm, _CHOLESKY_BASIS.conj().transpose(0, 2, 1), _CHOLESKY_BASIS).real
    return 0.5 * (gram + gram.transpose(0, 2, 1))


def _least_squares_cost(povm: np.ndarray, counts: np.ndarray, n_eff: int):
    """Build (penalized objective, data-term) closures for the optimizer.

    The data term is the normalized mismatch sum_k (p_k(t) - m_k/n_eff)^2:
    same minimizer as the counts-scale cost but O(1) in magnitude, which keeps
    the simplex tolerances meaningful at any photon budget. Because the state
    is invariant under t -> c t, the data term alone is minimized on a ray and
    the simplex would never collapse; a (|t|^2 - 1)^2 gauge penalty pins one
    representative without moving the optimal state.
    """
    target = counts / n_eff
    forms = _born_quadratic_forms(povm)

    def data_term(t: np.ndarray) -> float:
        norm2 = float(np.dot(t, t))
        if norm2 < 1e-30:
            return 1e6
        d = (forms @ t @ t) / norm2 - target
        return float(np.dot(d, d))

    def objective(t: np.ndarray) -> float:
        norm2 = float(np.dot(t, t))
        if norm2 < 1e-30:
            return 1e6
        d = (forms @ t @ t) / norm2 - target
        return float(np.dot(d, d)) + (norm2 - 1.0) ** 2

    return objective, data_term


def fit_state(
    counts,
    povm: np.ndarray,
    n_eff: int,
    optimizer: OptimizerConfig = OptimizerConfig(),
    rng: np.random.Generator | int | None = None,
) -> Reconstruction:
    """Least-squares state fit; returns diagnostics alongside the state.

    All-zero counts carry no information, so the maximally mixed state is
    returned with ``degenerate`` set instead of running the optimizer.
    """
    counts = np.asarray(counts, dtype=np.int64)
    if counts.shape != (povm.shape[0],):
        raise ValueError("counts length must match the number of POVM effects")
    if np.any(counts < 0):
        raise ValueError("counts must be non-negative")
    if n_eff < 1:
        raise ValueError("n_eff must be >= 1")
    if not np.any(counts):
        return Reconstruction(rho=np.eye(2, dtype=complex) / 2.0, cost=float("nan"), converged=False, degenerate=True)

    gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    objective, data_term = _least_squares_cost(povm, counts, n_eff)

    best = None
    any_converged = False
    for _ in range(optimizer.restarts):
        t0 = gen.uniform(-1.0, 1.0, size=4)
        while np.dot(t0, t0) < 1e-8:
            t0 = gen.uniform(-1.0, 1.0, size=4)
        res = minimize(
            objective,
            t0,
            method="Nelder-Mead",
            options={
                "maxiter": optimizer.max_iter,
                "maxfev": 4 * optimizer.max_iter,
                "xatol": 1e-7,
                "fatol": optimizer.tol * max(1.0, objective(t0)),
            },
        )
        any_converged = any_converged or bool(res.success)
        if best is None or res.fun < best.fun:
            best = res
    if not any_converged:
        raise ReconstructionError(
            f"no Nelder-Mead restart converged within {optimizer.max_iter} iterations"
        )
    scaled_cost = data_term(best.x) * n_eff**2
    return Reconstruction(rho=cholesky_to_rho(best.x), cost=scaled_cost, converged=True, degenerate=False)


def reconstruct(
    counts,
    povm: np.ndarray,
    n_eff: int,
    optimizer: OptimizerConfig = OptimizerConfig(),
    rng: np.random.Generator | int | None = None,
) -> np.ndarray:
    """Density matrix minimizing the least-squares count mismatch."""
    return fit_state(counts, povm, n_eff, optimizer, rng).rho


def fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Uhlmann-Jozsa fidelity between two qubit states.

    Uses the closed form tr(rho sigma) + 2 sqrt(det rho det sigma), which
    equals (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2 in dimension two.
    """
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    if rho.shape != (2, 2) or sigma.shape != (2, 2):
        raise ValueError("fidelity is implemented for single-qubit states")
    overlap = np.trace(rho @ sigma).real
    det_term = max(np.linalg.det(rho).real, 0.0) * max(np.linalg.det(sigma).real, 0.0)
    value = overlap + 2.0 * math.sqrt(det_term)
    return min(max(value, 0.0), 1.0)


def haar_random_pure(rng: np.random.Generator) -> np.ndarray:
    """Haar-random pure qubit state as a density matrix."""
    v = rng.normal(size=2) + 1.0j * rng.normal(size=2)
    v /= np.linalg.norm(v)
    return np.outer(v, v.conj())


def bures_random_mixed(rng: np.random.Generator) -> np.ndarray:
    """Bures-distributed mixed qubit state."""
    g = (rng.normal(size=(2, 2)) + 1.0j * rng.normal(size=(2, 2))) / math.sqrt(2.0)
    q, r = np.linalg.qr(rng.normal(size=(2, 2)) + 1.0j * rng.normal(size=(2, 2)))
    u = q @ np.diag(np.diag(r) / np.abs(np.diag(r)))
    a = (np.eye(2) + u) @ g
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def _draw_state(kind: EnsembleKind, rng: np.random.Generator) -> np.ndarray:
    if kind is EnsembleKind.HAAR_PURE:
        return haar_random_pure(rng)
    return bures_random_mixed(rng)


def _member_rng(seed: int, *index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=tuple(index)))


def _run_trial(
    rho_in: np.ndarray,
    povm: np.ndarray,
    photons: int,
    eta: float,
    optimizer: OptimizerConfig,
    rng: np.random.Generator,
) -> tuple[float, bool]:
    """One tomography trial; returns (fidelity, failed-or-degenerate flag)."""
    n_eff = round_half_away(eta * photons)
    if n_eff < 1:
        return fidelity(rho_in, np.eye(2, dtype=complex) / 2.0), True
    counts = simulate_counts(rho_in, povm, photons, eta, rng)
    try:
        fit = fit_state(counts, povm, n_eff, optimizer, rng)
    except ReconstructionError:
        return fidelity(rho_in, np.eye(2, dtype=complex) / 2.0), True
    return fidelity(rho_in, fit.rho), fit.degenerate or not fit.converged


def run_ensemble(config: TomographyConfig, povm: np.ndarray | None = None) -> TomographyResult:
    """Tomography over an ensemble of random input states at fixed transmittance.

    Every member draws its own state, counts, and optimizer restarts from a
    sub-seed of (seed, member index), so results do not depend on scheduling.
    """
    effects = sic_povm_qubit() if povm is None else povm
    fidelities = np.empty(config.ensemble_size)
    failures = 0
    for i in range(config.ensemble_size):
        rng = _member_rng(config.seed, i)
        rho_in = _draw_state(config.ensemble_kind, rng)
        f, failed = _run_trial(rho_in, effects, config.photons, config.transmittance, config.optimizer, rng)
        fidelities[i] = f
        failures += int(failed)
    return TomographyResult(
        fidelities=fidelities,
        mean_fidelity=float(fidelities.mean()),
        sd_fidelity=float(fidelities.std(ddof=1)) if config.ensemble_size > 1 else 0.0,
        failures=failures,
    )


def fidelity_vs_zenith(
    channel: ChannelParams,
    altitude_m: float,
    diameters_m,
    zenith_grid_rad,
    photons: int,
    config: TomographyConfig,
    *,
    resample: FadingResample = FadingResample.PER_TRIAL,
    earth_radius_m: float = EARTH_RADIUS_M,
) -> FidelityTable:
    """Ensemble fidelity statistics across a (diameter, zenith) grid.

    The channel transmittance at each cell combines the deterministic factors
    with a log-normal fade; by default each tomography trial sees a fresh
    fade, alternatively one draw is shared per grid point.
    """
    povm = sic_povm_qubit()
    diameters = np.asarray(list(diameters_m), dtype=float)
    zeniths = np.asarray(list(zenith_grid_rad), dtype=float)
    shape = (len(diameters), len(zeniths))
    mean = np.empty(shape)
    sd = np.empty(shape)
    failures = np.zeros(shape, dtype=np.int64)

    for zi, zen in enumerate(zeniths):
        geom = LinkGeometry(
            satellite_altitude_m=altitude_m,
            zenith_angle_rad=float(zen),
            ogs_altitude_m=channel.turbulence.h_ogs_m,
            earth_radius_m=earth_radius_m,
        )
        for di, diam in enumerate(diameters):
            beam = replace(channel.beam, receiver_radius_m=float(diam) / 2.0)
            cell_channel = replace(channel, beam=beam)
            det = compose(cell_channel, geom, 1.0)
            sigma_j2 = fading_variance(
                channel, altitude_m, float(zen), float(diam), earth_radius_m=earth_radius_m
            )
            fading = FadingModel(sigma_j2) if sigma_j2 > 0 else None
            if fading is not None and resample is FadingResample.PER_POINT:
                point_fade = float(sample(fading, _member_rng(config.seed, di, zi), 1)[0])
            else:
                point_fade = 1.0

            fids = np.empty(config.ensemble_size)
            fail_count = 0
            for i in range(config.ensemble_size):
                rng = _member_rng(config.seed, di, zi, i)
                if fading is not None and resample is FadingResample.PER_TRIAL:
                    fade = float(sample(fading, rng, 1)[0])
                else:
                    fade = point_fade
                eta = min(det.eta_total * fade, 1.0)
                rho_in = _draw_state(config.ensemble_kind, rng)
                f, failed = _run_trial(rho_in, povm, photons, eta, config.optimizer, rng)
                fids[i] = f
                fail_count += int(failed)
            mean[di, zi] = fids.mean()
            sd[di, zi] = fids.std(ddof=1) if config.ensemble_size > 1 else 0.0
            failures[di, zi] = fail_count

    return FidelityTable(
        zenith_deg=np.degrees(zeniths),
        diameters_m=diameters,
        photons=photons,
        mean_fidelity=mean,
        sd_fidelity=sd,
        failures=failures,
    )
