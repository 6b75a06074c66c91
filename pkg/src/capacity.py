"""
Entropies, information cohérente et bornes de capacité par continuité.

Tous les logarithmes sont en base 2, sauf kl_divergence_binary qui accepte
la base naturelle pour les bornes de Chernoff.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import entr, rel_entr

from src.channels import (
    DensityOperator,
    QuantumChannel,
    apply,
    apply_map,
    choi,
    complementary,
    identity_channel,
    tensor,
)
from src.config import TOLERANCES, Config, Tolerances
from src.exceptions import (
    DimensionMismatchError,
    NotQubitError,
    OutOfRangeError,
    check_unit_interval,
)
from src.noise import PAULI_X, PAULI_Y, PAULI_Z
from src.numerics import hermitian_eig, trace_norm
from src.optimization import maximize_over_ball
from src.sampling import make_rng

logger = logging.getLogger(__name__)

LN2 = math.log(2.0)


@dataclass(frozen=True)
class CapacityBoundParams:
    """
    Paramètres de la borne de continuité.

    Attributs:
        epsilon: Qualité du code (borne sur ½‖Ξ − id‖◇)
        n: Nombre de compositions
        d_B: Dimension de sortie
    """
    epsilon: float
    n: int
    d_B: int = 2

    def __post_init__(self):
        check_unit_interval('epsilon', self.epsilon)
        if self.n < 0:
            raise OutOfRangeError(f"n doit être positif ou nul, reçu {self.n}")
        if self.d_B < 2:
            raise OutOfRangeError(f"d_B doit être ≥ 2, reçu {self.d_B}")


@dataclass(frozen=True)
class DiamondInterval:
    """Encadrement de ½‖Φ − Ψ‖◇"""
    lower: float
    upper: float


@dataclass(frozen=True, eq=False)
class Q1Result:
    """Information cohérente maximale à une utilisation"""
    value: float
    argmax: DensityOperator
    bloch: np.ndarray


def binary_entropy(x: float) -> float:
    """h(x) = −x log₂ x − (1−x) log₂(1−x), avec 0·log 0 = 0"""
    x = check_unit_interval('x', x)
    return float((entr(x) + entr(1.0 - x)) / LN2)


def g_func(eps: float) -> float:
    """g(ε) = (1+ε)·h(ε/(1+ε))"""
    eps = float(eps)
    if not (eps >= 0.0 and math.isfinite(eps)):
        raise OutOfRangeError(f"g attend ε ≥ 0 fini, reçu {eps}")
    return (1.0 + eps) * binary_entropy(eps / (1.0 + eps))


def continuity_capacity_bound(p: CapacityBoundParams) -> float:
    """
    Minoration de Q⁽¹⁾(Ξⁿ) : log₂(d_B)·(1 − 2nε) − g(nε).

    La valeur peut être négative ; seul l'affichage la ramène à 0.
    """
    n_eps = p.n * p.epsilon
    return math.log2(p.d_B) * (1.0 - 2.0 * n_eps) - g_func(n_eps)


def sequential_distance_bound(epsilon: float, n: int) -> float:
    """Majoration télescopique ½‖Ξⁿ − id‖◇ ≤ nε"""
    epsilon = check_unit_interval('epsilon', epsilon)
    if n < 0:
        raise OutOfRangeError(f"n doit être positif ou nul, reçu {n}")
    return n * epsilon


def kl_divergence_binary(p: float, q: float, base: str = 'e') -> float:
    """
    Divergence de Kullback–Leibler entre Bernoulli(p) et Bernoulli(q).

    Args:
        base: 'e' (nats) ou '2' (bits)
    """
    p = check_unit_interval('p', p)
    q = check_unit_interval('q', q)
    value = float(rel_entr(p, q) + rel_entr(1.0 - p, 1.0 - q))
    if base == 'e':
        return value
    if base == '2':
        return value / LN2
    raise OutOfRangeError(f"Base de logarithme inconnue: {base}")


def _entropy_from_eigenvalues(eigenvalues: np.ndarray, tol: Tolerances = TOLERANCES) -> float:
    lam = np.asarray(eigenvalues, dtype=float)
    lam = np.where((lam < 0.0) & (lam >= -tol.density), 0.0, lam)
    return float(np.sum(entr(lam)) / LN2)


def von_neumann_entropy(rho: DensityOperator, tol: Tolerances = TOLERANCES) -> float:
    """S(ρ) = −Tr ρ log₂ ρ"""
    return _entropy_from_eigenvalues(hermitian_eig(rho.matrix, tol).eigenvalues, tol)


def coherent_information(c: QuantumChannel, rho: DensityOperator) -> float:
    """I_c(Φ, ρ) = S(Φ(ρ)) − S(Φᶜ(ρ))"""
    return von_neumann_entropy(apply(c, rho)) - von_neumann_entropy(apply(complementary(c), rho))


def bloch_state(r) -> DensityOperator:
    """État qubit ρ = (I + r·σ)/2"""
    r = np.asarray(r, dtype=float)
    m = 0.5 * (np.eye(2) + r[0] * PAULI_X + r[1] * PAULI_Y + r[2] * PAULI_Z)
    return DensityOperator(dim=2, matrix=m)


def _batched_coherent_information(c: QuantumChannel, comp: QuantumChannel):
    """Évaluateur vectorisé de I_c sur des vecteurs de Bloch"""
    basis = (np.eye(2, dtype=complex), PAULI_X, PAULI_Y, PAULI_Z)
    out_images = np.stack([apply_map(c, 0.5 * p) for p in basis])
    env_images = np.stack([apply_map(comp, 0.5 * p) for p in basis])

    def entropies(images, points):
        mats = images[0] + np.einsum('ni,ijk->njk', points, images[1:])
        lam = np.clip(np.linalg.eigvalsh(mats), 0.0, None)
        return np.sum(entr(lam), axis=1) / LN2

    def evaluate(points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(points)
        return entropies(out_images, points) - entropies(env_images, points)

    return evaluate


def q1_maximize(c: QuantumChannel, config: Config = None) -> Q1Result:
    """
    Q⁽¹⁾(Φ) = max_ρ I_c(Φ, ρ) sur la boule de Bloch.

    Grille de pas config.q1_grid_step puis Nelder–Mead (xatol = config.q1_xatol)
    depuis le meilleur point de grille et config.q1_restarts départs aléatoires.

    Raises:
        NotQubitError: Si l'entrée du canal n'est pas un qubit
    """
    if c.dim_in != 2:
        raise NotQubitError(f"q1_maximize attend une entrée qubit, reçu dim_in={c.dim_in}")
    config = config or Config()
    evaluate = _batched_coherent_information(c, complementary(c))
    optimum = maximize_over_ball(
        evaluate,
        lambda r: float(evaluate(r)[0]),
        make_rng(config.seed),
        step=config.q1_grid_step,
        xatol=config.q1_xatol,
        restarts=config.q1_restarts,
    )
    state = bloch_state(optimum.point)
    value = coherent_information(c, state)
    logger.debug(f"Q1 = {value:.12g} en r = {optimum.point} ({optimum.n_evaluations} évaluations)")
    return Q1Result(value=value, argmax=state, bloch=optimum.point)


def amplitude_damping_q1(gamma: float) -> float:
    """
    Q⁽¹⁾ de l'amortissement d'amplitude qubit : max_p h((1−γ)p) − h(γp).

    Nul pour γ ≥ 1/2 (canal anti-dégradable).
    """
    gamma = check_unit_interval('gamma', gamma)
    if gamma >= 0.5:
        return 0.0

    def negated(p):
        return -(binary_entropy((1.0 - gamma) * p) - binary_entropy(gamma * p))

    result = minimize_scalar(negated, bounds=(0.0, 1.0), method='bounded',
                             options={'xatol': 1e-10})
    return max(0.0, -float(result.fun))


def diamond_distance_interval(a: QuantumChannel, b: QuantumChannel,
                              tol: Tolerances = TOLERANCES) -> DiamondInterval:
    """
    Encadrement certifié de ½‖a − b‖◇ par les matrices de Choi.

    upper = ½‖J_a − J_b‖₁ ; lower = la distance trace des sorties sur
    l'état maximalement intriqué, soit ½‖J_a − J_b‖₁ / dim_in.

    Raises:
        DimensionMismatchError: Si les dimensions diffèrent
    """
    if (a.dim_in, a.dim_out) != (b.dim_in, b.dim_out):
        raise DimensionMismatchError(
            f"Canaux {a.dim_in}→{a.dim_out} et {b.dim_in}→{b.dim_out} incomparables"
        )
    d = a.dim_in
    upper = 0.5 * trace_norm(choi(a) - choi(b), tol)

    omega = np.zeros(d * d, dtype=complex)
    omega[::d + 1] = 1.0 / np.sqrt(d)
    omega_state = np.outer(omega, omega.conj())
    ident = identity_channel(d)
    diff = apply_map(tensor(ident, a), omega_state) - apply_map(tensor(ident, b), omega_state)
    lower = max(0.5 * trace_norm(diff, tol), upper / d)
    return DiamondInterval(lower=min(lower, upper), upper=upper)
