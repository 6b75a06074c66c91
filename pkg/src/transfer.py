"""
Matrices de transfert (base de Pauli) des canaux qubit et convergence des puissances Ξⁿ.

T[m, n] = ½·Tr(Pₘ Φ(Pₙ)) avec P ∈ {I, X, Y, Z}. Sous forme canonique,
T = [[1, 0], [t, diag(λ)]] et la suite Tⁿ converge vers le canal constant
sur le point fixe de Bloch (tᵢ / (1 − λᵢ))ᵢ.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.linalg import polar

from src.channels import QuantumChannel, apply_map
from src.config import TOLERANCES, Tolerances
from src.exceptions import (
    BoundViolationError,
    NotCanonicalizableError,
    NotQubitError,
    OutOfRangeError,
    ShapeMismatchError,
    UnitEigenvalueError,
    check_unit_interval,
)
from src.noise import PAULI_X, PAULI_Y, PAULI_Z
from src.numerics import operator_norm

logger = logging.getLogger(__name__)

PAULI_BASIS = (np.eye(2, dtype=complex), PAULI_X, PAULI_Y, PAULI_Z)


@dataclass(frozen=True, eq=False)
class CanonicalTransfer:
    """
    Forme canonique d'une matrice de transfert.

    Attributs:
        t: Décalage de Bloch (t₁, t₂, t₃)
        lam: Valeurs (λ₁, λ₂, λ₃) de la diagonale du bloc de Bloch
        rotations: (gauche, droite), matrices 4×4 orthogonales telles que
            canonique = gaucheᵀ · T · droite
    """
    t: np.ndarray
    lam: np.ndarray
    rotations: tuple

    def matrix(self) -> np.ndarray:
        """Matrice 4×4 canonique"""
        out = np.zeros((4, 4))
        out[0, 0] = 1.0
        out[1:, 0] = self.t
        out[1:, 1:] = np.diag(self.lam)
        return out


@dataclass(frozen=True)
class DeltaSample:
    """Un point de la suite ‖Δₙ‖ = ‖Tⁿ − T∞‖ et sa racine n-ième"""
    n: int
    norm: float
    root: float


@dataclass(frozen=True, eq=False)
class SpectralReport:
    """
    Rayon spectral μ, limite T∞ et trace de Gelfand d'un nœud qubit.

    limit_transfer et gelfand_trace sont exprimés dans le repère canonique ;
    limit_transfer_original est la limite de Tⁿ dans le repère d'origine.
    """
    mu: float
    lam: np.ndarray
    limit_transfer: np.ndarray
    canonical: CanonicalTransfer
    gelfand_trace: list
    limit_transfer_original: np.ndarray = None
    frame: str = 'canonique'

    def radius(self, n: int) -> float:
        return radius_of_convergence(self.mu, n)


def check_transfer(T, tol: Tolerances = TOLERANCES) -> np.ndarray:
    """
    Vérifie qu'une matrice est une matrice de transfert qubit.

    Raises:
        ShapeMismatchError: Si T n'est pas 4×4 réelle finie
        OutOfRangeError: Si la première ligne diffère de (1, 0, 0, 0) ou si une entrée sort de [−1, 1]
    """
    T = np.asarray(T)
    if T.shape != (4, 4) or not np.all(np.isfinite(T)):
        raise ShapeMismatchError(f"Matrice de transfert 4×4 finie attendue, forme {T.shape}")
    if np.iscomplexobj(T):
        if np.max(np.abs(T.imag)) > tol.transfer_row:
            raise ShapeMismatchError("La matrice de transfert doit être réelle")
        T = T.real
    T = T.astype(float)
    if np.max(np.abs(T[0] - np.array([1.0, 0.0, 0.0, 0.0]))) > tol.transfer_row:
        raise OutOfRangeError(f"Première ligne {T[0]} différente de (1, 0, 0, 0)")
    if np.max(np.abs(T)) > 1.0 + tol.transfer_row:
        raise OutOfRangeError(f"Entrée de transfert hors de [−1, 1]: {np.max(np.abs(T)):.12g}")
    return T


def transfer_matrix(c: QuantumChannel) -> np.ndarray:
    """
    Matrice de transfert de Pauli d'un canal qubit.

    Raises:
        NotQubitError: Si le canal n'agit pas sur un qubit
    """
    if c.dim_in != 2 or c.dim_out != 2:
        raise NotQubitError(f"Canal {c.dim_in} → {c.dim_out}: matrice de transfert réservée aux qubits")
    images = [apply_map(c, p) for p in PAULI_BASIS]
    T = np.array([[0.5 * np.trace(pm @ img).real for img in images] for pm in PAULI_BASIS])
    return T


def _tie_groups(values: np.ndarray, gap: float) -> list:
    """Indices des valeurs singulières consécutives égales à gap près"""
    groups = [[0]]
    for i in range(1, len(values)):
        if abs(values[i] - values[groups[-1][-1]]) <= gap:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def canonicalize(T, tol: Tolerances = TOLERANCES) -> CanonicalTransfer:
    """
    Met T sous la forme [[1, 0], [t, diag(λ)]] par rotations de SO(3).

    SVD réelle du bloc de Bloch ; dans un groupe de valeurs singulières
    égales, la rotation la plus proche de l'identité est retenue
    (problème de Procrustes). Les colonnes isolées sont orientées pour que
    tᵢ ≥ 0. La correction de déterminant peut rendre λ₃ négatif.

    Raises:
        NotCanonicalizableError: Si le résidu hors motif dépasse la tolérance
    """
    T = check_transfer(T, tol)
    block = T[1:, 1:]
    shift = T[1:, 0]
    u, s, vt = np.linalg.svd(block)
    u = u.copy()
    v = vt.T.copy()
    s = s.copy()
    gap = tol.canonical_residual

    for group in _tie_groups(s, gap):
        if len(group) > 1:
            target = np.eye(3)[:, group]
            q, _ = polar(u[:, group].T @ target)
            u[:, group] = u[:, group] @ q
            v[:, group] = v[:, group] @ q
        else:
            i = group[0]
            proj = u[:, i] @ shift
            key = proj if abs(proj) > gap else u[i, i]
            if key < 0:
                u[:, i] *= -1.0
                v[:, i] *= -1.0

    det_u = np.linalg.det(u)
    det_v = np.linalg.det(v)
    if det_u < 0 and det_v < 0:
        # Retourne la colonne de plus petit |tᵢ| (la dernière en cas d'égalité)
        t_prime = np.abs(u.T @ shift)
        i = 2 - int(np.argmin(t_prime[::-1]))
        u[:, i] *= -1.0
        v[:, i] *= -1.0
    elif det_u < 0:
        u[:, 2] *= -1.0
        s[2] = -s[2]
    elif det_v < 0:
        v[:, 2] *= -1.0
        s[2] = -s[2]

    core = u.T @ block @ v
    residual = float(np.linalg.norm(core - np.diag(s)))
    if residual > gap * max(1.0, float(np.linalg.norm(block))):
        raise NotCanonicalizableError(f"Résidu hors motif canonique: {residual:.3e}")

    left = np.eye(4)
    right = np.eye(4)
    left[1:, 1:] = u
    right[1:, 1:] = v
    ct = CanonicalTransfer(t=u.T @ shift, lam=s, rotations=(left, right))
    logger.debug(f"Forme canonique: t={ct.t}, λ={ct.lam}")
    return ct


def limit_transfer(ct: CanonicalTransfer, tol: Tolerances = TOLERANCES) -> np.ndarray:
    """
    Matrice de transfert du canal limite T∞ (constante sur le point fixe).

    Seule la première colonne (1, tᵢ/(1 − λᵢ)) est non nulle ; T∞ est
    idempotente et absorbante (T∞·T = T·T∞ = T∞).

    Raises:
        UnitEigenvalueError: Si un |λᵢ| ≥ 1 − 1e-12
    """
    if np.any(np.abs(ct.lam) >= 1.0 - tol.unit_eigenvalue):
        raise UnitEigenvalueError(f"Valeur propre unité dans λ = {ct.lam}: pas de limite unique")
    out = np.zeros((4, 4))
    out[0, 0] = 1.0
    out[1:, 0] = ct.t / (1.0 - ct.lam)
    return out


def limit_transfer_original(T, tol: Tolerances = TOLERANCES) -> np.ndarray:
    """
    lim Tⁿ dans le repère d'origine : première colonne (1, (I − B)⁻¹·t).

    B est le bloc de Bloch et t le décalage de T.

    Raises:
        UnitEigenvalueError: Si la forme canonique a une valeur propre unité
    """
    T = check_transfer(T, tol)
    limit_transfer(canonicalize(T, tol), tol)
    out = np.zeros((4, 4))
    out[0, 0] = 1.0
    out[1:, 0] = np.linalg.solve(np.eye(3) - T[1:, 1:], T[1:, 0])
    return out


def spectral_radius_mu(ct: CanonicalTransfer) -> float:
    """
    μ = max(0, λ₁, λ₂, λ₃).

    Raises:
        OutOfRangeError: Si un λᵢ sort de [0, 1)
    """
    for value in ct.lam:
        if not 0.0 <= value < 1.0:
            raise OutOfRangeError(f"λ doit être dans [0, 1), reçu {value}")
    return float(max(0.0, *ct.lam))


def radius_of_convergence(mu: float, n: int) -> float:
    """Rₙ = ((1 + μ)/2)ⁿ"""
    mu = check_unit_interval('mu', mu)
    if n < 1:
        raise OutOfRangeError(f"n doit être ≥ 1, reçu {n}")
    return ((1.0 + mu) / 2.0) ** n


def radius_lower_estimate(epsilon: float, n: int) -> float:
    """Minoration de Bernoulli 1 − nε/2, valable pour Rₙ dès que μ ≥ 1 − ε"""
    epsilon = check_unit_interval('epsilon', epsilon)
    if n < 0:
        raise OutOfRangeError(f"n doit être positif ou nul, reçu {n}")
    return 1.0 - n * epsilon / 2.0


def preservation_horizon(epsilon: float, delta: float) -> int:
    """Plus grand n tel que n ≤ 2δ/ε (Rₙ ≥ 1 − δ sur cet horizon)"""
    epsilon = check_unit_interval('epsilon', epsilon)
    delta = check_unit_interval('delta', delta)
    if epsilon == 0.0 or delta == 0.0:
        raise OutOfRangeError("epsilon et delta doivent être dans (0, 1]")
    # n·ε ≤ 2δ à une erreur relative d'arrondi près (1e-12)
    budget = 2.0 * delta * (1.0 + 1e-12)
    n = int(math.floor(2.0 * delta / epsilon))
    while (n + 1) * epsilon <= budget:
        n += 1
    while n > 0 and n * epsilon > budget:
        n -= 1
    return n


def preservation_certified(mu: float, epsilon: float, delta: float, n: int) -> bool:
    """
    Vrai si les hypothèses μ ≥ 1 − ε et n ≤ 2δ/ε sont réunies.

    Dans ce cas Rₙ ≥ 1 − nε/2 ≥ 1 − δ est vérifié numériquement.

    Raises:
        BoundViolationError: Si l'inégalité garantie échoue
    """
    if mu < 1.0 - epsilon or n > preservation_horizon(epsilon, delta) or n < 1:
        return False
    r_n = radius_of_convergence(mu, n)
    floor = radius_lower_estimate(epsilon, n)
    if r_n < floor - 1e-12 or r_n < 1.0 - delta - 1e-12:
        raise BoundViolationError(
            f"Rₙ = {r_n:.12g} < max(1 − nε/2, 1 − δ) pour n={n}, ε={epsilon}, δ={delta}"
        )
    return True


def _delta_powers(T, n_max: int, tol: Tolerances):
    """(Tⁿ − T∞, Δⁿ) pour n = 1..n_max dans le repère canonique"""
    ct = canonicalize(T, tol)
    canon = ct.matrix()
    limit = limit_transfer(ct, tol)
    delta = canon - limit
    t_pow = np.eye(4)
    d_pow = np.eye(4)
    pairs = []
    for _ in range(n_max):
        t_pow = t_pow @ canon
        d_pow = d_pow @ delta
        pairs.append((t_pow - limit, d_pow.copy()))
    return ct, limit, pairs


def delta_norm_trace(T, n_max: int, tol: Tolerances = TOLERANCES,
                     max_workers: int = 1) -> list:
    """
    Suite ‖Δₙ‖ et ‖Δₙ‖^(1/n) pour n = 1..n_max (norme d'opérateur).

    Les deux membres ‖Tⁿ − T∞ⁿ‖ et ‖(T − T∞)ⁿ‖ sont calculés et comparés.

    Raises:
        BoundViolationError: Si les deux membres diffèrent
    """
    if n_max < 1:
        raise OutOfRangeError(f"n_max doit être ≥ 1, reçu {n_max}")
    _, _, pairs = _delta_powers(T, n_max, tol)

    def norms(pair):
        return operator_norm(pair[0], tol), operator_norm(pair[1], tol)

    with ThreadPoolExecutor(max_workers=max(1, max_workers)) as executor:
        values = list(executor.map(norms, pairs))

    samples = []
    for n, (lhs, rhs) in enumerate(values, start=1):
        if abs(lhs - rhs) > 1e-9 * max(lhs, rhs) + 1e-12:
            raise BoundViolationError(
                f"‖Tⁿ − T∞‖ = {lhs:.12g} ≠ ‖Δⁿ‖ = {rhs:.12g} pour n={n}"
            )
        samples.append(DeltaSample(n=n, norm=rhs, root=rhs ** (1.0 / n) if rhs > 0 else 0.0))
    return samples


def empirical_threshold(T, n_max: int = 512, tol: Tolerances = TOLERANCES):
    """
    Plus petit n₀ tel que ‖Δₙ‖ ≤ ((1+μ)/2)ⁿ pour tout n ∈ [n₀, n_max].

    Renvoie None si l'inégalité échoue encore en n_max.
    """
    mu = spectral_radius_mu(canonicalize(T, tol))
    samples = delta_norm_trace(T, n_max, tol)
    n0 = None
    for sample in reversed(samples):
        if sample.norm <= radius_of_convergence(mu, sample.n) + 1e-15:
            n0 = sample.n
        else:
            break
    logger.debug(f"Seuil empirique n₀ = {n0} (μ = {mu:.6g}, n_max = {n_max})")
    return n0


def decay_envelope_constant(T, n_max: int = 200, tol: Tolerances = TOLERANCES) -> float:
    """
    Constante empirique k = max ‖Δₙ‖/μⁿ sur n = 1..n_max.

    Pour μ = 0, renvoie 0 si Δ est nilpotente sur la plage, sinon l'infini.
    """
    mu = spectral_radius_mu(canonicalize(T, tol))
    samples = delta_norm_trace(T, n_max, tol)
    if mu == 0.0:
        return 0.0 if all(s.norm == 0.0 for s in samples[1:]) else math.inf
    ratios = [s.norm / mu ** s.n for s in samples if mu ** s.n > 0.0]
    return float(max(ratios))


def spectral_report(c: QuantumChannel, n_max: int = 64,
                    tol: Tolerances = TOLERANCES) -> SpectralReport:
    """Analyse spectrale complète d'un canal qubit (T∞ et ‖Δₙ‖ en repère canonique)"""
    T = transfer_matrix(c)
    ct = canonicalize(T, tol)
    limit = limit_transfer(ct, tol)
    mu = spectral_radius_mu(ct)
    trace = delta_norm_trace(T, n_max, tol) if n_max > 0 else []
    logger.info(f"Rapport spectral: μ = {mu:.12g}, λ = {np.round(ct.lam, 12)}")
    return SpectralReport(mu=mu, lam=ct.lam, limit_transfer=limit, canonical=ct, gelfand_trace=trace,
                          limit_transfer_original=limit_transfer_original(T, tol))
