"""
Codes correcteurs, conditions de Knill–Laflamme, récupération et bornes
d'erreur par la queue de Kraus (perte pure, code bosonique à deux modes)
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.stats import binom

from src.capacity import kl_divergence_binary
from src.channels import DensityOperator, QuantumChannel, apply_map, compose
from src.config import TOLERANCES, Config, Tolerances
from src.exceptions import (
    BoundViolationError,
    CutoffTooSmallError,
    DimensionMismatchError,
    KLViolatedError,
    NonOrthonormalWordsError,
    OutOfRangeError,
    ShapeMismatchError,
    check_unit_interval,
)
from src.noise import FockTruncation, bosonic_ad_kraus, fock_state, independent, pure_loss_kraus
from src.numerics import hermitian_eig, operator_norm, trace_norm
from src.sampling import haar_state, make_rng

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Code:
    """
    Code quantique donné par ses mots logiques |i_L⟩ dans l'espace physique.

    Attributs:
        physical_dim: Dimension de l'espace physique
        words: Amplitudes des mots logiques (orthonormés)
        name: Libellé utilisé dans les rapports
    """
    physical_dim: int
    words: tuple
    name: str = 'custom'
    tol: Tolerances = field(default=TOLERANCES, repr=False)

    def __post_init__(self):
        words = tuple(np.asarray(w, dtype=complex).reshape(-1) for w in self.words)
        if not words:
            raise ShapeMismatchError("Un code doit contenir au moins un mot logique")
        for idx, w in enumerate(words):
            if w.size != self.physical_dim:
                raise ShapeMismatchError(
                    f"Mot {idx}: {w.size} amplitudes, attendu {self.physical_dim}"
                )
        object.__setattr__(self, 'words', words)
        overlap = self.isometry().conj().T @ self.isometry()
        defect = float(np.max(np.abs(overlap - np.eye(len(words)))))
        if defect > self.tol.orthonormal_words:
            raise NonOrthonormalWordsError(f"Mots logiques non orthonormés (écart {defect:.3e})")

    @property
    def logical_dim(self) -> int:
        return len(self.words)

    def isometry(self) -> np.ndarray:
        """S = Σᵢ |i_L⟩⟨i|, de forme (physical_dim, logical_dim)"""
        return np.stack(self.words, axis=1)

    def projector(self) -> np.ndarray:
        s = self.isometry()
        return s @ s.conj().T


@dataclass(frozen=True, eq=False)
class KLReport:
    """Résultat de kl_check"""
    satisfied: bool
    c_matrix: np.ndarray
    max_violation: float


@dataclass(frozen=True)
class ChernoffRow:
    """Queue exacte et bornes de Chernoff pour un nombre d'excitations m"""
    m: int
    exact: float
    chernoff: float
    valid: bool
    literal: float


@dataclass(frozen=True)
class TailBoundReport:
    """
    Queue binomiale exacte et borne de Chernoff.

    chernoff est le maximum des bornes valides ; chernoff_valid indique que
    le régime de Chernoff est atteint pour tous les m.
    """
    exact_norm: float
    k: int
    chernoff: Optional[float]
    chernoff_valid: bool
    rows: tuple = ()


@dataclass(frozen=True)
class CurveRow:
    gamma: float
    exact_norm: float
    p_formula_max: float
    bound_49g2: float


def trivial_code(dim: int = 2) -> Code:
    """Code identité : |i_L⟩ = |i⟩"""
    return Code(physical_dim=dim, words=tuple(np.eye(dim, dtype=complex)), name='trivial')


def repetition_code() -> Code:
    """Code de répétition à trois qubits : |000⟩, |111⟩"""
    zero = np.zeros(8, dtype=complex)
    one = np.zeros(8, dtype=complex)
    zero[0] = 1.0
    one[7] = 1.0
    return Code(physical_dim=8, words=(zero, one), name='repetition')


def cly_code(cutoff: int = 4) -> Code:
    """
    Code bosonique à deux modes : |0_L⟩ = (|40⟩ + |04⟩)/√2, |1_L⟩ = |22⟩.

    Raises:
        CutoffTooSmallError: Si cutoff < 4
    """
    if cutoff < 4:
        raise CutoffTooSmallError(f"Le code exige cutoff ≥ 4, reçu {cutoff}")
    trunc = FockTruncation(cutoff=cutoff, modes=2)
    zero = (fock_state(trunc, (4, 0)) + fock_state(trunc, (0, 4))) / np.sqrt(2.0)
    one = fock_state(trunc, (2, 2))
    return Code(physical_dim=trunc.dim, words=(zero, one), name='cly')


def cly_noise(gamma: float, cutoff: int = 4) -> QuantumChannel:
    """Amortissement bosonique indépendant sur les deux modes"""
    return independent(bosonic_ad_kraus(gamma, FockTruncation(cutoff)), 2)


def cly_error_set(gamma: float, cutoff: int = 4) -> list:
    """Erreurs corrigées {B₀⊗B₀, B₀⊗B₁, B₁⊗B₀}"""
    b = bosonic_ad_kraus(gamma, FockTruncation(cutoff)).kraus
    return [np.kron(b[0], b[0]), np.kron(b[0], b[1]), np.kron(b[1], b[0])]


def encoder(code: Code) -> QuantumChannel:
    """Plongement isométrique E(σ) = S σ S†"""
    return QuantumChannel(code.logical_dim, code.physical_dim, (code.isometry(),))


def _check_error_shapes(code: Code, errors) -> list:
    ops = [np.asarray(f, dtype=complex) for f in errors]
    if not ops:
        raise ShapeMismatchError("Ensemble d'erreurs vide")
    for idx, f in enumerate(ops):
        if f.shape != (code.physical_dim, code.physical_dim):
            raise DimensionMismatchError(
                f"Erreur {idx}: forme {f.shape}, espace physique de dimension {code.physical_dim}"
            )
    return ops


def kl_check(code: Code, errors, tol: Tolerances = TOLERANCES) -> KLReport:
    """
    Conditions de Knill–Laflamme ⟨i_L|F_a†F_b|j_L⟩ = c_ab·δᵢⱼ.

    Raises:
        DimensionMismatchError: Si une erreur n'agit pas sur l'espace physique
    """
    ops = _check_error_shapes(code, errors)
    s = code.isometry()
    images = np.stack([f @ s for f in ops])
    gram = np.einsum('api,bpj->aibj', images.conj(), images)
    c = np.einsum('aibi->ab', gram) / code.logical_dim
    expected = np.einsum('ab,ij->aibj', c, np.eye(code.logical_dim))
    violation = float(np.max(np.abs(gram - expected)))
    satisfied = violation <= tol.knill_laflamme
    logger.debug(f"Knill–Laflamme ({code.name}, {len(ops)} erreurs): écart {violation:.3e}")
    return KLReport(satisfied=satisfied, c_matrix=c, max_violation=violation)


def _recovery_kraus(code: Code, errors, tol: Tolerances) -> list:
    report = kl_check(code, errors, tol)
    if not report.satisfied:
        raise KLViolatedError(
            f"Conditions de Knill–Laflamme violées (écart {report.max_violation:.3e})"
        )
    ops = _check_error_shapes(code, errors)
    proj = code.projector()
    eig = hermitian_eig(report.c_matrix, tol)

    kraus = []
    for k, d_k in enumerate(eig.eigenvalues):
        if d_k <= tol.recovery:
            continue
        g_k = sum(u * f for u, f in zip(eig.eigenvectors[:, k], ops))
        kraus.append((g_k @ proj).conj().T / np.sqrt(d_k))

    # Complétion : remise à |0_L⟩ sur le supplémentaire des sous-espaces d'erreur
    covered = sum(r.conj().T @ r for r in kraus)
    complement = hermitian_eig(np.eye(code.physical_dim) - covered, tol)
    reset = code.words[0]
    for idx, value in enumerate(complement.eigenvalues):
        if value > 0.5:
            kraus.append(np.outer(reset, complement.eigenvectors[:, idx].conj()))
    return kraus


def build_recovery(code: Code, errors, tol: Tolerances = TOLERANCES) -> QuantumChannel:
    """
    Canal de récupération R tel que R(F_a ρ F_a†) = Tr(F_a ρ F_a†)·ρ sur le code.

    Raises:
        KLViolatedError: Si l'ensemble d'erreurs n'est pas corrigeable
    """
    kraus = _recovery_kraus(code, errors, tol)
    logger.debug(f"Récupération ({code.name}): {len(kraus)} opérateurs de Kraus")
    return QuantumChannel(code.physical_dim, code.physical_dim, tuple(kraus))


def decoder(code: Code, errors, tol: Tolerances = TOLERANCES) -> QuantumChannel:
    """Décodeur D = S† ∘ R, de sorte que E ∘ D = R"""
    s_dag = code.isometry().conj().T
    kraus = tuple(s_dag @ r for r in _recovery_kraus(code, errors, tol))
    return QuantumChannel(code.physical_dim, code.logical_dim, kraus)


def tail_error_bound(kraus, k: int) -> float:
    """
    ‖Σ_{i ≥ k} Mᵢ†Mᵢ‖ : les k premiers opérateurs sont supposés corrigés.

    Raises:
        OutOfRangeError: Si k sort de [0, len(kraus)]
    """
    kraus = list(kraus)
    if not 0 <= k <= len(kraus):
        raise OutOfRangeError(f"k doit être dans [0, {len(kraus)}], reçu {k}")
    if k == len(kraus):
        return 0.0
    tail = sum(np.asarray(m).conj().T @ np.asarray(m) for m in kraus[k:])
    return operator_norm(tail)


def correctable_tail_norm(noise: QuantumChannel, corrected) -> float:
    """‖I − Σ_F F†F‖ pour des erreurs corrigées extraites du bruit"""
    covered = sum(np.asarray(f).conj().T @ np.asarray(f) for f in corrected)
    return operator_norm(np.eye(noise.dim_in) - covered)


def _logical_probe_states(dim: int, samples: int, seed: int) -> list:
    """États de Haar puis, pour un qubit, les six états des axes"""
    rng = make_rng(seed)
    states = [haar_state(dim, rng) for _ in range(samples)]
    if dim == 2:
        s = 1.0 / np.sqrt(2.0)
        states += [np.array(v, dtype=complex) for v in (
            (1, 0), (0, 1), (s, s), (s, -s), (s, 1j * s), (s, -1j * s))]
    return states


def recovery_residual(code: Code, noise: QuantumChannel, errors_corrected,
                      config: Config = None, tol: Tolerances = TOLERANCES) -> float:
    """
    max_ρ ½‖R(Φ(ρ)) − ρ‖₁ sur des états du code échantillonnés.

    Calculé sur l'espace logique via D∘Φ∘E (l'encodage est isométrique).

    Raises:
        BoundViolationError: Si le résidu dépasse la norme de la queue
    """
    config = config or Config()
    if noise.dim_in != code.physical_dim or noise.dim_out != code.physical_dim:
        raise DimensionMismatchError(
            f"Bruit {noise.dim_in}→{noise.dim_out} sur un code de dimension {code.physical_dim}"
        )
    logical = compose(decoder(code, errors_corrected, tol), compose(noise, encoder(code), tol), tol)
    residual = 0.0
    for psi in _logical_probe_states(code.logical_dim, config.residual_samples, config.seed):
        rho = DensityOperator.from_amplitudes(psi).matrix
        gap = 0.5 * trace_norm(apply_map(logical, rho) - rho, tol)
        residual = max(residual, gap)

    bound = correctable_tail_norm(noise, errors_corrected)
    if residual > bound + tol.recovery:
        raise BoundViolationError(f"Résidu {residual:.12g} > queue {bound:.12g}")
    logger.info(f"Résidu de récupération ({code.name}): {residual:.6e} ≤ {bound:.6e}")
    return residual


def _check_tail_args(eta: float, k: int, cutoff: int) -> float:
    eta = check_unit_interval('eta', eta)
    if k < 0 or cutoff < 1 or k >= cutoff:
        raise OutOfRangeError(f"Il faut 0 ≤ k < cutoff, reçu k={k}, cutoff={cutoff}")
    return eta


def pure_loss_exact_tail(eta: float, k: int, cutoff: int) -> float:
    """
    max_m P[plus de k pertes parmi m], m = k+1..cutoff, pertes ~ Binomiale(m, 1−η).

    Recoupé avec ‖Σ_{l>k} Aₗ†Aₗ‖ des opérateurs de pure_loss_kraus.

    Raises:
        BoundViolationError: Si les deux calculs diffèrent de plus de 1e-12
    """
    eta = _check_tail_args(eta, k, cutoff)
    ms = np.arange(k + 1, cutoff + 1)
    exact = float(np.max(binom.sf(k, ms, 1.0 - eta)))
    kraus_norm = tail_error_bound(pure_loss_kraus(eta, FockTruncation(cutoff)).kraus, k + 1)
    if abs(exact - kraus_norm) > 1e-12:
        raise BoundViolationError(
            f"Queue binomiale {exact:.15g} ≠ norme de Kraus {kraus_norm:.15g} (η={eta}, k={k})"
        )
    return exact


def chernoff_tail_bound(eta: float, k: int, cutoff: int, base: str = 'e') -> TailBoundReport:
    """
    Queue exacte et bornes de Chernoff exp(−m·D((k+1)/m ‖ 1−η)) par valeur de m.

    La borne n'est valide que si (k+1)/m ≥ 1−η. La variante « literal »
    utilise η comme second argument et n'est que rapportée.

    Raises:
        BoundViolationError: Si une borne valide est dépassée par la queue exacte
    """
    eta = _check_tail_args(eta, k, cutoff)
    loss = 1.0 - eta
    factor = math.e if base == 'e' else 2.0
    rows = []
    for m in range(k + 1, cutoff + 1):
        ratio = (k + 1) / m
        exact = float(binom.sf(k, m, loss))
        primary = factor ** (-m * kl_divergence_binary(ratio, loss, base))
        literal = factor ** (-m * kl_divergence_binary(ratio, eta, base))
        valid = ratio >= loss
        if valid and exact > primary * (1.0 + 1e-12):
            raise BoundViolationError(f"Queue {exact:.12g} > Chernoff {primary:.12g} pour m={m}")
        if not valid:
            logger.warning(f"Régime de Chernoff non atteint pour m={m} ((k+1)/m={ratio:.4g} < {loss:.4g})")
        rows.append(ChernoffRow(m=m, exact=exact, chernoff=primary, valid=valid, literal=literal))

    valid_values = [r.chernoff for r in rows if r.valid]
    return TailBoundReport(
        exact_norm=max(r.exact for r in rows),
        k=k,
        chernoff=max(valid_values) if valid_values else None,
        chernoff_valid=all(r.valid for r in rows),
        rows=tuple(rows),
    )


def cly_p_formula(gamma: float, p: int) -> float:
    """1 − (1−γ)^p·(1 + pγ/(1−γ))"""
    return 1.0 - (1.0 - gamma) ** p * (1.0 + p * gamma / (1.0 - gamma))


def cly_error_curve(gamma_grid, cutoff: int = 4) -> list:
    """
    Norme exacte de la queue du code à deux modes contre la formule en p et 49γ².

    Raises:
        OutOfRangeError: Si un γ sort de (0, 1)
        BoundViolationError: Si la norme exacte diffère de la formule ou dépasse 49γ²
    """
    dim = cutoff + 1
    corrected_idx = (0, 1, dim)
    rows = []
    for gamma in gamma_grid:
        gamma = float(gamma)
        if not 0.0 < gamma < 1.0:
            raise OutOfRangeError(f"gamma doit être dans (0, 1), reçu {gamma}")
        kraus = cly_noise(gamma, cutoff).kraus
        ordered = [kraus[i] for i in corrected_idx]
        ordered += [m for i, m in enumerate(kraus) if i not in corrected_idx]
        exact = tail_error_bound(ordered, len(corrected_idx))
        p_max = max(cly_p_formula(gamma, p) for p in range(2 * cutoff + 1))
        bound = 49.0 * gamma ** 2
        if abs(exact - p_max) > 1e-10:
            raise BoundViolationError(f"Norme exacte {exact:.12g} ≠ formule {p_max:.12g} (γ={gamma})")
        if p_max > bound + 1e-15:
            raise BoundViolationError(f"Formule {p_max:.12g} > 49γ² = {bound:.12g} (γ={gamma})")
        rows.append(CurveRow(gamma=gamma, exact_norm=exact, p_formula_max=p_max, bound_49g2=bound))
    return rows
