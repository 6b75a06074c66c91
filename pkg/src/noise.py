"""
Modèles de bruit : amortissement d'amplitude (qubit et bosonique tronqué),
canal de perte pure tronqué, canaux qubit usuels et utilitaires de Fock.

Les opérateurs bosoniques sont définis directement sur l'espace tronqué
{|0⟩, …, |cutoff⟩} à partir de leur action sur les états de nombre : les
canaux obtenus sont exactement trace-préservants sur cet espace.
"""

import logging
from dataclasses import dataclass
from functools import reduce

import numpy as np
from scipy.special import comb

from src.channels import QuantumChannel, tensor
from src.exceptions import OutOfRangeError, check_unit_interval

logger = logging.getLogger(__name__)

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass(frozen=True)
class FockTruncation:
    """
    Troncature de l'espace de Fock.

    Attributs:
        cutoff: Occupation maximale retenue (dimension par mode = cutoff + 1)
        modes: Nombre de modes
    """
    cutoff: int
    modes: int = 1

    def __post_init__(self):
        if self.cutoff < 0:
            raise OutOfRangeError(f"cutoff doit être positif ou nul, reçu {self.cutoff}")
        if self.modes < 1:
            raise OutOfRangeError(f"modes doit être ≥ 1, reçu {self.modes}")

    @property
    def mode_dim(self) -> int:
        return self.cutoff + 1

    @property
    def dim(self) -> int:
        return self.mode_dim ** self.modes


def _require_single_mode(trunc: FockTruncation) -> None:
    if trunc.modes != 1:
        raise OutOfRangeError(
            f"Constructeur mono-mode: {trunc.modes} modes reçus (utiliser independent)"
        )


def binomial_loss_kraus(loss: float, cutoff: int) -> list:
    """
    Opérateurs Aₗ (l = 0..cutoff) avec Aₗ|m⟩ = √(C(m,l)·loss^l·(1−loss)^(m−l)) |m−l⟩.

    Forme commune de l'amortissement bosonique (loss = γ) et de la perte
    pure (loss = 1 − η).
    """
    dim = cutoff + 1
    ops = []
    for l in range(dim):
        a = np.zeros((dim, dim), dtype=complex)
        for m in range(l, dim):
            weight = comb(m, l, exact=True) * loss ** l * (1.0 - loss) ** (m - l)
            a[m - l, m] = np.sqrt(weight)
        ops.append(a)
    return ops


def amplitude_damping(gamma: float) -> QuantumChannel:
    """Amortissement d'amplitude qubit, Kraus A₀ = diag(1, √(1−γ)), A₁ = √γ |0⟩⟨1|"""
    gamma = check_unit_interval('gamma', gamma)
    a0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - gamma)]], dtype=complex)
    a1 = np.array([[0.0, np.sqrt(gamma)], [0.0, 0.0]], dtype=complex)
    return QuantumChannel(2, 2, (a0, a1))


def bosonic_ad_kraus(gamma: float, trunc: FockTruncation) -> QuantumChannel:
    """Amortissement d'amplitude bosonique mono-mode, cutoff + 1 opérateurs Bₖ"""
    gamma = check_unit_interval('gamma', gamma)
    _require_single_mode(trunc)
    return QuantumChannel(trunc.dim, trunc.dim, tuple(binomial_loss_kraus(gamma, trunc.cutoff)))


def pure_loss_kraus(eta: float, trunc: FockTruncation) -> QuantumChannel:
    """Canal de perte pure de transmission η, cutoff + 1 opérateurs Aₗ"""
    eta = check_unit_interval('eta', eta)
    _require_single_mode(trunc)
    return QuantumChannel(trunc.dim, trunc.dim, tuple(binomial_loss_kraus(1.0 - eta, trunc.cutoff)))


def annihilation(trunc: FockTruncation) -> np.ndarray:
    """Opérateur d'annihilation tronqué : a|m⟩ = √m |m−1⟩"""
    _require_single_mode(trunc)
    return np.diag(np.sqrt(np.arange(1, trunc.mode_dim, dtype=float)), k=1).astype(complex)


def number_operator(trunc: FockTruncation) -> np.ndarray:
    """a†a = diag(0, 1, …, cutoff)"""
    a = annihilation(trunc)
    return a.conj().T @ a


def fock_state(trunc: FockTruncation, occupations) -> np.ndarray:
    """
    Amplitudes de l'état |n₁ n₂ …⟩ sur l'espace à trunc.modes modes.

    Raises:
        OutOfRangeError: Si une occupation dépasse cutoff ou si le nombre de modes diffère
    """
    occupations = list(occupations)
    if len(occupations) != trunc.modes:
        raise OutOfRangeError(f"{len(occupations)} occupations pour {trunc.modes} modes")
    basis = []
    for n in occupations:
        if not 0 <= n <= trunc.cutoff:
            raise OutOfRangeError(f"Occupation {n} hors de [0, {trunc.cutoff}]")
        e = np.zeros(trunc.mode_dim, dtype=complex)
        e[n] = 1.0
        basis.append(e)
    return reduce(np.kron, basis)


def depolarizing(p: float) -> QuantumChannel:
    """Dépolarisant qubit ρ ↦ (1−p)ρ + p·I/2 (p = 1 : complètement dépolarisant)"""
    p = check_unit_interval('p', p)
    ops = (
        np.sqrt(1.0 - 3.0 * p / 4.0) * np.eye(2, dtype=complex),
        np.sqrt(p / 4.0) * PAULI_X,
        np.sqrt(p / 4.0) * PAULI_Y,
        np.sqrt(p / 4.0) * PAULI_Z,
    )
    return QuantumChannel(2, 2, ops)


def bit_flip(p: float) -> QuantumChannel:
    """Inversion de bit avec probabilité p"""
    p = check_unit_interval('p', p)
    return QuantumChannel(2, 2, (np.sqrt(1.0 - p) * np.eye(2, dtype=complex), np.sqrt(p) * PAULI_X))


def independent(c: QuantumChannel, copies: int) -> QuantumChannel:
    """Puissance tensorielle c^⊗copies (bruit indépendant sur chaque mode)"""
    if copies < 1:
        raise OutOfRangeError(f"copies doit être ≥ 1, reçu {copies}")
    return reduce(tensor, [c] * copies)
