"""
Algèbre des canaux quantiques en représentation de Kraus.

Convention de Choi : J = Σᵢⱼ |i⟩⟨j| ⊗ Φ(|i⟩⟨j|), jambe d'entrée en premier.
Un opérateur de Kraus A correspond au vecteur vec(A) = Aᵀ aplati, de sorte
que J = Σₖ vec(Aₖ)·vec(Aₖ)†.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from src.config import TOLERANCES, Tolerances
from src.exceptions import (
    ChannelValidationError,
    ComputationError,
    DimensionMismatchError,
    NotEndomorphicError,
    OutOfRangeError,
    ShapeMismatchError,
)
from src.numerics import as_complex_matrix, hermitian_eig, is_hermitian, operator_norm

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class QuantumChannel:
    """
    Canal quantique donné par ses opérateurs de Kraus.

    Attributs:
        dim_in: Dimension de l'espace d'entrée
        dim_out: Dimension de l'espace de sortie
        kraus: Tuple non vide de matrices dim_out × dim_in

    La forme des opérateurs est vérifiée à la construction ; la complétude
    (Σ Aᵢ†Aᵢ = I) est vérifiée par validate_channel.
    """
    dim_in: int
    dim_out: int
    kraus: tuple

    def __post_init__(self):
        if self.dim_in < 1 or self.dim_out < 1:
            raise ShapeMismatchError(
                f"Dimensions invalides: dim_in={self.dim_in}, dim_out={self.dim_out}"
            )
        ops = tuple(as_complex_matrix(k) for k in self.kraus)
        if not ops:
            raise ShapeMismatchError("Un canal doit avoir au moins un opérateur de Kraus")
        for idx, op in enumerate(ops):
            if op.shape != (self.dim_out, self.dim_in):
                raise ShapeMismatchError(
                    f"Opérateur de Kraus {idx}: forme {op.shape}, "
                    f"attendu ({self.dim_out}, {self.dim_in})"
                )
        object.__setattr__(self, 'kraus', ops)

    @property
    def n_kraus(self) -> int:
        return len(self.kraus)

    @property
    def is_endomorphic(self) -> bool:
        return self.dim_in == self.dim_out

    def stacked(self) -> np.ndarray:
        """Opérateurs de Kraus empilés, forme (r, dim_out, dim_in)"""
        return np.stack(self.kraus)


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """
    Matrice densité (hermitienne, positive, de trace 1).

    Les contrôles utilisent la tolérance `density` (1e-10 par défaut).
    """
    dim: int
    matrix: np.ndarray
    tol: Tolerances = field(default=TOLERANCES, repr=False)

    def __post_init__(self):
        m = as_complex_matrix(self.matrix)
        if m.shape != (self.dim, self.dim):
            raise ShapeMismatchError(
                f"Matrice densité de forme {m.shape}, attendu ({self.dim}, {self.dim})"
            )
        eps = self.tol.density
        if not is_hermitian(m, self.tol):
            raise ComputationError("La matrice densité n'est pas hermitienne")
        trace = np.trace(m)
        if abs(trace - 1.0) > eps:
            raise ComputationError(f"Trace de la matrice densité = {trace.real:.12g}, attendu 1")
        m = 0.5 * (m + m.conj().T)
        smallest = hermitian_eig(m, self.tol).eigenvalues[-1]
        if smallest < -eps:
            raise ComputationError(f"Valeur propre négative dans la matrice densité: {smallest:.3e}")
        object.__setattr__(self, 'matrix', m)

    @classmethod
    def from_amplitudes(cls, amplitudes, tol: Tolerances = TOLERANCES) -> 'DensityOperator':
        """
        État pur |ψ⟩⟨ψ| à partir d'une liste d'amplitudes.

        Le vecteur est renormalisé si sa norme est à moins de 1e-8 de 1.

        Raises:
            OutOfRangeError: Si la norme s'écarte davantage de 1
        """
        psi = np.asarray(amplitudes, dtype=complex).reshape(-1)
        norm = float(np.linalg.norm(psi))
        if abs(norm - 1.0) > tol.pure_state_norm:
            raise OutOfRangeError(f"Vecteur d'état de norme {norm:.12g}, attendu 1")
        psi = psi / norm
        return cls(dim=psi.size, matrix=np.outer(psi, psi.conj()), tol=tol)

    @classmethod
    def maximally_mixed(cls, dim: int) -> 'DensityOperator':
        return cls(dim=dim, matrix=np.eye(dim, dtype=complex) / dim)


@dataclass(frozen=True)
class ValidationReport:
    """Résultat de validate_channel"""
    passed: bool
    defect: float


def completeness_defect(c: QuantumChannel) -> float:
    """‖Σ Aᵢ†Aᵢ − I‖ en norme d'opérateur"""
    k = c.stacked()
    gram = np.einsum('kai,kaj->ij', k.conj(), k)
    return operator_norm(gram - np.eye(c.dim_in))


def validate_channel(c: QuantumChannel, tol: Tolerances = TOLERANCES) -> ValidationReport:
    """Vérifie la préservation de la trace"""
    defect = completeness_defect(c)
    return ValidationReport(passed=defect <= tol.completeness, defect=defect)


def require_valid(c: QuantumChannel, tol: Tolerances = TOLERANCES) -> QuantumChannel:
    """
    Renvoie le canal s'il est trace-préservant.

    Raises:
        ChannelValidationError: Sinon
    """
    report = validate_channel(c, tol)
    if not report.passed:
        raise ChannelValidationError(
            f"Canal non trace-préservant: ‖Σ A†A − I‖ = {report.defect:.3e}"
        )
    return c


def identity_channel(dim: int) -> QuantumChannel:
    return QuantumChannel(dim, dim, (np.eye(dim, dtype=complex),))


def apply_map(c: QuantumChannel, m) -> np.ndarray:
    """Action linéaire Σ Aᵢ M Aᵢ† sur un opérateur quelconque"""
    m = as_complex_matrix(m)
    if m.shape != (c.dim_in, c.dim_in):
        raise DimensionMismatchError(
            f"Opérateur de forme {m.shape}, le canal attend la dimension {c.dim_in}"
        )
    k = c.stacked()
    return np.einsum('kab,bc,kdc->ad', k, m, k.conj())


def apply(c: QuantumChannel, rho: DensityOperator) -> DensityOperator:
    """
    Image d'un état par le canal.

    Raises:
        ChannelValidationError: Si la trace de l'image s'écarte de 1
            (canal non trace-préservant)
    """
    if rho.dim != c.dim_in:
        raise DimensionMismatchError(
            f"État de dimension {rho.dim}, le canal attend la dimension {c.dim_in}"
        )
    out = apply_map(c, rho.matrix)
    trace = np.trace(out).real
    if abs(trace - 1.0) > rho.tol.density:
        raise ChannelValidationError(
            f"Image de trace {trace:.12g}: le canal ne préserve pas la trace"
        )
    return DensityOperator(dim=c.dim_out, matrix=out, tol=rho.tol)


def choi(c: QuantumChannel) -> np.ndarray:
    """Matrice de Choi non normalisée (trace = dim_in)"""
    vecs = np.stack([a.T.reshape(-1) for a in c.kraus], axis=1)
    return vecs @ vecs.conj().T


def choi_to_channel(j: np.ndarray, dim_in: int, dim_out: int,
                    tol: Tolerances = TOLERANCES) -> QuantumChannel:
    """Ensemble de Kraus minimal à partir d'une matrice de Choi positive"""
    eig = hermitian_eig(j, tol)
    kraus = [
        np.sqrt(lam) * eig.eigenvectors[:, idx].reshape(dim_in, dim_out).T
        for idx, lam in enumerate(eig.eigenvalues)
        if lam > tol.kraus_prune
    ]
    if not kraus:
        raise ComputationError("Matrice de Choi nulle: aucun opérateur de Kraus retenu")
    return QuantumChannel(dim_in, dim_out, tuple(kraus))


def minimal_kraus(c: QuantumChannel, tol: Tolerances = TOLERANCES) -> QuantumChannel:
    """Réduit le nombre d'opérateurs de Kraus via la décomposition de Choi"""
    reduced = choi_to_channel(choi(c), c.dim_in, c.dim_out, tol)
    logger.debug(f"Élagage Kraus: {c.n_kraus} → {reduced.n_kraus}")
    return reduced


def _drop_null_kraus(ops: list, tol: Tolerances) -> list:
    kept = [a for a in ops if float(np.linalg.norm(a)) ** 2 > tol.kraus_prune]
    return kept or ops[:1]


def compose(outer: QuantumChannel, inner: QuantumChannel,
            tol: Tolerances = TOLERANCES) -> QuantumChannel:
    """
    Composition outer ∘ inner (inner appliqué en premier).

    Les produits Bⱼ·Aᵢ sont formés puis, si leur nombre dépasse
    dim_in·dim_out, réduits à un ensemble minimal.

    Raises:
        DimensionMismatchError: Si inner.dim_out != outer.dim_in
    """
    if inner.dim_out != outer.dim_in:
        raise DimensionMismatchError(
            f"Composition impossible: sortie {inner.dim_out} vs entrée {outer.dim_in}"
        )
    products = [b @ a for b in outer.kraus for a in inner.kraus]
    products = _drop_null_kraus(products, tol)
    result = QuantumChannel(inner.dim_in, outer.dim_out, tuple(products))
    if result.n_kraus > result.dim_in * result.dim_out:
        result = minimal_kraus(result, tol)
    return result


def power(c: QuantumChannel, n: int, tol: Tolerances = TOLERANCES) -> QuantumChannel:
    """
    Puissance de composition Φⁿ (exponentiation binaire).

    Raises:
        NotEndomorphicError: Si dim_in != dim_out
        OutOfRangeError: Si n < 0
    """
    if not c.is_endomorphic:
        raise NotEndomorphicError(f"Canal {c.dim_in} → {c.dim_out}: puissance non définie")
    if n < 0:
        raise OutOfRangeError(f"n doit être positif ou nul, reçu {n}")
    result = identity_channel(c.dim_in)
    base = c
    while n:
        if n & 1:
            result = compose(base, result, tol)
        n >>= 1
        if n:
            base = compose(base, base, tol)
    return result


def tensor(a: QuantumChannel, b: QuantumChannel) -> QuantumChannel:
    """Produit tensoriel a ⊗ b"""
    ops = tuple(np.kron(x, y) for x in a.kraus for y in b.kraus)
    return QuantumChannel(a.dim_in * b.dim_in, a.dim_out * b.dim_out, ops)


def complementary(c: QuantumChannel) -> QuantumChannel:
    """
    Canal complémentaire Φᶜ, de sortie de dimension égale au nombre de Kraus.

    (Φᶜ(ρ))ᵢⱼ = Tr(Aᵢ ρ Aⱼ†) ; ses opérateurs de Kraus sont Kₘ = Σᵢ |i⟩⟨m|Aᵢ.
    """
    k = c.stacked()
    ops = tuple(k[:, m, :] for m in range(c.dim_out))
    return QuantumChannel(c.dim_in, c.n_kraus, ops)


def channels_equal(a: QuantumChannel, b: QuantumChannel,
                   tol: Tolerances = TOLERANCES) -> bool:
    """Égalité en tant qu'applications : distance de Choi ≤ tolérance (norme d'opérateur)"""
    if (a.dim_in, a.dim_out) != (b.dim_in, b.dim_out):
        return False
    return operator_norm(choi(a) - choi(b)) <= tol.channel_equality
