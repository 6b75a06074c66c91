"""
Noyau numérique : décomposition spectrale hermitienne et normes matricielles.

La diagonalisation utilise la méthode de Jacobi cyclique (rotations
unitaires 2×2) : les dimensions rencontrées restent petites (≤ 625) et le
résultat est bit-à-bit déterministe pour une entrée donnée.
"""

import logging
from dataclasses import dataclass

import numpy as np

from src.config import TOLERANCES, Tolerances
from src.exceptions import (
    ComputationError,
    NoConvergenceError,
    NonHermitianError,
    ShapeMismatchError,
)

logger = logging.getLogger(__name__)

# Matrice complexe dense (numpy, complex128)
ComplexMatrix = np.ndarray


@dataclass(frozen=True)
class HermitianEig:
    """
    Résultat de hermitian_eig.

    Attributs:
        eigenvalues: Valeurs propres réelles, ordre décroissant
        eigenvectors: Vecteurs propres orthonormés (en colonnes)
    """
    eigenvalues: np.ndarray
    eigenvectors: ComplexMatrix

    def reconstruct(self) -> ComplexMatrix:
        """Renvoie V·diag(λ)·V†"""
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_complex_matrix(m) -> ComplexMatrix:
    """
    Convertit une entrée en matrice complexe 2D finie.

    Raises:
        ShapeMismatchError: Si l'entrée n'est pas une matrice non vide
        ComputationError: Si des entrées sont NaN ou infinies
    """
    arr = np.array(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ShapeMismatchError(f"Matrice 2D non vide attendue, forme reçue {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ComputationError("La matrice contient des valeurs NaN ou infinies")
    return arr


def hermitian_defect(m: ComplexMatrix) -> float:
    """Norme de Frobenius de M − M†"""
    return float(np.linalg.norm(m - m.conj().T))


def is_hermitian(m: ComplexMatrix, tol: Tolerances = TOLERANCES) -> bool:
    """Vrai si M est carrée et hermitienne à la tolérance relative près"""
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return hermitian_defect(m) <= tol.hermitian * (1.0 + float(np.linalg.norm(m)))


def _rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """Annule a[p, q] par une rotation unitaire sur le plan (p, q), en place"""
    apq = a[p, q]
    mag = abs(apq)
    phase = apq / mag
    theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
    if theta < 0.0:
        t = -t
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    sp = s * phase
    cp_bar = c * np.conj(phase)
    sp_bar = s * np.conj(phase)

    # Colonnes : A ← A·U
    col_p = a[:, p].copy()
    col_q = a[:, q]
    a[:, p] = c * col_p - sp_bar * col_q
    a[:, q] = s * col_p + cp_bar * col_q
    # Lignes : A ← U†·A
    row_p = a[p, :].copy()
    row_q = a[q, :]
    a[p, :] = c * row_p - sp * row_q
    a[q, :] = s * row_p + c * phase * row_q
    a[p, q] = 0.0
    a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real

    vec_p = v[:, p].copy()
    vec_q = v[:, q]
    v[:, p] = c * vec_p - sp_bar * vec_q
    v[:, q] = s * vec_p + cp_bar * vec_q


def _off_diagonal_mass(a: np.ndarray) -> float:
    """Norme de Frobenius de la partie hors diagonale, calculée directement"""
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def hermitian_eig(m: ComplexMatrix, tol: Tolerances = TOLERANCES) -> HermitianEig:
    """
    Décomposition spectrale d'une matrice hermitienne par Jacobi cyclique.

    Les entrées hermitiennes à la tolérance près sont d'abord symétrisées
    ((M + M†)/2).

    Args:
        m: Matrice carrée hermitienne
        tol: Tolérances (hermiticité, convergence, nombre maximal de balayages)

    Returns:
        HermitianEig avec valeurs propres décroissantes

    Raises:
        NonHermitianError: Si M n'est pas hermitienne
        NoConvergenceError: Si le nombre maximal de balayages est dépassé
    """
    m = as_complex_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise NonHermitianError(f"Matrice carrée attendue, forme reçue {m.shape}")
    if not is_hermitian(m, tol):
        raise NonHermitianError(
            f"Matrice non hermitienne: ‖M − M†‖ = {hermitian_defect(m):.3e}"
        )

    dim = m.shape[0]
    a = 0.5 * (m + m.conj().T)
    v = np.eye(dim, dtype=complex)
    norm_f = float(np.linalg.norm(a))
    threshold = tol.jacobi_convergence * norm_f
    skip = threshold / max(dim, 1)

    sweeps = 0
    while norm_f > 0.0 and _off_diagonal_mass(a) >= threshold:
        if sweeps >= tol.jacobi_max_sweeps:
            raise NoConvergenceError(
                f"Jacobi n'a pas convergé en {tol.jacobi_max_sweeps} balayages (dimension {dim})"
            )
        for p in range(dim - 1):
            for q in range(p + 1, dim):
                if abs(a[p, q]) > skip:
                    _rotate(a, v, p, q)
        sweeps += 1

    logger.debug(f"Jacobi: dimension {dim}, {sweeps} balayage(s)")

    eigenvalues = np.real(np.diag(a)).copy()
    order = np.argsort(-eigenvalues, kind='stable')
    return HermitianEig(eigenvalues=eigenvalues[order], eigenvectors=v[:, order])


def _gram_singular_values(m: ComplexMatrix, tol: Tolerances) -> np.ndarray:
    """Valeurs singulières (décroissantes) via la décomposition de M†M, avec mise à l'échelle"""
    scale = float(np.max(np.abs(m)))
    if scale == 0.0:
        return np.zeros(min(m.shape))
    ms = m / scale
    gram = ms.conj().T @ ms
    eig = hermitian_eig(gram, tol)
    return scale * np.sqrt(np.clip(eig.eigenvalues, 0.0, None))


def operator_norm(m: ComplexMatrix, tol: Tolerances = TOLERANCES) -> float:
    """
    Norme d'opérateur (plus grande valeur singulière).

    Pour une matrice hermitienne, renvoie max |λ| directement.
    """
    m = as_complex_matrix(m)
    try:
        scale = float(np.max(np.abs(m)))
        if scale == 0.0:
            return 0.0
        ms = m / scale
        if is_hermitian(ms, tol):
            eig = hermitian_eig(ms, tol)
            return scale * float(np.max(np.abs(eig.eigenvalues)))
        return float(_gram_singular_values(m, tol)[0])
    except FloatingPointError as exc:
        raise ComputationError(f"Débordement numérique dans operator_norm: {exc}") from exc


def trace_norm(m: ComplexMatrix, tol: Tolerances = TOLERANCES) -> float:
    """
    Norme trace complète ‖M‖₁ (somme des valeurs singulières).

    Les appelants divisent par 2 pour la distance trace. Pour une matrice
    hermitienne, la somme des |λ| est utilisée directement.
    """
    m = as_complex_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ShapeMismatchError(f"Matrice carrée attendue, forme reçue {m.shape}")
    try:
        scale = float(np.max(np.abs(m)))
        if scale == 0.0:
            return 0.0
        ms = m / scale
        if is_hermitian(ms, tol):
            eig = hermitian_eig(ms, tol)
            return scale * float(np.sum(np.abs(eig.eigenvalues)))
        return float(np.sum(_gram_singular_values(m, tol)))
    except FloatingPointError as exc:
        raise ComputationError(f"Débordement numérique dans trace_norm: {exc}") from exc
