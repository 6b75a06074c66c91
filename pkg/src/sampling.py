"""
Tirages aléatoires reproductibles : états de Haar, matrices densité et canaux aléatoires
"""

import numpy as np
from scipy.spatial.transform import Rotation

from src.config import Config


def make_rng(seed: int = None) -> np.random.Generator:
    """Générateur nommé et déterministe (graine par défaut : Config.seed)"""
    return np.random.default_rng(Config.seed if seed is None else seed)


def haar_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Vecteur d'état uniforme (mesure de Haar) de norme 1"""
    vec = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return vec / np.linalg.norm(vec)


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Unitaire de Haar par QR d'une matrice de Ginibre, phases corrigées"""
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_density_matrix(dim: int, rng: np.random.Generator, rank: int = None) -> np.ndarray:
    """Matrice densité aléatoire (mesure de Hilbert–Schmidt si rank = dim)"""
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_kraus(dim_in: int, dim_out: int, n_kraus: int,
                 rng: np.random.Generator) -> list:
    """
    Opérateurs de Kraus d'un canal aléatoire.

    Une isométrie de Haar V : C^dim_in → C^(n_kraus·dim_out) est découpée
    en blocs dim_out × dim_in, ce qui garantit Σ Aᵢ†Aᵢ = I.
    """
    big = n_kraus * dim_out
    z = rng.normal(size=(big, dim_in)) + 1j * rng.normal(size=(big, dim_in))
    q, _ = np.linalg.qr(z)
    return [q[k * dim_out:(k + 1) * dim_out, :] for k in range(n_kraus)]


def random_bloch_rotation(rng: np.random.Generator) -> np.ndarray:
    """Rotation uniforme de SO(3)"""
    return Rotation.random(random_state=rng).as_matrix()
