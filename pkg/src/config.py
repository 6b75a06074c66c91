"""
Module de configuration centralisée pour le projet
"""

import os
from dataclasses import dataclass, field
from pathlib import Path

from dotenv import load_dotenv


@dataclass(frozen=True)
class Tolerances:
    """Toutes les tolérances numériques du projet"""

    # Noyau numérique
    hermitian: float = 1e-10
    jacobi_convergence: float = 1e-14
    jacobi_max_sweeps: int = 100

    # Canaux et états
    completeness: float = 1e-9
    density: float = 1e-10
    kraus_prune: float = 1e-12
    channel_equality: float = 1e-9
    pure_state_norm: float = 1e-8

    # T-matrices
    transfer_row: float = 1e-10
    canonical_residual: float = 1e-9
    unit_eigenvalue: float = 1e-12

    # Correction d'erreurs
    knill_laflamme: float = 1e-9
    recovery: float = 1e-9
    orthonormal_words: float = 1e-10


TOLERANCES = Tolerances()


@dataclass
class Config:
    """Configuration d'exécution (CLI, balayages, démonstration)"""

    # Chemins
    output_dir: Path = Path('data')

    # Reproductibilité
    seed: int = 42
    float_digits: int = 12
    schema_version: int = 1

    # Séquences Ξⁿ
    n_max: int = 512
    n0_search_max: int = 512
    diamond_check_max: int = 64

    # Maximisation de l'information cohérente
    q1_grid_step: float = 0.05
    q1_xatol: float = 1e-6
    q1_restarts: int = 3

    # Correction d'erreurs
    residual_samples: int = 200
    chernoff_log_base: str = 'e'

    # Parallélisme (0 = automatique)
    threads: int = None

    tolerances: Tolerances = field(default_factory=Tolerances)

    def __post_init__(self):
        """Lit l'environnement (.env compris)"""
        load_dotenv()
        if self.threads is None:
            raw = os.getenv('SEQCAP_THREADS', '0')
            try:
                self.threads = max(0, int(raw))
            except ValueError:
                self.threads = 0
        self.output_dir = Path(self.output_dir)

    @property
    def max_workers(self) -> int:
        """Nombre effectif de threads pour les grilles indépendantes"""
        if self.threads == 0:
            return os.cpu_count() or 1
        return self.threads
