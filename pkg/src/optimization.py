"""
Maximisation d'une fonction sur la boule de Bloch : grille grossière puis
affinage Nelder–Mead avec projection radiale et redémarrages aléatoires
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from src.exceptions import InvalidGridError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BallOptimum:
    """Meilleur point trouvé et sa valeur"""
    value: float
    point: np.ndarray
    grid_size: int
    n_evaluations: int


def bloch_grid(step: float = 0.05) -> np.ndarray:
    """
    Points de la grille cubique de pas `step` contenus dans la boule unité.

    Ordre lexicographique en (x, y, z).

    Raises:
        InvalidGridError: Si le pas n'est pas dans (0, 1]
    """
    if not 0.0 < step <= 1.0:
        raise InvalidGridError(f"Le pas de grille doit être dans (0, 1], reçu {step}")
    n_side = int(round(1.0 / step))
    axis = np.linspace(-1.0, 1.0, 2 * n_side + 1)
    xs, ys, zs = np.meshgrid(axis, axis, axis, indexing='ij')
    points = np.stack([xs.ravel(), ys.ravel(), zs.ravel()], axis=1)
    inside = np.einsum('ij,ij->i', points, points) <= 1.0 + 1e-12
    return points[inside]


def project_to_ball(r: np.ndarray) -> np.ndarray:
    """Projection radiale sur la boule unité"""
    r = np.asarray(r, dtype=float)
    norm = float(np.linalg.norm(r))
    return r / norm if norm > 1.0 else r


def random_ball_points(count: int, rng: np.random.Generator) -> np.ndarray:
    """Points uniformes dans la boule unité"""
    directions = rng.normal(size=(count, 3))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    radii = rng.uniform(size=(count, 1)) ** (1.0 / 3.0)
    return directions * radii


def maximize_over_ball(batch_objective, point_objective, rng: np.random.Generator,
                       step: float = 0.05, xatol: float = 1e-6,
                       restarts: int = 3) -> BallOptimum:
    """
    Maximise une fonction de r ∈ boule unité.

    Args:
        batch_objective: f(points (N, 3)) -> valeurs (N,), pour la grille
        point_objective: f(r (3,)) -> float, pour l'affinage
        rng: Générateur des points de redémarrage
        step: Pas de la grille grossière
        xatol: Tolérance en paramètre de Nelder–Mead
        restarts: Nombre de départs aléatoires supplémentaires

    Returns:
        BallOptimum ; à valeur égale, le premier candidat (grille d'abord) est gardé
    """
    grid = bloch_grid(step)
    values = np.asarray(batch_objective(grid), dtype=float)
    best_idx = int(np.argmax(values))
    starts = [grid[best_idx]] + list(random_ball_points(restarts, rng))
    logger.debug(f"Grille de {len(grid)} points, meilleur {values[best_idx]:.12g} en {grid[best_idx]}")

    best_value = float(values[best_idx])
    best_point = grid[best_idx]
    n_eval = len(grid)

    def negated(x):
        return -point_objective(project_to_ball(x))

    for idx, x0 in enumerate(starts):
        result = minimize(
            negated, x0, method='Nelder-Mead',
            options={'xatol': xatol, 'fatol': 1e-13, 'maxiter': 4000},
        )
        n_eval += int(result.nfev)
        candidate = project_to_ball(result.x)
        value = point_objective(candidate)
        logger.debug(f"Départ {idx}: valeur {value:.12g} ({result.nfev} évaluations)")
        if value > best_value:
            best_value = float(value)
            best_point = candidate

    return BallOptimum(value=best_value, point=np.asarray(best_point), grid_size=len(grid),
                       n_evaluations=n_eval)
