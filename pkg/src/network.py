"""
Nœuds Ξ = D∘N∘E, analyse de la suite Ξⁿ et balayages de paramètres
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from itertools import product
from typing import Optional

import numpy as np
import pandas as pd

from src.capacity import (
    CapacityBoundParams,
    binary_entropy,
    continuity_capacity_bound,
    diamond_distance_interval,
    sequential_distance_bound,
)
from src.channels import QuantumChannel, compose, identity_channel
from src.config import TOLERANCES, Config, Tolerances
from src.exceptions import (
    BoundViolationError,
    DimensionMismatchError,
    InvalidGridError,
    OutOfRangeError,
    SeqCapError,
    check_unit_interval,
)
from src.noise import amplitude_damping
from src.qec import Code, correctable_tail_norm, decoder, encoder, pure_loss_exact_tail, trivial_code
from src.transfer import canonicalize, limit_transfer, radius_of_convergence, spectral_radius_mu, transfer_matrix

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ['model', 'param', 'n', 'epsilon', 'capacity_lower',
                 'distance_upper', 'mu', 'R_n', 'feasible']
SWEEP_MODELS = ('ad', 'bosonic-ad', 'pure-loss')
EPSILON_SOURCES = ('auto', 'diamond', 'tail')


@dataclass(frozen=True, eq=False)
class NodeSpec:
    """
    Description d'un nœud Ξ = D∘N∘E.

    Attributs:
        noise: Bruit N sur l'espace physique
        code: Code définissant E et D
        corrected: Erreurs corrigées (opérateurs de Kraus de N) ; None = {I}
        epsilon: Borne certifiée sur ½‖Ξ − id‖◇, sinon déduite
        epsilon_source: 'auto', 'diamond' ou 'tail' quand epsilon est absent
    """
    noise: QuantumChannel
    code: Code
    corrected: Optional[list] = None
    epsilon: Optional[float] = None
    epsilon_source: str = 'auto'

    def __post_init__(self):
        if self.noise.dim_in != self.code.physical_dim or self.noise.dim_out != self.code.physical_dim:
            raise DimensionMismatchError(
                f"Bruit {self.noise.dim_in}→{self.noise.dim_out} incompatible avec un code "
                f"de dimension physique {self.code.physical_dim}"
            )
        if self.epsilon is not None:
            check_unit_interval('epsilon', self.epsilon)
        if self.epsilon_source not in EPSILON_SOURCES:
            raise OutOfRangeError(f"Source de epsilon inconnue: {self.epsilon_source}")

    def corrected_errors(self) -> list:
        if self.corrected is None:
            return [np.eye(self.code.physical_dim, dtype=complex)]
        return list(self.corrected)


@dataclass(frozen=True)
class SequenceRow:
    """Une ligne de l'analyse de Ξⁿ"""
    n: int
    capacity_lower: float
    distance_upper: float
    R_n: Optional[float]
    entanglement_feasible: bool
    diamond_lower: Optional[float] = None
    diamond_upper: Optional[float] = None


@dataclass
class SequenceReport:
    """Résultat d'analyze_sequence"""
    epsilon: float
    epsilon_source: str
    mu: Optional[float]
    rows: list = field(default_factory=list)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([vars(r) for r in self.rows])


def build_node(spec: NodeSpec, tol: Tolerances = TOLERANCES) -> QuantumChannel:
    """
    Canal de nœud Ξ = D∘N∘E sur l'espace logique.

    Raises:
        KLViolatedError: Si les erreurs corrigées ne vérifient pas Knill–Laflamme
    """
    logger.info(f"Construction du nœud (code {spec.code.name}, bruit {spec.noise.n_kraus} Kraus)")
    dec = decoder(spec.code, spec.corrected_errors(), tol)
    return compose(dec, compose(spec.noise, encoder(spec.code), tol), tol)


def resolve_epsilon(spec: NodeSpec, node: QuantumChannel, tol: Tolerances = TOLERANCES):
    """
    ε du nœud et sa provenance.

    Ordre : valeur fournie ; sinon borne supérieure de l'intervalle diamant
    (code trivial ou source 'diamond') ; sinon norme de la queue de Kraus.
    La valeur est ramenée à 1 au plus.
    """
    if spec.epsilon is not None:
        return float(spec.epsilon), 'given'
    source = spec.epsilon_source
    if source == 'auto':
        source = 'diamond' if spec.code.physical_dim == spec.code.logical_dim else 'tail'
    if source == 'diamond':
        value = diamond_distance_interval(node, identity_channel(node.dim_in), tol).upper
    else:
        value = correctable_tail_norm(spec.noise, spec.corrected_errors())
    if value > 1.0:
        logger.warning(f"epsilon = {value:.6g} ramené à 1 (source {source})")
    return min(1.0, float(value)), source


def node_mu(node: QuantumChannel, tol: Tolerances = TOLERANCES) -> Optional[float]:
    """μ d'un nœud qubit, None si les hypothèses de convergence ne tiennent pas"""
    if node.dim_in != 2 or node.dim_out != 2:
        return None
    try:
        ct = canonicalize(transfer_matrix(node), tol)
        limit_transfer(ct, tol)
        return spectral_radius_mu(ct)
    except SeqCapError as exc:
        logger.warning(f"Colonnes spectrales omises: {exc}")
        return None


def sequence_row(epsilon: float, mu: Optional[float], n: int, d_B: int = 2) -> SequenceRow:
    capacity = continuity_capacity_bound(CapacityBoundParams(epsilon=epsilon, n=n, d_B=d_B))
    r_n = radius_of_convergence(mu, n) if mu is not None and n >= 1 else None
    return SequenceRow(
        n=n,
        capacity_lower=capacity,
        distance_upper=sequential_distance_bound(epsilon, n),
        R_n=r_n,
        entanglement_feasible=capacity > 0.0,
    )


def iter_sequence(spec: NodeSpec, n_max: int, config: Config = None):
    """
    Génère les lignes n = 0..n_max de l'analyse de Ξⁿ.

    Aux puissances de 2 (jusqu'à config.diamond_check_max) l'intervalle
    diamant de Ξⁿ est calculé et sa borne inférieure comparée à nε.

    Raises:
        BoundViolationError: Si la borne inférieure dépasse nε + 1e-9
    """
    config = config or Config()
    node, epsilon, _, mu = _prepare(spec, n_max, config)
    yield from _rows(node, epsilon, mu, n_max, config)


def _prepare(spec: NodeSpec, n_max: int, config: Config):
    tol = config.tolerances
    if n_max < 0:
        raise OutOfRangeError(f"n_max doit être positif ou nul, reçu {n_max}")
    node = build_node(spec, tol)
    epsilon, source = resolve_epsilon(spec, node, tol)
    mu = node_mu(node, tol)
    logger.info(f"Analyse de Ξⁿ: ε = {epsilon:.6g} ({source}), μ = {mu}, n_max = {n_max}")
    return node, epsilon, source, mu


def _rows(node: QuantumChannel, epsilon: float, mu, n_max: int, config: Config):
    tol = config.tolerances
    ident = identity_channel(node.dim_in)
    check_max = min(n_max, config.diamond_check_max)
    power_node = node
    next_check = 1
    for n in range(n_max + 1):
        row = sequence_row(epsilon, mu, n)
        if n == next_check and n <= check_max:
            interval = diamond_distance_interval(power_node, ident, tol)
            if interval.lower > n * epsilon + 1e-9:
                raise BoundViolationError(
                    f"½‖Ξⁿ − id‖◇ ≥ {interval.lower:.12g} > nε = {n * epsilon:.12g} (n={n})"
                )
            row = replace(row, diamond_lower=interval.lower, diamond_upper=interval.upper)
            power_node = compose(power_node, power_node, tol)
            next_check *= 2
        yield row


def analyze_sequence(spec: NodeSpec, n_max: int, config: Config = None) -> SequenceReport:
    """Analyse complète de la suite Ξⁿ, n = 0..n_max"""
    config = config or Config()
    node, epsilon, source, mu = _prepare(spec, n_max, config)
    rows = list(_rows(node, epsilon, mu, n_max, config))
    return SequenceReport(epsilon=epsilon, epsilon_source=source, mu=mu, rows=rows)


def entanglement_horizon(epsilon: float, d_B: int = 2) -> int:
    """
    Plus grand n tel que la borne de capacité reste strictement positive.

    Recherche exponentielle puis dichotomie (la borne décroît avec n).
    """
    epsilon = check_unit_interval('epsilon', epsilon)
    if epsilon == 0.0:
        raise OutOfRangeError("epsilon doit être dans (0, 1]")

    def positive(n: int) -> bool:
        return continuity_capacity_bound(CapacityBoundParams(epsilon=epsilon, n=n, d_B=d_B)) > 0.0

    lo, hi = 0, 1
    while positive(hi):
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if positive(mid):
            lo = mid
        else:
            hi = mid
    return lo


def bosonic_ad_capacity_bound(gamma: float, n: int) -> float:
    """1 − 98nγ² − (1 + 49nγ²)·h(49nγ²/(1 + 49nγ²))"""
    gamma = float(gamma)
    if not 0.0 < gamma < 1.0:
        raise OutOfRangeError(f"gamma doit être dans (0, 1), reçu {gamma}")
    if n < 0:
        raise OutOfRangeError(f"n doit être positif ou nul, reçu {n}")
    x = n * (49.0 * gamma ** 2)
    return (1.0 - 2.0 * x) - (1.0 + x) * binary_entropy(x / (1.0 + x))


@dataclass
class SweepConfig:
    """
    Grille d'un balayage.

    Attributs:
        model: 'ad', 'bosonic-ad' ou 'pure-loss'
        params: Valeurs de γ (ou η pour 'pure-loss')
        n_values: Valeurs de n
        cutoff: Troncature de Fock ('pure-loss')
        k: Nombre d'excitations corrigées ('pure-loss')
    """
    model: str
    params: list
    n_values: list
    cutoff: int = 4
    k: int = 1
    config: Config = field(default_factory=Config)

    def __post_init__(self):
        if self.model not in SWEEP_MODELS:
            raise InvalidGridError(f"Modèle inconnu: {self.model} (attendu {', '.join(SWEEP_MODELS)})")
        if not self.params or not self.n_values:
            raise InvalidGridError("Grille vide")
        if not all(math.isfinite(float(p)) for p in self.params):
            raise InvalidGridError("Paramètres non finis dans la grille")
        if any(int(n) != n or n < 0 for n in self.n_values):
            raise InvalidGridError("Les valeurs de n doivent être des entiers positifs ou nuls")


def _model_epsilon(model: str, param: float, cutoff: int, k: int, tol: Tolerances):
    """(ε, μ) d'un modèle pour une valeur de paramètre"""
    if model == 'ad':
        channel = amplitude_damping(param)
        spec = NodeSpec(noise=channel, code=trivial_code(2))
        node = build_node(spec, tol)
        epsilon, _ = resolve_epsilon(spec, node, tol)
        return epsilon, node_mu(node, tol)
    if model == 'bosonic-ad':
        if not 0.0 < param < 1.0:
            raise OutOfRangeError(f"gamma doit être dans (0, 1), reçu {param}")
        epsilon = 49.0 * param ** 2
        if epsilon > 1.0:
            logger.warning(f"epsilon = 49γ² = {epsilon:.6g} ramené à 1 (γ={param})")
        return min(1.0, epsilon), None
    return pure_loss_exact_tail(param, k, cutoff), None


def sweep(sweep_config: SweepConfig) -> pd.DataFrame:
    """
    Produit cartésien (paramètre × n) des colonnes de bornes.

    Ordre des lignes : lexicographique (paramètre puis n), quel que soit le
    nombre de threads.
    """
    cfg = sweep_config
    tol = cfg.config.tolerances
    params = [float(p) for p in cfg.params]
    n_values = [int(n) for n in cfg.n_values]
    logger.info(f"Balayage {cfg.model}: {len(params)} paramètre(s) × {len(n_values)} valeur(s) de n")

    with ThreadPoolExecutor(max_workers=cfg.config.max_workers) as executor:
        per_param = list(executor.map(
            lambda p: _model_epsilon(cfg.model, p, cfg.cutoff, cfg.k, tol), params))

    records = []
    for (param, (epsilon, mu)), n in product(zip(params, per_param), n_values):
        row = sequence_row(epsilon, mu, n)
        records.append({
            'model': cfg.model,
            'param': param,
            'n': n,
            'epsilon': epsilon,
            'capacity_lower': row.capacity_lower,
            'distance_upper': row.distance_upper,
            'mu': mu,
            'R_n': row.R_n,
            'feasible': row.entanglement_feasible,
        })
    return pd.DataFrame(records, columns=SWEEP_COLUMNS)
