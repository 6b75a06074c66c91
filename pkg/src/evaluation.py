"""
Module d'évaluation : vérifications de bout en bout de l'exemple à
amortissement d'amplitude et du code bosonique à deux modes
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from src.capacity import CapacityBoundParams, continuity_capacity_bound
from src.channels import validate_channel
from src.config import Config
from src.exceptions import SeqCapError
from src.network import NodeSpec, analyze_sequence, bosonic_ad_capacity_bound, build_node, entanglement_horizon
from src.noise import amplitude_damping, bit_flip, independent
from src.qec import (
    chernoff_tail_bound,
    cly_code,
    cly_error_curve,
    cly_error_set,
    cly_noise,
    kl_check,
    recovery_residual,
    repetition_code,
)
from src.transfer import canonicalize, preservation_horizon, radius_of_convergence, spectral_radius_mu, transfer_matrix

logger = logging.getLogger(__name__)

DEMO_EPSILON = 0.0005
DEMO_DELTA = 0.011
DEMO_N = 44
CURVE_GAMMAS = (0.001, 0.005, 0.01, 0.05, 0.1)


@dataclass(frozen=True)
class CheckResult:
    """Résultat d'une vérification nommée"""
    name: str
    passed: bool
    value: Optional[float] = None
    detail: str = ''


def _run(name: str, check) -> CheckResult:
    """Exécute une vérification ; toute erreur devient un échec"""
    try:
        passed, value, detail = check()
    except SeqCapError as e:
        logger.error(f"{name}: {e}")
        return CheckResult(name=name, passed=False, detail=f"{type(e).__name__}: {e}")
    except Exception as e:
        logger.exception(f"{name}: erreur inattendue")
        return CheckResult(name=name, passed=False, detail=f"{type(e).__name__}: {e}")
    status = 'PASS' if passed else 'FAIL'
    logger.info(f"[{status}] {name}")
    return CheckResult(name=name, passed=bool(passed), value=value, detail=detail)


def expected_ad_transfer(gamma: float) -> np.ndarray:
    """Matrice de transfert attendue de l'amortissement d'amplitude"""
    root = math.sqrt(1.0 - gamma)
    out = np.diag([1.0, root, root, 1.0 - gamma])
    out[3, 0] = gamma
    return out


def check_capacity_number() -> tuple:
    value = continuity_capacity_bound(CapacityBoundParams(epsilon=DEMO_EPSILON, n=DEMO_N))
    return 0.8023 <= value <= 0.8033, value, f"ε={DEMO_EPSILON}, n={DEMO_N}"


def check_horizon_pair() -> tuple:
    horizon = preservation_horizon(DEMO_EPSILON, DEMO_DELTA)
    r_n = radius_of_convergence(1.0 - DEMO_EPSILON, DEMO_N)
    return horizon == DEMO_N and r_n >= 0.989, r_n, f"horizon={horizon}"


def check_ad_spectrum() -> tuple:
    worst = 0.0
    for gamma in np.round(np.arange(0.1, 1.0, 0.1), 10):
        T = transfer_matrix(amplitude_damping(gamma))
        mu = spectral_radius_mu(canonicalize(T))
        worst = max(worst, abs(mu - math.sqrt(1.0 - gamma)),
                    float(np.max(np.abs(T - expected_ad_transfer(gamma)))))
    return worst <= 1e-12, worst, "écart max sur γ ∈ {0.1, …, 0.9}"


def check_cly_curve(gammas) -> tuple:
    rows = cly_error_curve(gammas)
    worst = max(row.exact_norm / row.bound_49g2 for row in rows)
    return True, worst, f"{len(rows)} valeurs de γ, max(exact/49γ²)"


def check_cly_kl(gammas) -> tuple:
    code = cly_code()
    worst = max(kl_check(code, cly_error_set(g)).max_violation for g in gammas)
    return worst <= 1e-9, worst, "écart de Knill–Laflamme maximal"


def check_cly_residual(gamma: float, config: Config) -> tuple:
    code = cly_code()
    residual = recovery_residual(code, cly_noise(gamma), cly_error_set(gamma), config)
    return residual <= 49.0 * gamma ** 2 + 1e-9, residual, f"γ={gamma}, seed={config.seed}"


def check_repetition_residual(config: Config) -> tuple:
    noise = independent(bit_flip(0.1), 3)
    corrected = [noise.kraus[i] for i in (0, 1, 2, 4)]
    residual = recovery_residual(repetition_code(), noise, corrected, config)
    return True, residual, f"p=0.1, seed={config.seed}"


def check_pure_loss() -> tuple:
    report = chernoff_tail_bound(0.9, 1, 4)
    ok = abs(report.exact_norm - 0.0523) <= 1e-4 and report.chernoff_valid
    return ok and report.exact_norm <= report.chernoff, report.exact_norm, \
        f"Chernoff={report.chernoff:.6g}"


def check_final_capacity() -> tuple:
    value = bosonic_ad_capacity_bound(0.01, 10)
    worst = 0.0
    for gamma in (0.001, 0.005, 0.01, 0.05, 0.1):
        for n in range(20):
            same = continuity_capacity_bound(CapacityBoundParams(epsilon=49.0 * gamma ** 2, n=n))
            worst = max(worst, abs(bosonic_ad_capacity_bound(gamma, n) - same))
    return abs(value - 0.616) <= 2e-3 and worst <= 1e-12, value, f"γ=0.01, n=10 (écart {worst:.1e})"


def check_cly_node(gamma: float, config: Config) -> tuple:
    epsilon = 49.0 * gamma ** 2
    spec = NodeSpec(noise=cly_noise(gamma), code=cly_code(), corrected=cly_error_set(gamma),
                    epsilon=min(1.0, epsilon))
    node = build_node(spec, config.tolerances)
    report = analyze_sequence(spec, min(DEMO_N, config.n_max), replace(config, diamond_check_max=8))
    valid = validate_channel(node).passed and node.dim_in == 2
    last = report.rows[-1]
    return valid, last.capacity_lower, f"nœud qubit valide, ε=49γ²={epsilon:.6g}, n={last.n}"


def check_entanglement_horizon() -> tuple:
    horizon = entanglement_horizon(DEMO_EPSILON)
    inside = continuity_capacity_bound(CapacityBoundParams(epsilon=DEMO_EPSILON, n=horizon))
    outside = continuity_capacity_bound(CapacityBoundParams(epsilon=DEMO_EPSILON, n=horizon + 1))
    return inside > 0.0 >= outside, float(horizon), f"ε={DEMO_EPSILON}"


def run_demo_checks(config: Config = None, gammas=None) -> list:
    """
    Exécute toutes les vérifications de l'exemple de bout en bout.

    Args:
        config: Configuration (graine des états échantillonnés)
        gammas: Valeurs de γ pour la courbe du code à deux modes

    Returns:
        Liste de CheckResult, dans un ordre fixe
    """
    config = config or Config()
    gammas = tuple(gammas) if gammas else CURVE_GAMMAS
    residual_gamma = 0.05 if 0.05 in gammas else gammas[0]
    logger.info(f"Vérifications de bout en bout (γ = {gammas}, seed = {config.seed})")

    checks = [
        _run("capacite_n44", check_capacity_number),
        _run("horizon_preservation", check_horizon_pair),
        _run("spectre_amortissement", check_ad_spectrum),
        _run("courbe_queue_49g2", lambda: check_cly_curve(gammas)),
        _run("knill_laflamme_code_bosonique", lambda: check_cly_kl(gammas)),
        _run("residu_code_bosonique", lambda: check_cly_residual(residual_gamma, config)),
        _run("residu_code_repetition", lambda: check_repetition_residual(config)),
        _run("queue_perte_pure", check_pure_loss),
        _run("capacite_finale_bosonique", check_final_capacity),
        _run("noeud_code_bosonique", lambda: check_cly_node(residual_gamma, config)),
        _run("horizon_intrication", check_entanglement_horizon),
    ]
    n_fail = sum(1 for c in checks if not c.passed)
    if n_fail:
        logger.warning(f"{n_fail} vérification(s) en échec")
    return checks
