"""
Module d'exportation des résultats (JSON versionné, CSV, rapport texte)

Les flottants sont écrits avec 12 chiffres significatifs pour que deux
exécutions identiques produisent des sorties identiques octet pour octet.
"""

import json
import logging
import math
import sys
from pathlib import Path

import numpy as np
import pandas as pd

from src.config import Config

logger = logging.getLogger(__name__)


def round_significant(value: float, digits: int = 12) -> float:
    """Arrondi à `digits` chiffres significatifs"""
    if value == 0.0 or not math.isfinite(value):
        return value
    return float(f"{value:.{digits}g}")


def normalize(obj, digits: int = 12):
    """Convertit récursivement numpy/pandas en types JSON, flottants arrondis"""
    if isinstance(obj, dict):
        return {str(k): normalize(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [normalize(v, digits) for v in obj]
    if isinstance(obj, np.ndarray):
        return normalize(obj.tolist(), digits)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if not math.isfinite(value):
            return None
        return round_significant(value, digits)
    if isinstance(obj, (complex, np.complexfloating)):
        return [round_significant(obj.real, digits), round_significant(obj.imag, digits)]
    if obj is None or isinstance(obj, str):
        return obj
    return str(obj)


def to_json(payload: dict, config: Config = None) -> str:
    """Document JSON avec le champ "schema" en tête"""
    config = config or Config()
    document = {'schema': config.schema_version}
    document.update(normalize(payload, config.float_digits))
    return json.dumps(document, indent=2, ensure_ascii=False)


def frame_to_csv(df: pd.DataFrame, config: Config = None) -> str:
    """CSV sans index, valeurs absentes vides"""
    config = config or Config()
    return df.to_csv(index=False, float_format=f"%.{config.float_digits}g",
                     na_rep='', lineterminator='\n')


def write_output(text: str, output: str = None) -> None:
    """Écrit sur la sortie standard ou dans un fichier"""
    if not text.endswith('\n'):
        text += '\n'
    if output is None or output == '-':
        sys.stdout.write(text)
        return
    path = Path(output)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding='utf-8')
    logger.info(f"Fichier créé: {path}")


def export_results(df: pd.DataFrame, name: str, output_dir: str = 'data',
                   config: Config = None) -> dict:
    """
    Exporte un tableau de résultats en CSV et JSON.

    Returns:
        Dictionnaire avec les chemins des fichiers créés
    """
    config = config or Config()
    output_path = Path(output_dir)
    output_path.mkdir(parents=True, exist_ok=True)

    csv_file = output_path / f"{name}.csv"
    csv_file.write_text(frame_to_csv(df, config), encoding='utf-8')
    logger.info(f"Fichier créé: {csv_file} ({len(df)} lignes)")

    json_file = output_path / f"{name}.json"
    records = df.astype(object).where(df.notna(), None).to_dict(orient='records')
    json_file.write_text(to_json({'rows': records}, config), encoding='utf-8')
    logger.info(f"Fichier créé: {json_file}")

    return {'csv': str(csv_file), 'json': str(json_file)}


def generate_summary_report(checks: list, output_file: str = 'data/summary_report.txt') -> str:
    """
    Rapport texte des vérifications de bout en bout.

    Args:
        checks: Liste de CheckResult
        output_file: Fichier de rapport (None pour ne rien écrire)

    Returns:
        Le texte du rapport
    """
    n_pass = sum(1 for c in checks if c.passed)
    lines = [
        "=" * 70,
        "RAPPORT DE VÉRIFICATION - BORNES SUR LES COMPOSITIONS SÉQUENTIELLES",
        "=" * 70,
        "",
    ]
    for check in checks:
        status = 'PASS' if check.passed else 'FAIL'
        value = '' if check.value is None else f" = {check.value:.12g}"
        lines.append(f"[{status}] {check.name}{value}  {check.detail}".rstrip())
    lines += ["", "-" * 70, f"{n_pass}/{len(checks)} vérifications réussies"]
    text = "\n".join(lines) + "\n"

    if output_file:
        output_path = Path(output_file)
        output_path.parent.mkdir(parents=True, exist_ok=True)
        output_path.write_text(text, encoding='utf-8')
        logger.info(f"Rapport sauvegardé: {output_path}")
    return text
