"""
Module de chargement des canaux et des codes (fichiers JSON)

Schéma canal : {"dim_in": int, "dim_out": int, "kraus": [[[[re, im], ...], ...], ...]}
Schéma code  : {"physical_dim": int, "words": [[[re, im], ...], ...]}
"""

import json
import logging
from pathlib import Path

import numpy as np

from src.channels import QuantumChannel, require_valid
from src.exceptions import ParseError, ShapeMismatchError
from src.qec import Code

logger = logging.getLogger(__name__)


def _read_json(file_path) -> dict:
    """
    Lit un fichier JSON.

    Raises:
        ParseError: Si le fichier est absent ou mal formé (ligne et colonne indiquées)
    """
    file_path = Path(file_path)
    if not file_path.exists():
        raise ParseError(f"Le fichier {file_path} n'existe pas.")
    try:
        return json.loads(file_path.read_text(encoding='utf-8'))
    except json.JSONDecodeError as e:
        raise ParseError(
            f"JSON invalide dans {file_path}: {e.msg} (ligne {e.lineno}, colonne {e.colno})"
        ) from e


def validate_required_keys(payload: dict, required_keys: list) -> bool:
    """
    Vérifie que toutes les clés requises sont présentes.

    Raises:
        ParseError: Si des clés sont manquantes
    """
    if not isinstance(payload, dict):
        raise ParseError(f"Objet JSON attendu, reçu {type(payload).__name__}")
    missing = [key for key in required_keys if key not in payload]
    if missing:
        raise ParseError(f"Clés manquantes: {missing}. Clés disponibles: {list(payload)}")
    return True


def _complex_array(raw, what: str) -> np.ndarray:
    """Convertit des paires [re, im] imbriquées en tableau complexe"""
    try:
        arr = np.asarray(raw, dtype=float)
    except (TypeError, ValueError) as e:
        raise ParseError(f"{what}: entrées numériques [re, im] attendues ({e})") from e
    if arr.ndim < 1 or arr.shape[-1] != 2:
        raise ParseError(f"{what}: chaque entrée doit être une paire [re, im]")
    return arr[..., 0] + 1j * arr[..., 1]


def _encode_complex(arr: np.ndarray) -> list:
    arr = np.asarray(arr, dtype=complex)
    return np.stack([arr.real, arr.imag], axis=-1).tolist()


def parse_channel(payload: dict) -> QuantumChannel:
    """Construit un canal à partir d'un objet JSON déjà décodé"""
    validate_required_keys(payload, ['dim_in', 'dim_out', 'kraus'])
    if not isinstance(payload['kraus'], list) or not payload['kraus']:
        raise ParseError("'kraus' doit être une liste non vide")
    kraus = [
        _complex_array(op, f"Opérateur de Kraus {idx}")
        for idx, op in enumerate(payload['kraus'])
    ]
    try:
        return QuantumChannel(int(payload['dim_in']), int(payload['dim_out']), tuple(kraus))
    except (TypeError, ValueError) as e:
        raise ParseError(f"Canal mal formé: {e}") from e


def load_channel(file_path, validate: bool = True) -> QuantumChannel:
    """
    Charge un canal depuis un fichier JSON.

    Args:
        file_path: Chemin du fichier
        validate: Exige la préservation de la trace

    Raises:
        ParseError: Fichier illisible ou non conforme au schéma
        ChannelValidationError: Canal non trace-préservant (si validate)
    """
    logger.info(f"Chargement du canal depuis {file_path}")
    channel = parse_channel(_read_json(file_path))
    logger.info(f"Canal chargé: {channel.dim_in} → {channel.dim_out}, {channel.n_kraus} Kraus")
    return require_valid(channel) if validate else channel


def channel_to_dict(channel: QuantumChannel) -> dict:
    return {
        'dim_in': channel.dim_in,
        'dim_out': channel.dim_out,
        'kraus': [_encode_complex(op) for op in channel.kraus],
    }


def save_channel(channel: QuantumChannel, file_path) -> Path:
    file_path = Path(file_path)
    file_path.parent.mkdir(parents=True, exist_ok=True)
    file_path.write_text(json.dumps(channel_to_dict(channel), indent=2), encoding='utf-8')
    logger.info(f"Canal écrit: {file_path}")
    return file_path


def parse_code(payload: dict) -> Code:
    """Construit un code à partir d'un objet JSON déjà décodé"""
    validate_required_keys(payload, ['physical_dim', 'words'])
    if not isinstance(payload['words'], list) or not payload['words']:
        raise ParseError("'words' doit être une liste non vide")
    words = tuple(
        _complex_array(w, f"Mot logique {idx}") for idx, w in enumerate(payload['words'])
    )
    try:
        physical_dim = int(payload['physical_dim'])
    except (TypeError, ValueError) as e:
        raise ParseError(f"physical_dim invalide: {e}") from e
    try:
        return Code(physical_dim=physical_dim, words=words, name=str(payload.get('name', 'custom')))
    except ShapeMismatchError as e:
        raise ParseError(f"Code mal formé: {e}") from e


def load_code(file_path) -> Code:
    """
    Charge un code depuis un fichier JSON.

    Raises:
        ParseError: Fichier illisible ou non conforme au schéma
        NonOrthonormalWordsError: Mots logiques non orthonormés
    """
    logger.info(f"Chargement du code depuis {file_path}")
    return parse_code(_read_json(file_path))
