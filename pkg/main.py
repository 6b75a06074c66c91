"""
Script principal de SeqCap : bornes de capacité et de distance pour les
compositions séquentielles de canaux quantiques corrigés
"""

import logging
import sys

from src.cli import main

# Configuration du logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)


if __name__ == '__main__':
    sys.exit(main())
