"""Rank-metric public-key encryption from augmented Gabidulin codes, with attack-cost estimates."""
from .scheme import PARAMS, decrypt, encrypt, get_params, keygen

__all__ = ["PARAMS", "decrypt", "encrypt", "get_params", "keygen"]
__version__ = "0.1.0"
