"""Learning with errors in the non-commuting group M_{2^t}.

Research implementation: the randomness is reproducible, not secure.
"""

from .group import GroupElement, GroupParams
from .scheme import Ciphertext, M2tParams, PublicKey, SecretKey, decrypt, encrypt, keygen
from .sampling import GaussianSpec, RandomSource

__all__ = [
    "Ciphertext",
    "GaussianSpec",
    "GroupElement",
    "GroupParams",
    "M2tParams",
    "PublicKey",
    "RandomSource",
    "SecretKey",
    "decrypt",
    "encrypt",
    "keygen",
]
__version__ = "0.1.0"
