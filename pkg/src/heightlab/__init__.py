"""heightlab: exact and numerical tools for height pairings of algebraic cycles.

Submodules: funcfield (tame symbols, Weil reciprocity), arch_pairing (m = 0
pairing), klm_regulator (real m = 1 pairing on lines in P^2), neron_tate,
arakelov, spreads, cli.
"""
from .errors import *  # noqa: F401,F403

__version__ = "0.1.0"
