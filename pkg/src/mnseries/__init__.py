"""Finite-support Mal'cev-Neumann series over Q(s) on a free group.

Submodules: free_group (words and the Magnus order), field (Q(s) and its
shift automorphisms), series (twisted arithmetic, d, truncated inverses),
subgroups (the S3 quotient, H and N), identities (word recursions and
identity checks), suites and cli.
"""

from .errors import MNError
from .field import FieldElement, TwistMap
from .free_group import OrderRelation, Word, compare, magnus_expand, min_of_support
from .parsing import parse_series, parse_word
from .series import ApproxSeries, Series, d, mul, truncated_inverse

__version__ = "0.1.0"
