"""
Logarithm Units

Entropies are computed in nats and reported in the selected base.
Base 2 (ebits) is the default.
"""

import math
from enum import Enum
from typing import Union

import numpy as np
from scipy.special import entr


class LogBase(Enum):
    """Logarithm base used for every reported entropy"""

    TWO = "2"
    NATURAL = "e"

    @property
    def ln_base(self) -> float:
        return math.log(2.0) if self is LogBase.TWO else 1.0

    def from_nats(self, value):
        return value / self.ln_base

    def log(self, value):
        return np.log(value) / self.ln_base


BaseLike = Union[LogBase, str, None]


def as_base(base: BaseLike) -> LogBase:
    """Accept a LogBase, '2', 'e' or None (default base 2)."""
    if base is None:
        return LogBase.TWO
    if isinstance(base, LogBase):
        return base
    return LogBase(str(base))


def shannon(weights, base: BaseLike = None) -> float:
    """-sum w log w with 0 log 0 := 0; weights need not be normalized."""
    w = np.asarray(weights, dtype=float)
    return float(as_base(base).from_nats(np.sum(entr(np.clip(w, 0.0, None)))))

