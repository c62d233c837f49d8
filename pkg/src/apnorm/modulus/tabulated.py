"""
Moduli given by a table of nodes.
"""

from typing import Any, Dict, Sequence

import numpy as np

from ..errors import DomainError
from .base import Modulus


class TabulatedModulus(Modulus):
    """
    Modulus interpolated piecewise linearly in log-log coordinates.

    Outside the node range the end segments are extended with their own
    log-log slopes, so omega still vanishes at 0 provided the first segment
    rises.
    """

    kind = "tabulated"

    def __init__(self, nodes: Sequence[float], values: Sequence[float]):
        """
        Initialize a tabulated modulus.

        Args:
            nodes: Strictly increasing positive lengths (at least two)
            values: Positive, non-decreasing modulus values at the nodes
        """
        x = np.asarray(nodes, dtype=float)
        y = np.asarray(values, dtype=float)
        if x.ndim != 1 or x.shape != y.shape or x.size < 2:
            raise DomainError(
                "tabulated modulus needs matching node/value lists of length >= 2"
            )
        if np.any(x <= 0) or np.any(np.diff(x) <= 0):
            raise DomainError(
                "tabulated nodes must be positive and strictly increasing"
            )
        if np.any(y <= 0) or np.any(np.diff(y) < 0):
            raise DomainError("tabulated values must be positive and non-decreasing")
        self.nodes = x
        self.values = y
        self._log_x = np.log(x)
        self._log_y = np.log(y)
        slopes = np.diff(self._log_y) / np.diff(self._log_x)
        if slopes[0] <= 0:
            raise DomainError("first tabulated segment must rise so that omega(0) = 0")
        self._head_slope = float(slopes[0])
        self._tail_slope = float(slopes[-1])
        super().__init__()

    def _raw(self, delta: np.ndarray) -> np.ndarray:
        log_d = np.log(delta)
        out = np.interp(log_d, self._log_x, self._log_y)
        below = log_d < self._log_x[0]
        above = log_d > self._log_x[-1]
        head = log_d[below] - self._log_x[0]
        tail = log_d[above] - self._log_x[-1]
        out[below] = self._log_y[0] + self._head_slope * head
        out[above] = self._log_y[-1] + self._tail_slope * tail
        return np.exp(out)

    def parameters(self) -> Dict[str, Any]:
        return {"nodes": self.nodes.tolist(), "values": self.values.tolist()}
