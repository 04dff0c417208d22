"""
Weight grid enumeration.
"""

from itertools import product
from typing import List

from models import Weights
from exceptions import AnalysisError


def enumerate_weightings(step: int = 10) -> List[Weights]:
    """
    All (access, write, read, sequence) tuples of non-negative multiples of
    step summing to 100, in lexicographic order.

    Raises:
        AnalysisError: If step is not a positive divisor of 100
    """
    if step <= 0 or 100 % step != 0:
        raise AnalysisError(
            f"Weight step must be a positive divisor of 100, got {step}",
            component="Weights",
            context={"step": step}
        )

    grid = range(0, 101, step)
    return [
        Weights(access=a, write=w, read=r, sequence=100 - a - w - r)
        for a, w, r in product(grid, grid, grid)
        if a + w + r <= 100
    ]
