"""
Workload Package
Seeded synthetic monoliths.
"""

from .generator import SyntheticMonolithGenerator, generate_monolith

__all__ = ["SyntheticMonolithGenerator", "generate_monolith"]
