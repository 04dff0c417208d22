"""
Synthetic Monolith Generator
Creates seeded functionality traces for property tests and desk-scale experiments.
"""
import logging
from typing import Dict, List

import numpy as np

from models import Access, AccessMode, Decomposition, Functionality, GenParams, Monolith, Trace
from exceptions import GeneratorError

logger = logging.getLogger("MikadoWorkload")


class SyntheticMonolithGenerator:
    """
    Generate monoliths with planted entity families.

    Entities are split into n_families contiguous groups and functionality i
    belongs to family i mod n_families. Each access stays inside the
    functionality's family with probability clusteredness_bias and picks a
    uniformly random entity otherwise. The stream comes from NumPy's PCG64,
    so a seed yields the same monolith on every platform.
    """

    def __init__(self, params: GenParams):
        """
        Initialize generator.

        Raises:
            GeneratorError: If the parameters cannot produce a monolith
        """
        if params.n_entities == 0:
            raise GeneratorError(
                "Cannot generate a monolith without entities",
                component="Generator",
                context={"n_entities": 0}
            )
        if params.n_families > params.n_entities:
            raise GeneratorError(
                f"{params.n_families} families need at least as many entities, got {params.n_entities}",
                component="Generator",
                context={"n_families": params.n_families, "n_entities": params.n_entities}
            )
        self.params = params
        self.rng = np.random.Generator(np.random.PCG64(params.seed))
        self.entities = list(range(1, params.n_entities + 1))
        self.families: List[List[int]] = [
            [int(e) for e in group] for group in np.array_split(self.entities, params.n_families)
        ]

    @staticmethod
    def functionality_name(index: int) -> str:
        return f"Functionality{index:03d}"

    def family_of(self, index: int) -> int:
        return index % self.params.n_families

    def _mode(self) -> AccessMode:
        return AccessMode.WRITE if self.rng.random() < self.params.write_ratio else AccessMode.READ

    def _entity(self, family: List[int]) -> int:
        pool = family if self.rng.random() < self.params.clusteredness_bias else self.entities
        return int(pool[self.rng.integers(len(pool))])

    def _trace(self, family: List[int]) -> List[Access]:
        length = int(self.rng.integers(1, self.params.max_trace_length + 1))
        return [Access(entity=self._entity(family), mode=self._mode()) for _ in range(length)]

    def generate(self) -> Monolith:
        """
        Generate the monolith.

        Returns:
            Monolith in which every entity is accessed at least once
        """
        p = self.params
        traces: Dict[int, List[List[Access]]] = {}
        for i in range(p.n_functionalities):
            family = self.families[self.family_of(i)]
            traces[i] = [self._trace(family) for _ in range(p.traces_per_functionality)]

        # Unreached entities join the first trace of a functionality of their
        # family, or of functionality 0 when the family has none.
        accessed = {a.entity for ts in traces.values() for t in ts for a in t}
        for entity in self.entities:
            if entity in accessed:
                continue
            family_index = next(k for k, family in enumerate(self.families) if entity in family)
            owner = family_index if family_index < p.n_functionalities else 0
            traces[owner][0].append(Access(entity=entity, mode=self._mode()))

        functionalities = {}
        for i, raw in traces.items():
            name = self.functionality_name(i)
            functionalities[name] = Functionality(
                name=name,
                traces=tuple(Trace(id=t, accesses=tuple(accesses)) for t, accesses in enumerate(raw)),
            )

        logger.debug(
            f"Generated {p.n_functionalities} functionalities over {p.n_entities} entities "
            f"(seed={p.seed}, families={p.n_families}, bias={p.clusteredness_bias})"
        )
        return Monolith(
            functionalities=functionalities,
            entities={e: f"Entity{e}" for e in self.entities},
        )

    def planted_decomposition(self) -> Decomposition:
        """The entity families as a decomposition."""
        return Decomposition.from_groups(self.families)


def generate_monolith(params: GenParams) -> Monolith:
    """Generate a monolith from parameters; see SyntheticMonolithGenerator."""
    return SyntheticMonolithGenerator(params).generate()
