"""
Coverage comparison between two collections of the same monolith,
e.g. static analysis against a dynamic capture.
"""

from models import CoverageReport, Monolith
from monolith.restriction import entity_matches


def _pct(part: float, whole: float) -> float:
    return round(100.0 * part / whole, 2) if whole else 0.0


def compare_coverage(reference: Monolith, other: Monolith) -> CoverageReport:
    """
    Share of the reference's functionalities and accessed entities that
    `other` also observed, plus the average per-functionality share of
    accessed entities for the functionalities both collections contain.
    """
    matches = entity_matches(reference, other)
    common = sorted(set(reference.functionalities) & set(other.functionalities))
    reference_entities = reference.accessed_entities()

    shares = []
    for name in common:
        seen_reference = {
            e for trace in reference.functionalities[name].traces for e in trace.entities
        }
        seen_other = {
            e for trace in other.functionalities[name].traces for e in trace.entities
        }
        if not seen_reference:
            continue
        found = sum(1 for e in seen_reference if matches.get(e) in seen_other)
        shares.append(found / len(seen_reference))

    return CoverageReport(
        functionalities_covered_pct=_pct(len(common), len(reference.functionalities)),
        entities_covered_pct=_pct(
            sum(1 for e in reference_entities if e in matches), len(reference_entities)
        ),
        avg_entities_per_functionality_pct=round(100.0 * sum(shares) / len(shares), 2) if shares else 0.0,
        common_functionalities=len(common),
        reference_functionalities=len(reference.functionalities),
        reference_entities=len(reference_entities),
    )
