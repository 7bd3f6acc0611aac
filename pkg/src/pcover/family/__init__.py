from .bitsets import GroundSet, SubsetBits, submasks, upset_contains
from .family import Cover, CostMode, Member, WeightedFamily, check_probability, cover_cost, covers, log_cover_cost
from .oracle import SmallnessCertificate, greedy_cover, is_p_small, min_cover_cost_exact, shrink_monotone_check

__all__ = [
    "Cover",
    "CostMode",
    "GroundSet",
    "Member",
    "SmallnessCertificate",
    "SubsetBits",
    "WeightedFamily",
    "check_probability",
    "cover_cost",
    "covers",
    "greedy_cover",
    "is_p_small",
    "log_cover_cost",
    "min_cover_cost_exact",
    "shrink_monotone_check",
    "submasks",
    "upset_contains",
]
