"""Certified numerical radii and a verification harness for numerical radius inequalities."""

from .catalog import EvalResult, evaluate, evaluate_chain, get_entry, list_entries
from .radius import CertifiedValue, numerical_radius, sup_real_part_norm, sup_theta_product_norm
from .transforms import aluthge, aluthge_t, polar_decompose

__all__ = [
    "CertifiedValue",
    "EvalResult",
    "aluthge",
    "aluthge_t",
    "evaluate",
    "evaluate_chain",
    "get_entry",
    "list_entries",
    "numerical_radius",
    "polar_decompose",
    "sup_real_part_norm",
    "sup_theta_product_norm",
]

__version__ = "0.1.0"
