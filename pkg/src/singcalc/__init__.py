"""Exact combinatorics of cyclic quotient surface singularities and their smoothings."""

from .cfrac import ProjectiveRational, dual_chain, eval_chain, expand_fraction
from .identify import milnor_fiber_descriptor, p_resolution_from_descriptor, verify_correspondence
from .kset import FillingDescriptor, k_set
from .mmp import FamilyState, run_controlled_mmp
from .resolutions import DecoratedResolution, compactify, crepant_m_resolution, maximal_resolution
from .tsing import classify_chain

__version__ = "0.1.0"

__all__ = [
    "DecoratedResolution",
    "FamilyState",
    "FillingDescriptor",
    "ProjectiveRational",
    "classify_chain",
    "compactify",
    "crepant_m_resolution",
    "dual_chain",
    "eval_chain",
    "expand_fraction",
    "k_set",
    "maximal_resolution",
    "milnor_fiber_descriptor",
    "p_resolution_from_descriptor",
    "run_controlled_mmp",
    "verify_correspondence",
]
