"""Exact arithmetic for binary n-ic forms, their rings R_f, and 2 x n x n integer tensors."""

from .balance import (
    FractionalIdeal,
    Verdict,
    balancing_partner,
    check_balanced,
    ideal_product,
    ideal_quotient,
    is_characteristic,
    realize_fractional_ideal,
    self_balance_check,
)
from .formring import BinaryForm, GL2Elem, Lattice, ThetaVec, form_stats, make_If_Jf, make_ring
from .groups import GPair, enumerate_orbits, g_act_tensor, gl2_act_form, gl2_act_tensor
from .tensorlink import BalancedPair, RfModule, Tensor2nn, phi, psi, symmetric_ops

__version__ = "0.1.0"

__all__ = [
    "BalancedPair", "BinaryForm", "FractionalIdeal", "GL2Elem", "GPair", "Lattice",
    "RfModule", "Tensor2nn", "ThetaVec", "Verdict", "balancing_partner", "check_balanced",
    "enumerate_orbits", "form_stats", "g_act_tensor", "gl2_act_form", "gl2_act_tensor",
    "ideal_product", "ideal_quotient", "is_characteristic", "make_If_Jf", "make_ring",
    "phi", "psi", "realize_fractional_ideal", "self_balance_check", "symmetric_ops",
]
