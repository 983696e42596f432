"""Isotopy-classification arithmetic for embeddings of 4-manifolds in S^7."""

from .classify import (
    COND3,
    INDETERMINATE,
    ClassCore,
    ClassificationReport,
    ThetaImage,
    ThetaStatus,
    build_core,
    classify,
    core_from_divisibility,
    eta_shift,
    knot_action_equiv,
    orbit_size,
    theta_difference,
    theta_image,
)
from .manifold import H2Class, ManifoldData, h2diff_contains, h2diff_enumerate, validate
from .pairing import PairingContext, cap_d, check_cap_well_defined, unimzd_brute, unimzd_index
from .s1s3 import PsiOracle, TauLabel, orbit_table, p_equal, p_size, tau_equiv
from .zmodule import (
    INFINITE,
    FgAbelianGroup,
    GroupElement,
    IntMatrix,
    KernelLattice,
    cokernel_mod,
    divisibility_mod_torsion,
    element_order,
    gcd_hat,
    is_direct_summand,
    kernel_mod,
    smith_normal_form,
)

__version__ = "0.1.0"
