"""Exact computations of Koszul/De Rham homology, local cohomology, Tor
and Ext for graded modules over the Weyl algebra A_n(Q), together with
mechanical verification of the degree-concentration and E(n)-power
structure theorems on a catalog of monomial-ideal local cohomology
modules.

All arithmetic is exact (rationals); no floating point anywhere.
"""

from .cech import (
    CechComplex,
    MonomialIdeal,
    cd_profile,
    cech_complex,
    local_cohomology,
    lyubeznik_pipeline,
    supported_at_m,
)
from .euler import (
    EulerianVerdict,
    eulerian_check,
    ge_offset_detect,
    localization_identity_check,
)
from .homalg import (
    CyclicPresentation,
    dual_of_R_check,
    dual_presentation,
    evidence_suite,
    ext_A1,
    hm_of_tor_report,
    sharp,
    tor_A1,
    tor_R,
)
from .koszul import (
    ReducedModule,
    concentration_check,
    de_rham_cohomology,
    de_rham_homology,
    finite_generation_verdict,
    koszul_homology,
    reduce_d,
    reduce_x,
)
from .multigraded import (
    INFINITE,
    GradedDimVector,
    StraightModule,
    StraightMorphism,
    direct_sum,
    graded_dimensions,
    is_E_power,
    kernel_cokernel,
    localize,
    make_standard,
    module_E,
    module_R,
    module_localization,
    shift,
)
from .report import VerificationReport, emit_report
from .suites import Options, run_verify
from .weyl import (
    WeylElement,
    euler_change_check,
    euler_operator,
    multiply,
    normal_form_mod_dA,
    parse_weyl,
    tau,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
