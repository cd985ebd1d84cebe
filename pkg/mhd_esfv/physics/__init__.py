"""
Pointwise physics: state conversions, averages, interface fluxes and dissipation.
"""

from mhd_esfv.physics.dissipation import eigen_system, es_llf_flux, es_roe_flux, wave_speeds
from mhd_esfv.physics.flux import (
    ec_flux,
    ekec_flux,
    janhunen_interface_source,
    janhunen_interface_source_beta,
)
from mhd_esfv.physics.means import avg, jump, log_mean
from mhd_esfv.physics.state import (
    cons_to_prim,
    entropy_jacobian,
    entropy_quantities,
    entropy_vars,
    physical_flux,
    prim_to_cons,
)

__all__ = [
    "avg",
    "cons_to_prim",
    "ec_flux",
    "eigen_system",
    "ekec_flux",
    "entropy_jacobian",
    "entropy_quantities",
    "entropy_vars",
    "es_llf_flux",
    "es_roe_flux",
    "janhunen_interface_source",
    "janhunen_interface_source_beta",
    "jump",
    "log_mean",
    "physical_flux",
    "prim_to_cons",
    "wave_speeds",
]
