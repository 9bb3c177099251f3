"""Secure degrees of freedom of the Gaussian diamond-wiretap channel.

Closed-form secure d.o.f. and time-sharing plans (:mod:`.dof`), relay
encoders for the constituent jamming and beamforming schemes
(:mod:`.signal`), the fading channel models (:mod:`.channel`), finite-power
rate, leakage and error evaluation (:mod:`.analysis`) and brute-force
entropy checks on the integer floor model (:mod:`.oracle`).
"""
from .channel import FadingState, ChannelUse, sample_fading, mac_output, det_output
from .signal import (Scheme, PamConstellation, SchemeParams, RelayInputs, pam_points,
                     scheme_params, encode, transmit_matrix, effective_gains,
                     min_distance_decode)
from .dof import (ds_full, ds_nocsi, ds_multi_bounds, ds_multi_nocsi, plan_timeshare,
                  plan_timeshare_multi, region_sweep)
from .analysis import (SimRecord, mi_mixture, estimate_rate, error_prob_mc,
                       fit_dof_slope)
from .oracle import (Pmf, exact_entropy, floor_preimage_bound, det_entropy_check,
                     discrete_mutual_information)

__version__ = "0.1.0"
