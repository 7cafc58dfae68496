"""Ranges, running extrema and first range times of sampled processes, with
numerical checks of their long-run slopes."""
from .asymptotics import (CheckReport, SlopeEstimate, inverse_slope_check,
                          pnorm_negligibility_check, range_slope_check,
                          renewal_equivalence_check, slope, sup_slope_check)
from .extrema import (DiscreteRangeTrace, ExtremaTriple, discrete_range, running_extrema,
                      sup_process)
from .inverse import (Convention, FirstRangeTime, InverseQuery, MonotonePath, check_duality,
                      first_range_time, first_range_times, generalized_inverse,
                      inverse_involution_check, inverse_transform_sample, inverse_values)
from .experiment import ExperimentManifest, dumps, run_manifest
from .paths import (DomainError, IntegerSequence, Interpolation, SampledPath, TimeGrid,
                    connect_dots, evaluate, negate)
from .simulate import (DistributionSpec, ProcessSpec, RenewalRealization, function_bank,
                       normalizer, simulate, simulate_renewal, simulate_walk)
from .rng import stream

__version__ = "0.1.0"
