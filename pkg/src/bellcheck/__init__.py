"""Finite hidden-variable models of the two-station spin experiment.

Locality conditions, Bell-type inequalities, the local polytope and the
spin-singlet reference, with exact rational arithmetic where possible.
"""

__version__ = "0.1.0"

from .numeric import DimensionError, PreconditionError
from .probability import (
    Event,
    Measure,
    MeasurableFunction,
    Partition,
    SampleSpace,
    conditional_probability,
    expectation,
    indicator,
    probability,
)
from .model import (
    DOWN,
    UP,
    Axis,
    HiddenVariableModel,
    JointDistribution,
    MissingKernelError,
    SettingPair,
    Spin,
    anticorrelation_check,
    enlarged_space,
    joint_distribution,
    marginal,
)
from .locality import (
    InconsistencyError,
    LocalityVerdict,
    check_active_locality,
    check_deterministic_passive_locality,
    check_no_signalling,
    check_passive_locality,
    extract_deterministic_event,
)
from .inequalities import (
    InequalityReport,
    bell_original,
    chsh,
    conditional_correlation,
    correlation,
    three_axis_sum,
)
from .quantum import SINGLET, chsh_optimal_axes, density_matrix_oracle, singlet_joint
from .polytope import (
    SearchFailure,
    SizeError,
    enumerate_strategies,
    max_bell_original_local,
    max_chsh_local,
    max_chsh_quantum,
    max_three_axis_local,
)
from .montecarlo import RunSchedule, empirical_chsh, empirical_correlation, sample_runs
from .modelfile import ModelFileError, dumps, load, loads
