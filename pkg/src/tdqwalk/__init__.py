"""Discrete-time quantum walk on the line with time-dependent coins."""

from .coin import (
    BlochVector,
    CoinParams,
    InitialState,
    ab_amplitudes,
    bloch_vector,
    coin_matrix,
    initial_spinor,
    interference_c,
)
from .config import RunConfig, load_config, parse_config
from .engine import Trajectory, Walker, WalkState, evolve, new_state, run_walk, step
from .errors import (
    ConfigError,
    IntegrityError,
    InvalidParameterError,
    ScheduleExhaustedError,
    UnsupportedError,
    UsageError,
    WalkError,
)
from .kernels import BACKEND
from .observables import (
    ObservableReport,
    SiteSeries,
    chirality_probs,
    distribution_distance,
    gauge_twist_check,
    gaussian_reference,
    magnetization,
    moments,
    pmf,
    report,
)
from .schedules import (
    AlphaBetaLockSchedule,
    AlternatingAlphaSchedule,
    ConstantSchedule,
    ExplicitSchedule,
    LinearBetaSchedule,
    RandomPhaseSchedule,
    Schedule,
    generate_params,
)

__version__ = "0.1.0"
