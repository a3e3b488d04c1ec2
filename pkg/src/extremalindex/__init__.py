"""Block-declustering estimators of the multivariate extremal index function."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    AllBlocksExceed,
    CellEmpty,
    ExtremalIndexError,
    LevelTooDeep,
    NoExceedances,
)
from .estimators import (  # noqa: E402
    ConstantOneDiagnostic,
    EstimatorReport,
    PowerNorm,
    block_statistics,
    theta1,
    theta2,
    theta3,
)
from .experiments import (  # noqa: E402
    EstimatorSpec,
    ExperimentConfig,
    ResultRow,
    angle_grid,
    run_monte_carlo,
    variance_ratio,
)
from .series import BlockScheme, MultivariateSeries  # noqa: E402

__all__ = [
    "AllBlocksExceed", "CellEmpty", "ExtremalIndexError", "LevelTooDeep", "NoExceedances",
    "ConstantOneDiagnostic", "EstimatorReport", "PowerNorm", "block_statistics", "theta1", "theta2", "theta3",
    "EstimatorSpec", "ExperimentConfig", "ResultRow", "angle_grid", "run_monte_carlo", "variance_ratio",
    "BlockScheme", "MultivariateSeries", "__version__",
]
