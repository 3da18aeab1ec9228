# Copyright (c) ddbench contributors. All rights reserved.
#
# This source code is licensed under the BSD license found in the
# LICENSE file in the root directory of this source tree.

from .config import (  # noqa: F401
    config_from_dict,
    config_hash,
    config_to_dict,
    ConfigError,
    ExperimentConfig,
    load_config,
    with_output_dir,
)
from .report import (  # noqa: F401
    build_tables,
    EmptyResultError,
    load_runs,
    pair_runs,
    report,
    ReportTables,
)
from .sweep import (  # noqa: F401
    derive_seed,
    execute_sweep,
    grid_cells,
    GridCell,
    run_cell,
    run_sweep,
    SweepOutcome,
)
