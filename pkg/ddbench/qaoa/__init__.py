# Copyright (c) ddbench contributors. All rights reserved.
#
# This source code is licensed under the BSD license found in the
# LICENSE file in the root directory of this source tree.

from .circuits import (  # noqa: F401
    brick_layers,
    build_qaoa,
    ChainTooShortError,
    grid_search_params,
    qaoa_expectation,
    qaoa_statevector,
    QAOAParams,
    swap_network_map,
    unpermute_counts,
    zz_swap_gates,
)
from .portfolio import (  # noqa: F401
    approximation_ratio,
    bitstrings,
    cost_coefficients,
    cost_diagonal,
    cost_spec,
    cost_value,
    CostSpec,
    DegenerateCostError,
    dump_instance,
    EmptyHistogramError,
    exact_extrema,
    expectation,
    instance_from_dict,
    instance_to_dict,
    load_instance,
    PortfolioInstance,
    random_instance,
    success_probability,
)
