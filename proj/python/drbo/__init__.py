# Copyright 2026 The drbo Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Distributionally robust Bayesian optimization."""

from ._core import (
    ConfigError,
    DomainError,
    GpPosterior,
    KernelSpec,
    NumericalError,
    acquisition_score,
    benchmark_domain,
    benchmark_names,
    default_kernel_grid,
    dual_objective,
    epsilon_at,
    evaluate,
    fit_gp,
    fit_hyperparams,
    gamma_inverse,
    gamma_map,
    phi,
    phi_conjugate,
    robust_value,
    run,
    verify,
    worst_case_oracle,
)

__all__ = [name for name in dir() if not name.startswith("_")]
