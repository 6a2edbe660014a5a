// Copyright 2026 The qcavity Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

/// Every numerical threshold used by the library lives here, so that ports
/// and regression runs agree on the same contract.
namespace qcavity::tol {

/// max|M - M^dagger| accepted for inputs that must be Hermitian.
inline constexpr double hermitian_input = 1e-10;
/// Eigenpair residual and orthonormality bound of eig_herm.
inline constexpr double eig_residual = 1e-9;
/// Relative pivot size below which a direction counts as null.
inline constexpr double rank_deficiency = 1e-8;
/// ||M v|| / ||M|| accepted for a null vector.
inline constexpr double null_residual = 1e-10;

/// Norm drift of closed evolution.
inline constexpr double state_norm = 1e-9;
/// Density-matrix validity: Hermiticity, unit trace, smallest eigenvalue.
inline constexpr double density_hermitian = 1e-9;
inline constexpr double density_trace = 1e-9;
inline constexpr double density_min_eigenvalue = -1e-8;
/// Trace drift allowed over an open-system run.
inline constexpr double trace_drift = 1e-8;
/// Absolute ||L vec(rho_ss)|| for a trace-one steady state.
inline constexpr double steady_residual = 1e-10;

/// Imaginary part of tr(rho O) discarded for Hermitian O.
inline constexpr double expectation_imag = 1e-10;
/// Denominator floor of the cross-correlation ratio.
inline constexpr double correlation_floor = 1e-12;
/// Observable range slack (concurrence, <s^z>, photon number).
inline constexpr double observable_range = 1e-8;

/// |Delta E_ss| between truncations N_c and N_c + 2.
inline constexpr double truncation = 1e-6;
/// A closed-dynamics peak counts as maximally entangled when E_p >= 1 - mes.
inline constexpr double mes = 1e-6;
/// E_ss at or below this value counts as exactly unentangled.
inline constexpr double zero_entanglement = 1e-4;
/// Bisection resolution of the numeric MES threshold.
inline constexpr double threshold_bisection = 1e-4;
/// Dispersive guard: |delta| >= dispersive_ratio * max(g~1, g~2).
inline constexpr double dispersive_ratio = 10.0;

}  // namespace qcavity::tol
