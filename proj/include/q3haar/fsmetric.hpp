// Copyright 2026 The q3haar Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

/// \file fsmetric.hpp
/// Fubini-Study metric tensor of a parametrized circuit state and its volume
/// density sqrt(det g), used as the numerical oracle for the analytic angle
/// densities.
///
/// Derivatives are exact: a rotation exp(-i s sigma t) contributes
/// -i s sigma exp(-i s sigma t), so d psi / d theta_k is the sum over the
/// gates reading slot k of the circuit with that Pauli inserted.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "q3haar/circuits.hpp"
#include "q3haar/statevec.hpp"

namespace q3haar {

using MetricTensor = Eigen::MatrixXd;

/// d psi / d theta_k for every parameter slot of `tpl`.
inline std::vector<StateVector> tangent_states(const CircuitTemplate& tpl,
                                               std::span<const double> params) {
    if (params.size() != static_cast<std::size_t>(tpl.n_params)) {
        throw std::invalid_argument("tangent_states: parameter count mismatch");
    }
    const std::size_t n_gates = tpl.gates.size();
    // prefix[i] is the state after the first i gates.
    std::vector<StateVector> prefix;
    prefix.reserve(n_gates + 1);
    prefix.emplace_back(tpl.n_qubits);
    for (std::size_t i = 0; i < n_gates; ++i) {
        prefix.push_back(apply_gate(prefix.back(), tpl.gates[i], params));
    }

    StateVector zero(tpl.n_qubits);
    zero[0] = 0.0;
    std::vector<StateVector> out(static_cast<std::size_t>(tpl.n_params), zero);
    const cplx minus_i{0, -1};
    for (std::size_t i = 0; i < n_gates; ++i) {
        const GateOp& g = tpl.gates[i];
        if (!g.is_parametrized()) {
            continue;
        }
        StateVector d = apply_pauli(prefix[i + 1], g.kind == GateKind::RotY ? Pauli::Y : Pauli::Z,
                                    g.qubit);
        d *= minus_i * static_cast<double>(g.sign);
        for (std::size_t j = i + 1; j < n_gates; ++j) {
            d = apply_gate(d, tpl.gates[j], params);
        }
        StateVector& acc = out[static_cast<std::size_t>(g.param)];
        for (std::size_t k = 0; k < acc.dim(); ++k) {
            acc[k] += d[k];
        }
    }
    return out;
}

/// g_ij = Re[<d_i psi|d_j psi> - <d_i psi|psi><psi|d_j psi>] for normalized psi.
inline MetricTensor metric_from_tangents(const StateVector& psi,
                                         std::span<const StateVector> tangents) {
    const auto n = static_cast<Eigen::Index>(tangents.size());
    std::vector<cplx> proj(tangents.size());
    for (std::size_t i = 0; i < tangents.size(); ++i) {
        proj[i] = inner(psi, tangents[i]);
    }
    MetricTensor g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const auto ui = static_cast<std::size_t>(i);
            const auto uj = static_cast<std::size_t>(j);
            double v = (inner(tangents[ui], tangents[uj]) - std::conj(proj[ui]) * proj[uj]).real();
            g(i, j) = v;
            g(j, i) = v;
        }
    }
    return g;
}

inline MetricTensor metric_tensor(const CircuitTemplate& tpl, std::span<const double> params) {
    const StateVector psi = run_circuit(tpl, params);
    const auto tangents = tangent_states(tpl, params);
    return metric_from_tangents(psi, tangents);
}

/// det g through a partially pivoted LU factorization.
inline double metric_determinant(const MetricTensor& g) { return g.partialPivLu().determinant(); }

/// sqrt(max(det g, 0)); tiny negative round-off clamps to zero.
inline double volume_density(const CircuitTemplate& tpl, std::span<const double> params) {
    return std::sqrt(std::max(metric_determinant(metric_tensor(tpl, params)), 0.0));
}

inline double min_eigenvalue(const MetricTensor& g) {
    Eigen::SelfAdjointEigenSolver<MetricTensor> es(g, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

struct ProportionalityReport {
    std::string template_name;
    std::size_t n_points = 0;     // points above threshold
    std::size_t n_rejected = 0;   // points below threshold
    double ratio_mean = 0;
    double ratio_rel_spread = 0;  // (max - min) / mean over accepted points
    std::size_t worst_point = 0;  // index into the input list
    double worst_rel_deviation = 0;
};

/// Compares volume_density against an analytic density at each point. Points
/// where the density is below `rel_threshold` times the largest density in the
/// list are skipped (the ratio there is 0/0 in the limit). At least 10 points
/// must survive.
inline ProportionalityReport check_proportionality(
    const CircuitTemplate& tpl, const std::function<double(std::span<const double>)>& density,
    std::span<const std::vector<double>> points, double rel_threshold = 1e-3) {
    std::vector<double> dens(points.size());
    double max_density = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        dens[i] = density(points[i]);
        max_density = std::max(max_density, dens[i]);
    }
    std::vector<std::pair<std::size_t, double>> ratios;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (dens[i] > rel_threshold * max_density && dens[i] > 0) {
            ratios.emplace_back(i, volume_density(tpl, points[i]) / dens[i]);
        }
    }
    if (ratios.size() < 10) {
        throw std::invalid_argument("check_proportionality: fewer than 10 points above threshold");
    }
    ProportionalityReport r;
    r.template_name = tpl.name;
    r.n_points = ratios.size();
    r.n_rejected = points.size() - ratios.size();
    double sum = 0, lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& [i, q] : ratios) {
        sum += q;
        lo = std::min(lo, q);
        hi = std::max(hi, q);
    }
    r.ratio_mean = sum / static_cast<double>(ratios.size());
    r.ratio_rel_spread = (hi - lo) / std::abs(r.ratio_mean);
    for (const auto& [i, q] : ratios) {
        double dev = std::abs(q - r.ratio_mean) / std::abs(r.ratio_mean);
        if (dev >= r.worst_rel_deviation) {
            r.worst_rel_deviation = dev;
            r.worst_point = i;
        }
    }
    return r;
}

}  // namespace q3haar
