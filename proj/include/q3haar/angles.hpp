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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

#include "q3haar/statevec.hpp"

namespace q3haar {

/// Closed interval [lo, hi] of a circuit angle. `periodic` ranges have
/// length equal to the period of the corresponding rotation up to global
/// phase, so any real angle folds onto them.
struct AngleRange {
    double lo;
    double hi;
    bool periodic;

    bool contains(double x, double tol = 1e-12) const { return x >= lo - tol && x <= hi + tol; }
};

/// Fixed-size set of circuit angles, indexed from 1 like theta_1..theta_N.
template <std::size_t N>
struct Angles {
    std::array<double, N> theta{};

    static constexpr std::size_t size() { return N; }

    double& operator()(std::size_t k) { return theta[k - 1]; }
    double operator()(std::size_t k) const { return theta[k - 1]; }

    std::span<const double> span() const { return theta; }

    bool operator==(const Angles&) const = default;
};

using AngleSet14 = Angles<14>;
using AngleSet6 = Angles<6>;

inline constexpr std::array<AngleRange, 14> kRanges3q{{
    {0, kPi / 2, false},        // theta1
    {0, kPi / 4, false},        // theta2
    {0, kPi / 4, false},        // theta3
    {0, kPi, true},             // theta4
    {0, kPi / 2, false},        // theta5
    {0, kPi, true},             // theta6
    {0, kPi, true},             // theta7
    {0, kPi / 2, false},        // theta8
    {0, kPi, true},             // theta9
    {0, kPi, true},             // theta10
    {0, kPi / 2, false},        // theta11
    {0, kPi, true},             // theta12
    {-kPi / 4, kPi / 4, true},  // theta13
    {0, kPi, true},             // theta14
}};

inline constexpr std::array<AngleRange, 6> kRanges2q{{
    {0, kPi / 2, false},
    {0, kPi, true},
    {0, kPi / 2, false},
    {0, kPi, true},
    {0, kPi / 2, false},
    {0, kPi, true},
}};

template <std::size_t N>
constexpr const std::array<AngleRange, N>& ranges_for() {
    if constexpr (N == 14) {
        return kRanges3q;
    } else {
        static_assert(N == 6, "only 6- and 14-angle sets are defined");
        return kRanges2q;
    }
}

template <std::size_t N>
bool in_range(const Angles<N>& a, double tol = 1e-12) {
    const auto& r = ranges_for<N>();
    for (std::size_t k = 0; k < N; ++k) {
        if (!r[k].contains(a.theta[k], tol)) {
            return false;
        }
    }
    return true;
}

/// x folded into [lo, lo + period).
inline double fold_periodic(double x, double lo, double period) {
    double y = std::fmod(x - lo, period);
    if (y < 0) {
        y += period;
    }
    if (y >= period) {
        y -= period;
    }
    return lo + y;
}

/// Signed distance between two angles on a circle of the given period, in
/// [-period/2, period/2).
inline double circular_difference(double a, double b, double period) {
    return fold_periodic(a - b, -period / 2, period);
}

/// Folds every periodic angle onto its range; bounded angles are left alone.
template <std::size_t N>
Angles<N> fold_to_ranges(Angles<N> a) {
    const auto& r = ranges_for<N>();
    for (std::size_t k = 0; k < N; ++k) {
        if (r[k].periodic) {
            a.theta[k] = fold_periodic(a.theta[k], r[k].lo, r[k].hi - r[k].lo);
        }
    }
    return a;
}

/// Largest per-angle distance, measured on the circle for periodic angles.
template <std::size_t N>
double angle_distance(const Angles<N>& a, const Angles<N>& b) {
    const auto& r = ranges_for<N>();
    double worst = 0;
    for (std::size_t k = 0; k < N; ++k) {
        double d = r[k].periodic ? circular_difference(a.theta[k], b.theta[k], r[k].hi - r[k].lo)
                                 : a.theta[k] - b.theta[k];
        worst = std::max(worst, std::abs(d));
    }
    return worst;
}

template <std::size_t N>
void require_finite(const Angles<N>& a, const char* what) {
    for (std::size_t k = 0; k < N; ++k) {
        if (!std::isfinite(a.theta[k])) {
            throw std::invalid_argument(std::string(what) + ": theta" + std::to_string(k + 1) +
                                        " is not finite");
        }
    }
}

}  // namespace q3haar
