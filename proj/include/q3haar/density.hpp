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

/// \file density.hpp
/// Closed-form angle densities of the two- and three-qubit random-state
/// circuits. Every density here is unnormalized; `normalization_constant`
/// integrates a one-dimensional law numerically when a probability is needed.

#include <array>
#include <cmath>
#include <complex>
#include <functional>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "q3haar/angles.hpp"
#include "q3haar/statevec.hpp"

namespace q3haar {

// ---------------------------------------------------------------------------
// Single-qubit helpers

inline cplx inner(const Qubit& a, const Qubit& b) {
    return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1];
}

inline double norm(const Qubit& a) { return std::sqrt(std::norm(a[0]) + std::norm(a[1])); }

/// sigma_x |v>.
inline Qubit bit_flip(const Qubit& v) { return {v[1], v[0]}; }

// ---------------------------------------------------------------------------

struct AlphaBeta {
    Qubit alpha;
    Qubit beta;
};

/// The third-qubit states reached on the two branches of the first qubit after
/// the second CNOT and the Z-Y-Z block (theta4..theta6):
///
///   |a> = (c3 c5 - e^{2i t4} s3 s5)|0> + e^{2i t6}(c3 s5 + e^{2i t4} s3 c5)|1>
///   |b> = (s3 c5 - e^{2i t4} c3 s5)|0> + e^{2i t6}(e^{2i t4} c3 c5 + s3 s5)|1>
///
/// with c_k = cos t_k, s_k = sin t_k. Both are normalized and <a|b> = sin 2 t3.
inline AlphaBeta alpha_beta(double t3, double t4, double t5, double t6) {
    const cplx e4 = std::polar(1.0, 2 * t4);
    const cplx e6 = std::polar(1.0, 2 * t6);
    const double c3 = std::cos(t3), s3 = std::sin(t3), c5 = std::cos(t5), s5 = std::sin(t5);
    return {
        Qubit{c3 * c5 - e4 * s3 * s5, e6 * (c3 * s5 + e4 * s3 * c5)},
        Qubit{s3 * c5 - e4 * c3 * s5, e6 * (e4 * c3 * c5 + s3 * s5)},
    };
}

/// Trigonometric ingredients of the joint (theta3..theta6) density.
struct JointDensityTerms {
    double c3, c4, c5, c6;  // cos 2 theta_i
    double s3, s4, s5, s6;  // sin 2 theta_i
    double sin2t5;          // sin 2 theta5
    double sin4t3;          // sin 4 theta3
    double cos2_phi1;       // cos^2 phi1 = |<alpha|beta-bar>|^2
    double sin2_phi1;       // 1 - cos^2 phi1
    double cos_phi2;        // cos phi2, may be negative

    double signed_density() const { return sin2t5 * sin4t3 * sin2_phi1 * cos_phi2; }
};

inline JointDensityTerms phi_terms(double t3, double t4, double t5, double t6) {
    JointDensityTerms t{};
    t.c3 = std::cos(2 * t3);
    t.c4 = std::cos(2 * t4);
    t.c5 = std::cos(2 * t5);
    t.c6 = std::cos(2 * t6);
    t.s3 = std::sin(2 * t3);
    t.s4 = std::sin(2 * t4);
    t.s5 = std::sin(2 * t5);
    t.s6 = std::sin(2 * t6);
    t.sin2t5 = t.s5;
    t.sin4t3 = std::sin(4 * t3);
    const double a = t.c4 * t.c5 * t.c6 - t.s4 * t.s6;
    const double b = t.c3 * t.c4 * t.s6 + t.c3 * t.s4 * t.c5 * t.c6;
    t.cos2_phi1 = a * a + b * b;
    t.sin2_phi1 = 1.0 - t.cos2_phi1;
    t.cos_phi2 = -t.s3 * t.s4 * t.s6 + t.c6 * (t.s3 * t.c4 * t.c5 - t.c3 * t.s5);
    return t;
}

/// |sin 2t5 sin 4t3 sin^2 phi1 cos phi2|. Bounded above by 0.85 on the
/// fundamental box (max observed ~0.835).
inline double joint_density_3456(double t3, double t4, double t5, double t6) {
    return std::abs(phi_terms(t3, t4, t5, t6).signed_density());
}

/// |cos^5 t1 sin^9 t1|
inline double density_theta1(double t1) {
    return std::abs(std::pow(std::cos(t1), 5) * std::pow(std::sin(t1), 9));
}

/// |cos^5 2t2 sin^3 2t2|
inline double density_theta2(double t2) {
    return std::abs(std::pow(std::cos(2 * t2), 5) * std::pow(std::sin(2 * t2), 3));
}

/// |sin 2t| : law of the middle Y angle of a Z-Y-Z block (theta8, theta11).
inline double density_sin2(double t) { return std::abs(std::sin(2 * t)); }

/// |cos 2t| : law of theta13.
inline double density_cos2(double t) { return std::abs(std::cos(2 * t)); }

/// Product of the theta7..theta14 factors; theta7, 9, 10, 12, 14 are uniform.
inline double density_tail_factors(const AngleSet14& a) {
    return std::abs(std::sin(2 * a(8)) * std::sin(2 * a(11)) * std::cos(2 * a(13)));
}

struct DensityBreakdown {
    double theta1;
    double theta2;
    double joint_3456;
    double tail;
    double total;
};

inline DensityBreakdown density_breakdown(const AngleSet14& a) {
    DensityBreakdown d{};
    d.theta1 = density_theta1(a(1));
    d.theta2 = density_theta2(a(2));
    d.joint_3456 = joint_density_3456(a(3), a(4), a(5), a(6));
    d.tail = density_tail_factors(a);
    d.total = d.theta1 * d.theta2 * d.joint_3456 * d.tail;
    return d;
}

/// Full unnormalized three-qubit angle density.
inline double density_full_14(const AngleSet14& a) { return density_breakdown(a).total; }

/// Unnormalized two-qubit angle density |cos^2 2t1 sin 2t1 sin 2t3 sin 2t5|.
inline double density_2q(const AngleSet6& a) {
    const double c1 = std::cos(2 * a(1));
    return std::abs(c1 * c1 * std::sin(2 * a(1)) * std::sin(2 * a(3)) * std::sin(2 * a(5)));
}

/// Integral of a one-dimensional density over [lo, hi] by adaptive
/// Gauss-Kronrod quadrature.
inline double integrate_1d(const std::function<double(double)>& f, double lo, double hi,
                           double rel_tol = 1e-13) {
    double err = 0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, 20, rel_tol,
                                                                         &err);
}

/// 1 / integral of `f` over [lo, hi].
inline double normalization_constant(const std::function<double(double)>& f, double lo, double hi) {
    return 1.0 / integrate_1d(f, lo, hi);
}

}  // namespace q3haar
