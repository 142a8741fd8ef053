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

/// \file sampler.hpp
/// Classical sampling of the circuit angles, and the Gaussian Haar reference.
///
/// One-dimensional laws are drawn by exact transforms of uniforms:
///   theta1  : t = sin^2 theta1 ~ Beta(5, 3)    (density t^4 (1-t)^2)
///   theta2  : u = sin^2 2theta2 ~ Beta(2, 3)   (density u (1-u)^2)
///   sin 2t  : theta = acos(1 - 2u) / 2 on [0, pi/2]
///   cos 2t  : theta = asin(2u - 1) / 2 on [-pi/4, pi/4]
/// Integer-shape Beta variates are order statistics of uniforms, which keeps
/// the whole pipeline free of platform-dependent special functions.
/// theta3..theta6 are drawn jointly by rejection under a constant envelope.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "q3haar/angles.hpp"
#include "q3haar/circuits.hpp"
#include "q3haar/density.hpp"
#include "q3haar/parallel.hpp"
#include "q3haar/random.hpp"
#include "q3haar/statevec.hpp"

namespace q3haar {

inline constexpr double kDefaultEnvelope = 0.85;
inline constexpr std::uint64_t kMaxProposals = 1'000'000;

/// A proposal exceeded the rejection envelope: the bound or the proposal box
/// is wrong.
class EnvelopeViolation : public std::runtime_error {
 public:
    EnvelopeViolation(double density, double bound)
        : std::runtime_error("joint density " + std::to_string(density) +
                             " exceeds rejection bound " + std::to_string(bound)),
          density_(density) {}
    double density() const { return density_; }

 private:
    double density_;
};

class NonTermination : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

/// Deliberately wrong samplers used as negative controls for the statistics
/// suites.
enum class Mutant {
    None,
    UniformTheta8,     // theta8 uniform on [0, pi/2] instead of |sin 2 theta8|
    SwapTheta7Theta8,  // theta7 ~ |sin 2t| on [0, pi/2], theta8 uniform on [0, pi)
};

struct SamplerConfig {
    double bound = kDefaultEnvelope;
    Mutant mutant = Mutant::None;
};

/// k-th smallest (1-based) of n uniforms: Beta(k, n + 1 - k).
template <std::size_t N>
double uniform_order_statistic(RandomStream& rng, std::size_t k) {
    std::array<double, N> u{};
    for (auto& x : u) {
        x = rng.uniform();
    }
    std::nth_element(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(k - 1), u.end());
    return u[k - 1];
}

inline double sample_theta1(RandomStream& rng) {
    const double t = uniform_order_statistic<7>(rng, 5);  // Beta(5, 3)
    return std::asin(std::sqrt(t));
}

inline double sample_theta2(RandomStream& rng) {
    const double u = uniform_order_statistic<4>(rng, 2);  // Beta(2, 3)
    return 0.5 * std::asin(std::sqrt(u));
}

/// Inverse CDF of |sin 2t| on [0, pi/2].
inline double sin2_from_uniform(double u) { return 0.5 * std::acos(1.0 - 2.0 * u); }

/// Inverse CDF of |cos 2t| on [-pi/4, pi/4].
inline double cos2_from_uniform(double u) { return 0.5 * std::asin(2.0 * u - 1.0); }

inline double sample_sin2(RandomStream& rng) { return sin2_from_uniform(rng.uniform()); }
inline double sample_cos2(RandomStream& rng) { return cos2_from_uniform(rng.uniform()); }
inline double sample_uniform_z(RandomStream& rng) { return kPi * rng.uniform(); }

struct JointSample {
    double theta3, theta4, theta5, theta6;
    std::uint64_t proposals_used;
    double max_density_seen;
};

/// Rejection sampling of (theta3..theta6): propose uniformly on
/// [0, pi/4] x [0, pi) x [0, pi/2] x [0, pi) and accept when x * bound lies
/// below the joint density, x uniform on [0, 1).
inline JointSample sample_joint_3456(RandomStream& rng, double bound = kDefaultEnvelope) {
    if (!(bound > 0)) {
        throw std::invalid_argument("sample_joint_3456: bound must be positive");
    }
    JointSample s{};
    for (std::uint64_t n = 1; n <= kMaxProposals; ++n) {
        const double t3 = rng.uniform() * (kPi / 4);
        const double t4 = rng.uniform() * kPi;
        const double t5 = rng.uniform() * (kPi / 2);
        const double t6 = rng.uniform() * kPi;
        const double x = rng.uniform();
        const double p = joint_density_3456(t3, t4, t5, t6);
        s.max_density_seen = std::max(s.max_density_seen, p);
        if (p > bound) {
            throw EnvelopeViolation(p, bound);
        }
        if (x * bound < p) {
            s.theta3 = t3;
            s.theta4 = t4;
            s.theta5 = t5;
            s.theta6 = t6;
            s.proposals_used = n;
            return s;
        }
    }
    throw NonTermination("sample_joint_3456: no acceptance after " +
                         std::to_string(kMaxProposals) + " proposals");
}

struct AngleDraw14 {
    AngleSet14 angles;
    std::uint64_t proposals_used;
    double max_density_seen;
};

inline AngleDraw14 sample_angles14_detailed(RandomStream& rng, const SamplerConfig& cfg = {}) {
    AngleDraw14 d{};
    AngleSet14& a = d.angles;
    a(1) = sample_theta1(rng);
    a(2) = sample_theta2(rng);
    const JointSample j = sample_joint_3456(rng, cfg.bound);
    a(3) = j.theta3;
    a(4) = j.theta4;
    a(5) = j.theta5;
    a(6) = j.theta6;
    a(7) = sample_uniform_z(rng);
    a(8) = sample_sin2(rng);
    a(9) = sample_uniform_z(rng);
    a(10) = sample_uniform_z(rng);
    a(11) = sample_sin2(rng);
    a(12) = sample_uniform_z(rng);
    a(13) = sample_cos2(rng);
    a(14) = sample_uniform_z(rng);
    switch (cfg.mutant) {
        case Mutant::None:
            break;
        case Mutant::UniformTheta8:
            a(8) = rng.uniform() * (kPi / 2);
            break;
        case Mutant::SwapTheta7Theta8:
            a(7) = sample_sin2(rng);
            a(8) = sample_uniform_z(rng);
            break;
    }
    d.proposals_used = j.proposals_used;
    d.max_density_seen = j.max_density_seen;
    return d;
}

inline AngleSet14 sample_angles14(RandomStream& rng, const SamplerConfig& cfg = {}) {
    return sample_angles14_detailed(rng, cfg).angles;
}

/// One draw with its provenance.
struct SampleRecord {
    AngleSet14 angles;
    StateVector state{3};
    std::uint64_t proposals_used = 0;
    double max_density_seen = 0;
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
};

inline SampleRecord sample_state_3q(RandomStream& rng, const SamplerConfig& cfg = {}) {
    SampleRecord r;
    r.seed = rng.seed();
    r.stream_id = rng.stream_id();
    const AngleDraw14 d = sample_angles14_detailed(rng, cfg);
    r.angles = d.angles;
    r.proposals_used = d.proposals_used;
    r.max_density_seen = d.max_density_seen;
    r.state = build_state_3q(r.angles);
    return r;
}

/// theta1 = acos(w) / 2 with w = cbrt(2u - 1), the inverse CDF of the
/// cos^2 2t sin 2t law; theta3, theta5 follow |sin 2t|; the Z angles are
/// uniform on [0, pi).
inline AngleSet6 sample_angles_2q(RandomStream& rng) {
    AngleSet6 a;
    a(1) = 0.5 * std::acos(std::cbrt(2.0 * rng.uniform() - 1.0));
    a(2) = sample_uniform_z(rng);
    a(3) = sample_sin2(rng);
    a(4) = sample_uniform_z(rng);
    a(5) = sample_sin2(rng);
    a(6) = sample_uniform_z(rng);
    return a;
}

inline StateVector sample_state_2q(RandomStream& rng) { return build_state_2q(sample_angles_2q(rng)); }

/// Reference Haar state: 2^n complex Gaussians, normalized.
inline StateVector haar_reference_state(int n_qubits, RandomStream& rng) {
    StateVector s(n_qubits);
    for (std::size_t i = 0; i < s.dim(); ++i) {
        auto [re, im] = rng.normal_pair();
        s[i] = cplx{re, im};
    }
    return s.normalized();
}

// ---------------------------------------------------------------------------
// Batches. Item i always uses base.substream(first_index + i), so output does
// not depend on the number of workers.

inline std::vector<SampleRecord> sample_batch_3q(const RandomStream& base, std::size_t count,
                                                 const SamplerConfig& cfg = {},
                                                 unsigned workers = 1,
                                                 std::uint64_t first_index = 0) {
    std::vector<SampleRecord> out(count);
    parallel_for(count, workers, [&](std::size_t i) {
        RandomStream rng = base.substream(first_index + i);
        out[i] = sample_state_3q(rng, cfg);
    });
    return out;
}

inline std::vector<StateVector> sample_states_3q(const RandomStream& base, std::size_t count,
                                                 const SamplerConfig& cfg = {},
                                                 unsigned workers = 1) {
    std::vector<StateVector> out(count, StateVector(3));
    parallel_for(count, workers, [&](std::size_t i) {
        RandomStream rng = base.substream(i);
        out[i] = sample_state_3q(rng, cfg).state;
    });
    return out;
}

inline std::vector<AngleSet6> sample_batch_angles_2q(const RandomStream& base, std::size_t count,
                                                     unsigned workers = 1) {
    std::vector<AngleSet6> out(count);
    parallel_for(count, workers, [&](std::size_t i) {
        RandomStream rng = base.substream(i);
        out[i] = sample_angles_2q(rng);
    });
    return out;
}

inline std::vector<StateVector> sample_states_2q(const RandomStream& base, std::size_t count,
                                                 unsigned workers = 1) {
    std::vector<StateVector> out(count, StateVector(2));
    parallel_for(count, workers, [&](std::size_t i) {
        RandomStream rng = base.substream(i);
        out[i] = sample_state_2q(rng);
    });
    return out;
}

inline std::vector<StateVector> haar_reference_batch(int n_qubits, const RandomStream& base,
                                                     std::size_t count, unsigned workers = 1) {
    std::vector<StateVector> out(count, StateVector(n_qubits));
    parallel_for(count, workers, [&](std::size_t i) {
        RandomStream rng = base.substream(i);
        out[i] = haar_reference_state(n_qubits, rng);
    });
    return out;
}

}  // namespace q3haar
