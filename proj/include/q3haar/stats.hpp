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

/// \file stats.hpp
/// Statistical checks that sampled states are Haar distributed and that
/// extracted angles follow the analytic laws.
///
/// Reference distributions come from quadrature of the density formulas or
/// from the Gaussian oracle, never from tabulated constants.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "q3haar/angles.hpp"
#include "q3haar/circuits.hpp"
#include "q3haar/density.hpp"
#include "q3haar/extract.hpp"
#include "q3haar/parallel.hpp"
#include "q3haar/random.hpp"
#include "q3haar/sampler.hpp"
#include "q3haar/statevec.hpp"

namespace q3haar {

enum class TestKind { Moment, KolmogorovSmirnov, ChiSquare, Deviation };

inline const char* to_string(TestKind k) {
    switch (k) {
        case TestKind::Moment:
            return "moment";
        case TestKind::KolmogorovSmirnov:
            return "ks";
        case TestKind::ChiSquare:
            return "chi2";
        case TestKind::Deviation:
            return "deviation";
    }
    return "?";
}

struct GoFReport {
    std::string name;
    TestKind kind = TestKind::Moment;
    double statistic = 0;  // KS D, chi^2, or |value - target|
    double value = 0;
    double target = 0;
    double tolerance = 0;
    std::optional<double> p_value;
    std::size_t n = 0;
    std::size_t bins = 0;
    double threshold = 0;  // p-value threshold for KS / chi^2
    bool passed = false;
};

/// Every threshold and bin count used by the suites.
struct StatsConfig {
    double p_threshold = 1e-3;
    double purity_tol = 0.005;
    double c2_tol = 0.002;
    double c4_tol = 0.002;
    double z2_tol = 0.005;
    std::size_t min_states = 10'000;
    std::size_t bins_1d = 40;
    std::size_t cells_2d = 8;  // per axis
    double min_expected = 5.0;
    double shift_tol = 1e-9;
    double slope_tol = 1e-4;
    double slope_eps = 1e-5;
    std::size_t identity_trials = 100;
};

// ---------------------------------------------------------------------------
// Distributions

/// P(chi^2_dof > stat).
inline double chi_square_sf(double stat, double dof) {
    if (stat <= 0) {
        return 1.0;
    }
    return boost::math::gamma_q(0.5 * dof, 0.5 * stat);
}

/// Kolmogorov survival function Q(lambda) = 2 sum (-1)^{j-1} exp(-2 j^2 lambda^2).
inline double kolmogorov_q(double lambda) {
    if (lambda < 1e-3) {
        return 1.0;
    }
    double sum = 0;
    for (int j = 1; j <= 200; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += (j % 2 ? 2.0 : -2.0) * term;
        if (term < 1e-16) {
            break;
        }
    }
    return std::clamp(sum, 0.0, 1.0);
}

/// Asymptotic KS p-value with the effective-size correction of Stephens.
inline double ks_p_value(double d, double n_eff) {
    const double s = std::sqrt(n_eff);
    return kolmogorov_q((s + 0.12 + 0.11 / s) * d);
}

inline GoFReport ks_one_sample(std::string name, std::vector<double> xs,
                               const std::function<double(double)>& cdf, double threshold) {
    if (xs.empty()) {
        throw std::invalid_argument("ks_one_sample: empty sample");
    }
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    GoFReport r;
    r.name = std::move(name);
    r.kind = TestKind::KolmogorovSmirnov;
    r.statistic = d;
    r.p_value = ks_p_value(d, n);
    r.n = xs.size();
    r.threshold = threshold;
    r.passed = *r.p_value > threshold;
    return r;
}

inline GoFReport ks_two_sample(std::string name, std::vector<double> a, std::vector<double> b,
                               double threshold) {
    if (a.empty() || b.empty()) {
        throw std::invalid_argument("ks_two_sample: empty sample");
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) {
            ++i;
        }
        while (j < b.size() && b[j] <= x) {
            ++j;
        }
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    GoFReport r;
    r.name = std::move(name);
    r.kind = TestKind::KolmogorovSmirnov;
    r.statistic = d;
    r.p_value = ks_p_value(d, na * nb / (na + nb));
    r.n = a.size() + b.size();
    r.threshold = threshold;
    r.passed = *r.p_value > threshold;
    return r;
}

/// Pearson chi^2 of observed counts against expected probabilities. Adjacent
/// bins are merged until every expected count reaches `min_expected`.
inline GoFReport chi_square_test(std::string name, const std::vector<double>& observed,
                                 const std::vector<double>& probs, double threshold,
                                 double min_expected = 5.0) {
    if (observed.size() != probs.size() || observed.empty()) {
        throw std::invalid_argument("chi_square_test: size mismatch");
    }
    double n = 0, ptot = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        n += observed[i];
        ptot += probs[i];
    }
    std::vector<double> obs, expc;
    double o = 0, e = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        o += observed[i];
        e += n * probs[i] / ptot;
        if (e >= min_expected) {
            obs.push_back(o);
            expc.push_back(e);
            o = e = 0;
        }
    }
    if (e > 0 || o > 0) {
        if (expc.empty()) {
            obs.push_back(o);
            expc.push_back(e);
        } else {
            obs.back() += o;
            expc.back() += e;
        }
    }
    double stat = 0;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        if (expc[i] > 0) {
            stat += (obs[i] - expc[i]) * (obs[i] - expc[i]) / expc[i];
        } else if (obs[i] > 0) {
            stat = std::numeric_limits<double>::infinity();
        }
    }
    GoFReport r;
    r.name = std::move(name);
    r.kind = TestKind::ChiSquare;
    r.statistic = stat;
    r.bins = obs.size();
    r.n = static_cast<std::size_t>(n);
    r.threshold = threshold;
    r.p_value = obs.size() > 1 ? chi_square_sf(stat, static_cast<double>(obs.size() - 1)) : 1.0;
    r.passed = *r.p_value > threshold;
    return r;
}

/// Chi^2 of samples in [lo, hi] against an unnormalized density, with bin
/// probabilities from adaptive quadrature.
inline GoFReport chi_square_1d(std::string name, const std::vector<double>& xs,
                               const std::function<double(double)>& density, double lo, double hi,
                               const StatsConfig& cfg) {
    const std::size_t bins = cfg.bins_1d;
    const double w = (hi - lo) / static_cast<double>(bins);
    std::vector<double> counts(bins, 0.0), probs(bins, 0.0);
    for (double x : xs) {
        auto k = static_cast<std::ptrdiff_t>(std::floor((x - lo) / w));
        k = std::clamp<std::ptrdiff_t>(k, 0, static_cast<std::ptrdiff_t>(bins) - 1);
        counts[static_cast<std::size_t>(k)] += 1;
    }
    for (std::size_t k = 0; k < bins; ++k) {
        probs[k] = integrate_1d(density, lo + w * static_cast<double>(k),
                                lo + w * static_cast<double>(k + 1), 1e-10);
    }
    return chi_square_test(std::move(name), counts, probs, cfg.p_threshold, cfg.min_expected);
}

// ---------------------------------------------------------------------------
// Joint (theta3..theta6) law projected onto pairs

namespace detail {

/// Gauss-Legendre nodes and weights on [-1, 1].
template <unsigned N>
std::vector<std::pair<double, double>> gauss_legendre() {
    using G = boost::math::quadrature::gauss<double, N>;
    std::vector<std::pair<double, double>> out;
    const auto& x = G::abscissa();
    const auto& w = G::weights();
    for (std::size_t i = 0; i < x.size(); ++i) {
        out.emplace_back(x[i], w[i]);
        if (x[i] != 0) {
            out.emplace_back(-x[i], w[i]);
        }
    }
    return out;
}

inline constexpr std::array<double, 4> kJointLo{0, 0, 0, 0};
inline constexpr std::array<double, 4> kJointHi{kPi / 4, kPi, kPi / 2, kPi};

}  // namespace detail

/// Probability mass of the joint (theta3..theta6) law on a cells^4 grid over
/// its box, by composite Gauss-Legendre quadrature. Index
/// ((i3 * cells + i4) * cells + i5) * cells + i6.
inline std::vector<double> joint_cell_masses(std::size_t cells) {
    const auto gl = detail::gauss_legendre<6>();
    std::array<std::vector<std::pair<double, std::size_t>>, 4> pts;  // (x, cell)
    std::array<std::vector<double>, 4> wts;
    for (std::size_t d = 0; d < 4; ++d) {
        const double h = (detail::kJointHi[d] - detail::kJointLo[d]) / static_cast<double>(cells);
        for (std::size_t c = 0; c < cells; ++c) {
            const double mid = detail::kJointLo[d] + h * (static_cast<double>(c) + 0.5);
            for (const auto& [x, w] : gl) {
                pts[d].emplace_back(mid + 0.5 * h * x, c);
                wts[d].push_back(0.5 * h * w);
            }
        }
    }
    std::vector<double> mass(cells * cells * cells * cells, 0.0);
    double total = 0;
    for (std::size_t a = 0; a < pts[0].size(); ++a) {
        for (std::size_t b = 0; b < pts[1].size(); ++b) {
            for (std::size_t c = 0; c < pts[2].size(); ++c) {
                const double wabc = wts[0][a] * wts[1][b] * wts[2][c];
                const std::size_t base =
                    ((pts[0][a].second * cells + pts[1][b].second) * cells + pts[2][c].second) *
                    cells;
                for (std::size_t e = 0; e < pts[3].size(); ++e) {
                    const double v = wabc * wts[3][e] *
                                     joint_density_3456(pts[0][a].first, pts[1][b].first,
                                                        pts[2][c].first, pts[3][e].first);
                    mass[base + pts[3][e].second] += v;
                    total += v;
                }
            }
        }
    }
    for (double& m : mass) {
        m /= total;
    }
    return mass;
}

/// Chi^2 of the (theta_i, theta_j) projection, i, j in 3..6.
inline GoFReport chi_square_joint_pair(const std::vector<AngleSet14>& angles, int i, int j,
                                       const std::vector<double>& masses, const StatsConfig& cfg) {
    const std::size_t cells = cfg.cells_2d;
    const auto di = static_cast<std::size_t>(i - 3), dj = static_cast<std::size_t>(j - 3);
    std::vector<double> probs(cells * cells, 0.0), counts(cells * cells, 0.0);
    std::array<std::size_t, 4> idx{};
    for (std::size_t flat = 0; flat < masses.size(); ++flat) {
        std::size_t rest = flat;
        for (std::size_t d = 4; d-- > 0;) {
            idx[d] = rest % cells;
            rest /= cells;
        }
        probs[idx[di] * cells + idx[dj]] += masses[flat];
    }
    auto cell_of = [&](double x, std::size_t d) {
        const double h = (detail::kJointHi[d] - detail::kJointLo[d]) / static_cast<double>(cells);
        auto k = static_cast<std::ptrdiff_t>(std::floor((x - detail::kJointLo[d]) / h));
        return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(k, 0, static_cast<std::ptrdiff_t>(cells) - 1));
    };
    for (const auto& a : angles) {
        counts[cell_of(a(i), di) * cells + cell_of(a(j), dj)] += 1;
    }
    return chi_square_test("joint theta" + std::to_string(i) + "-theta" + std::to_string(j), counts,
                           probs, cfg.p_threshold, cfg.min_expected);
}

// ---------------------------------------------------------------------------
// Haar moments

namespace detail {

inline double single_qubit_purity(const StateVector& s, int q) {
    const std::array<int, 1> sub{q};
    return reduced_purity(s, sub);
}

inline GoFReport moment_report(std::string name, double value, double target, double tol,
                               std::size_t n) {
    GoFReport r;
    r.name = std::move(name);
    r.kind = TestKind::Moment;
    r.value = value;
    r.target = target;
    r.tolerance = tol;
    r.statistic = std::abs(value - target);
    r.n = n;
    r.passed = r.statistic <= tol;
    return r;
}

inline int common_qubits(const std::vector<StateVector>& states) {
    if (states.empty()) {
        throw std::invalid_argument("empty state batch");
    }
    const int n = states.front().n_qubits();
    for (const auto& s : states) {
        if (s.n_qubits() != n) {
            throw std::invalid_argument("state batch mixes dimensions");
        }
    }
    return n;
}

}  // namespace detail

/// Low moments of a batch against their Haar values in dimension d = 2^n:
/// E|c_i|^2 = 1/d, E|c_i|^4 = 2/(d(d+1)), E<Z_q>^2 = 1/(d+1), and mean
/// single-qubit purity (2 + d/2)/(d + 1).
inline std::vector<GoFReport> haar_moment_suite(const std::vector<StateVector>& states,
                                                const StatsConfig& cfg = {}) {
    const int nq = detail::common_qubits(states);
    if (states.size() < cfg.min_states) {
        throw std::invalid_argument("haar_moment_suite: need at least " +
                                    std::to_string(cfg.min_states) + " states");
    }
    const std::size_t d = std::size_t{1} << nq;
    const double dd = static_cast<double>(d);
    const double n = static_cast<double>(states.size());
    std::vector<double> c2(d, 0.0), c4(d, 0.0), z2(static_cast<std::size_t>(nq), 0.0);
    double purity = 0;
    for (const auto& s : states) {
        for (std::size_t i = 0; i < d; ++i) {
            const double p = std::norm(s[i]);
            c2[i] += p;
            c4[i] += p * p;
        }
        for (int q = 0; q < nq; ++q) {
            purity += detail::single_qubit_purity(s, q);
            const double z = expectation_z(s, q);
            z2[static_cast<std::size_t>(q)] += z * z;
        }
    }
    purity /= n * nq;
    auto worst = [&](const std::vector<double>& sums, double target) {
        double w = sums.front() / n;
        for (double x : sums) {
            if (std::abs(x / n - target) > std::abs(w - target)) {
                w = x / n;
            }
        }
        return w;
    };
    const double da = 2, db = dd / 2;
    std::vector<GoFReport> out;
    out.push_back(detail::moment_report("mean single-qubit purity", purity,
                                        (da + db) / (da * db + 1), cfg.purity_tol, states.size()));
    out.push_back(detail::moment_report("mean |c_i|^2 (worst i)", worst(c2, 1 / dd), 1 / dd,
                                        cfg.c2_tol, states.size()));
    out.push_back(detail::moment_report("mean |c_i|^4 (worst i)", worst(c4, 2 / (dd * (dd + 1))),
                                        2 / (dd * (dd + 1)), cfg.c4_tol, states.size()));
    out.push_back(detail::moment_report("mean <Z_q>^2 (worst q)", worst(z2, 1 / (dd + 1)),
                                        1 / (dd + 1), cfg.z2_tol, states.size()));
    return out;
}

/// Two-sample KS tests of |c_i|^2 and <Z_q> against an oracle batch. State k
/// contributes component k mod d and qubit k mod n so that the pooled values
/// are independent.
inline std::vector<GoFReport> component_distribution_test(const std::vector<StateVector>& states,
                                                          const std::vector<StateVector>& oracle,
                                                          const StatsConfig& cfg = {}) {
    const int nq = detail::common_qubits(states);
    if (detail::common_qubits(oracle) != nq) {
        throw std::invalid_argument("component_distribution_test: dimension mismatch");
    }
    auto collect = [nq](const std::vector<StateVector>& batch, bool z) {
        std::vector<double> v;
        v.reserve(batch.size());
        const std::size_t d = std::size_t{1} << nq;
        for (std::size_t k = 0; k < batch.size(); ++k) {
            v.push_back(z ? expectation_z(batch[k], static_cast<int>(k % static_cast<std::size_t>(nq)))
                          : std::norm(batch[k][k % d]));
        }
        return v;
    };
    return {
        ks_two_sample("|c_i|^2 vs oracle", collect(states, false), collect(oracle, false),
                      cfg.p_threshold),
        ks_two_sample("<Z_q> vs oracle", collect(states, true), collect(oracle, true),
                      cfg.p_threshold),
    };
}

// ---------------------------------------------------------------------------
// Angle marginals

/// Extracts every state with the uniform branch policy; item i draws its
/// branch from base.substream(i).
inline std::vector<AngleSet14> extract_batch_uniform(const std::vector<StateVector>& states,
                                                     const RandomStream& base,
                                                     unsigned workers = 1) {
    std::vector<AngleSet14> out(states.size());
    parallel_for(states.size(), workers, [&](std::size_t i) {
        RandomStream rng = base.substream(i);
        out[i] = extract_angles(states[i], BranchChoice::uniform(rng));
    });
    return out;
}

/// Chi^2 of every one-dimensional angle law and of the six pair projections
/// of the joint theta3..theta6 law.
inline std::vector<GoFReport> marginal_angle_suite(const std::vector<AngleSet14>& angles,
                                                   const StatsConfig& cfg = {}) {
    if (angles.size() < cfg.min_states) {
        throw std::invalid_argument("marginal_angle_suite: need at least " +
                                    std::to_string(cfg.min_states) + " samples");
    }
    auto column = [&](int k) {
        std::vector<double> v;
        v.reserve(angles.size());
        for (const auto& a : angles) {
            v.push_back(a(static_cast<std::size_t>(k)));
        }
        return v;
    };
    const auto uniform = [](double) { return 1.0; };
    std::vector<GoFReport> out;
    out.push_back(chi_square_1d("theta1", column(1), density_theta1, 0, kPi / 2, cfg));
    out.push_back(chi_square_1d("theta2", column(2), density_theta2, 0, kPi / 4, cfg));
    for (int k : {8, 11}) {
        out.push_back(chi_square_1d("theta" + std::to_string(k), column(k), density_sin2, 0,
                                    kPi / 2, cfg));
    }
    out.push_back(chi_square_1d("theta13", column(13), density_cos2, -kPi / 4, kPi / 4, cfg));
    for (int k : {7, 9, 10, 12, 14}) {
        out.push_back(chi_square_1d("theta" + std::to_string(k), column(k), uniform, 0, kPi, cfg));
    }
    const std::vector<double> masses = joint_cell_masses(cfg.cells_2d);
    for (int i = 3; i <= 6; ++i) {
        for (int j = i + 1; j <= 6; ++j) {
            out.push_back(chi_square_joint_pair(angles, i, j, masses, cfg));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Invariance identities

/// Largest distance from each preimage of `a`, shifted by `shift` in theta14,
/// to the nearest preimage of `b`.
inline double preimage_shift_deviation(const std::vector<ExtractionBranch>& a,
                                       const std::vector<ExtractionBranch>& b, double shift) {
    double worst = 0;
    for (const auto& x : a) {
        AngleSet14 expect = x.angles;
        expect(14) = fold_periodic(expect(14) + shift, 0, kPi);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& y : b) {
            best = std::min(best, angle_distance(expect, y.angles));
        }
        worst = std::max(worst, best);
    }
    return worst;
}

/// theta14 shift under Y(-u) on qubit 3; cos 2 theta13 slope of the
/// reparametrization induced by V = Z(-theta13) Y(-theta14); and a control
/// where V = X-rotation on qubit 3 must move more than one angle.
inline std::vector<GoFReport> invariance_and_jacobian_suite(std::uint64_t seed,
                                                            const StatsConfig& cfg = {}) {
    const RandomStream base(seed, 0x1D);
    double shift_dev = 0, slope_dev = 0;
    std::size_t min_changed = 14;
    for (std::size_t t = 0; t < cfg.identity_trials; ++t) {
        RandomStream rng = base.substream(t);
        const AngleSet14 theta = sample_angles14(rng);
        const StateVector psi = build_state_3q(theta);

        // theta14 shift: every preimage moves by -u in theta14 only.
        const double u = rng.uniform(0, kPi);
        const auto before = extract_preimages(psi);
        const auto after = extract_preimages(apply_ry(psi, 2, -u));
        shift_dev = std::max(shift_dev, preimage_shift_deviation(before, after, -u));
        AngleSet14 own = theta;
        own(14) = fold_periodic(own(14) - u, 0, kPi);
        double own_best = std::numeric_limits<double>::infinity();
        for (const auto& y : after) {
            own_best = std::min(own_best, angle_distance(own, y.angles));
        }
        shift_dev = std::max(shift_dev, own_best);

        // Slope of theta14' in theta14 under V = Z(-theta13) Y(-theta14).
        auto transformed = [&](double eps) {
            AngleSet14 moved = theta;
            moved(14) += eps;
            StateVector s = build_state_3q(moved);
            s = apply_ry(s, 2, -theta(14));
            s = apply_rz(s, 2, -theta(13));
            AngleSet14 ref = theta;
            ref(13) = 0;
            ref(14) = 0;
            return extract_angles(s, BranchChoice::nearest(ref));
        };
        const AngleSet14 a0 = transformed(0);
        const AngleSet14 a1 = transformed(cfg.slope_eps);
        const double slope = circular_difference(a1(14), a0(14), kPi) / cfg.slope_eps;
        slope_dev = std::max(slope_dev, std::abs(slope - std::cos(2 * theta(13))));

        // Control: a rotation about X does not act on theta14 alone.
        const double v = rng.uniform(0.2, kPi / 2 - 0.2);
        const StateVector rotated = apply_single(
            psi, 2, {cplx{std::cos(v)}, cplx{0, -std::sin(v)}, cplx{0, -std::sin(v)},
                     cplx{std::cos(v)}});
        const AngleSet14 moved = extract_angles(rotated, BranchChoice::nearest(theta));
        std::size_t changed = 0;
        for (std::size_t k = 1; k <= 14; ++k) {
            AngleSet14 one = theta;
            one(k) = moved(k);
            if (angle_distance(one, theta) > 1e-6) {
                ++changed;
            }
        }
        min_changed = std::min(min_changed, changed);
    }
    GoFReport shift;
    shift.name = "theta14 shift under Y(-u) on qubit 3";
    shift.kind = TestKind::Deviation;
    shift.statistic = shift.value = shift_dev;
    shift.tolerance = cfg.shift_tol;
    shift.n = cfg.identity_trials;
    shift.passed = shift_dev < cfg.shift_tol;

    GoFReport slope;
    slope.name = "d theta14' / d theta14 = cos 2 theta13";
    slope.kind = TestKind::Deviation;
    slope.statistic = slope.value = slope_dev;
    slope.tolerance = cfg.slope_tol;
    slope.n = cfg.identity_trials;
    slope.passed = slope_dev < cfg.slope_tol;

    GoFReport control;
    control.name = "X rotation on qubit 3 moves several angles";
    control.kind = TestKind::Deviation;
    control.value = static_cast<double>(min_changed);
    control.target = 2;
    control.n = cfg.identity_trials;
    control.passed = min_changed >= 2;
    return {shift, slope, control};
}

// ---------------------------------------------------------------------------
// Two qubits

/// Smaller eigenvalue of the one-qubit reduced density matrix.
inline double schmidt_lambda(const StateVector& s) {
    if (s.n_qubits() != 2) {
        throw std::invalid_argument("schmidt_lambda: expected a 2-qubit state");
    }
    const double det = std::abs(s[0] * s[3] - s[1] * s[2]) / s.norm_squared();
    return 0.5 * (1 - std::sqrt(std::max(0.0, 1 - 4 * det * det)));
}

/// Chi^2 of the Schmidt eigenvalue against the density (1 - 2 lambda)^2 on
/// [0, 1/2].
inline GoFReport schmidt_lambda_test_2q(const std::vector<StateVector>& states,
                                        const StatsConfig& cfg = {}) {
    std::vector<double> lam;
    lam.reserve(states.size());
    for (const auto& s : states) {
        lam.push_back(schmidt_lambda(s));
    }
    return chi_square_1d("schmidt lambda", lam,
                         [](double x) { return (1 - 2 * x) * (1 - 2 * x); }, 0, 0.5, cfg);
}

inline bool all_passed(const std::vector<GoFReport>& reports) {
    return std::all_of(reports.begin(), reports.end(), [](const GoFReport& r) { return r.passed; });
}

}  // namespace q3haar
