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

/// \file extract.hpp
/// Inverse of the three-qubit circuit: angles from a state.
///
/// The state is peeled gate by gate from the end of the circuit:
///
///   1. write psi = w |w1 w2 w3> + |w1perp> |xi> by finding a qubit-1
///      direction whose 2x2 coefficient slice is singular;
///   2. theta8, theta9 from w1 and theta11, theta12 from w2;
///   3. theta14 and theta13 bring the two q1=1 vectors of qubit 3 to
///      bit-flip partners;
///   4. undo CNOT(2->3), read theta10 from the q2 factor of the q1=1 branch;
///   5. the q3 Euler angles theta4..theta6 map (chi1, chi2) onto (v, X v);
///   6. undo CNOT(1->3) and read theta1, theta2, theta3, theta7 off
///      cos t1 |0 0 v> + e^{i tau} sin t1 |1 w5 v>.
///
/// The map from angles to states is not injective on the parameter box:
/// a generic state has two singular directions in step 1 and two axis signs
/// in step 3, so four angle sets in range rebuild it. `extract_preimages`
/// returns all of them; `extract_angles` picks one by a BranchPolicy.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "q3haar/angles.hpp"
#include "q3haar/circuits.hpp"
#include "q3haar/density.hpp"
#include "q3haar/random.hpp"
#include "q3haar/statevec.hpp"

namespace q3haar {

class DegenerateState : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kExtractTol = 1e-10;

/// cos phi |0> + e^{i xi} sin phi |1>, up to a global phase.
struct QubitPolarForm {
    double phi = 0;  // [0, pi/2]
    double xi = 0;   // [0, 2 pi)
};

/// Polar form of a (not necessarily normalized) qubit vector. The phase is
/// set to 0 when either component vanishes.
inline QubitPolarForm polar_form(const Qubit& v) {
    const double a0 = std::abs(v[0]);
    const double a1 = std::abs(v[1]);
    QubitPolarForm p;
    p.phi = std::atan2(a1, a0);
    const double scale = std::max(a0, a1);
    if (a0 > 1e-14 * scale && a1 > 1e-14 * scale) {
        p.xi = fold_periodic(std::arg(v[1]) - std::arg(v[0]), 0, 2 * kPi);
    }
    return p;
}

inline Qubit qubit_from_polar(const QubitPolarForm& p) {
    return {cplx{std::cos(p.phi)}, std::polar(std::sin(p.phi), p.xi)};
}

/// Orthogonal complement (-conj v1, conj v0); det[v, perp(v)] = |v|^2.
inline Qubit orthogonal(const Qubit& v) { return {-std::conj(v[1]), std::conj(v[0])}; }

inline Qubit normalized(const Qubit& v) {
    const double n = norm(v);
    return {v[0] / n, v[1] / n};
}

/// Two-qubit coefficient block, index 2 * b_a + b_b.
using Block2 = std::array<cplx, 4>;

/// psi = weight |w1 w2 w3> + |w1perp> |xi>.
struct CanonicalSplit {
    Qubit omega1{cplx{1}, cplx{}};
    Qubit omega1_perp{cplx{}, cplx{1}};
    Qubit omega2{cplx{1}, cplx{}};
    Qubit omega3{cplx{1}, cplx{}};
    cplx weight{};
    Block2 xi{};  // unnormalized (q2, q3) vector
    bool product_term_vanishes = false;

    StateVector reassemble() const {
        StateVector out(3);
        for (std::size_t i = 0; i < 8; ++i) {
            const std::size_t b1 = i >> 2, b2 = (i >> 1) & 1, b3 = i & 1;
            out[i] = weight * omega1[b1] * omega2[b2] * omega3[b3] + omega1_perp[b1] * xi[i & 3];
        }
        return out;
    }
};

namespace detail {

inline double block_norm(const Block2& m) {
    double s = 0;
    for (const cplx& z : m) {
        s += std::norm(z);
    }
    return std::sqrt(s);
}

/// Best rank-one factors of a 2x2 block m ~ s |col><conj row|: the largest
/// column as the left factor, the largest row as the right factor, both
/// normalized. Exact when m has rank one.
struct RankOne {
    Qubit left{cplx{1}, cplx{}};
    Qubit right{cplx{1}, cplx{}};
    cplx scale{};
};

inline RankOne rank_one(const Block2& m) {
    RankOne r;
    const double c0 = std::norm(m[0]) + std::norm(m[2]);
    const double c1 = std::norm(m[1]) + std::norm(m[3]);
    const double r0 = std::norm(m[0]) + std::norm(m[1]);
    const double r1 = std::norm(m[2]) + std::norm(m[3]);
    if (std::max(c0, c1) <= 0) {
        return r;
    }
    r.left = c0 >= c1 ? Qubit{m[0], m[2]} : Qubit{m[1], m[3]};
    r.right = r0 >= r1 ? Qubit{m[0], m[1]} : Qubit{m[2], m[3]};
    r.left = normalized(r.left);
    r.right = normalized(r.right);
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            r.scale += std::conj(r.left[i] * r.right[j]) * m[2 * i + j];
        }
    }
    return r;
}

/// Slice of a 3-qubit state with qubit 1 fixed to `b1`, as a (q2, q3) block.
inline Block2 slice_q1(const StateVector& s, std::size_t b1) {
    return {s[4 * b1], s[4 * b1 + 1], s[4 * b1 + 2], s[4 * b1 + 3]};
}

inline Qubit slice_q3(const StateVector& s, std::size_t b1, std::size_t b2) {
    return {s[4 * b1 + 2 * b2], s[4 * b1 + 2 * b2 + 1]};
}

inline bool negligible(double x, double scale) { return std::abs(x) <= 1e-14 * scale; }

/// Magnitude-weighted phase of a vector: arg sum |z| z.
template <typename Range>
double branch_phase(const Range& r) {
    cplx acc{};
    for (const cplx& z : r) {
        acc += std::abs(z) * z;
    }
    return std::arg(acc);
}

}  // namespace detail

/// All canonical splits of psi, one per singular direction of the qubit-1
/// pencil det(a T0 + b T1) = A a^2 + B a b + C b^2, sorted canonically
/// (smaller phi of w1, then smaller xi). A double root yields one split.
/// When the pencil vanishes identically (qubit 1 unentangled from a product
/// of qubits 2, 3, or psi fully separable) the dominant qubit-1 Schmidt
/// direction is used.
inline std::vector<CanonicalSplit> canonical_forms(const StateVector& psi) {
    if (psi.n_qubits() != 3) {
        throw std::invalid_argument("canonical_forms: expected a 3-qubit state");
    }
    const Block2 t0 = detail::slice_q1(psi, 0);
    const Block2 t1 = detail::slice_q1(psi, 1);
    const cplx A = t0[0] * t0[3] - t0[1] * t0[2];
    const cplx C = t1[0] * t1[3] - t1[1] * t1[2];
    const cplx B = t0[0] * t1[3] + t1[0] * t0[3] - t0[1] * t1[2] - t1[1] * t0[2];
    const double scale = psi.norm_squared();

    // Bras (a, b) with det(a T0 + b T1) = 0.
    std::vector<Qubit> bras;
    if (std::max({std::abs(A), std::abs(B), std::abs(C)}) <= 1e-24 * std::max(scale, 1e-300)) {
        // Every combination is already rank one: take the qubit-1 direction
        // carrying the most weight (largest eigenvector of the 2x2 reduced
        // density matrix).
        double r00 = 0, r11 = 0;
        cplx r01{};
        for (std::size_t j = 0; j < 4; ++j) {
            r00 += std::norm(t0[j]);
            r11 += std::norm(t1[j]);
            r01 += t0[j] * std::conj(t1[j]);
        }
        const double half_gap = 0.5 * (r00 - r11);
        const double lam = 0.5 * (r00 + r11) + std::hypot(half_gap, std::abs(r01));
        Qubit ket = std::abs(r01) > 0 ? (r00 >= r11 ? Qubit{lam - r11, std::conj(r01)}
                                                     : Qubit{r01, lam - r00})
                                      : (r00 >= r11 ? Qubit{1.0, 0.0} : Qubit{0.0, 1.0});
        ket = normalized(ket);
        bras.push_back({std::conj(ket[0]), std::conj(ket[1])});
    } else {
        cplx d = std::sqrt(B * B - 4.0 * A * C);
        if ((std::conj(B) * d).real() < 0) {
            d = -d;
        }
        const cplx q = -0.5 * (B + d);
        for (const Qubit& cand : {Qubit{q, A}, Qubit{C, q}}) {
            if (norm(cand) > 0) {
                bras.push_back(normalized(cand));
            }
        }
        if (bras.empty()) {
            // B = d = 0 and A = C = 0 cannot happen outside the branch above.
            bras.push_back({1.0, 0.0});
        }
    }

    std::vector<CanonicalSplit> out;
    for (const Qubit& bra : bras) {
        CanonicalSplit cs;
        cs.omega1 = {std::conj(bra[0]), std::conj(bra[1])};
        const cplx lead = std::abs(cs.omega1[0]) > 1e-15 ? cs.omega1[0] : cs.omega1[1];
        const cplx unphase = std::conj(lead) / std::abs(lead);
        cs.omega1 = {cs.omega1[0] * unphase, cs.omega1[1] * unphase};
        const Qubit bra_fixed{std::conj(cs.omega1[0]), std::conj(cs.omega1[1])};
        cs.omega1_perp = orthogonal(cs.omega1);
        bool duplicate = false;
        for (const auto& prev : out) {
            if (std::abs(inner(prev.omega1, cs.omega1)) > 1 - 1e-12) {
                duplicate = true;
            }
        }
        if (duplicate) {
            continue;
        }
        Block2 p{}, x{};
        for (std::size_t j = 0; j < 4; ++j) {
            p[j] = bra_fixed[0] * t0[j] + bra_fixed[1] * t1[j];
            x[j] = std::conj(cs.omega1_perp[0]) * t0[j] + std::conj(cs.omega1_perp[1]) * t1[j];
        }
        cs.xi = x;
        if (detail::block_norm(p) <= kExtractTol * std::sqrt(scale)) {
            cs.product_term_vanishes = true;
            cs.xi = x;
        } else {
            const detail::RankOne r = detail::rank_one(p);
            cs.omega2 = r.left;
            cs.omega3 = r.right;
            cs.weight = r.scale;
        }
        out.push_back(cs);
    }
    std::sort(out.begin(), out.end(), [](const CanonicalSplit& a, const CanonicalSplit& b) {
        const QubitPolarForm pa = polar_form(a.omega1), pb = polar_form(b.omega1);
        if (std::abs(pa.phi - pb.phi) > 1e-12) {
            return pa.phi < pb.phi;
        }
        return pa.xi < pb.xi;
    });
    return out;
}

/// Canonical split (first of `canonical_forms`). Throws DegenerateState when
/// no direction isolates a nonzero product term.
inline CanonicalSplit canonical_form(const StateVector& psi) {
    const auto all = canonical_forms(psi);
    for (const auto& cs : all) {
        if (!cs.product_term_vanishes) {
            return cs;
        }
    }
    // psi = |w1perp> |xi> with xi entangled: the only product term is zero.
    throw DegenerateState("canonical_form: product term vanishes in every singular direction");
}

// ---------------------------------------------------------------------------
// theta14, theta13

struct Theta14Result {
    double principal = 0;  // [0, pi)
    double alternate = 0;  // principal + pi/2 folded into [0, pi)
    bool indeterminate = false;
};

/// -tan 2 theta14 = (cos 2phi1 + cos 2phi2) / (sin 2phi1 cos xi1 + sin 2phi2 cos xi2).
/// Both solutions in [0, pi) are returned; they correspond to the two signs
/// of the rotation axis.
inline Theta14Result theta14_from(const QubitPolarForm& g1, const QubitPolarForm& g2) {
    const double num = std::cos(2 * g1.phi) + std::cos(2 * g2.phi);
    const double den = std::sin(2 * g1.phi) * std::cos(g1.xi) + std::sin(2 * g2.phi) * std::cos(g2.xi);
    Theta14Result r;
    if (std::abs(num) < 1e-12 && std::abs(den) < 1e-12) {
        r.indeterminate = true;
        r.principal = 0;
    } else {
        r.principal = fold_periodic(0.5 * std::atan2(-num, den), 0, kPi);
    }
    r.alternate = fold_periodic(r.principal + kPi / 2, 0, kPi);
    return r;
}

/// theta13 = -(delta1 + delta2) / 4 folded into [-pi/4, pi/4).
inline double theta13_from(double delta1, double delta2) {
    return fold_periodic(-(delta1 + delta2) / 4, -kPi / 4, kPi / 2);
}

/// Relative phase delta of v ~ e^{i delta} cos k |0> + sin k |1>; nullopt when
/// either component vanishes.
inline std::optional<double> relative_phase(const Qubit& v) {
    const double scale = norm(v);
    if (detail::negligible(std::abs(v[0]), scale * 1e2) ||
        detail::negligible(std::abs(v[1]), scale * 1e2)) {
        return std::nullopt;
    }
    return std::arg(v[0]) - std::arg(v[1]);
}

// ---------------------------------------------------------------------------
// theta4..theta6

struct ZyzAngles {
    double theta4 = 0, theta5 = 0, theta6 = 0;
    double theta3 = 0;      // angle of v = cos t3 |0> + sin t3 |1>
    double residual = 0;    // postcondition residual
    bool degenerate = false;
    bool used_fallback = false;
};

/// R = Z(t6) Y(t5) Z(t4) as a 2x2 matrix (row-major).
inline std::array<cplx, 4> zyz_matrix(double t4, double t5, double t6) {
    const cplx e4m = std::polar(1.0, -t4), e4p = std::polar(1.0, t4);
    const cplx e6m = std::polar(1.0, -t6), e6p = std::polar(1.0, t6);
    const double c = std::cos(t5), s = std::sin(t5);
    return {e6m * c * e4m, -e6m * s * e4p, e6p * s * e4m, e6p * c * e4p};
}

namespace detail {

inline Qubit apply_adjoint(const std::array<cplx, 4>& m, const Qubit& v) {
    return {std::conj(m[0]) * v[0] + std::conj(m[2]) * v[1],
            std::conj(m[1]) * v[0] + std::conj(m[3]) * v[1]};
}

/// 1 - |<v|R^dag x1>| + 1 - |<X v|R^dag x2>| for normalized x1, x2.
inline double zyz_residual(const Qubit& x1, const Qubit& x2, double t3, double t4, double t5,
                           double t6) {
    const auto m = zyz_matrix(t4, t5, t6);
    const Qubit y1 = apply_adjoint(m, x1);
    const Qubit y2 = apply_adjoint(m, x2);
    const Qubit v{std::cos(t3), std::sin(t3)};
    const Qubit xv{std::sin(t3), std::cos(t3)};
    return (1 - std::abs(inner(v, y1))) + (1 - std::abs(inner(xv, y2)));
}

/// Euler angles of an SU(2) matrix r = Z(t6) Y(t5) Z(t4), with conventions
/// for the gimbal-locked cases.
inline void euler_zyz(const std::array<cplx, 4>& r, ZyzAngles& out) {
    const double a00 = std::abs(r[0]), a10 = std::abs(r[2]);
    out.theta5 = std::atan2(a10, a00);
    if (a10 <= 1e-14) {
        out.theta6 = 0;
        out.theta4 = fold_periodic(-std::arg(r[0]), 0, kPi);
    } else if (a00 <= 1e-14) {
        out.theta4 = 0;
        out.theta6 = fold_periodic(std::arg(r[2]), 0, kPi);
    } else {
        const double a = -std::arg(r[0]);
        const double b = std::arg(r[2]);
        out.theta6 = fold_periodic(0.5 * (a + b), 0, kPi);
        out.theta4 = fold_periodic(0.5 * (a - b), 0, kPi);
    }
}

/// Nelder-Mead on the postcondition residual over (t4, t5, t6), t3 fixed.
inline ZyzAngles refine_zyz(const Qubit& x1, const Qubit& x2, ZyzAngles start) {
    using P = std::array<double, 3>;
    auto f = [&](const P& p) { return zyz_residual(x1, x2, start.theta3, p[0], p[1], p[2]); };
    std::array<P, 4> simplex{};
    simplex[0] = {start.theta4, start.theta5, start.theta6};
    for (std::size_t k = 0; k < 3; ++k) {
        simplex[k + 1] = simplex[0];
        simplex[k + 1][k] += 0.1;
    }
    std::array<double, 4> val{};
    for (std::size_t k = 0; k < 4; ++k) {
        val[k] = f(simplex[k]);
    }
    for (int iter = 0; iter < 4000; ++iter) {
        std::array<std::size_t, 4> idx{0, 1, 2, 3};
        std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return val[a] < val[b]; });
        const std::size_t best = idx[0], worst = idx[3], second = idx[2];
        if (val[worst] - val[best] < 1e-18) {
            break;
        }
        P centroid{};
        for (std::size_t k : {idx[0], idx[1], idx[2]}) {
            for (std::size_t d = 0; d < 3; ++d) {
                centroid[d] += simplex[k][d] / 3;
            }
        }
        auto along = [&](double t) {
            P p;
            for (std::size_t d = 0; d < 3; ++d) {
                p[d] = centroid[d] + t * (simplex[worst][d] - centroid[d]);
            }
            return p;
        };
        const P refl = along(-1);
        const double fr = f(refl);
        if (fr < val[best]) {
            const P exp = along(-2);
            const double fe = f(exp);
            if (fe < fr) {
                simplex[worst] = exp;
                val[worst] = fe;
            } else {
                simplex[worst] = refl;
                val[worst] = fr;
            }
        } else if (fr < val[second]) {
            simplex[worst] = refl;
            val[worst] = fr;
        } else {
            const P con = along(0.5);
            const double fc = f(con);
            if (fc < val[worst]) {
                simplex[worst] = con;
                val[worst] = fc;
            } else {
                for (std::size_t k : {idx[1], idx[2], idx[3]}) {
                    for (std::size_t d = 0; d < 3; ++d) {
                        simplex[k][d] = 0.5 * (simplex[k][d] + simplex[best][d]);
                    }
                    val[k] = f(simplex[k]);
                }
            }
        }
    }
    const std::size_t best =
        static_cast<std::size_t>(std::min_element(val.begin(), val.end()) - val.begin());
    ZyzAngles out = start;
    // Re-derive canonical Euler angles from the optimized matrix.
    euler_zyz(zyz_matrix(simplex[best][0], simplex[best][1], simplex[best][2]), out);
    out.residual = zyz_residual(x1, x2, out.theta3, out.theta4, out.theta5, out.theta6);
    out.used_fallback = true;
    return out;
}

}  // namespace detail

/// Finds R = Z(t6) Y(t5) Z(t4) and v = cos t3 |0> + sin t3 |1> with
/// R^dag chi1 ~ v and R^dag chi2 ~ X v (each up to a phase). Either input may
/// be zero; the missing constraint is then replaced by the convention
/// t3 = t4 = 0.
inline ZyzAngles invert_q3_zyz(const Qubit& chi1, const Qubit& chi2) {
    const double n1 = norm(chi1), n2 = norm(chi2);
    const double scale = std::max(n1, n2);
    ZyzAngles z;
    if (scale == 0) {
        z.degenerate = true;
        return z;
    }
    const bool has1 = n1 > 1e-12 * scale;
    const bool has2 = n2 > 1e-12 * scale;
    if (!has1 || !has2) {
        // Only one column of R is constrained: R |0> ~ x with theta4 = 0.
        const Qubit x = has1 ? normalized(chi1) : orthogonal(normalized(chi2));
        z.degenerate = true;
        z.theta3 = 0;
        z.theta4 = 0;
        z.theta5 = std::atan2(std::abs(x[1]), std::abs(x[0]));
        z.theta6 = (std::abs(x[0]) > 1e-14 && std::abs(x[1]) > 1e-14)
                       ? fold_periodic(0.5 * (std::arg(x[1]) - std::arg(x[0])), 0, kPi)
                       : 0.0;
        if (std::abs(x[1]) <= 1e-14) {
            z.theta4 = fold_periodic(-std::arg(x[0]), 0, kPi);
        }
        return z;
    }
    const Qubit x1 = normalized(chi1);
    const Qubit x2 = normalized(chi2);
    const Qubit x1p = orthogonal(x1);
    const cplx o = inner(x1, x2);
    const cplx p = inner(x1p, x2);
    z.theta3 = 0.5 * std::atan2(std::abs(o), std::abs(p));
    const double delta =
        (std::abs(o) > 1e-14 && std::abs(p) > 1e-14) ? std::arg(p) - std::arg(o) : 0.0;
    // R = e^{-i delta/2} (x1 v^T + e^{i delta} x1p vp^T), vp = (-s3, c3).
    const double c3 = std::cos(z.theta3), s3 = std::sin(z.theta3);
    const cplx ph = std::polar(1.0, -delta / 2);
    const cplx e = std::polar(1.0, delta);
    std::array<cplx, 4> r{};
    for (std::size_t i = 0; i < 2; ++i) {
        r[2 * i] = ph * (x1[i] * c3 - e * x1p[i] * s3);
        r[2 * i + 1] = ph * (x1[i] * s3 + e * x1p[i] * c3);
    }
    detail::euler_zyz(r, z);
    z.residual = detail::zyz_residual(x1, x2, z.theta3, z.theta4, z.theta5, z.theta6);
    if (z.residual > 1e-9) {
        z = detail::refine_zyz(x1, x2, z);
    }
    return z;
}

// ---------------------------------------------------------------------------
// Full pipeline

struct ExtractionBranch {
    AngleSet14 angles;
    std::size_t root = 0;  // index into canonical_forms
    int axis = 0;          // 0: principal theta14, 1: alternate
    double fidelity = 0;   // of the rebuilt state
    bool degenerate = false;
};

struct ExtractionResult {
    AngleSet14 angles;
    double fidelity = 0;
    bool degenerate = false;   // a convention replaced an undetermined angle
    std::size_t branch = 0;    // index of the chosen branch
    std::vector<ExtractionBranch> branches;
};

namespace detail {

inline void peel_tail(const StateVector& psi, const CanonicalSplit& cs, std::size_t root_index,
                      std::vector<ExtractionBranch>& out) {
    AngleSet14 base;
    bool degenerate = cs.product_term_vanishes;

    const QubitPolarForm p1 = polar_form(cs.omega1);
    base(8) = p1.phi;
    base(9) = fold_periodic(p1.xi / 2, 0, kPi);
    StateVector s = apply_rz(psi, 0, -base(9));
    s = apply_ry(s, 0, -base(8));

    const QubitPolarForm p2 = polar_form(cs.omega2);
    base(11) = p2.phi;
    base(12) = fold_periodic(p2.xi / 2, 0, kPi);
    s = apply_rz(s, 1, -base(12));
    s = apply_ry(s, 1, -base(11));

    const Qubit g1 = slice_q3(s, 1, 0);
    const Qubit g2 = slice_q3(s, 1, 1);
    const double scale = s.norm();
    const bool has_g1 = norm(g1) > 1e-12 * scale;
    const bool has_g2 = norm(g2) > 1e-12 * scale;

    std::vector<std::pair<double, int>> axes;
    if (has_g1 && has_g2) {
        const Theta14Result t14 = theta14_from(polar_form(g1), polar_form(g2));
        degenerate = degenerate || t14.indeterminate;
        axes = {{t14.principal, 0}, {t14.alternate, 1}};
    } else {
        // One of the q1=1 vectors vanishes: any (theta13, theta14) works.
        degenerate = true;
        axes = {{0.0, 0}};
    }

    for (const auto& [t14, axis] : axes) {
        AngleSet14 a = base;
        bool deg = degenerate;
        a(14) = t14;
        const auto d1 = relative_phase(apply_ry(-t14, g1));
        const auto d2 = relative_phase(apply_ry(-t14, g2));
        if (has_g1 && has_g2 && d1 && d2) {
            a(13) = theta13_from(*d1, *d2);
        } else {
            a(13) = 0;
            deg = true;
        }
        StateVector t = apply_ry(s, 2, -a(14));
        t = apply_rz(t, 2, -a(13));
        t = apply_cnot(t, 1, 2);

        // q1=1 branch is w4 (x) chi2 on (q2, q3).
        const RankOne b1 = rank_one(slice_q1(t, 1));
        if (std::abs(b1.scale) > 1e-12 * scale && std::abs(b1.left[0]) > 1e-14 &&
            std::abs(b1.left[1]) > 1e-14) {
            a(10) = fold_periodic(0.5 * std::arg(b1.left[1] / b1.left[0]), 0, kPi);
        } else {
            a(10) = 0;
        }
        t = apply_rz(t, 1, -a(10));

        const Qubit chi1 = slice_q3(t, 0, 0);
        const Qubit chi2 = std::abs(b1.scale) > 1e-12 * scale ? b1.right : Qubit{};
        const ZyzAngles z = invert_q3_zyz(chi1, chi2);
        deg = deg || z.degenerate;
        a(4) = z.theta4;
        a(5) = z.theta5;
        a(6) = z.theta6;
        t = apply_rz(t, 2, -a(6));
        t = apply_ry(t, 2, -a(5));
        t = apply_rz(t, 2, -a(4));
        t = apply_cnot(t, 0, 2);

        // t ~ cos t1 |0 0 v> + e^{i tau} sin t1 |1 w5 v>.
        const std::array<cplx, 4> b0{t[0], t[1], t[2], t[3]};
        const std::array<cplx, 4> bb{t[4], t[5], t[6], t[7]};
        double n0 = 0, n1 = 0, q3_0 = 0, q3_1 = 0;
        for (std::size_t j = 0; j < 4; ++j) {
            n0 += std::norm(b0[j]);
            n1 += std::norm(bb[j]);
        }
        for (std::size_t i = 0; i < 8; ++i) {
            ((i & 1) ? q3_1 : q3_0) += std::norm(t[i]);
        }
        a(1) = std::atan2(std::sqrt(n1), std::sqrt(n0));
        a(3) = std::atan2(std::sqrt(q3_1), std::sqrt(q3_0));
        const double w5_0 = std::sqrt(std::norm(bb[0]) + std::norm(bb[1]));
        const double w5_1 = std::sqrt(std::norm(bb[2]) + std::norm(bb[3]));
        a(2) = n1 > 1e-24 * scale * scale ? 0.5 * std::atan2(w5_0, w5_1) : 0.0;
        if (n0 > 1e-24 * scale * scale && n1 > 1e-24 * scale * scale) {
            a(7) = fold_periodic(0.5 * (branch_phase(bb) - branch_phase(b0)), 0, kPi);
        } else {
            a(7) = 0;
            deg = true;
        }

        ExtractionBranch br;
        br.angles = a;
        br.root = root_index;
        br.axis = axis;
        br.degenerate = deg;
        br.fidelity = q3haar::fidelity(build_state_3q(a), psi);
        out.push_back(br);
    }
}

}  // namespace detail

/// Every in-range angle set the pipeline finds for psi (generically four).
inline std::vector<ExtractionBranch> extract_preimages(const StateVector& psi) {
    if (psi.n_qubits() != 3) {
        throw std::invalid_argument("extract: expected a 3-qubit state");
    }
    if (!(psi.norm() > 0) || !std::isfinite(psi.norm())) {
        throw std::invalid_argument("extract: state must be nonzero and finite");
    }
    const StateVector unit = psi.normalized();
    const auto splits = canonical_forms(unit);
    std::vector<ExtractionBranch> out;
    for (std::size_t r = 0; r < splits.size(); ++r) {
        detail::peel_tail(unit, splits[r], r, out);
    }
    return out;
}

enum class BranchPolicy {
    Canonical,  // first root, theta14 in [0, pi/2)
    Nearest,    // closest to a reference angle set
    Uniform,    // uniformly at random among the valid branches
};

struct BranchChoice {
    BranchPolicy policy = BranchPolicy::Canonical;
    AngleSet14 reference{};
    RandomStream* rng = nullptr;

    static BranchChoice canonical() { return {}; }
    static BranchChoice nearest(const AngleSet14& ref) { return {BranchPolicy::Nearest, ref, nullptr}; }
    static BranchChoice uniform(RandomStream& rng) { return {BranchPolicy::Uniform, {}, &rng}; }
};

/// Runs the pipeline and selects one branch. Branches whose rebuild fidelity
/// falls short of 1 - 1e-9 are only used when no branch reaches it.
inline ExtractionResult extract_angles_detailed(const StateVector& psi,
                                                const BranchChoice& choice = {}) {
    ExtractionResult res;
    res.branches = extract_preimages(psi);
    std::vector<std::size_t> good;
    for (std::size_t i = 0; i < res.branches.size(); ++i) {
        if (res.branches[i].fidelity >= 1 - 1e-9) {
            good.push_back(i);
        }
    }
    if (good.empty()) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < res.branches.size(); ++i) {
            if (res.branches[i].fidelity > res.branches[best].fidelity) {
                best = i;
            }
        }
        good.push_back(best);
    }
    std::size_t pick = good.front();
    switch (choice.policy) {
        case BranchPolicy::Canonical:
            for (std::size_t i : good) {
                if (res.branches[i].root == res.branches[good.front()].root &&
                    res.branches[i].angles(14) < kPi / 2) {
                    pick = i;
                    break;
                }
            }
            break;
        case BranchPolicy::Nearest: {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i : good) {
                const double d = angle_distance(res.branches[i].angles, choice.reference);
                if (d < best) {
                    best = d;
                    pick = i;
                }
            }
            break;
        }
        case BranchPolicy::Uniform:
            if (choice.rng == nullptr) {
                throw std::invalid_argument("extract: uniform branch policy needs a random stream");
            }
            pick = good[static_cast<std::size_t>(choice.rng->uniform() *
                                                 static_cast<double>(good.size()))];
            break;
    }
    res.branch = pick;
    res.angles = res.branches[pick].angles;
    res.fidelity = res.branches[pick].fidelity;
    res.degenerate = res.branches[pick].degenerate;
    return res;
}

inline AngleSet14 extract_angles(const StateVector& psi, const BranchChoice& choice = {}) {
    return extract_angles_detailed(psi, choice).angles;
}

}  // namespace q3haar
