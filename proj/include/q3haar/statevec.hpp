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

/// \file statevec.hpp
/// Dense state vectors for one to three qubits and the three elementary gates
/// used by the random-state circuits.
///
/// Basis ordering is |q1 q2 ... qn> with qubit 1 the most significant bit.
/// Qubits are addressed by zero-based index internally, so "qubit 1" of the
/// circuit diagrams is index 0.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace q3haar {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// Amplitudes of a single qubit, a|0> + b|1>. Not necessarily normalized.
using Qubit = std::array<cplx, 2>;

class StateVector {
 public:
    static constexpr int kMaxQubits = 3;
    static constexpr std::size_t kMaxDim = std::size_t{1} << kMaxQubits;

    /// |0...0> on `n_qubits` qubits.
    explicit StateVector(int n_qubits = 3) : n_(n_qubits) {
        if (n_qubits < 1 || n_qubits > kMaxQubits) {
            throw std::invalid_argument("StateVector: n_qubits must be in [1, 3], got " +
                                        std::to_string(n_qubits));
        }
        amps_.fill(cplx{});
        amps_[0] = 1.0;
    }

    static StateVector basis(int n_qubits, std::size_t index) {
        StateVector s(n_qubits);
        if (index >= s.dim()) {
            throw std::invalid_argument("StateVector::basis: index out of range");
        }
        s.amps_[0] = 0.0;
        s.amps_[index] = 1.0;
        return s;
    }

    /// Builds a state from raw amplitudes. The length must be a power of two
    /// between 2 and 8. No normalization is applied.
    static StateVector from_amplitudes(std::span<const cplx> amps) {
        int n = 0;
        while ((std::size_t{1} << n) < amps.size()) {
            ++n;
        }
        if ((std::size_t{1} << n) != amps.size() || n < 1 || n > kMaxQubits) {
            throw std::invalid_argument("StateVector: amplitude count must be 2, 4 or 8, got " +
                                        std::to_string(amps.size()));
        }
        StateVector s(n);
        std::copy(amps.begin(), amps.end(), s.amps_.begin());
        return s;
    }

    static StateVector from_amplitudes(std::initializer_list<cplx> amps) {
        return from_amplitudes(std::span<const cplx>(amps.begin(), amps.size()));
    }

    int n_qubits() const { return n_; }
    std::size_t dim() const { return std::size_t{1} << n_; }

    std::span<const cplx> amplitudes() const { return {amps_.data(), dim()}; }
    std::span<cplx> amplitudes() { return {amps_.data(), dim()}; }

    cplx operator[](std::size_t i) const { return amps_[i]; }
    cplx& operator[](std::size_t i) { return amps_[i]; }

    double norm_squared() const {
        double acc = 0;
        for (std::size_t i = 0; i < dim(); ++i) {
            acc += std::norm(amps_[i]);
        }
        return acc;
    }
    double norm() const { return std::sqrt(norm_squared()); }

    bool is_normalized(double tol = 1e-12) const { return std::abs(norm_squared() - 1.0) <= tol; }

    StateVector normalized() const {
        double n = norm();
        if (!(n > 0)) {
            throw std::domain_error("StateVector::normalized: zero vector");
        }
        StateVector out = *this;
        for (std::size_t i = 0; i < dim(); ++i) {
            out.amps_[i] /= n;
        }
        return out;
    }

    StateVector& operator*=(cplx c) {
        for (std::size_t i = 0; i < dim(); ++i) {
            amps_[i] *= c;
        }
        return *this;
    }

    /// Bit of `qubit` (zero-based, 0 = most significant) in basis index `i`.
    std::size_t bit(std::size_t i, int qubit) const { return (i >> (n_ - 1 - qubit)) & 1U; }
    std::size_t mask(int qubit) const { return std::size_t{1} << (n_ - 1 - qubit); }

 private:
    int n_;
    std::array<cplx, kMaxDim> amps_{};
};

/// <a|b>, conjugate-linear in the first argument.
inline cplx inner(const StateVector& a, const StateVector& b) {
    if (a.n_qubits() != b.n_qubits()) {
        throw std::invalid_argument("inner: dimension mismatch");
    }
    cplx acc{};
    for (std::size_t i = 0; i < a.dim(); ++i) {
        acc += std::conj(a[i]) * b[i];
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Gates

enum class GateKind { RotY, RotZ, Cnot };

/// One gate of a circuit. Rotations either read their angle from a parameter
/// slot (`param` >= 0, angle = sign * params[param]) or carry a fixed `angle`.
///
/// RotZ(t) = exp(-i sz t) = diag(e^{-it}, e^{it});
/// RotY(t) = exp(-i sy t) = [[cos t, -sin t], [sin t, cos t]].
struct GateOp {
    GateKind kind = GateKind::RotY;
    int qubit = 0;
    int control = -1;
    int target = -1;
    int param = -1;
    int sign = 1;
    double angle = 0.0;

    static GateOp ry(int qubit, int param, int sign = 1) {
        return {GateKind::RotY, qubit, -1, -1, param, sign, 0.0};
    }
    static GateOp rz(int qubit, int param, int sign = 1) {
        return {GateKind::RotZ, qubit, -1, -1, param, sign, 0.0};
    }
    static GateOp ry_fixed(int qubit, double angle) {
        return {GateKind::RotY, qubit, -1, -1, -1, 1, angle};
    }
    static GateOp rz_fixed(int qubit, double angle) {
        return {GateKind::RotZ, qubit, -1, -1, -1, 1, angle};
    }
    static GateOp cnot(int control, int target) {
        return {GateKind::Cnot, -1, control, target, -1, 1, 0.0};
    }

    bool is_rotation() const { return kind != GateKind::Cnot; }
    bool is_parametrized() const { return is_rotation() && param >= 0; }

    /// Rotation angle for the given parameter vector.
    double resolve(std::span<const double> params) const {
        if (!is_parametrized()) {
            return angle;
        }
        if (static_cast<std::size_t>(param) >= params.size()) {
            throw std::invalid_argument("GateOp: parameter slot out of range");
        }
        return sign * params[static_cast<std::size_t>(param)];
    }

    /// The inverse gate: negated angle for rotations, the same gate for CNOT.
    GateOp inverse() const {
        GateOp g = *this;
        if (is_rotation()) {
            g.sign = -sign;
            g.angle = -angle;
        }
        return g;
    }
};

namespace detail {

inline void check_qubit(const StateVector& s, int q) {
    if (q < 0 || q >= s.n_qubits()) {
        throw std::invalid_argument("gate qubit index " + std::to_string(q) + " out of range for " +
                                    std::to_string(s.n_qubits()) + "-qubit state");
    }
}

/// Applies the 2x2 matrix m (row-major) to `qubit` in place.
inline void apply_1q(StateVector& s, int qubit, const std::array<cplx, 4>& m) {
    const std::size_t mk = s.mask(qubit);
    for (std::size_t i = 0; i < s.dim(); ++i) {
        if (i & mk) {
            continue;
        }
        cplx a0 = s[i];
        cplx a1 = s[i | mk];
        s[i] = m[0] * a0 + m[1] * a1;
        s[i | mk] = m[2] * a0 + m[3] * a1;
    }
}

}  // namespace detail

inline std::array<cplx, 4> ry_matrix(double t) {
    double c = std::cos(t), s = std::sin(t);
    return {cplx{c}, cplx{-s}, cplx{s}, cplx{c}};
}

inline std::array<cplx, 4> rz_matrix(double t) {
    return {std::polar(1.0, -t), cplx{}, cplx{}, std::polar(1.0, t)};
}

inline Qubit apply_matrix(const std::array<cplx, 4>& m, const Qubit& v) {
    return {m[0] * v[0] + m[1] * v[1], m[2] * v[0] + m[3] * v[1]};
}
inline Qubit apply_ry(double t, const Qubit& v) { return apply_matrix(ry_matrix(t), v); }
inline Qubit apply_rz(double t, const Qubit& v) { return apply_matrix(rz_matrix(t), v); }

/// Applies a gate with an explicit rotation angle (ignored for CNOT).
inline StateVector apply_gate(const StateVector& state, const GateOp& gate, double angle) {
    StateVector out = state;
    switch (gate.kind) {
        case GateKind::RotY:
            detail::check_qubit(out, gate.qubit);
            detail::apply_1q(out, gate.qubit, ry_matrix(angle));
            break;
        case GateKind::RotZ:
            detail::check_qubit(out, gate.qubit);
            detail::apply_1q(out, gate.qubit, rz_matrix(angle));
            break;
        case GateKind::Cnot: {
            detail::check_qubit(out, gate.control);
            detail::check_qubit(out, gate.target);
            if (gate.control == gate.target) {
                throw std::invalid_argument("CNOT: control equals target");
            }
            const std::size_t mc = out.mask(gate.control);
            const std::size_t mt = out.mask(gate.target);
            for (std::size_t i = 0; i < out.dim(); ++i) {
                if ((i & mc) && !(i & mt)) {
                    std::swap(out[i], out[i | mt]);
                }
            }
            break;
        }
    }
    return out;
}

/// Applies a gate using its fixed angle. Parametrized gates need the
/// parameter vector; see the overload below.
inline StateVector apply_gate(const StateVector& state, const GateOp& gate) {
    if (gate.is_parametrized()) {
        throw std::invalid_argument("apply_gate: parametrized gate needs parameter values");
    }
    return apply_gate(state, gate, gate.angle);
}

inline StateVector apply_gate(const StateVector& state, const GateOp& gate,
                              std::span<const double> params) {
    return apply_gate(state, gate, gate.resolve(params));
}

inline StateVector apply_ry(const StateVector& s, int qubit, double t) {
    return apply_gate(s, GateOp::ry_fixed(qubit, t));
}
inline StateVector apply_rz(const StateVector& s, int qubit, double t) {
    return apply_gate(s, GateOp::rz_fixed(qubit, t));
}
inline StateVector apply_cnot(const StateVector& s, int control, int target) {
    return apply_gate(s, GateOp::cnot(control, target));
}

enum class Pauli { X, Y, Z };

/// sigma_axis on `qubit`. Used for derivative insertions and observables.
inline StateVector apply_pauli(const StateVector& state, Pauli axis, int qubit) {
    StateVector out = state;
    detail::check_qubit(out, qubit);
    const cplx I{0, 1};
    switch (axis) {
        case Pauli::X:
            detail::apply_1q(out, qubit, {cplx{0}, cplx{1}, cplx{1}, cplx{0}});
            break;
        case Pauli::Y:
            detail::apply_1q(out, qubit, {cplx{0}, -I, I, cplx{0}});
            break;
        case Pauli::Z:
            detail::apply_1q(out, qubit, {cplx{1}, cplx{0}, cplx{0}, cplx{-1}});
            break;
    }
    return out;
}

/// Applies an arbitrary 2x2 matrix (row-major) to one qubit.
inline StateVector apply_single(const StateVector& state, int qubit, const std::array<cplx, 4>& m) {
    StateVector out = state;
    detail::check_qubit(out, qubit);
    detail::apply_1q(out, qubit, m);
    return out;
}

/// Expectation <psi|sigma_z^(qubit)|psi> for a normalized state.
inline double expectation_z(const StateVector& s, int qubit) {
    detail::check_qubit(s, qubit);
    double acc = 0;
    for (std::size_t i = 0; i < s.dim(); ++i) {
        acc += (s.bit(i, qubit) ? -1.0 : 1.0) * std::norm(s[i]);
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Overlaps

/// |<a|b>| for normalized states; invariant under the global phase of either
/// argument. Computed as |<a|b>| / (|a| |b|) and clamped to [0, 1].
inline double fidelity(const StateVector& a, const StateVector& b) {
    if (a.n_qubits() != b.n_qubits()) {
        throw std::invalid_argument("fidelity: dimension mismatch (" + std::to_string(a.n_qubits()) +
                                    " vs " + std::to_string(b.n_qubits()) + " qubits)");
    }
    double f = std::abs(inner(a, b)) / std::sqrt(a.norm_squared() * b.norm_squared());
    return std::clamp(f, 0.0, 1.0);
}

/// Fubini-Study angle arccos |<a|b>| in [0, pi/2].
inline double fubini_study_distance(const StateVector& a, const StateVector& b) {
    return std::acos(fidelity(a, b));
}

/// Tr(rho_A^2) of the reduced state on the qubit subset `subsystem`
/// (zero-based indices). The subset must be nonempty and proper.
inline double reduced_purity(const StateVector& state, std::span<const int> subsystem) {
    const int n = state.n_qubits();
    std::vector<bool> in_a(static_cast<std::size_t>(n), false);
    for (int q : subsystem) {
        if (q < 0 || q >= n) {
            throw std::invalid_argument("reduced_purity: qubit index out of range");
        }
        in_a[static_cast<std::size_t>(q)] = true;
    }
    const auto na = std::count(in_a.begin(), in_a.end(), true);
    if (na == 0 || na == n) {
        throw std::invalid_argument("reduced_purity: subsystem must be a nonempty proper subset");
    }
    // Index decomposition i -> (a, b) over the subsystem and its complement.
    auto split = [&](std::size_t i) {
        std::size_t a = 0, b = 0;
        for (int q = 0; q < n; ++q) {
            std::size_t bit = state.bit(i, q);
            if (in_a[static_cast<std::size_t>(q)]) {
                a = (a << 1) | bit;
            } else {
                b = (b << 1) | bit;
            }
        }
        return std::pair{a, b};
    };
    const std::size_t da = std::size_t{1} << na;
    const std::size_t db = state.dim() / da;
    std::array<cplx, StateVector::kMaxDim * StateVector::kMaxDim> m{};  // m[a * db + b]
    for (std::size_t i = 0; i < state.dim(); ++i) {
        auto [a, b] = split(i);
        m[a * db + b] = state[i];
    }
    // Tr(rho_A^2) = sum_{a,a'} |sum_b m[a,b] conj(m[a',b])|^2
    double acc = 0;
    for (std::size_t a = 0; a < da; ++a) {
        for (std::size_t a2 = 0; a2 < da; ++a2) {
            cplx r{};
            for (std::size_t b = 0; b < db; ++b) {
                r += m[a * db + b] * std::conj(m[a2 * db + b]);
            }
            acc += std::norm(r);
        }
    }
    return acc / (state.norm_squared() * state.norm_squared());
}

inline double reduced_purity(const StateVector& state, std::initializer_list<int> subsystem) {
    return reduced_purity(state, std::span<const int>(subsystem.begin(), subsystem.size()));
}

/// Tensor product of single-qubit vectors, first argument most significant.
inline StateVector product_state(std::span<const Qubit> qubits) {
    std::array<cplx, StateVector::kMaxDim> amps{};
    const std::size_t dim = std::size_t{1} << qubits.size();
    for (std::size_t i = 0; i < dim; ++i) {
        cplx a{1.0};
        for (std::size_t q = 0; q < qubits.size(); ++q) {
            a *= qubits[q][(i >> (qubits.size() - 1 - q)) & 1U];
        }
        amps[i] = a;
    }
    return StateVector::from_amplitudes(std::span<const cplx>(amps.data(), dim));
}

inline StateVector product_state(std::initializer_list<Qubit> qubits) {
    return product_state(std::span<const Qubit>(qubits.begin(), qubits.size()));
}

}  // namespace q3haar
