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

// Reference implementations used only by tests. They share no code with the
// library kernels: gates are full 2^n x 2^n matrices built from Kronecker
// products, and derivatives are central finite differences.

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "q3haar/circuits.hpp"
#include "q3haar/statevec.hpp"

namespace oracle {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

inline Mat pauli(char axis) {
    Mat m(2, 2);
    switch (axis) {
        case 'x':
            m << 0, 1, 1, 0;
            break;
        case 'y':
            m << 0, cd(0, -1), cd(0, 1), 0;
            break;
        default:
            m << 1, 0, 0, -1;
            break;
    }
    return m;
}

/// exp(-i t sigma) = cos t I - i sin t sigma.
inline Mat rotation(char axis, double t) {
    return std::cos(t) * Mat::Identity(2, 2) - cd(0, 1) * std::sin(t) * pauli(axis);
}

/// Embeds a one-qubit matrix on qubit q (0 = most significant).
inline Mat on_qubit(const Mat& u, int q, int n) {
    Mat out = Mat::Identity(1, 1);
    for (int k = 0; k < n; ++k) {
        out = kron(out, k == q ? u : Mat::Identity(2, 2));
    }
    return out;
}

/// |0><0| (x) I + |1><1| (x) X on (control, target).
inline Mat cnot(int control, int target, int n) {
    Mat p0 = Mat::Zero(2, 2), p1 = Mat::Zero(2, 2);
    p0(0, 0) = 1;
    p1(1, 1) = 1;
    Mat a = Mat::Identity(1, 1), b = Mat::Identity(1, 1);
    for (int k = 0; k < n; ++k) {
        a = kron(a, k == control ? p0 : Mat::Identity(2, 2));
        b = kron(b, k == control ? p1 : k == target ? pauli('x') : Mat::Identity(2, 2));
    }
    return a + b;
}

inline Mat gate_matrix(const q3haar::GateOp& g, double angle, int n) {
    switch (g.kind) {
        case q3haar::GateKind::RotY:
            return on_qubit(rotation('y', angle), g.qubit, n);
        case q3haar::GateKind::RotZ:
            return on_qubit(rotation('z', angle), g.qubit, n);
        case q3haar::GateKind::Cnot:
            return cnot(g.control, g.target, n);
    }
    return Mat::Identity(1 << n, 1 << n);
}

/// Full circuit unitary of a template.
inline Mat circuit_unitary(const q3haar::CircuitTemplate& tpl, const std::vector<double>& p,
                           std::size_t upto = static_cast<std::size_t>(-1)) {
    const int dim = 1 << tpl.n_qubits;
    Mat u = Mat::Identity(dim, dim);
    for (std::size_t i = 0; i < tpl.gates.size() && i < upto; ++i) {
        const auto& g = tpl.gates[i];
        u = gate_matrix(g, g.resolve(p), tpl.n_qubits) * u;
    }
    return u;
}

inline Vec circuit_state(const q3haar::CircuitTemplate& tpl, const std::vector<double>& p,
                         std::size_t upto = static_cast<std::size_t>(-1)) {
    return circuit_unitary(tpl, p, upto).col(0);
}

inline Vec to_vec(const q3haar::StateVector& s) {
    Vec v(static_cast<Eigen::Index>(s.dim()));
    for (std::size_t i = 0; i < s.dim(); ++i) {
        v(static_cast<Eigen::Index>(i)) = s[i];
    }
    return v;
}

inline double overlap(const Vec& a, const Vec& b) {
    return std::abs(a.dot(b)) / (a.norm() * b.norm());
}

/// Fubini-Study metric from central finite differences of the state.
inline Eigen::MatrixXd fd_metric(const q3haar::CircuitTemplate& tpl, std::vector<double> p,
                                 double h) {
    const Vec psi = circuit_state(tpl, p);
    std::vector<Vec> d;
    for (std::size_t k = 0; k < p.size(); ++k) {
        std::vector<double> a = p, b = p;
        a[k] += h;
        b[k] -= h;
        d.push_back((circuit_state(tpl, a) - circuit_state(tpl, b)) / (2 * h));
    }
    const auto n = static_cast<Eigen::Index>(p.size());
    Eigen::MatrixXd g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
            g(i, j) = (d[ui].dot(d[uj]) - d[ui].dot(psi) * psi.dot(d[uj])).real();
        }
    }
    return g;
}

/// Haar state by QR of a complex Ginibre matrix (independent of the
/// Gaussian-vector oracle in the library).
template <typename Rng>
Vec haar_by_qr(int n_qubits, Rng& rng) {
    const int dim = 1 << n_qubits;
    Mat z(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            const auto [a, b] = rng.normal_pair();
            z(i, j) = cd(a, b);
        }
    }
    Eigen::HouseholderQR<Mat> qr(z);
    Mat q = qr.householderQ();
    const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j) {
        const cd d = r(j, j);
        q.col(j) *= d / std::abs(d);
    }
    return q.col(0);
}

}  // namespace oracle
