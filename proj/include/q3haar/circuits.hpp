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

/// \file circuits.hpp
/// The two random-state circuit templates and forward state construction.
///
/// Three-qubit template, in application order on |000> (qubits 1..3 are
/// indices 0..2; slot k holds theta_{k+1}):
///
///   G1  RotY(+t1, q1)   G2  RotY(+t2, q2)   G3  CNOT(1->2)   G4  RotY(-t2, q2)
///   G5  RotY(+t3, q3)   G6  CNOT(1->3)      G7  RotZ(+t4, q3) G8  RotY(+t5, q3)
///   G9  RotZ(+t6, q3)   G10 CNOT(2->3)
///   G11 RotZ(+t7, q1)   G12 RotY(+t8, q1)   G13 RotZ(+t9, q1)
///   G14 RotZ(+t10, q2)  G15 RotY(+t11, q2)  G16 RotZ(+t12, q2)
///   G17 RotZ(+t13, q3)  G18 RotY(+t14, q3)
///
/// The prefix through G9 equals, up to the global phase e^{-i(t4+t6)},
///   cos t1 |0 0 alpha> + sin t1 |1> (sin 2t2 |0> + cos 2t2 |1>) |beta>
/// with alpha, beta from `alpha_beta`.

#include <algorithm>
#include <cstddef>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "q3haar/angles.hpp"
#include "q3haar/density.hpp"
#include "q3haar/statevec.hpp"

namespace q3haar {

struct CircuitTemplate {
    std::string name;
    int n_qubits = 0;
    int n_params = 0;
    std::vector<GateOp> gates;

    std::size_t cnot_count() const {
        return static_cast<std::size_t>(std::count_if(
            gates.begin(), gates.end(), [](const GateOp& g) { return g.kind == GateKind::Cnot; }));
    }
    std::size_t rotation_count() const { return gates.size() - cnot_count(); }

    /// Zero-based gate indices reading parameter slot `param`.
    std::vector<std::size_t> occurrences(int param) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < gates.size(); ++i) {
            if (gates[i].is_parametrized() && gates[i].param == param) {
                out.push_back(i);
            }
        }
        return out;
    }
};

inline CircuitTemplate three_qubit_template() {
    using G = GateOp;
    return {"three_qubit",
            3,
            14,
            {
                G::ry(0, 0), G::ry(1, 1), G::cnot(0, 1), G::ry(1, 1, -1),       //
                G::ry(2, 2), G::cnot(0, 2), G::rz(2, 3), G::ry(2, 4), G::rz(2, 5),  //
                G::cnot(1, 2),                                                  //
                G::rz(0, 6), G::ry(0, 7), G::rz(0, 8),                          //
                G::rz(1, 9), G::ry(1, 10), G::rz(1, 11),                        //
                G::rz(2, 12), G::ry(2, 13),
            }};
}

/// Two-qubit template: RotY(t1, q1); CNOT(1->2); RotZ(t2, q1); RotY(t3, q1);
/// RotZ(t4, q1); RotY(t5, q2); RotZ(t6, q2).
inline CircuitTemplate two_qubit_template() {
    using G = GateOp;
    return {"two_qubit",
            2,
            6,
            {
                G::ry(0, 0), G::cnot(0, 1),                //
                G::rz(0, 1), G::ry(0, 2), G::rz(0, 3),     //
                G::ry(1, 4), G::rz(1, 5),
            }};
}

/// Runs the first `upto` gates of `tpl` on |0...0>.
inline StateVector run_circuit(const CircuitTemplate& tpl, std::span<const double> params,
                               std::size_t upto) {
    if (params.size() != static_cast<std::size_t>(tpl.n_params)) {
        throw std::invalid_argument("run_circuit: expected " + std::to_string(tpl.n_params) +
                                    " parameters, got " + std::to_string(params.size()));
    }
    for (double p : params) {
        if (!std::isfinite(p)) {
            throw std::invalid_argument("run_circuit: non-finite parameter");
        }
    }
    StateVector s(tpl.n_qubits);
    upto = std::min(upto, tpl.gates.size());
    for (std::size_t i = 0; i < upto; ++i) {
        s = apply_gate(s, tpl.gates[i], params);
    }
    return s;
}

inline StateVector run_circuit(const CircuitTemplate& tpl, std::span<const double> params) {
    return run_circuit(tpl, params, tpl.gates.size());
}

inline StateVector build_state_3q(const AngleSet14& angles) {
    static const CircuitTemplate tpl = three_qubit_template();
    return run_circuit(tpl, angles.span());
}

inline StateVector build_state_2q(const AngleSet6& angles) {
    static const CircuitTemplate tpl = two_qubit_template();
    return run_circuit(tpl, angles.span());
}

/// Closed form of the three-qubit circuit state after gate G9.
inline StateVector intermediate_phi(double t1, double t2, double t3, double t4, double t5,
                                    double t6) {
    const auto [alpha, beta] = alpha_beta(t3, t4, t5, t6);
    const Qubit zero{1.0, 0.0};
    const Qubit one{0.0, 1.0};
    const Qubit w5{std::sin(2 * t2), std::cos(2 * t2)};
    StateVector a = product_state({zero, zero, alpha});
    StateVector b = product_state({one, w5, beta});
    StateVector out(3);
    for (std::size_t i = 0; i < 8; ++i) {
        out[i] = std::cos(t1) * a[i] + std::sin(t1) * b[i];
    }
    return out;
}

/// Copy of `tpl` with gate `from` removed and reinserted so that it ends up at
/// index `to` of the resulting gate list.
inline CircuitTemplate with_gate_moved(const CircuitTemplate& tpl, std::size_t from,
                                       std::size_t to) {
    if (from >= tpl.gates.size() || to >= tpl.gates.size()) {
        throw std::invalid_argument("with_gate_moved: index out of range");
    }
    CircuitTemplate out = tpl;
    GateOp g = out.gates[from];
    out.gates.erase(out.gates.begin() + static_cast<std::ptrdiff_t>(from));
    out.gates.insert(out.gates.begin() + static_cast<std::ptrdiff_t>(to), g);
    return out;
}

/// Text diagram, one line per qubit wire, gates in application order.
///
///   q1: -Y(t1)--*------...
inline std::string render_diagram(const CircuitTemplate& tpl) {
    std::vector<std::string> wires(static_cast<std::size_t>(tpl.n_qubits));
    for (int q = 0; q < tpl.n_qubits; ++q) {
        wires[static_cast<std::size_t>(q)] = "q" + std::to_string(q + 1) + ": -";
    }
    for (const GateOp& g : tpl.gates) {
        std::vector<std::string> cell(static_cast<std::size_t>(tpl.n_qubits));
        if (g.kind == GateKind::Cnot) {
            for (int q = 0; q < tpl.n_qubits; ++q) {
                const bool between = (q - g.control) * (q - g.target) < 0;
                cell[static_cast<std::size_t>(q)] =
                    q == g.control ? "*" : q == g.target ? "X" : between ? "|" : "";
            }
        } else {
            std::ostringstream label;
            label << (g.kind == GateKind::RotY ? "Y(" : "Z(");
            if (g.is_parametrized()) {
                label << (g.sign < 0 ? "-" : "") << "t" << g.param + 1;
            } else {
                label << g.angle;
            }
            label << ")";
            cell[static_cast<std::size_t>(g.qubit)] = label.str();
        }
        std::size_t width = 1;
        for (const auto& c : cell) {
            width = std::max(width, c.size());
        }
        for (int q = 0; q < tpl.n_qubits; ++q) {
            auto& c = cell[static_cast<std::size_t>(q)];
            std::string padded = c + std::string(width - c.size(), '-');
            wires[static_cast<std::size_t>(q)] += padded + "-";
        }
    }
    std::string out;
    for (const auto& w : wires) {
        out += w + "\n";
    }
    return out;
}

}  // namespace q3haar
