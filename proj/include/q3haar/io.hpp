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

/// \file io.hpp
/// JSON and CSV encodings of states, angle sets, and reports.
///
/// Every JSON record carries "schema": "q3haar/1". Doubles are written as
/// the shortest decimal that round-trips.

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "q3haar/angles.hpp"
#include "q3haar/sampler.hpp"
#include "q3haar/statevec.hpp"
#include "q3haar/stats.hpp"

namespace q3haar {

using Json = nlohmann::json;

inline constexpr const char* kSchema = "q3haar/1";

/// Malformed input record.
class DataError : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

inline Json state_to_json(const StateVector& s) {
    Json re = Json::array(), im = Json::array();
    for (std::size_t i = 0; i < s.dim(); ++i) {
        re.push_back(s[i].real());
        im.push_back(s[i].imag());
    }
    return {{"n", s.n_qubits()}, {"re", re}, {"im", im}};
}

/// Accepts {"re": [...], "im": [...]} with an optional "n"; the length must be
/// 4 or 8.
inline StateVector state_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("re") || !j.contains("im")) {
        throw DataError("state record needs \"re\" and \"im\" arrays");
    }
    const Json& re = j.at("re");
    const Json& im = j.at("im");
    if (!re.is_array() || !im.is_array() || re.size() != im.size()) {
        throw DataError("\"re\" and \"im\" must be arrays of equal length");
    }
    if (re.size() != 4 && re.size() != 8) {
        throw DataError("state length must be 4 or 8, got " + std::to_string(re.size()));
    }
    std::vector<cplx> amps;
    for (std::size_t i = 0; i < re.size(); ++i) {
        if (!re[i].is_number() || !im[i].is_number()) {
            throw DataError("amplitude " + std::to_string(i) + " is not a number");
        }
        amps.emplace_back(re[i].get<double>(), im[i].get<double>());
    }
    StateVector s = StateVector::from_amplitudes(amps);
    if (j.contains("n") && j.at("n") != s.n_qubits()) {
        throw DataError("\"n\" does not match the amplitude count");
    }
    return s;
}

template <std::size_t N>
Json angles_to_json(const Angles<N>& a) {
    Json t = Json::array();
    for (double x : a.theta) {
        t.push_back(x);
    }
    return t;
}

template <std::size_t N>
Angles<N> angles_from_json(const Json& t) {
    if (!t.is_array() || t.size() != N) {
        throw DataError("expected an array of " + std::to_string(N) + " angles");
    }
    Angles<N> a;
    for (std::size_t k = 0; k < N; ++k) {
        if (!t[k].is_number()) {
            throw DataError("angle " + std::to_string(k + 1) + " is not a number");
        }
        a.theta[k] = t[k].get<double>();
    }
    return a;
}

inline Json report_to_json(const GoFReport& r) {
    Json j = {{"name", r.name},
              {"kind", to_string(r.kind)},
              {"statistic", r.statistic},
              {"n", r.n},
              {"passed", r.passed}};
    if (r.kind == TestKind::Moment || r.kind == TestKind::Deviation) {
        j["value"] = r.value;
        j["target"] = r.target;
        j["tolerance"] = r.tolerance;
    }
    if (r.p_value) {
        j["p_value"] = *r.p_value;
        j["threshold"] = r.threshold;
    }
    if (r.bins > 0) {
        j["bins"] = r.bins;
    }
    return j;
}

// ---------------------------------------------------------------------------
// CSV

inline std::string format_double(double x) {
    std::array<char, 32> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    if (ec != std::errc{}) {
        throw std::runtime_error("format_double: conversion failed");
    }
    return std::string(buf.data(), end);
}

inline std::string csv_header(std::size_t n_angles, std::size_t dim, bool with_state) {
    std::string h = "index";
    for (std::size_t k = 1; k <= n_angles; ++k) {
        h += ",theta" + std::to_string(k);
    }
    if (with_state) {
        for (std::size_t i = 0; i < dim; ++i) {
            h += ",re" + std::to_string(i) + ",im" + std::to_string(i);
        }
    }
    return h;
}

inline std::string csv_row(std::size_t index, std::span<const double> angles,
                           const StateVector* state) {
    std::string row = std::to_string(index);
    for (double x : angles) {
        row += ',' + format_double(x);
    }
    if (state != nullptr) {
        for (std::size_t i = 0; i < state->dim(); ++i) {
            row += ',' + format_double((*state)[i].real());
            row += ',' + format_double((*state)[i].imag());
        }
    }
    return row;
}

}  // namespace q3haar
