// Copyright 2026 The thinlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

// JSON and CSV encodings of distributions and report records.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "thinlab/attenuator.hpp"
#include "thinlab/errors.hpp"
#include "thinlab/extremal.hpp"
#include "thinlab/harness.hpp"
#include "thinlab/prob_vec.hpp"

namespace thinlab {

using json = nlohmann::json;

/// Shortest-exact decimal for CSV cells ("nan", "inf", "-inf" for non-finite).
inline std::string csv_number(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    if (x == 0.0) {
        return "0";
    }
    char buf[32];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) {
            break;
        }
    }
    return buf;
}

namespace detail {

inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

} // namespace detail

/// JSON has no NaN or infinity; both become null.
inline json json_number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

inline json to_json(const ProbVec& p) { return json(p.vector()); }

/// Parses a JSON array of non-negative weights summing to one.
inline ProbVec probvec_from_json(std::string_view text, Renormalize renormalize = Renormalize::no) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        // byte is 1-based and points just past the offending character
        const auto [line, column] = detail::line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ParseError("malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(column),
                         line, column);
    }
    if (!doc.is_array()) {
        throw ParseError("expected a JSON array of weights", 1, 1);
    }
    std::vector<double> w;
    w.reserve(doc.size());
    for (std::size_t i = 0; i < doc.size(); ++i) {
        if (!doc[i].is_number()) {
            throw ParseError("array element " + std::to_string(i) + " is not a number");
        }
        w.push_back(doc[i].get<double>());
    }
    return make_probvec(std::move(w), renormalize);
}

inline std::string to_csv(const ProbVec& p) {
    std::string out = "index,weight\n";
    for (std::size_t n = 0; n < p.size(); ++n) {
        out += std::to_string(n) + "," + csv_number(p[n]) + "\n";
    }
    return out;
}

/// Parses `index,weight` rows. Indices must run 0, 1, 2, ... in order.
inline ProbVec probvec_from_csv(std::string_view text, Renormalize renormalize = Renormalize::no) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::vector<double> w;
    std::size_t line_no = 0;
    bool header_allowed = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (std::exchange(header_allowed, false) && line.rfind("index", 0) == 0) {
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw ParseError("expected `index,weight`", line_no, 1);
        }
        std::size_t used = 0;
        long index = 0;
        double weight = 0.0;
        try {
            index = std::stol(line.substr(0, comma), &used);
        } catch (const std::exception&) {
            throw ParseError("bad index", line_no, 1);
        }
        if (index != static_cast<long>(w.size())) {
            throw ParseError("index " + std::to_string(index) + " out of sequence", line_no, 1);
        }
        try {
            weight = std::stod(line.substr(comma + 1), &used);
        } catch (const std::exception&) {
            throw ParseError("bad weight", line_no, comma + 2);
        }
        w.push_back(weight);
    }
    if (w.empty()) {
        throw ParseError("no weights found");
    }
    return make_probvec(std::move(w), renormalize);
}

/// Reads a distribution file: JSON when the first non-blank byte is '[',
/// CSV otherwise.
inline ProbVec read_probvec_file(const std::string& path, Renormalize renormalize = Renormalize::no) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '[') {
        return probvec_from_json(text, renormalize);
    }
    return probvec_from_csv(text, renormalize);
}

inline json to_json(const FlowPoint& fp) {
    return {{"t", fp.t}, {"lambda", fp.lambda}, {"entropy", fp.entropy}, {"p", to_json(fp.p)}};
}

inline json to_json(const KktSolution& s) {
    return {{"S_target", s.entropy_target},
            {"N", s.max_index},
            {"z", s.z},
            {"p", to_json(s.p)},
            {"mu", json_number(s.mu)},
            {"lambda_mult", json_number(s.lambda_mult)},
            {"F_value", s.F_value},
            {"entropy_achieved", s.entropy_achieved},
            {"residual", json_number(s.residual)},
            {"iterations", s.iterations},
            {"shots", s.shots},
            {"precision_digits", s.precision_digits},
            {"degenerate", s.degenerate}};
}

inline json to_json(const BoundReport& r) {
    return {{"input_id", r.input_id},     {"S_in", r.S_in},       {"lambda", r.lambda},
            {"S_out", r.S_out},           {"epni", r.epni},       {"qepi", r.qepi},
            {"slack_epni", r.slack_epni}, {"slack_qepi", r.slack_qepi}};
}

inline json to_json(const RatePoint& r) {
    return {{"beta", r.beta}, {"R_A", r.R_A}, {"R_B", r.R_B}, {"lambda", r.lambda}, {"E", r.E}};
}

/// F_N is -inf on infeasible rows and NaN on failed ones; both encode as null.
inline json to_json(const ConvergenceRow& r) {
    return {{"N", r.max_index},
            {"F_N", json_number(r.F_N)},
            {"minus_f_S", r.minus_f_S},
            {"gap", json_number(r.gap)},
            {"residual", json_number(r.residual)},
            {"iterations", r.iterations},
            {"status", to_string(r.status)}};
}

inline const char* kBoundReportHeader = "input_id,S_in,lambda,S_out,epni,qepi,slack_epni,slack_qepi";

inline std::string csv_row(const BoundReport& r) {
    return r.input_id + "," + csv_number(r.S_in) + "," + csv_number(r.lambda) + "," + csv_number(r.S_out) + "," +
           csv_number(r.epni) + "," + csv_number(r.qepi) + "," + csv_number(r.slack_epni) + "," +
           csv_number(r.slack_qepi);
}

inline const char* kFlowHeader = "t,lambda,entropy,F,f_of_S";

inline std::string csv_row(const FlowRow& r) {
    return csv_number(r.t) + "," + csv_number(r.lambda) + "," + csv_number(r.entropy) + "," + csv_number(r.F) + "," +
           csv_number(r.f_of_S);
}

inline const char* kRatePointHeader = "beta,R_A,R_B,lambda,E";

inline std::string csv_row(const RatePoint& r) {
    return csv_number(r.beta) + "," + csv_number(r.R_A) + "," + csv_number(r.R_B) + "," + csv_number(r.lambda) +
           "," + csv_number(r.E);
}

inline const char* kConvergenceHeader = "N,F_N,minus_f_S,gap,residual,iterations";

inline std::string csv_row(const ConvergenceRow& r) {
    return std::to_string(r.max_index) + "," + csv_number(r.F_N) + "," + csv_number(r.minus_f_S) + "," +
           csv_number(r.gap) + "," + csv_number(r.residual) + "," + std::to_string(r.iterations);
}

} // namespace thinlab
