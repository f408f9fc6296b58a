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


// thinlab: command-line front end for thinning sweeps, bound checks, the
// extremal solver and the broadcast rate region.
//
// Exit codes: 0 success, 1 inequality violated, 2 bad input, 3 solver did
// not converge.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "thinlab/thinlab.hpp"

namespace {

using namespace thinlab;

enum Exit : int { kOk = 0, kViolation = 1, kBadInput = 2, kNoConvergence = 3 };

struct Common {
    std::string format;
    std::string out;
    std::uint64_t seed = 0;
    bool plot = false;
};

struct Source {
    std::string path;
    std::optional<double> geometric;

    ProbVec load() const {
        if (geometric && !path.empty()) {
            throw DomainError("give either an input file or --geometric, not both");
        }
        if (geometric) {
            return thermal_geometric(*geometric);
        }
        if (path.empty()) {
            throw DomainError("no input distribution: pass a file or --geometric E");
        }
        return read_probvec_file(path);
    }

    std::string label() const { return geometric ? format_id("geom-", *geometric) : path; }
};

/// Destination stream: --out PATH or stdout.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) {
                throw ParseError("cannot write " + path);
            }
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

std::string resolved_format(const Common& c, const char* fallback) {
    return c.format.empty() ? fallback : c.format;
}

/// gnuplot script next to the CSV: column `x` against each of `ys`.
void write_plot(const Common& c, const std::string& title, int x, const std::vector<std::pair<int, std::string>>& ys) {
    if (!c.plot) {
        return;
    }
    if (c.out.empty()) {
        throw DomainError("--plot needs --out PATH");
    }
    std::ofstream gp(c.out + ".gp");
    gp << "# gnuplot script for " << c.out << "\n"
       << "set datafile separator ','\nset key autotitle columnhead\nset title '" << title << "'\nplot ";
    for (std::size_t i = 0; i < ys.size(); ++i) {
        gp << (i ? ", \\\n     " : "") << "'" << c.out << "' using " << x << ":" << ys[i].first
           << " with lines title '" << ys[i].second << "'";
    }
    gp << "\n";
}

void header(std::ostream& os, const char* command, const Common& c, const std::string& extra = {}) {
    os << "# thinlab " << command << " seed=" << c.seed << extra << "\n";
}

int cmd_thin(const Common& c, const Source& src, double lambda) {
    const ProbVec p = src.load();
    const ProbVec q = thin(p, lambda);
    Sink sink(c.out);
    if (resolved_format(c, "json") == "json") {
        sink.stream() << to_json(q).dump() << "\n";
    } else {
        header(sink.stream(), "thin", c, " lambda=" + csv_number(lambda));
        sink.stream() << to_csv(q);
    }
    return kOk;
}

int cmd_verify_epni(const Common& c, const EpniSweepOptions& opts) {
    const EpniSweep sweep = verify_epni(opts);
    const EpniSummary& s = sweep.summary;
    Sink sink(c.out);
    std::ostream& os = sink.stream();
    if (resolved_format(c, "csv") == "json") {
        json rows = json::array();
        for (const auto& r : sweep.rows) {
            rows.push_back(to_json(r));
        }
        os << json{{"seed", opts.seed},
                   {"count", opts.count},
                   {"n_max", opts.n_max},
                   {"lambdas", opts.lambdas},
                   {"rows", rows},
                   {"summary",
                    {{"rows", s.rows},
                     {"min_slack_epni", s.min_slack_epni},
                     {"violations", s.violations},
                     {"max_geometric_abs_slack", s.max_geometric_abs_slack},
                     {"order_violations", s.order_violations}}}}
                  .dump(2)
           << "\n";
    } else {
        header(os, "verify-epni", c,
               " count=" + std::to_string(opts.count) + " n_max=" + std::to_string(opts.n_max));
        os << kBoundReportHeader << "\n";
        for (const auto& r : sweep.rows) {
            os << csv_row(r) << "\n";
        }
        os << "# rows=" << s.rows << " min_slack_epni=" << csv_number(s.min_slack_epni)
           << " violations=" << s.violations << " max_geometric_abs_slack=" << csv_number(s.max_geometric_abs_slack)
           << " order_violations=" << s.order_violations << "\n";
    }
    std::cerr << "verify-epni: " << s.rows << " rows, min slack " << s.min_slack_epni << ", " << s.violations
              << " violations\n";
    return s.violations + s.order_violations == 0 ? kOk : kViolation;
}

int cmd_verify_iso(const Common& c, std::size_t count, std::size_t n_max) {
    const IsoSweep sweep = verify_iso(count, n_max, c.seed);
    const IsoSummary& s = sweep.summary;
    Sink sink(c.out);
    std::ostream& os = sink.stream();
    if (resolved_format(c, "csv") == "json") {
        json rows = json::array();
        for (const auto& r : sweep.rows) {
            rows.push_back({{"input_id", r.input_id},
                            {"N", r.max_index},
                            {"entropy", r.report.entropy},
                            {"F", r.report.F_value},
                            {"f_of_S", r.report.f_of_S},
                            {"slack", r.report.slack}});
        }
        os << json{{"seed", c.seed},
                   {"rows", rows},
                   {"summary",
                    {{"rows", s.rows},
                     {"min_slack", s.min_slack},
                     {"violations", s.violations},
                     {"max_geometric_abs_slack", s.max_geometric_abs_slack}}}}
                  .dump(2)
           << "\n";
    } else {
        header(os, "verify-iso", c, " count=" + std::to_string(count) + " n_max=" + std::to_string(n_max));
        os << "input_id,N,entropy,F,f_of_S,slack\n";
        for (const auto& r : sweep.rows) {
            os << r.input_id << "," << r.max_index << "," << csv_number(r.report.entropy) << ","
               << csv_number(r.report.F_value) << "," << csv_number(r.report.f_of_S) << ","
               << csv_number(r.report.slack) << "\n";
        }
        os << "# rows=" << s.rows << " min_slack=" << csv_number(s.min_slack) << " violations=" << s.violations
           << " max_geometric_abs_slack=" << csv_number(s.max_geometric_abs_slack) << "\n";
    }
    std::cerr << "verify-iso: " << s.rows << " rows, min slack " << s.min_slack << ", " << s.violations
              << " violations\n";
    return s.violations == 0 ? kOk : kViolation;
}

int cmd_compare_bounds(const Common& c, std::vector<double> entropies, std::vector<double> lambdas) {
    if (entropies.empty()) {
        for (int i = 0; i < 50; ++i) {
            entropies.push_back(5.0 * i / 49.0);
        }
    }
    if (lambdas.empty()) {
        lambdas = default_lambda_grid();
    }
    const BoundComparison cmp = compare_bounds(entropies, lambdas);
    Sink sink(c.out);
    std::ostream& os = sink.stream();
    if (resolved_format(c, "csv") == "json") {
        json rows = json::array();
        for (const auto& r : cmp.rows) {
            rows.push_back({{"S", r.S}, {"lambda", r.lambda}, {"epni", r.epni}, {"qepi", r.qepi}, {"gap", r.gap}});
        }
        os << json{{"seed", c.seed},
                   {"rows", rows},
                   {"negative_gaps", cmp.negative_gaps},
                   {"non_strict_gaps", cmp.non_strict_gaps}}
                  .dump(2)
           << "\n";
    } else {
        header(os, "compare-bounds", c);
        os << "S,lambda,epni,qepi,gap\n";
        for (const auto& r : cmp.rows) {
            os << csv_number(r.S) << "," << csv_number(r.lambda) << "," << csv_number(r.epni) << ","
               << csv_number(r.qepi) << "," << csv_number(r.gap) << "\n";
        }
        os << "# negative_gaps=" << cmp.negative_gaps << " non_strict_gaps=" << cmp.non_strict_gaps << "\n";
    }
    write_plot(c, "epni - qepi", 1, {{5, "gap"}});
    return cmp.negative_gaps + cmp.non_strict_gaps == 0 ? kOk : kViolation;
}

int cmd_flow(const Common& c, const Source& src, double t_max, std::size_t steps) {
    const ProbVec p = src.load();
    const FlowTable table = entropy_flow(p, t_max, steps);
    Sink sink(c.out);
    std::ostream& os = sink.stream();
    if (resolved_format(c, "csv") == "json") {
        json rows = json::array();
        for (const auto& r : table.rows) {
            rows.push_back({{"t", r.t},
                            {"lambda", r.lambda},
                            {"entropy", r.entropy},
                            {"F", r.F},
                            {"f_of_S", r.f_of_S},
                            {"phi0", r.phi0},
                            {"slope", r.slope}});
        }
        os << json{{"seed", c.seed},
                   {"input", src.label()},
                   {"rows", rows},
                   {"bound_violations", table.bound_violations},
                   {"slope_violations", table.slope_violations}}
                  .dump(2)
           << "\n";
    } else {
        header(os, "flow", c, " input=" + src.label());
        os << kFlowHeader << ",phi0,slope\n";
        for (const auto& r : table.rows) {
            os << csv_row(r) << "," << csv_number(r.phi0) << "," << csv_number(r.slope) << "\n";
        }
        os << "# bound_violations=" << table.bound_violations << " slope_violations=" << table.slope_violations
           << "\n";
    }
    write_plot(c, "entropy along the attenuation flow", 1, {{3, "H(p_t)"}, {6, "phi0(t)"}});
    return table.bound_violations + table.slope_violations == 0 ? kOk : kViolation;
}

int cmd_extremal(const Common& c, double entropy, std::size_t n, const std::vector<std::size_t>& n_list,
                 double tol) {
    ExtremalOptions opts;
    opts.tolerance = tol;
    Sink sink(c.out);
    std::ostream& os = sink.stream();
    if (n_list.empty()) {
        const KktSolution s = solve_extremal(entropy, n, opts);
        if (resolved_format(c, "json") == "json") {
            json j = to_json(s);
            j["seed"] = c.seed;
            os << j.dump(2) << "\n";
        } else {
            header(os, "extremal", c, " S=" + csv_number(entropy) + " N=" + std::to_string(n));
            os << "n,p,z\n";
            for (std::size_t k = 0; k <= n; ++k) {
                os << k << "," << csv_number(s.p[k]) << "," << csv_number(s.z[k]) << "\n";
            }
            os << "# F=" << csv_number(s.F_value) << " mu=" << csv_number(s.mu)
               << " lambda_mult=" << csv_number(s.lambda_mult) << " residual=" << csv_number(s.residual) << "\n";
        }
        return kOk;
    }
    const ConvergenceStudy study = convergence_study(entropy, n_list, opts);
    if (resolved_format(c, "json") == "json") {
        json rows = json::array();
        for (const auto& r : study.rows) {
            json row = to_json(r);
            if (!r.message.empty()) {
                row["message"] = r.message;
            }
            rows.push_back(row);
        }
        os << json{{"seed", c.seed},
                   {"S", entropy},
                   {"rows", rows},
                   {"monotone", study.monotone},
                   {"bounded", study.bounded},
                   {"all_solved", study.all_solved}}
                  .dump(2)
           << "\n";
    } else {
        header(os, "extremal", c, " S=" + csv_number(entropy));
        os << kConvergenceHeader << "\n";
        for (const auto& r : study.rows) {
            os << csv_row(r) << "\n";
        }
        os << "# monotone=" << study.monotone << " bounded=" << study.bounded << " all_solved=" << study.all_solved
           << "\n";
    }
    write_plot(c, "F_N against -f(S)", 1, {{2, "F_N"}, {3, "-f(S)"}});
    if (!study.all_solved) {
        return kNoConvergence;
    }
    return study.monotone && study.bounded ? kOk : kViolation;
}

int cmd_broadcast(const Common& c, double lambda, double energy, std::size_t beta_steps) {
    const auto curve = broadcast_rate_region(lambda, energy, beta_steps);
    Sink sink(c.out);
    std::ostream& os = sink.stream();
    if (resolved_format(c, "csv") == "json") {
        json rows = json::array();
        for (const auto& r : curve) {
            rows.push_back(to_json(r));
        }
        os << json{{"seed", c.seed}, {"rows", rows}}.dump(2) << "\n";
    } else {
        header(os, "broadcast-region", c);
        os << kRatePointHeader << "\n";
        for (const auto& r : curve) {
            os << csv_row(r) << "\n";
        }
    }
    write_plot(c, "superposition-coding rate pairs", 2, {{3, "R_B"}});
    return kOk;
}

int cmd_montecarlo(const Common& c, const Source& src, double lambda, std::size_t samples) {
    const ProbVec p = src.load();
    const MonteCarloReport r = monte_carlo_report(p, lambda, samples, c.seed);
    Sink sink(c.out);
    std::ostream& os = sink.stream();
    if (resolved_format(c, "json") == "json") {
        os << json{{"seed", r.seed},
                   {"input", src.label()},
                   {"samples", r.samples},
                   {"lambda", r.lambda},
                   {"total_variation", r.total_variation},
                   {"threshold", r.threshold},
                   {"pass", r.pass},
                   {"empirical", to_json(r.empirical)},
                   {"exact", to_json(r.exact)}}
                  .dump(2)
           << "\n";
    } else {
        header(os, "montecarlo", c, " input=" + src.label());
        os << "samples,lambda,total_variation,threshold,pass\n"
           << r.samples << "," << csv_number(r.lambda) << "," << csv_number(r.total_variation) << ","
           << csv_number(r.threshold) << "," << (r.pass ? "true" : "false") << "\n";
    }
    return r.pass ? kOk : kViolation;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Binomial thinning, entropy bounds and extremal distributions"};
    app.require_subcommand(1);

    Common common;
    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", common.out, "Write output to PATH instead of stdout");
        sub->add_option("--seed", common.seed, "Random seed (echoed in the report header)");
    };
    const auto add_plot = [&](CLI::App* sub) {
        sub->add_flag("--plot", common.plot, "Also write a gnuplot script to PATH.gp (needs --out)");
    };
    Source source;
    const auto add_source = [&](CLI::App* sub) {
        sub->add_option("input", source.path, "Distribution file: JSON array or index,weight CSV");
        sub->add_option("--geometric", source.geometric, "Use the geometric law with mean E")
            ->check(CLI::NonNegativeNumber);
    };

    double lambda = 0.5;
    auto* thin_cmd = app.add_subcommand("thin", "Apply T_lambda to a distribution");
    add_common(thin_cmd);
    add_source(thin_cmd);
    thin_cmd->add_option("--lambda", lambda, "Survival probability")->required();

    EpniSweepOptions epni;
    auto* epni_cmd = app.add_subcommand("verify-epni", "Output-entropy bound over random inputs");
    add_common(epni_cmd);
    epni_cmd->add_option("--count", epni.count, "Number of random inputs")->capture_default_str();
    epni_cmd->add_option("--n-max", epni.n_max, "Largest support index")->capture_default_str();
    epni_cmd->add_option("--lambda", epni.lambdas, "Lambda grid (comma separated)")->delimiter(',');

    std::size_t count = 1000;
    std::size_t n_max = 20;
    auto* iso_cmd = app.add_subcommand("verify-iso", "Isoperimetric inequality over random passive inputs");
    add_common(iso_cmd);
    iso_cmd->add_option("--count", count, "Number of random inputs")->capture_default_str();
    iso_cmd->add_option("--n-max", n_max, "Largest support index")->capture_default_str();

    std::vector<double> entropies;
    std::vector<double> lambdas;
    auto* cmp_cmd = app.add_subcommand("compare-bounds", "Output-entropy bound against the qEPI bound");
    add_common(cmp_cmd);
    add_plot(cmp_cmd);
    cmp_cmd->add_option("--entropy", entropies, "Entropy grid (default 50 points on [0, 5])")->delimiter(',');
    cmp_cmd->add_option("--lambda", lambdas, "Lambda grid (default 0.1..0.9)")->delimiter(',');

    double t_max = 3.0;
    std::size_t steps = 31;
    auto* flow_cmd = app.add_subcommand("flow", "Entropy along the attenuation flow");
    add_common(flow_cmd);
    add_plot(flow_cmd);
    add_source(flow_cmd);
    flow_cmd->add_option("--t-max", t_max, "Final time")->capture_default_str();
    flow_cmd->add_option("--steps", steps, "Grid points")->capture_default_str();

    double entropy = 0.0;
    std::size_t n = 16;
    std::vector<std::size_t> n_list;
    double tol = 1e-8;
    auto* ext_cmd = app.add_subcommand("extremal", "F-maximizing distribution at fixed entropy");
    add_common(ext_cmd);
    add_plot(ext_cmd);
    ext_cmd->add_option("--entropy", entropy, "Target entropy S")->required();
    ext_cmd->add_option("--n-max", n, "Largest support index N")->capture_default_str();
    ext_cmd->add_option("--n-list", n_list, "Run a convergence study over these N")->delimiter(',');
    ext_cmd->add_option("--tol", tol, "Entropy tolerance")->capture_default_str();

    double energy = 1.0;
    std::size_t beta_steps = 21;
    auto* bc_cmd = app.add_subcommand("broadcast-region", "Rate pairs of the degraded broadcast channel");
    add_common(bc_cmd);
    add_plot(bc_cmd);
    bc_cmd->add_option("--lambda", lambda, "Transmissivity in [1/2, 1]")->required();
    bc_cmd->add_option("--energy", energy, "Mean photon number E")->capture_default_str();
    bc_cmd->add_option("--beta-steps", beta_steps, "Points on the curve")->capture_default_str();

    std::size_t samples = 1'000'000;
    auto* mc_cmd = app.add_subcommand("montecarlo", "Sampled thinning against the exact kernel");
    add_common(mc_cmd);
    add_source(mc_cmd);
    mc_cmd->add_option("--lambda", lambda, "Survival probability")->required();
    mc_cmd->add_option("--samples", samples, "Number of samples")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kBadInput;
    }

    try {
        if (*thin_cmd) {
            return cmd_thin(common, source, lambda);
        }
        if (*epni_cmd) {
            epni.seed = common.seed;
            return cmd_verify_epni(common, epni);
        }
        if (*iso_cmd) {
            return cmd_verify_iso(common, count, n_max);
        }
        if (*cmp_cmd) {
            return cmd_compare_bounds(common, entropies, lambdas);
        }
        if (*flow_cmd) {
            return cmd_flow(common, source, t_max, steps);
        }
        if (*ext_cmd) {
            return cmd_extremal(common, entropy, n, n_list, tol);
        }
        if (*bc_cmd) {
            return cmd_broadcast(common, lambda, energy, beta_steps);
        }
        if (*mc_cmd) {
            return cmd_montecarlo(common, source, lambda, samples);
        }
    } catch (const ParseError& e) {
        std::cerr << "thinlab: " << e.what() << "\n";
        return kBadInput;
    } catch (const ConvergenceError& e) {
        std::cerr << "thinlab: " << e.what() << "\n" << e.trace();
        return kNoConvergence;
    } catch (const std::domain_error& e) {
        std::cerr << "thinlab: " << e.what() << "\n";
        return kBadInput;
    } catch (const std::exception& e) {
        std::cerr << "thinlab: internal error: " << e.what() << "\n";
        return kNoConvergence;
    }
    return kOk;
}
