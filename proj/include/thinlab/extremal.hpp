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

// Entropy-constrained maximizers of the entropy production F on {0, ..., N}.
//
// A maximizer p with entropy S > 0 has full support and ratios
// z_n = p_{n+1} / p_n that are non-increasing with z_N = 0. Stationarity of
// F - lambda sum p + mu sum p ln p gives, for n = 0, ..., N-1,
//
//   (n+2) z_{n+1} = (n+2) z_n + 1 - z_n + (1 - mu) ln z_n + n ln(z_n / z_{n-1}),
//
// so the whole distribution is fixed by (z_0, mu). For a fixed mu the
// sequence increases when z_0 lies above the fixed point of
// (z - 1) / ln z = 1 - mu and decreases toward an early zero when z_0 is too
// small, which makes z_0 bisectable. Forward shooting amplifies errors by
// roughly prod 1 / z_n, so shots run in extended precision.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/mpfr.hpp>

#include "thinlab/attenuator.hpp"
#include "thinlab/entropy.hpp"
#include "thinlab/errors.hpp"
#include "thinlab/parallel.hpp"
#include "thinlab/prob_vec.hpp"

namespace thinlab {

template <unsigned Digits>
using mpfr_real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<Digits>,
                                                boost::multiprecision::et_off>;

enum class ShotOutcome {
    undershoot, ///< some z_n <= 0 with n <= N: z_0 too small
    increasing, ///< z_{n+1} > z_n: z_0 above the fixed point
    completed,  ///< reached z_N > 0 with a non-increasing sequence
};

inline const char* to_string(ShotOutcome o) noexcept {
    switch (o) {
    case ShotOutcome::undershoot: return "undershoot";
    case ShotOutcome::increasing: return "increasing";
    case ShotOutcome::completed: return "completed";
    }
    return "?";
}

template <class Real>
struct Shot {
    std::vector<Real> z; ///< z_0 .. z_last, where the shot stopped
    ShotOutcome outcome = ShotOutcome::completed;

    int terminal_sign() const {
        const Real& last = z.back();
        return last > 0 ? 1 : (last < 0 ? -1 : 0);
    }
};

/// One step of the ratio recursion: z_{n+1} from (z_{n-1}, z_n). z_prev is
/// ignored for n = 0. The result may be negative (infeasible shot).
template <class Real>
Real z_step(const Real& z_prev, const Real& z_curr, std::size_t n, const Real& mu) {
    using std::log;
    if (!(z_curr > 0)) {
        throw DomainError("z_step: z_n must be > 0");
    }
    const Real np2 = static_cast<double>(n + 2);
    Real rhs = np2 * z_curr + Real(1) - z_curr + (Real(1) - mu) * log(z_curr);
    if (n > 0) {
        if (!(z_prev > 0)) {
            throw DomainError("z_step: z_{n-1} must be > 0");
        }
        rhs += Real(static_cast<double>(n)) * log(z_curr / z_prev);
    }
    return rhs / np2;
}

/// Iterates the recursion from z_0 with slack c = 1 - mu, caching logs.
template <class Real>
Shot<Real> shoot_with_slack(const Real& z0, const Real& one_minus_mu, std::size_t max_index) {
    using std::log;
    Shot<Real> shot;
    shot.z.reserve(max_index + 1);
    shot.z.push_back(z0);
    Real log_prev = 0;
    Real log_curr = log(z0);
    for (std::size_t n = 0; n < max_index; ++n) {
        const Real& zn = shot.z.back();
        const Real np1 = static_cast<double>(n + 1);
        Real rhs = np1 * zn + Real(1) + one_minus_mu * log_curr;
        if (n > 0) {
            rhs += Real(static_cast<double>(n)) * (log_curr - log_prev);
        }
        Real next = rhs / Real(static_cast<double>(n + 2));
        const bool below = !(next > 0);
        const bool rising = next > zn;
        shot.z.push_back(std::move(next));
        if (below) {
            shot.outcome = ShotOutcome::undershoot;
            return shot;
        }
        if (rising) {
            shot.outcome = ShotOutcome::increasing;
            return shot;
        }
        if (n + 1 < max_index) {
            log_prev = std::move(log_curr);
            log_curr = log(shot.z.back());
        }
    }
    shot.outcome = ShotOutcome::completed;
    return shot;
}

/// Shoots the recursion from z_0 with multiplier mu for up to N steps.
template <class Real>
Shot<Real> shoot(const Real& z0, const Real& mu, std::size_t max_index) {
    if (!(z0 > 0 && z0 <= 1)) {
        throw DomainError("shoot: z_0 must lie in (0, 1]");
    }
    return shoot_with_slack<Real>(z0, Real(1) - mu, max_index);
}

/// (z - 1) / ln z, increasing from 0 to 1 on (0, 1).
inline double ratio_bound(double z) {
    if (z <= 0.0) {
        return 0.0;
    }
    if (z >= 1.0) {
        return 1.0;
    }
    return (z - 1.0) / std::log(z);
}

/// Fixed point z* of the recursion for slack c = 1 - mu: ratio_bound(z*) = c.
inline double fixed_ratio(double one_minus_mu) {
    if (one_minus_mu >= 1.0) {
        return 1.0;
    }
    if (one_minus_mu <= 0.0) {
        return 0.0;
    }
    double lo = 0.0;
    double hi = 1.0;
    for (int i = 0; i < 200 && hi - lo > 1e-300; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (ratio_bound(mid) < one_minus_mu) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

/// Limit of the maximizers as N grows: ratio z = E/(E+1), E = g^{-1}(S),
/// and the geometric profile p_n = (1 - z) z^n whose entropy is S.
struct AsymptoticProfile {
    double entropy = 0.0;
    double z = 0.0;

    double p(std::size_t n) const {
        if (z == 0.0) {
            return n == 0 ? 1.0 : 0.0;
        }
        return (1.0 - z) * std::pow(z, static_cast<double>(n));
    }

    /// Profile cut where the tail z^(N+1) drops below tail_mass_bound.
    ProbVec truncated(double tail_mass_bound = 1e-14) const {
        if (z == 0.0) {
            return ProbVec{};
        }
        std::vector<double> w;
        double zn = 1.0;
        while (zn >= tail_mass_bound || w.empty()) {
            w.push_back((1.0 - z) * zn);
            zn *= z;
            if (w.size() > 50'000'000) {
                throw DomainError("asymptotic profile: tail bound too small");
            }
        }
        return make_probvec(std::move(w), Renormalize::yes);
    }
};

inline AsymptoticProfile asymptotic_profile(double entropy) {
    AsymptoticProfile profile;
    profile.entropy = entropy;
    const double e = g_inv(entropy);
    profile.z = e / (e + 1.0);
    return profile;
}

/// Extremal distribution of F at fixed entropy on {0, ..., N}.
struct KktSolution {
    double entropy_target = 0.0;
    std::size_t max_index = 0;
    std::vector<double> z; ///< z_n = p_{n+1} / p_n, z_N = 0
    ProbVec p;
    double mu = 0.0;          ///< entropy multiplier
    double lambda_mult = 0.0; ///< normalization multiplier
    double F_value = 0.0;
    double entropy_achieved = 0.0;
    double residual = 0.0; ///< max |stationarity| over n = 0..N
    std::size_t iterations = 0; ///< outer iterations (entropy matches)
    std::size_t shots = 0;
    unsigned precision_digits = 0;
    bool degenerate = false; ///< S = 0 or S = ln(N+1): no KKT multipliers
};

struct ExtremalOptions {
    double tolerance = 1e-8;       ///< |H(p) - S| allowed on return
    std::size_t outer_budget = 200;
    std::size_t min_inner_budget = 200;
};

/// Max over n of the stationarity residual
///   n ln(p_{n-1}/p_n) - n + (n+1) p_{n+1}/p_n - lambda + mu ln p_n + mu,
/// with p_{N+1} = 0. Infinite if some p_n is zero.
inline double kkt_residual(const ProbVec& p, double mu, double lambda_mult) {
    double worst = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) {
        if (!(p[n] > 0.0)) {
            return std::numeric_limits<double>::infinity();
        }
        const auto nn = static_cast<double>(n);
        double r = (nn + 1.0) * p.at_or_zero(n + 1) / p[n] - lambda_mult + mu * std::log(p[n]) + mu;
        if (n > 0) {
            r += nn * std::log(p[n - 1] / p[n]) - nn;
        }
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

namespace detail {

/// Largest allowed |z_N| on the over side of a converged inner bisection.
inline constexpr double kTerminalRatioTolerance = 1e-14;

struct InnerSolution {
    bool ok = false;
    std::vector<double> z;
    std::vector<double> p;
    double entropy = 0.0;
    double terminal = 0.0; ///< z_N before it is pinned to zero
    std::size_t shots = 0;
    unsigned digits = 0;
};

/// Bisects z_0 in (0, 1] for a fixed slack so the shot lands on z_N = 0.
template <class Real>
InnerSolution solve_terminal(double one_minus_mu, std::size_t max_index, std::size_t min_budget) {
    using std::log;
    InnerSolution out;
    out.digits = std::numeric_limits<Real>::digits10;
    const Real c = one_minus_mu;
    Real lo = 0;
    Real hi = 1;
    std::optional<Shot<Real>> best;
    const std::size_t budget =
        std::max<std::size_t>(min_budget, static_cast<std::size_t>(std::numeric_limits<Real>::digits) + 1100);
    const Real eps = std::numeric_limits<Real>::epsilon();
    for (std::size_t it = 0; it < budget; ++it) {
        Real mid = (lo + hi) / 2;
        if (!(mid > lo && mid < hi)) {
            break;
        }
        Shot<Real> shot = shoot_with_slack<Real>(mid, c, max_index);
        ++out.shots;
        if (shot.outcome == ShotOutcome::undershoot) {
            lo = std::move(mid);
        } else {
            hi = std::move(mid);
            best = std::move(shot);
        }
        if (hi - lo <= 4 * eps * hi) {
            break;
        }
    }
    if (!best || best->outcome != ShotOutcome::completed) {
        return out;
    }
    out.terminal = static_cast<double>(best->z.back());
    if (!(out.terminal <= kTerminalRatioTolerance)) {
        return out;
    }
    // p_0 = 1, p_{n+1} = p_n z_n, normalized in working precision.
    std::vector<Real> p(max_index + 1);
    p[0] = 1;
    Real sum = 1;
    for (std::size_t n = 0; n < max_index; ++n) {
        p[n + 1] = p[n] * best->z[n];
        sum += p[n + 1];
    }
    out.z.resize(max_index + 1);
    out.p.resize(max_index + 1);
    for (std::size_t n = 0; n <= max_index; ++n) {
        out.z[n] = n < max_index ? static_cast<double>(best->z[n]) : 0.0;
        out.p[n] = static_cast<double>(p[n] / sum);
    }
    out.entropy = shannon_entropy(out.p);
    out.ok = true;
    return out;
}

inline constexpr unsigned kPrecisionLadder[] = {50, 100, 200, 400, 800};

inline InnerSolution solve_terminal_at(unsigned digits, double one_minus_mu, std::size_t max_index,
                                       std::size_t min_budget) {
    switch (digits) {
    case 50: return solve_terminal<mpfr_real<50>>(one_minus_mu, max_index, min_budget);
    case 100: return solve_terminal<mpfr_real<100>>(one_minus_mu, max_index, min_budget);
    case 200: return solve_terminal<mpfr_real<200>>(one_minus_mu, max_index, min_budget);
    case 400: return solve_terminal<mpfr_real<400>>(one_minus_mu, max_index, min_budget);
    default: return solve_terminal<mpfr_real<800>>(one_minus_mu, max_index, min_budget);
    }
}

/// Picks the smallest precision whose digits cover the expected
/// amplification (1/z*)^N with margin, and escalates on failure.
inline InnerSolution solve_terminal_adaptive(double one_minus_mu, std::size_t max_index, std::size_t min_budget,
                                             std::size_t& shots) {
    const double z_star = std::clamp(fixed_ratio(one_minus_mu), 1e-300, 1.0);
    const double needed = 25.0 + 1.15 * static_cast<double>(max_index) * -std::log10(z_star);
    InnerSolution last;
    for (unsigned digits : kPrecisionLadder) {
        if (static_cast<double>(digits) < needed && digits != kPrecisionLadder[std::size(kPrecisionLadder) - 1]) {
            continue;
        }
        last = solve_terminal_at(digits, one_minus_mu, max_index, min_budget);
        shots += last.shots;
        if (last.ok) {
            return last;
        }
    }
    return last;
}

inline KktSolution degenerate_solution(double entropy, std::size_t max_index, ProbVec p) {
    KktSolution s;
    s.entropy_target = entropy;
    s.max_index = max_index;
    s.z.assign(max_index + 1, 0.0);
    for (std::size_t n = 0; n < max_index; ++n) {
        s.z[n] = p[n] > 0.0 ? p[n + 1] / p[n] : 0.0;
    }
    s.entropy_achieved = shannon_entropy(p);
    s.F_value = entropy_production(p);
    s.p = std::move(p);
    s.mu = std::numeric_limits<double>::quiet_NaN();
    s.lambda_mult = std::numeric_limits<double>::quiet_NaN();
    s.residual = std::numeric_limits<double>::quiet_NaN();
    s.degenerate = true;
    return s;
}

inline ProbVec uniform(std::size_t max_index) {
    return make_probvec(std::vector<double>(max_index + 1, 1.0 / static_cast<double>(max_index + 1)),
                        Renormalize::yes);
}

/// Shared feasibility gate: S = 0 and S = ln(N+1) have a single feasible
/// decreasing point; S above ln(N+1) has none.
inline std::optional<ProbVec> trivial_extremal(double entropy, std::size_t max_index) {
    if (!(entropy >= 0.0) || !std::isfinite(entropy)) {
        throw DomainError("extremal: entropy must be finite and >= 0");
    }
    const double max_entropy = std::log(static_cast<double>(max_index + 1));
    if (entropy > max_entropy + 1e-12) {
        std::ostringstream msg;
        msg << "entropy " << entropy << " exceeds the maximum ln(" << max_index + 1 << ") = " << max_entropy
            << " on " << max_index + 1 << " points";
        throw InfeasibleError(msg.str());
    }
    if (entropy == 0.0) {
        return ProbVec::delta(0, max_index);
    }
    if (entropy >= max_entropy - 1e-12) {
        return uniform(max_index);
    }
    return std::nullopt;
}

} // namespace detail

/// Maximizes F over decreasing distributions on {0, ..., N} with entropy S by
/// two-level shooting: the outer level adjusts mu until the entropy matches,
/// the inner level bisects z_0 until z_N = 0.
inline KktSolution solve_extremal(double entropy, std::size_t max_index, const ExtremalOptions& opts = {}) {
    if (max_index < 1) {
        throw DomainError("solve_extremal: N must be >= 1");
    }
    if (auto p = detail::trivial_extremal(entropy, max_index)) {
        return detail::degenerate_solution(entropy, max_index, std::move(*p));
    }

    std::size_t shots = 0;
    std::size_t evaluations = 0;
    std::ostringstream trace;
    struct Eval {
        double c = 0.0;
        double gap = 0.0; ///< H - S
        detail::InnerSolution sol;
    };
    auto evaluate = [&](double c) {
        ++evaluations;
        Eval e;
        e.c = c;
        e.sol = detail::solve_terminal_adaptive(c, max_index, opts.min_inner_budget, shots);
        if (!e.sol.ok) {
            trace << "c=" << c << ": inner shot failed (z_N=" << e.sol.terminal << ", digits=" << e.sol.digits
                  << ")\n";
            throw ConvergenceError("solve_extremal: no feasible shot for 1 - mu = " + std::to_string(c),
                                   trace.str());
        }
        e.gap = e.sol.entropy - entropy;
        trace << "c=" << c << " H-S=" << e.gap << " digits=" << e.sol.digits << "\n";
        return e;
    };

    // The large-N limit has 1 - mu = ratio_bound(z) at the asymptotic ratio;
    // finite N needs a larger slack for the same entropy.
    const double start = std::max(ratio_bound(asymptotic_profile(entropy).z), 1e-6);
    Eval a = evaluate(start);
    Eval lo = a;
    Eval hi = a;
    if (a.gap < 0.0) {
        double c = start;
        do {
            lo = hi;
            c *= 2.0;
            if (c > 1e12) {
                throw ConvergenceError("solve_extremal: could not bracket the entropy target", trace.str());
            }
            hi = evaluate(c);
        } while (hi.gap < 0.0);
    } else {
        double c = start;
        do {
            hi = lo;
            c *= 0.5;
            if (c < 1e-12) {
                throw ConvergenceError("solve_extremal: could not bracket the entropy target", trace.str());
            }
            lo = evaluate(c);
        } while (lo.gap >= 0.0);
    }

    // Illinois regula falsi on H(c) - S, bisecting when the secant stalls.
    Eval best = std::abs(lo.gap) < std::abs(hi.gap) ? lo : hi;
    int side = 0;
    double f_lo = lo.gap;
    double f_hi = hi.gap;
    for (std::size_t it = 0; it < opts.outer_budget && std::abs(best.gap) > 1e-14; ++it) {
        double c = (lo.c * f_hi - hi.c * f_lo) / (f_hi - f_lo);
        if (!(c > lo.c && c < hi.c) || it % 8 == 7) {
            c = 0.5 * (lo.c + hi.c);
        }
        if (!(c > lo.c && c < hi.c)) {
            break;
        }
        Eval m = evaluate(c);
        if (std::abs(m.gap) < std::abs(best.gap)) {
            best = m;
        }
        if (m.gap < 0.0) {
            lo = m;
            f_lo = m.gap;
            if (side == -1) {
                f_hi *= 0.5;
            }
            side = -1;
        } else {
            hi = m;
            f_hi = m.gap;
            if (side == 1) {
                f_lo *= 0.5;
            }
            side = 1;
        }
        if (hi.c - lo.c <= 1e-15 * hi.c) {
            break;
        }
    }

    if (!(std::abs(best.gap) <= opts.tolerance)) {
        throw ConvergenceError("solve_extremal: entropy mismatch " + std::to_string(best.gap) +
                                   " exceeds tolerance",
                               trace.str());
    }

    KktSolution s;
    s.entropy_target = entropy;
    s.max_index = max_index;
    s.z = best.sol.z;
    s.p = make_probvec(best.sol.p, Renormalize::yes);
    s.mu = 1.0 - best.c;
    s.lambda_mult = s.z[0] + s.mu * (std::log(s.p[0]) + 1.0);
    s.F_value = entropy_production(s.p);
    s.entropy_achieved = shannon_entropy(s.p);
    s.residual = kkt_residual(s.p, s.mu, s.lambda_mult);
    s.iterations = evaluations;
    s.shots = shots;
    s.precision_digits = best.sol.digits;
    return s;
}

struct BruteForceResult {
    ProbVec p;
    double F_max = 0.0;
};

namespace detail {

/// Decreasing distributions with ratios z_1..z_{N-1} fixed form the mixture
/// (1 - w) delta_0 + w q, q the normalized tail shape on {1..N}. Returns the
/// best F over the (at most two) w that put the entropy exactly on target.
struct MixtureFamily {
    std::size_t max_index;
    double entropy;

    struct Point {
        double F = -std::numeric_limits<double>::infinity();
        std::vector<double> p;
    };

    static double binary_entropy(double w) {
        double h = 0.0;
        if (w > 0.0) {
            h -= w * std::log(w);
        }
        if (w < 1.0) {
            h -= (1.0 - w) * std::log1p(-w);
        }
        return h;
    }

    static double production(const std::vector<double>& p) {
        double acc = 0.0;
        for (std::size_t n = 1; n < p.size(); ++n) {
            if (p[n] > 0.0) {
                acc += static_cast<double>(n) * p[n] * std::log(p[n - 1] / p[n]);
            }
        }
        return acc;
    }

    Point best(const std::vector<double>& ratios) const {
        std::vector<double> tail(max_index, 1.0);
        double total = 1.0;
        for (std::size_t n = 1; n < max_index; ++n) {
            tail[n] = tail[n - 1] * ratios[n - 1];
            total += tail[n];
        }
        double tail_entropy = 0.0;
        for (double t : tail) {
            const double q = t / total;
            if (q > 0.0) {
                tail_entropy -= q * std::log(q);
            }
        }
        const auto mixture_entropy = [&](double w) { return binary_entropy(w) + w * tail_entropy; };
        const double w_max = total / (1.0 + total); // p_0 >= p_1
        const double w_peak = 1.0 / (1.0 + std::exp(-tail_entropy));

        Point out;
        const auto consider = [&](double w) {
            std::vector<double> p(max_index + 1);
            p[0] = 1.0 - w;
            for (std::size_t n = 1; n <= max_index; ++n) {
                p[n] = w * tail[n - 1] / total;
            }
            const double F = production(p);
            if (F > out.F) {
                out.F = F;
                out.p = std::move(p);
            }
        };
        const auto root = [&](double a, double b, bool rising) {
            for (int i = 0; i < 64; ++i) {
                const double m = 0.5 * (a + b);
                if ((mixture_entropy(m) < entropy) == rising) {
                    a = m;
                } else {
                    b = m;
                }
            }
            return 0.5 * (a + b);
        };
        const double up_end = std::min(w_peak, w_max);
        if (mixture_entropy(up_end) >= entropy) {
            consider(root(0.0, up_end, true));
        }
        if (w_peak < w_max && mixture_entropy(w_max) <= entropy && mixture_entropy(w_peak) >= entropy) {
            consider(root(w_peak, w_max, false));
        }
        return out;
    }
};

} // namespace detail

/// Independent oracle for solve_extremal on tiny supports (N <= 4): grid
/// search over ratio vectors projected exactly onto the entropy surface,
/// followed by coordinate golden-section polish. grid = 0 picks a per-axis
/// resolution keeping the scan near 1e5 points.
inline BruteForceResult brute_force_extremal(double entropy, std::size_t max_index, std::size_t grid = 0) {
    if (max_index > 4) {
        throw DomainError("brute_force_extremal: N must be <= 4");
    }
    if (auto p = detail::trivial_extremal(entropy, max_index)) {
        BruteForceResult r;
        r.F_max = entropy_production(*p);
        r.p = std::move(*p);
        return r;
    }
    const detail::MixtureFamily family{max_index, entropy};
    const std::size_t free = max_index - 1;
    if (grid == 0) {
        grid = free == 0 ? 1 : static_cast<std::size_t>(std::pow(1e5, 1.0 / static_cast<double>(free)));
    }
    std::vector<double> ratios(free, 1.0);
    std::vector<double> best_ratios = ratios;
    auto best = family.best(ratios);

    // Grid points (j+1)/grid in (0, 1] for every free ratio.
    std::vector<std::size_t> idx(free, 0);
    bool done = free == 0;
    while (!done) {
        for (std::size_t i = 0; i < free; ++i) {
            ratios[i] = static_cast<double>(idx[i] + 1) / static_cast<double>(grid);
        }
        auto cand = family.best(ratios);
        if (cand.F > best.F) {
            best = std::move(cand);
            best_ratios = ratios;
        }
        std::size_t i = 0;
        while (i < free && ++idx[i] == grid) {
            idx[i++] = 0;
        }
        done = i == free;
    }

    ratios = best_ratios;
    double radius = 1.0 / static_cast<double>(grid);
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int round = 0; round < 400 && free > 0 && radius > 1e-13; ++round) {
        const double before = best.F;
        for (std::size_t i = 0; i < free; ++i) {
            double a = std::max(1e-300, ratios[i] - radius);
            double b = std::min(1.0, ratios[i] + radius);
            auto value = [&](double r) {
                auto trial = ratios;
                trial[i] = r;
                return family.best(trial);
            };
            double x1 = b - phi * (b - a);
            double x2 = a + phi * (b - a);
            double f1 = value(x1).F;
            double f2 = value(x2).F;
            for (int k = 0; k < 100 && b - a > 1e-15; ++k) {
                if (f1 < f2) {
                    a = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = a + phi * (b - a);
                    f2 = value(x2).F;
                } else {
                    b = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = b - phi * (b - a);
                    f1 = value(x1).F;
                }
            }
            auto cand = value(0.5 * (a + b));
            if (cand.F > best.F) {
                best = std::move(cand);
                ratios[i] = 0.5 * (a + b);
            }
        }
        if (best.F - before <= 1e-16) {
            radius *= 0.5;
        }
    }

    BruteForceResult r;
    r.F_max = best.F;
    r.p = make_probvec(std::move(best.p), Renormalize::yes);
    return r;
}

enum class RowStatus { ok, infeasible, failed };

inline const char* to_string(RowStatus s) noexcept {
    switch (s) {
    case RowStatus::ok: return "ok";
    case RowStatus::infeasible: return "infeasible";
    case RowStatus::failed: return "failed";
    }
    return "?";
}

struct ConvergenceRow {
    std::size_t max_index = 0;
    /// sup of F over the feasible set; -inf when that set is empty.
    double F_N = -std::numeric_limits<double>::infinity();
    double minus_f_S = 0.0;
    double gap = std::numeric_limits<double>::infinity();
    double residual = std::numeric_limits<double>::quiet_NaN();
    std::size_t iterations = 0;
    RowStatus status = RowStatus::ok;
    std::string message;
};

struct ConvergenceStudy {
    double entropy = 0.0;
    std::vector<ConvergenceRow> rows; ///< ascending N
    bool monotone = true;             ///< F_N non-decreasing in N
    bool bounded = true;              ///< F_N <= -f(S) + 1e-8
    bool all_solved = true;           ///< no solver failures
};

/// Runs solve_extremal for every N (in parallel) and checks that F_N climbs
/// monotonically toward -f(S) without exceeding it.
inline ConvergenceStudy convergence_study(double entropy, std::vector<std::size_t> sizes,
                                          const ExtremalOptions& opts = {}) {
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
    ConvergenceStudy study;
    study.entropy = entropy;
    study.rows.resize(sizes.size());
    const double bound = -f(entropy);
    parallel_for(sizes.size(), [&](std::size_t i) {
        ConvergenceRow& row = study.rows[i];
        row.max_index = sizes[i];
        row.minus_f_S = bound;
        try {
            const KktSolution s = solve_extremal(entropy, sizes[i], opts);
            row.F_N = s.F_value;
            row.gap = bound - s.F_value;
            row.residual = s.residual;
            row.iterations = s.iterations;
        } catch (const InfeasibleError& e) {
            row.status = RowStatus::infeasible;
            row.message = e.what();
        } catch (const ConvergenceError& e) {
            row.status = RowStatus::failed;
            row.message = e.what();
            row.F_N = std::numeric_limits<double>::quiet_NaN();
            row.gap = std::numeric_limits<double>::quiet_NaN();
        }
    });
    double prev = -std::numeric_limits<double>::infinity();
    for (const ConvergenceRow& row : study.rows) {
        if (row.status == RowStatus::failed) {
            study.all_solved = false;
            continue;
        }
        if (row.F_N < prev) {
            study.monotone = false;
        }
        if (row.F_N > bound + 1e-8) {
            study.bounded = false;
        }
        prev = row.F_N;
    }
    return study;
}

} // namespace thinlab
