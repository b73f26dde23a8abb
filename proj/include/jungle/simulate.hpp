#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "jungle/model.hpp"
#include "jungle/params.hpp"

namespace jungle {

// ---------------------------------------------------------------------------
// Adaptive integration: Dormand-Prince 5(4) embedded pair with FSAL.
//
// The step cap doubles as the sampling cap, so consecutive samples are never
// further apart than max_gap. Components at exactly 0 stay at 0 bitwise
// (every stage derivative carries the factor x_i), so coordinate hyperplanes
// are invariant under integration, not just under the vector field.
// ---------------------------------------------------------------------------

struct IntegrateOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    double max_gap = 0.1;      // max step and inter-sample spacing
    double box_bound = 10.0;   // abort if any coordinate leaves [0, box]
    long max_steps = 20'000'000;
};

struct IntegrationError : std::runtime_error {
    double last_good_time;
    IntegrationError(const std::string& what, double t)
        : std::runtime_error(what + " (last good time " + std::to_string(t) + ")"),
          last_good_time(t) {}
};

struct Trajectory {
    std::vector<double> times;
    std::vector<StateVec> states;
    struct Meta {
        double rel_tol = 0.0;
        double abs_tol = 0.0;
        long steps_accepted = 0;
        long steps_rejected = 0;
        long rhs_evaluations = 0;
    } meta;

    size_t size() const { return times.size(); }
    bool empty() const { return times.empty(); }
    double t_begin() const { return times.front(); }
    double t_end() const { return times.back(); }
};

namespace detail {

// Dormand-Prince coefficients.
inline constexpr double dp_c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
inline constexpr double dp_a[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
inline constexpr double dp_b5[7] = {35.0 / 384,     0.0,        500.0 / 1113, 125.0 / 192,
                                    -2187.0 / 6784, 11.0 / 84,  0.0};
inline constexpr double dp_b4[7] = {5179.0 / 57600,     0.0,          7571.0 / 16695, 393.0 / 640,
                                    -92097.0 / 339200,  187.0 / 2100, 1.0 / 40};

}  // namespace detail

inline Trajectory integrate(const InteractionParams& p, const StateVec& ic, double t_max,
                            const IntegrateOptions& opt = {}) {
    if (!ic.finite() || !ic.nonnegative())
        throw PreconditionError("integrate: initial condition must be finite and nonnegative");
    if (!(opt.rel_tol > 0.0) || !(opt.abs_tol > 0.0))
        throw PreconditionError("integrate: tolerances must be positive");
    if (!(t_max > 0.0)) throw PreconditionError("integrate: t_max must be positive");
    if (!(opt.max_gap > 0.0)) throw PreconditionError("integrate: max_gap must be positive");

    Trajectory traj;
    traj.meta.rel_tol = opt.rel_tol;
    traj.meta.abs_tol = opt.abs_tol;

    StateVec y = ic;
    double t = 0.0;
    traj.times.push_back(t);
    traj.states.push_back(y);

    std::array<StateVec, 7> k;
    k[0] = rhs_unchecked(y, p);
    ++traj.meta.rhs_evaluations;

    double h = std::min(opt.max_gap, 1e-3);
    const double h_floor = 1e-14;

    while (t < t_max) {
        if (traj.meta.steps_accepted + traj.meta.steps_rejected > opt.max_steps)
            throw IntegrationError("integrate: step budget exhausted", t);
        h = std::min({h, opt.max_gap, t_max - t});
        if (h < h_floor) throw IntegrationError("integrate: step-size underflow", t);

        for (int s = 1; s < 7; ++s) {
            StateVec ys = y;
            for (int j = 0; j < s; ++j) ys = ys + (h * detail::dp_a[s][j]) * k[static_cast<size_t>(j)];
            k[static_cast<size_t>(s)] = rhs_unchecked(ys, p);
            ++traj.meta.rhs_evaluations;
        }

        StateVec y_new = y;
        StateVec err{};
        for (int s = 0; s < 7; ++s) {
            y_new = y_new + (h * detail::dp_b5[s]) * k[static_cast<size_t>(s)];
            err = err + (h * (detail::dp_b5[s] - detail::dp_b4[s])) * k[static_cast<size_t>(s)];
        }

        double err_norm2 = 0.0;
        bool finite = true;
        for (int i = 0; i < 4; ++i) {
            if (!std::isfinite(y_new[i])) finite = false;
            const double scale =
                opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
            const double r = err[i] / scale;
            err_norm2 += r * r;
        }
        const double err_norm = std::sqrt(err_norm2 / 4.0);

        if (!finite || !std::isfinite(err_norm)) {
            h *= 0.25;
            ++traj.meta.steps_rejected;
            if (h < h_floor) throw IntegrationError("integrate: non-finite state", t);
            continue;
        }
        if (err_norm > 1.0) {
            ++traj.meta.steps_rejected;
            h *= std::max(0.2, 0.9 * std::pow(err_norm, -0.2));
            continue;
        }

        for (int i = 0; i < 4; ++i) {
            if (y_new[i] < 0.0) {
                if (y_new[i] > -1e-12)
                    y_new[i] = 0.0;  // round-off sliver below the hyperplane
                else
                    throw IntegrationError("integrate: negative coordinate", t);
            }
            if (y_new[i] > opt.box_bound)
                throw IntegrationError("integrate: state left the configured box", t);
        }

        t += h;
        y = y_new;
        traj.times.push_back(t);
        traj.states.push_back(y);
        ++traj.meta.steps_accepted;

        k[0] = rhs_unchecked(y, p);  // FSAL restart (state may have been clamped)
        ++traj.meta.rhs_evaluations;

        h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err_norm, 1e-10), -0.2)));
    }
    return traj;
}

// ---------------------------------------------------------------------------
// Itinerary extraction with hysteresis: a visit to xi_j opens when the state
// comes within eps_enter of xi_j (sup norm) and closes when it leaves the
// eps_exit ball. eps_enter < eps_exit prevents chattering.
// ---------------------------------------------------------------------------

struct Visit {
    int node = 0;
    double enter = 0.0;
    double exit = 0.0;
    bool closed = true;  // false when the run ends inside the ball

    double dwell() const { return exit - enter; }
};

struct Itinerary {
    std::vector<Visit> visits;
};

inline constexpr double kDefaultEnterEps = 0.05;
inline constexpr double kDefaultExitEps = 0.10;

inline Itinerary extract_itinerary(const Trajectory& traj, double eps_enter = kDefaultEnterEps,
                                   double eps_exit = kDefaultExitEps) {
    if (!(eps_enter > 0.0) || !(eps_exit < 0.5) || !(eps_enter < eps_exit))
        throw PreconditionError("extract_itinerary: need 0 < eps_enter < eps_exit < 0.5");

    std::array<StateVec, 4> xi;
    for (int j = 1; j <= 4; ++j) xi[static_cast<size_t>(j - 1)] = axis_equilibrium(j);

    Itinerary itin;
    int open = 0;  // 0 = none
    double open_t = 0.0;
    auto append = [&](int node, double enter, double exit, bool closed) {
        // Re-entries without an intervening visit extend the previous one.
        if (!itin.visits.empty() && itin.visits.back().node == node) {
            itin.visits.back().exit = exit;
            itin.visits.back().closed = closed;
            return;
        }
        itin.visits.push_back({node, enter, exit, closed});
    };

    for (size_t i = 0; i < traj.size(); ++i) {
        const double t = traj.times[i];
        const StateVec& x = traj.states[i];
        if (open != 0) {
            if (inf_dist(x, xi[static_cast<size_t>(open - 1)]) > eps_exit) {
                append(open, open_t, t, true);
                open = 0;
            } else {
                continue;
            }
        }
        for (int j = 1; j <= 4; ++j) {
            if (inf_dist(x, xi[static_cast<size_t>(j - 1)]) < eps_enter) {
                open = j;
                open_t = t;
                break;
            }
        }
    }
    if (open != 0 && !traj.empty()) append(open, open_t, traj.t_end(), false);
    return itin;
}

// ---------------------------------------------------------------------------
// Extinction and dwell analysis
// ---------------------------------------------------------------------------

// Species whose density stays below `threshold` over the trailing
// tail_fraction of the time span.
inline std::set<int> detect_extinction(const Trajectory& traj, double threshold = 1e-8,
                                       double tail_fraction = 1.0 / 3.0) {
    if (traj.empty()) throw PreconditionError("detect_extinction: empty trajectory");
    if (!(threshold > 0.0) || !(tail_fraction > 0.0) || !(tail_fraction <= 1.0))
        throw PreconditionError("detect_extinction: bad threshold or tail fraction");

    const double t_lo = traj.t_end() - tail_fraction * (traj.t_end() - traj.t_begin());
    std::array<double, 4> peak{0.0, 0.0, 0.0, 0.0};
    for (size_t i = 0; i < traj.size(); ++i) {
        if (traj.times[i] < t_lo) continue;
        for (int c = 0; c < 4; ++c) peak[static_cast<size_t>(c)] = std::max(peak[static_cast<size_t>(c)], traj.states[i][c]);
    }
    std::set<int> extinct;
    for (int c = 0; c < 4; ++c)
        if (peak[static_cast<size_t>(c)] < threshold) extinct.insert(c + 1);
    return extinct;
}

// Successive dwell ratios per node over its closed visits. Near an attracting
// cycle these exceed 1 (dwell times grow geometrically).
inline std::map<int, std::vector<double>> dwell_growth(const Itinerary& itin) {
    std::map<int, std::vector<double>> dwells;
    for (const auto& v : itin.visits)
        if (v.closed) dwells[v.node].push_back(v.dwell());
    std::map<int, std::vector<double>> ratios;
    for (const auto& [node, d] : dwells) {
        if (d.size() < 2) continue;
        std::vector<double> r;
        for (size_t i = 1; i < d.size(); ++i) r.push_back(d[i] / d[i - 1]);
        ratios[node] = std::move(r);
    }
    return ratios;
}

// Last `count` visit node ids, oldest first.
inline std::vector<int> tail_word(const Itinerary& itin, size_t count) {
    std::vector<int> w;
    const size_t n = itin.visits.size();
    for (size_t i = n > count ? n - count : 0; i < n; ++i) w.push_back(itin.visits[i].node);
    return w;
}

// True when the last `count` visits are a contiguous subword of the infinite
// repetition of `word` (any rotation).
inline bool tail_is_cyclic_word(const Itinerary& itin, const std::vector<int>& word,
                                size_t count) {
    if (count == 0 || itin.visits.size() < count || word.empty()) return false;
    const auto tail = tail_word(itin, count);
    const size_t m = word.size();
    for (size_t r = 0; r < m; ++r) {
        bool ok = true;
        for (size_t i = 0; i < tail.size(); ++i)
            if (tail[i] != word[(r + i) % m]) {
                ok = false;
                break;
            }
        if (ok) return true;
    }
    return false;
}

inline std::set<int> tail_node_set(const Itinerary& itin, size_t count) {
    std::set<int> s;
    for (int n : tail_word(itin, count)) s.insert(n);
    return s;
}

// ---------------------------------------------------------------------------
// CSV export (shortest round-trip formatting; files reload bit-identically)
// ---------------------------------------------------------------------------

inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

inline std::string to_csv(const Trajectory& traj) {
    std::string out = "t,x1,x2,x3,x4\n";
    for (size_t i = 0; i < traj.size(); ++i) {
        out += format_double(traj.times[i]);
        for (int c = 0; c < 4; ++c) {
            out += ',';
            out += format_double(traj.states[i][c]);
        }
        out += '\n';
    }
    return out;
}

inline Trajectory from_csv(const std::string& csv) {
    Trajectory traj;
    size_t pos = csv.find('\n');
    if (pos == std::string::npos || csv.substr(0, pos) != "t,x1,x2,x3,x4")
        throw StructuralError("from_csv: bad header");
    ++pos;
    while (pos < csv.size()) {
        size_t eol = csv.find('\n', pos);
        if (eol == std::string::npos) eol = csv.size();
        const std::string_view line(csv.data() + pos, eol - pos);
        if (!line.empty()) {
            std::array<double, 5> vals{};
            size_t field = 0, start = 0;
            for (size_t i = 0; i <= line.size() && field < 5; ++i) {
                if (i == line.size() || line[i] == ',') {
                    const auto* b = line.data() + start;
                    const auto* e = line.data() + i;
                    auto [p2, ec] = std::from_chars(b, e, vals[field]);
                    if (ec != std::errc() || p2 != e)
                        throw StructuralError("from_csv: bad number");
                    ++field;
                    start = i + 1;
                }
            }
            if (field != 5) throw StructuralError("from_csv: bad row");
            traj.times.push_back(vals[0]);
            traj.states.push_back({vals[1], vals[2], vals[3], vals[4]});
        }
        pos = eol + 1;
    }
    return traj;
}

}  // namespace jungle
