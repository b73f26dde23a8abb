#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace jungle {

// Interaction rates of the four-species system, grouped by edge class:
//   A edges: e_A = e_31 = e_42,   c_A = c_13 = c_24
//   B edges: e_B = e_21 = e_32 = e_43,   c_B = c_12 = c_23 = c_34
//   D edge:  e_D = e_14,   c_D = c_41
struct InteractionParams {
    double e_A, e_B, e_D;
    double c_A, c_B, c_D;

    bool all_positive() const {
        for (double v : {e_A, e_B, e_D, c_A, c_B, c_D})
            if (!(v > 0.0) || !std::isfinite(v)) return false;
        return true;
    }

    double min_c() const { return std::min({c_A, c_B, c_D}); }
    double max_e() const { return std::max({e_A, e_B, e_D}); }

    // min c > max e, e_A > e_B, c_A > c_B (strict).
    bool standing_assumptions() const {
        return all_positive() && min_c() > max_e() && e_A > e_B && c_A > c_B;
    }

    // Condition for an attracting invariant sphere.
    bool all_e_below_one() const {
        return all_positive() && e_A < 1.0 && e_B < 1.0 && e_D < 1.0;
    }

    std::vector<std::string> assumption_violations() const {
        std::vector<std::string> v;
        if (!all_positive()) v.push_back("all six rates must be strictly positive and finite");
        else {
            if (!(min_c() > max_e())) v.push_back("min c > max e violated");
            if (!(e_A > e_B)) v.push_back("e_A > e_B violated");
            if (!(c_A > c_B)) v.push_back("c_A > c_B violated");
        }
        return v;
    }

    InteractionParams scaled(double lambda) const {
        return {e_A * lambda, e_B * lambda, e_D * lambda,
                c_A * lambda, c_B * lambda, c_D * lambda};
    }
};

// Parameter values from the reference simulation.
inline InteractionParams reference_params() {
    return {/*e_A=*/0.7, /*e_B=*/0.65, /*e_D=*/0.72,
            /*c_A=*/1.2, /*c_B=*/1.0, /*c_D=*/1.1};
}

// Population densities (x1, x2, x3, x4), nonnegative.
struct StateVec {
    std::array<double, 4> x{0.0, 0.0, 0.0, 0.0};

    StateVec() = default;
    StateVec(double x1, double x2, double x3, double x4) : x{x1, x2, x3, x4} {}

    double& operator[](int i) { return x[static_cast<size_t>(i)]; }
    double operator[](int i) const { return x[static_cast<size_t>(i)]; }

    double total() const { return x[0] + x[1] + x[2] + x[3]; }

    bool finite() const {
        for (double v : x)
            if (!std::isfinite(v)) return false;
        return true;
    }
    bool nonnegative() const {
        for (double v : x)
            if (v < 0.0) return false;
        return true;
    }

    double inf_norm() const {
        double m = 0.0;
        for (double v : x) m = std::max(m, std::abs(v));
        return m;
    }

    friend StateVec operator+(const StateVec& a, const StateVec& b) {
        return {a.x[0] + b.x[0], a.x[1] + b.x[1], a.x[2] + b.x[2], a.x[3] + b.x[3]};
    }
    friend StateVec operator-(const StateVec& a, const StateVec& b) {
        return {a.x[0] - b.x[0], a.x[1] - b.x[1], a.x[2] - b.x[2], a.x[3] - b.x[3]};
    }
    friend StateVec operator*(double s, const StateVec& a) {
        return {s * a.x[0], s * a.x[1], s * a.x[2], s * a.x[3]};
    }
    friend bool operator==(const StateVec& a, const StateVec& b) { return a.x == b.x; }
};

inline double inf_dist(const StateVec& a, const StateVec& b) { return (a - b).inf_norm(); }

struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct StructuralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace jungle
