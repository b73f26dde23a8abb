#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <complex>
#include <optional>
#include <random>
#include <vector>

#include "jungle/params.hpp"

namespace jungle {

// ---------------------------------------------------------------------------
// Vector field
//
//   x1' = x1 (1 - R + e_B x2 + e_A x3 - c_D x4)
//   x2' = x2 (1 - R - c_B x1 + e_B x3 + e_A x4)
//   x3' = x3 (1 - R - c_A x1 - c_B x2 + e_B x4)
//   x4' = x4 (1 - R + e_D x1 - c_A x2 - c_B x3),   R = x1+x2+x3+x4
//
// Each component carries the factor x_i, so coordinate hyperplanes are
// invariant bitwise: x_i == 0 gives x_i' == 0 exactly in IEEE arithmetic.
// ---------------------------------------------------------------------------

// Per-capita growth rates g_i with x_i' = x_i * g_i(x).
inline std::array<double, 4> growth_rates(const StateVec& s, const InteractionParams& p) {
    const double R = s.total();
    const double base = 1.0 - R;
    return {
        base + p.e_B * s[1] + p.e_A * s[2] - p.c_D * s[3],
        base - p.c_B * s[0] + p.e_B * s[2] + p.e_A * s[3],
        base - p.c_A * s[0] - p.c_B * s[1] + p.e_B * s[3],
        base + p.e_D * s[0] - p.c_A * s[1] - p.c_B * s[2],
    };
}

// Polynomial extension of the field; no domain checks. The finite-difference
// Jacobian probes points slightly outside the positive cone.
inline StateVec rhs_unchecked(const StateVec& s, const InteractionParams& p) {
    const auto g = growth_rates(s, p);
    return {s[0] * g[0], s[1] * g[1], s[2] * g[2], s[3] * g[3]};
}

inline StateVec rhs(const StateVec& s, const InteractionParams& p) {
    if (!s.finite() || !s.nonnegative())
        throw PreconditionError("rhs: state must be finite and nonnegative");
    return rhs_unchecked(s, p);
}

// Axis equilibrium xi_j (unit point on axis j), j in 1..4.
inline StateVec axis_equilibrium(int j) {
    if (j < 1 || j > 4) throw PreconditionError("axis_equilibrium: node id must be 1..4");
    StateVec s;
    s[j - 1] = 1.0;
    return s;
}

// ---------------------------------------------------------------------------
// Equilibria. Besides the origin and the four axis points the system has no
// admissible equilibria; that claim is re-checked numerically per parameter
// set (solve the face-restricted linear systems and test strict positivity).
// ---------------------------------------------------------------------------

struct LabeledEquilibrium {
    std::string label;
    StateVec point;
};

// Interaction matrix M with g_i = 1 - R + sum_j M_ij x_j.
inline Eigen::Matrix4d interaction_matrix(const InteractionParams& p) {
    Eigen::Matrix4d M;
    M << 0.0, p.e_B, p.e_A, -p.c_D,
        -p.c_B, 0.0, p.e_B, p.e_A,
        -p.c_A, -p.c_B, 0.0, p.e_B,
        p.e_D, -p.c_A, -p.c_B, 0.0;
    return M;
}

// Strictly positive solution of g_i = 0 for all four species, if one exists.
// Solving (M - 1) x = -1 and testing strict positivity diagnoses a
// four-species coexistence point, which would sit inside the heteroclinic
// network. (The three-species faces do contain their own rock-paper-scissors
// coexistence equilibria; those live outside this check and outside the
// network's coordinate planes.)
inline std::optional<StateVec> interior_equilibrium(const InteractionParams& p,
                                                    double positivity_tol = 1e-12) {
    Eigen::Matrix4d A = interaction_matrix(p) - Eigen::Matrix4d::Ones();
    Eigen::FullPivLU<Eigen::Matrix4d> lu(A);
    if (!lu.isInvertible()) return std::nullopt;
    const Eigen::Vector4d sol = lu.solve(Eigen::Vector4d::Constant(-1.0));
    for (int r = 0; r < 4; ++r)
        if (!(sol(r) > positivity_tol)) return std::nullopt;
    return StateVec{sol(0), sol(1), sol(2), sol(3)};
}

// Origin plus the four axis points. Raises if an admissible four-species
// coexistence equilibrium shows up for these parameters.
inline std::vector<LabeledEquilibrium> equilibria(const InteractionParams& p) {
    if (!p.all_positive()) throw PreconditionError("equilibria: invalid parameters");
    if (interior_equilibrium(p))
        throw StructuralError("equilibria: admissible interior equilibrium detected");
    std::vector<LabeledEquilibrium> out;
    out.push_back({"origin", StateVec{}});
    for (int j = 1; j <= 4; ++j) out.push_back({"xi" + std::to_string(j), axis_equilibrium(j)});
    return out;
}

// ---------------------------------------------------------------------------
// Spectra at the axis equilibria. Off-axis eigenvalues read directly off the
// coefficients; the radial eigenvalue is -1 (row structure of the field; the
// finite-difference oracle re-checks it).
// ---------------------------------------------------------------------------

struct NodeSpectrum {
    int node = 0;          // 1..4
    double radial = -1.0;  // eigenvalue in the axis direction
    struct OffAxis {
        int direction;  // axis id 1..4, != node
        double value;
    };
    std::array<OffAxis, 3> off_axis{};

    double value_toward(int direction) const {
        for (const auto& e : off_axis)
            if (e.direction == direction) return e.value;
        throw PreconditionError("NodeSpectrum: bad direction");
    }
    int expanding_count() const {
        int n = 0;
        for (const auto& e : off_axis)
            if (e.value > 0.0) ++n;
        return n;
    }
    // All four eigenvalues, unsorted.
    std::array<double, 4> all() const {
        return {radial, off_axis[0].value, off_axis[1].value, off_axis[2].value};
    }
};

inline NodeSpectrum analytic_spectrum(int j, const InteractionParams& p) {
    NodeSpectrum s;
    s.node = j;
    switch (j) {
        case 1: s.off_axis = {{{2, -p.c_B}, {3, -p.c_A}, {4, p.e_D}}}; break;
        case 2: s.off_axis = {{{1, p.e_B}, {3, -p.c_B}, {4, -p.c_A}}}; break;
        case 3: s.off_axis = {{{1, p.e_A}, {2, p.e_B}, {4, -p.c_B}}}; break;
        case 4: s.off_axis = {{{1, -p.c_D}, {2, p.e_A}, {3, p.e_B}}}; break;
        default: throw PreconditionError("analytic_spectrum: node id must be 1..4");
    }
    return s;
}

// ---------------------------------------------------------------------------
// Finite-difference oracle
// ---------------------------------------------------------------------------

inline Eigen::Matrix4d numerical_jacobian(const StateVec& s, const InteractionParams& p,
                                          double h = 1e-5) {
    if (!s.finite()) throw PreconditionError("numerical_jacobian: non-finite state");
    if (!(h > 0.0)) throw PreconditionError("numerical_jacobian: step must be positive");
    Eigen::Matrix4d J;
    for (int k = 0; k < 4; ++k) {
        StateVec fwd = s, bwd = s;
        fwd[k] += h;
        bwd[k] -= h;
        const StateVec df = rhs_unchecked(fwd, p) - rhs_unchecked(bwd, p);
        for (int i = 0; i < 4; ++i) {
            J(i, k) = df[i] / (2.0 * h);
            if (!std::isfinite(J(i, k)))
                throw StructuralError("numerical_jacobian: non-finite entry");
        }
    }
    return J;
}

inline std::array<std::complex<double>, 4> eigenvalues(const Eigen::Matrix4d& m) {
    Eigen::EigenSolver<Eigen::Matrix4d> solver(m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw StructuralError("eigenvalues: eigensolver did not converge");
    std::array<std::complex<double>, 4> ev;
    for (int i = 0; i < 4; ++i) ev[static_cast<size_t>(i)] = solver.eigenvalues()(i);
    return ev;
}

// Real spectra sorted ascending; used to compare the oracle against the
// analytic table.
inline std::array<double, 4> sorted_real_eigenvalues(const Eigen::Matrix4d& m,
                                                     double imag_tol = 1e-9) {
    auto ev = eigenvalues(m);
    std::array<double, 4> out{};
    for (size_t i = 0; i < 4; ++i) {
        if (std::abs(ev[i].imag()) > imag_tol)
            throw StructuralError("sorted_real_eigenvalues: complex eigenvalue");
        out[i] = ev[i].real();
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::array<double, 4> sorted_spectrum(const NodeSpectrum& s) {
    auto v = s.all();
    std::sort(v.begin(), v.end());
    return v;
}

// ---------------------------------------------------------------------------
// Attracting invariant sphere condition: all e < 1. The quartic form
// <Q(X), X> from the change of variables X_i^2 = x_i is sampled on the unit
// sphere; it must be negative everywhere when the condition holds.
// ---------------------------------------------------------------------------

inline double sphere_form(const std::array<double, 4>& X, const InteractionParams& p) {
    const double s1 = X[0] * X[0], s2 = X[1] * X[1], s3 = X[2] * X[2], s4 = X[3] * X[3];
    const double r1 = s1 * (-s1 - (1.0 - p.e_B) * s2 - (1.0 - p.e_A) * s3 - (1.0 + p.c_D) * s4);
    const double r2 = s2 * (-(1.0 + p.c_B) * s1 - s2 - (1.0 - p.e_B) * s3 - (1.0 - p.e_A) * s4);
    const double r3 = s3 * (-(1.0 + p.c_A) * s1 - (1.0 + p.c_B) * s2 - s3 - (1.0 - p.e_B) * s4);
    const double r4 = s4 * (-(1.0 - p.e_D) * s1 - (1.0 + p.c_A) * s2 - (1.0 + p.c_B) * s3 - s4);
    return 0.5 * (r1 + r2 + r3 + r4);
}

struct SphereCheck {
    bool holds = false;           // all e < 1
    bool all_negative = false;    // every sampled form value < 0
    double worst_value = 0.0;     // max sampled value
    std::optional<std::array<double, 4>> witness;  // sample with form >= 0, if any
    int samples = 0;
};

inline SphereCheck check_invariant_sphere(const InteractionParams& p, int n_samples,
                                          uint64_t seed) {
    if (n_samples < 1) throw PreconditionError("check_invariant_sphere: n_samples >= 1");
    SphereCheck out;
    out.holds = p.all_e_below_one();
    out.samples = n_samples;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    out.worst_value = -std::numeric_limits<double>::infinity();
    out.all_negative = true;
    for (int i = 0; i < n_samples; ++i) {
        std::array<double, 4> X;
        double norm2 = 0.0;
        do {
            norm2 = 0.0;
            for (auto& v : X) {
                v = gauss(rng);
                norm2 += v * v;
            }
        } while (norm2 < 1e-12);  // excludes X = 0
        const double inv = 1.0 / std::sqrt(norm2);
        for (auto& v : X) v *= inv;
        const double q = sphere_form(X, p);
        if (q > out.worst_value) out.worst_value = q;
        if (q >= 0.0) {
            out.all_negative = false;
            if (!out.witness) out.witness = X;
        }
    }
    return out;
}

}  // namespace jungle
