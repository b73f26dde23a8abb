#include <catch2/catch.hpp>

#include <random>

#include "jungle/model.hpp"
#include "jungle/sampling.hpp"

using namespace jungle;

namespace {

StateVec random_state(std::mt19937_64& rng, double scale = 1.5) {
    std::uniform_real_distribution<double> dist(0.0, scale);
    return {dist(rng), dist(rng), dist(rng), dist(rng)};
}

}  // namespace

TEST_CASE("rhs vanishes at the axis equilibria and the origin", "[model]") {
    const auto p = reference_params();
    for (int j = 1; j <= 4; ++j) {
        const StateVec dot = rhs(axis_equilibrium(j), p);
        for (int i = 0; i < 4; ++i) REQUIRE(dot[i] == 0.0);
    }
    const StateVec at_origin = rhs(StateVec{}, p);
    for (int i = 0; i < 4; ++i) REQUIRE(at_origin[i] == 0.0);
}

TEST_CASE("rhs hand-expanded near xi1 with a trace of species 4", "[model]") {
    const auto p = reference_params();
    const double delta = 1e-6;
    const StateVec dot = rhs({1.0, 0.0, 0.0, delta}, p);
    // x4' = x4 (1 - R + e_D x1) = delta (e_D - delta)
    REQUIRE(dot[3] == Approx(delta * (p.e_D - delta)).margin(1e-18));
    REQUIRE(dot[3] == Approx(7.2e-7).epsilon(1e-4));
    REQUIRE(dot[1] == 0.0);
    REQUIRE(dot[2] == 0.0);
}

TEST_CASE("rhs rejects negative and non-finite states", "[model]") {
    const auto p = reference_params();
    REQUIRE_THROWS_AS(rhs({-0.1, 0.0, 0.0, 0.0}, p), PreconditionError);
    REQUIRE_THROWS_AS(rhs({0.1, std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0}, p),
                      PreconditionError);
}

TEST_CASE("coordinate hyperplanes are invariant", "[model]") {
    const auto p = reference_params();
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        for (int i = 0; i < 4; ++i) {
            StateVec s = random_state(rng);
            s[i] = 0.0;
            REQUIRE(rhs(s, p)[i] == 0.0);
        }
    }
}

TEST_CASE("equilibria returns exactly the origin and the four axis points", "[model]") {
    const auto p = reference_params();
    const auto eq = equilibria(p);
    REQUIRE(eq.size() == 5);
    REQUIRE(eq[0].label == "origin");
    REQUIRE(eq[2].label == "xi2");
    REQUIRE(eq[2].point == StateVec{0.0, 1.0, 0.0, 0.0});
    for (const auto& [label, point] : eq) {
        const StateVec dot = rhs(point, p);
        for (int i = 0; i < 4; ++i) REQUIRE(dot[i] == 0.0);
    }
    REQUIRE_FALSE(interior_equilibrium(p).has_value());
}

TEST_CASE("analytic spectra read off the coefficients", "[model]") {
    const auto p = reference_params();

    const auto s4 = analytic_spectrum(4, p);
    REQUIRE(s4.radial == -1.0);
    REQUIRE(s4.value_toward(1) == -p.c_D);
    REQUIRE(s4.value_toward(2) == p.e_A);
    REQUIRE(s4.value_toward(3) == p.e_B);

    REQUIRE(analytic_spectrum(1, p).radial == -1.0);

    const auto s3 = analytic_spectrum(3, p);
    REQUIRE(s3.expanding_count() == 2);
    REQUIRE(s3.value_toward(1) == p.e_A);
    REQUIRE(s3.value_toward(2) == p.e_B);

    REQUIRE_THROWS_AS(analytic_spectrum(0, p), PreconditionError);
    REQUIRE_THROWS_AS(analytic_spectrum(5, p), PreconditionError);
}

TEST_CASE("expanding counts per node match the network fan-out", "[model]") {
    std::mt19937_64 rng(11);
    const int expected[4] = {1, 1, 2, 2};
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = sample_standing_params(rng);
        for (int j = 1; j <= 4; ++j)
            REQUIRE(analytic_spectrum(j, p).expanding_count() == expected[j - 1]);
    }
}

TEST_CASE("finite-difference Jacobian matches the analytic spectrum", "[model]") {
    const auto p = reference_params();

    SECTION("xi4, reference parameters, 1e-9") {
        const auto J = numerical_jacobian(axis_equilibrium(4), p);
        const auto numeric = sorted_real_eigenvalues(J);
        const auto analytic = sorted_spectrum(analytic_spectrum(4, p));
        for (int i = 0; i < 4; ++i)
            REQUIRE(numeric[size_t(i)] == Approx(analytic[size_t(i)]).margin(1e-9));
        // {-1.1, -1, 0.65, 0.7}
        REQUIRE(numeric[0] == Approx(-1.1).margin(1e-9));
        REQUIRE(numeric[3] == Approx(0.7).margin(1e-9));
    }

    SECTION("xi2 with its double eigenvalue, h = 1e-5, 1e-8") {
        const auto J = numerical_jacobian(axis_equilibrium(2), p, 1e-5);
        const auto numeric = sorted_real_eigenvalues(J);
        const double expected[4] = {-1.2, -1.0, -1.0, 0.65};
        for (int i = 0; i < 4; ++i)
            REQUIRE(numeric[size_t(i)] == Approx(expected[i]).margin(1e-8));
    }

    SECTION("origin linearizes to the identity") {
        const auto J = numerical_jacobian(StateVec{}, p);
        for (int i = 0; i < 4; ++i)
            for (int k = 0; k < 4; ++k)
                REQUIRE(J(i, k) == Approx(i == k ? 1.0 : 0.0).margin(1e-11));
    }

    SECTION("structural zeros are exact at axis points") {
        for (int j = 1; j <= 4; ++j) {
            const auto J = numerical_jacobian(axis_equilibrium(j), p);
            for (int i = 0; i < 4; ++i)
                for (int k = 0; k < 4; ++k)
                    if (i != j - 1 && i != k) REQUIRE(J(i, k) == 0.0);
        }
    }

    SECTION("oracle property over 100 random parameter draws") {
        std::mt19937_64 rng(2024);
        for (int trial = 0; trial < 100; ++trial) {
            const auto q = sample_standing_params(rng);
            for (int j = 1; j <= 4; ++j) {
                const auto numeric =
                    sorted_real_eigenvalues(numerical_jacobian(axis_equilibrium(j), q));
                const auto analytic = sorted_spectrum(analytic_spectrum(j, q));
                for (int i = 0; i < 4; ++i)
                    REQUIRE(numeric[size_t(i)] == Approx(analytic[size_t(i)]).margin(1e-9));
            }
        }
    }

    SECTION("bad step size") {
        REQUIRE_THROWS_AS(numerical_jacobian(axis_equilibrium(1), p, 0.0), PreconditionError);
    }
}

TEST_CASE("invariant sphere condition", "[model]") {
    const auto p = reference_params();

    SECTION("holds for the reference parameters, all sampled values negative") {
        const auto check = check_invariant_sphere(p, 10000, 42);
        REQUIRE(check.holds);
        REQUIRE(check.all_negative);
        REQUIRE(check.worst_value < 0.0);
        REQUIRE_FALSE(check.witness.has_value());
    }

    SECTION("fails the hypothesis when e_A = 1.5") {
        auto q = p;
        q.e_A = 1.5;
        REQUIRE_FALSE(check_invariant_sphere(q, 100, 42).holds);
    }

    SECTION("sample count precondition") {
        REQUIRE_THROWS_AS(check_invariant_sphere(p, 0, 1), PreconditionError);
    }

    SECTION("form is strictly negative on axis directions too") {
        REQUIRE(sphere_form({1.0, 0.0, 0.0, 0.0}, p) < 0.0);
        REQUIRE(sphere_form({0.0, 0.0, 0.0, 1.0}, p) < 0.0);
    }
}

TEST_CASE("params validation and assumption flags", "[model]") {
    auto p = reference_params();
    REQUIRE(p.standing_assumptions());
    REQUIRE(p.all_e_below_one());
    REQUIRE(p.assumption_violations().empty());

    p.e_A = p.e_B;  // strict inequality required
    REQUIRE_FALSE(p.standing_assumptions());
    REQUIRE_FALSE(p.assumption_violations().empty());

    auto q = reference_params();
    q.c_B = -1.0;
    REQUIRE_FALSE(q.all_positive());
    REQUIRE_FALSE(q.standing_assumptions());
}
