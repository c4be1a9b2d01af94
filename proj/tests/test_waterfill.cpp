#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "ofdma/oracles.hpp"
#include "ofdma/waterfill.hpp"
#include "test_support.hpp"

using ofdma::user_rate;
using ofdma::waterfill;
using ofdma::WaterfillSolution;
using test_support::uniform;

namespace {

double achieved_objective(const std::vector<double>& cnr, const WaterfillSolution& solution) {
    double objective = 0.0;
    for (std::size_t n = 0; n < cnr.size(); ++n) {
        objective += std::log2(1.0 + solution.powers[n] * cnr[n]);
    }
    return objective;
}

void check_kkt(const std::vector<double>& cnr, double budget,
               const WaterfillSolution& solution) {
    const double mu = solution.water_level;
    double total = 0.0;
    for (std::size_t n = 0; n < cnr.size(); ++n) {
        const double p = solution.powers[n];
        const double inverse = 1.0 / cnr[n];
        REQUIRE(p >= 0.0);
        if (p > 0.0) {
            REQUIRE(std::abs(p + inverse - mu) <= 1e-9 * mu);
        } else {
            REQUIRE(inverse >= mu * (1.0 - 1e-9));
        }
        total += p;
    }
    if (budget > 0.0) {
        REQUIRE(total == doctest::Approx(budget).epsilon(1e-9));
    }
}

}  // namespace

TEST_CASE("symmetric two-subcarrier split") {
    const std::vector<double> cnr{1.0, 1.0};
    const WaterfillSolution solution = waterfill(cnr, 2.0);
    CHECK(solution.powers[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(solution.powers[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(solution.water_level == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(solution.active_count == 2);
}

TEST_CASE("weak subcarrier lands exactly at zero power") {
    const std::vector<double> cnr{1.0, 0.5};
    const WaterfillSolution solution = waterfill(cnr, 1.0);
    CHECK(solution.powers[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(solution.powers[1] == doctest::Approx(0.0));
    CHECK(solution.water_level == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("third subcarrier deactivated below the level") {
    const std::vector<double> cnr{4.0, 2.0, 1.0};
    const WaterfillSolution solution = waterfill(cnr, 1.0);
    CHECK(solution.powers[0] == doctest::Approx(0.625).epsilon(1e-12));
    CHECK(solution.powers[1] == doctest::Approx(0.375).epsilon(1e-12));
    CHECK(solution.powers[2] == doctest::Approx(0.0));
    CHECK(solution.water_level == doctest::Approx(0.875).epsilon(1e-12));
    CHECK(solution.active_count == 2);
}

TEST_CASE("zero budget gives zero powers and zero rate") {
    const std::vector<double> cnr{2.0, 1.0};
    const WaterfillSolution solution = waterfill(cnr, 0.0);
    CHECK(solution.powers == std::vector<double>{0.0, 0.0});
    CHECK(user_rate(cnr, solution.powers, 2, 1.0) == 0.0);
}

TEST_CASE("level and budget invariants hold on random instances") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 300; ++i) {
        const int m = 1 + static_cast<int>(rng() % 8);
        std::vector<double> cnr(m);
        for (double& h : cnr) h = uniform(rng, 0.05, 20.0);
        const double budget = uniform(rng, 0.0, 5.0);
        check_kkt(cnr, budget, waterfill(cnr, budget));
    }
}

TEST_CASE("achieved objective matches subset enumeration") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 200; ++i) {
        const int m = 1 + static_cast<int>(rng() % 5);
        std::vector<double> cnr(m);
        for (double& h : cnr) h = uniform(rng, 0.1, 10.0);
        const double budget = uniform(rng, 0.1, 5.0);
        const double achieved = achieved_objective(cnr, waterfill(cnr, budget));
        const double best = ofdma::waterfill_best_objective(cnr, budget);
        CHECK(std::abs(best - achieved) <= 1e-6);
    }
}

TEST_CASE("rate never drops when the budget grows") {
    std::mt19937_64 rng(31);
    std::vector<double> cnr(6);
    for (double& h : cnr) h = uniform(rng, 0.1, 10.0);
    double previous = -1.0;
    for (double budget = 0.0; budget <= 4.0; budget += 0.25) {
        const WaterfillSolution solution = waterfill(cnr, budget);
        const double rate = user_rate(cnr, solution.powers, 6, 1.0);
        CHECK(rate >= previous);
        previous = rate;
    }
}

TEST_CASE("invalid inputs are rejected") {
    CHECK_THROWS_AS(waterfill(std::vector<double>{1.0, 0.0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(waterfill(std::vector<double>{-1.0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(waterfill(std::vector<double>{1.0}, -0.5), std::invalid_argument);
}

TEST_CASE("user_rate evaluates the gap-adjusted spectral efficiency") {
    CHECK(user_rate(std::vector<double>{1.0}, std::vector<double>{1.0}, 1, 1.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(user_rate(std::vector<double>{1.0, 1.0}, std::vector<double>{1.0, 1.0}, 2, 1.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(user_rate(std::vector<double>{3.0, 7.0}, std::vector<double>{0.0, 0.0}, 2, 1.0) ==
          0.0);
    // Doubling the gap at pH = 2 halves the per-subcarrier SNR to 1.
    CHECK(user_rate(std::vector<double>{2.0}, std::vector<double>{1.0}, 1, 2.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(user_rate(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0}, 2, 1.0),
                    std::invalid_argument);
}
