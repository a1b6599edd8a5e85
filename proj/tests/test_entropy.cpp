#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "mubent/entropy.hpp"
#include "mubent/rng.hpp"

using Catch::Approx;
using mubent::Distribution;

TEST_CASE("Distribution validation", "[entropy]") {
    REQUIRE_NOTHROW(Distribution({0.5, 0.5}));
    REQUIRE_THROWS_AS(Distribution({0.5, -0.1, 0.6}), std::invalid_argument);
    REQUIRE_THROWS_AS(Distribution({0.5, 0.4}), std::invalid_argument);
    REQUIRE_THROWS_AS(Distribution({}), std::invalid_argument);
}

TEST_CASE("shannon fixed values", "[entropy]") {
    REQUIRE(mubent::shannon(Distribution({1.0, 0.0})) == Approx(0.0).margin(1e-15));
    REQUIRE(mubent::shannon(Distribution({0.25, 0.25, 0.25, 0.25})) ==
            Approx(2.0).margin(1e-12));
    REQUIRE(mubent::shannon(Distribution({0.5, 0.25, 0.25})) == Approx(1.5).margin(1e-12));
}

TEST_CASE("renyi fixed values and domain", "[entropy]") {
    for (double q : {1.5, 2.0, 3.0}) {
        REQUIRE(mubent::renyi(Distribution({0.25, 0.25, 0.25, 0.25}), q) ==
                Approx(2.0).margin(1e-12));
    }
    REQUIRE(mubent::renyi(Distribution({1.0, 0.0}), 2.0) == Approx(0.0).margin(1e-12));
    REQUIRE(mubent::renyi(Distribution({0.5, 0.5}), 2.0) == Approx(1.0).margin(1e-12));
    REQUIRE_THROWS_AS(mubent::renyi(Distribution({0.5, 0.5}), 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(mubent::renyi(Distribution({0.5, 0.5}), 0.5), std::invalid_argument);
}

TEST_CASE("tsallis fixed values and domain", "[entropy]") {
    REQUIRE(mubent::tsallis(Distribution({1.0, 0.0}), 2.0) == Approx(0.0).margin(1e-15));
    REQUIRE(mubent::tsallis(Distribution({0.5, 0.5}), 2.0) == Approx(0.5).margin(1e-12));
    REQUIRE(mubent::tsallis(Distribution({0.25, 0.25, 0.25, 0.25}), 2.0) ==
            Approx(0.75).margin(1e-12));
    REQUIRE_THROWS_AS(mubent::tsallis(Distribution({0.5, 0.5}), 1.0), std::invalid_argument);
}

TEST_CASE("ht_lower_bound fixed values", "[entropy]") {
    REQUIRE(mubent::ht_lower_bound(1.0, 1) == Approx(0.0).margin(1e-15));
    REQUIRE(mubent::ht_lower_bound(0.5, 1) == Approx(1.0).margin(1e-15));
    REQUIRE(mubent::ht_lower_bound(1.0 / 3.0, 2) == Approx(std::log2(3.0)).margin(1e-12));
    REQUIRE_THROWS_AS(mubent::ht_lower_bound(0.5, 0), std::invalid_argument);
}

TEST_CASE("ht_lower_bound is affine decreasing and tight at uniform points", "[entropy]") {
    for (int k = 1; k <= 9; ++k) {
        const double at_uniform = mubent::ht_lower_bound(1.0 / (k + 1.0), k);
        REQUIRE(at_uniform == Approx(std::log2(k + 1.0)).margin(1e-12));
        // affine: midpoint value is the mean of the endpoints
        const double f0 = mubent::ht_lower_bound(0.2, k);
        const double f1 = mubent::ht_lower_bound(0.8, k);
        const double fm = mubent::ht_lower_bound(0.5, k);
        REQUIRE(fm == Approx(0.5 * (f0 + f1)).margin(1e-12));
        REQUIRE(f0 > f1);  // decreasing in ic
    }
}

TEST_CASE("shannon dominates the HT bound on random distributions", "[entropy]") {
    for (std::size_t d = 2; d <= 10; ++d) {
        mubent::rng::Stream stream(77, "test-ht", d);
        for (int rep = 0; rep < 2000; ++rep) {
            const std::vector<double> p = stream.next_simplex(d);
            const double h = mubent::shannon(std::span<const double>(p));
            const double ic = mubent::index_of_coincidence(std::span<const double>(p));
            for (int k = 1; k < static_cast<int>(d); ++k) {
                if (h < mubent::ht_lower_bound(ic, k) - 1e-12) {
                    CAPTURE(d, k, rep, h, ic);
                    FAIL("HT bound violated");
                }
            }
        }
    }
}

TEST_CASE("renyi-2 never exceeds shannon", "[entropy]") {
    mubent::rng::Stream stream(78, "test-order");
    for (int rep = 0; rep < 2000; ++rep) {
        const std::vector<double> p = stream.next_simplex(5);
        REQUIRE(mubent::renyi(std::span<const double>(p), 2.0) <=
                mubent::shannon(std::span<const double>(p)) + 1e-12);
    }
}
