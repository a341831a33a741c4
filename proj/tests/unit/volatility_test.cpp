#include "exlq/volatility.hpp"

#include "exlq/rng.hpp"

#include "doctest.h"

#include <algorithm>
#include <random>
#include <vector>

using namespace exlq;

namespace {

std::vector<double> seeded_normals(std::size_t n, std::uint64_t seed, double sigma = 1.0) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = sigma * rng::standard_normal(seed, 0, i);
    }
    return out;
}

} // namespace

TEST_CASE("batch_variance uses the population divisor") {
    CHECK(batch_variance(std::vector<double>{3.0, 3.0, 3.0, 3.0}) == 0.0);
    CHECK(batch_variance(std::vector<double>{-1.0, 1.0, -1.0, 1.0}) == doctest::Approx(1.0));
    CHECK(batch_variance(std::vector<double>{0.0, 2.0}) == doctest::Approx(1.0));
    CHECK_THROWS_AS(batch_variance(std::vector<double>{1.0}), InvalidParameter);
}

TEST_CASE("estimate_bounds takes the batch min and max") {
    SUBCASE("degenerate lower from a constant batch") {
        BatchedSamples s({0.0, 0.0, 0.0, 0.0, -1.0, 1.0, -1.0, 1.0}, 2, 4);
        const BoundsEstimate est = estimate_bounds(s);
        CHECK(est.lower_sq == 0.0);
        CHECK(est.upper_sq == doctest::Approx(1.0));
        CHECK(est.degenerate_lower);
        CHECK_THROWS_AS(est.to_bounds(), InvalidParameter);
    }
    SUBCASE("identical batches collapse the interval") {
        BatchedSamples s({0.0, 2.0, 0.0, 2.0, 0.0, 2.0}, 3, 2);
        const BoundsEstimate est = estimate_bounds(s);
        CHECK(est.lower_sq == doctest::Approx(1.0));
        CHECK(est.upper_sq == doctest::Approx(1.0));
        CHECK_FALSE(est.degenerate_lower);
        CHECK_NOTHROW(est.to_bounds());
    }
}

TEST_CASE("standard normal batches bracket the unit variance") {
    const BatchedSamples s = BatchedSamples::with_batch_count(seeded_normals(10000, 42u), 10);
    CHECK(s.batch_size() == 1000);
    const BoundsEstimate est = estimate_bounds(s);
    CHECK(est.lower_sq <= 1.0);
    CHECK(est.upper_sq >= 1.0);
    CHECK(est.upper_sq - est.lower_sq < 0.3);
}

TEST_CASE("estimate is invariant under within-batch and batch permutations") {
    const std::vector<double> data = seeded_normals(600, 7u, 1.3);
    const BoundsEstimate base = estimate_bounds(BatchedSamples(data, 3, 200));

    std::vector<double> shuffled = data;
    std::mt19937 gen(3);
    for (std::size_t k = 0; k < 3; ++k) {
        std::shuffle(shuffled.begin() + 200 * k, shuffled.begin() + 200 * (k + 1), gen);
    }
    const BoundsEstimate within = estimate_bounds(BatchedSamples(shuffled, 3, 200));
    CHECK(within.lower_sq == doctest::Approx(base.lower_sq).epsilon(1e-12));
    CHECK(within.upper_sq == doctest::Approx(base.upper_sq).epsilon(1e-12));

    std::vector<double> swapped;
    swapped.insert(swapped.end(), data.begin() + 400, data.end());
    swapped.insert(swapped.end(), data.begin(), data.begin() + 400);
    const BoundsEstimate permuted = estimate_bounds(BatchedSamples(swapped, 3, 200));
    CHECK(permuted.lower_sq == doctest::Approx(base.lower_sq).epsilon(1e-12));
    CHECK(permuted.upper_sq == doctest::Approx(base.upper_sq).epsilon(1e-12));
}

TEST_CASE("interval width shrinks as the batch size grows") {
    const std::size_t m = 5;
    const BoundsEstimate small =
        estimate_bounds(BatchedSamples::with_batch_count(seeded_normals(5 * 100, 11u), m));
    const BoundsEstimate large =
        estimate_bounds(BatchedSamples::with_batch_count(seeded_normals(5 * 20000, 11u), m));
    CHECK(large.upper_sq - large.lower_sq < small.upper_sq - small.lower_sq);
}

TEST_CASE("trailing observations are discarded and counted") {
    std::vector<double> data = seeded_normals(103, 5u);
    const BatchedSamples s(data, 5, 20);
    CHECK(s.discarded() == 3);
    CHECK(estimate_bounds(s).discarded == 3);
}

TEST_CASE("batching invariants are enforced") {
    std::vector<double> data(10, 1.0);
    CHECK_THROWS_AS(BatchedSamples(data, 1, 5), InvalidParameter);
    CHECK_THROWS_AS(BatchedSamples(data, 5, 1), InvalidParameter);
    CHECK_THROWS_AS(BatchedSamples(data, 4, 3), InvalidParameter);
    CHECK_THROWS_AS(BatchedSamples::with_batch_count(data, 0), InvalidParameter);
    CHECK_THROWS_AS(BatchedSamples::with_batch_count({1.0, 2.0, 3.0}, 2), InvalidParameter);
}
