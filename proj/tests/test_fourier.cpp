#include <doctest.h>

#include <random>

#include "cvwit/fourier.hpp"
#include "cvwit/states.hpp"
#include "support.hpp"

using namespace cvwit;
using cvwit::testing::dense_expectation;

namespace {

struct Products {
    cplx plus;
    cplx minus;
};

// Moment products carried by the top frequencies, from a dense oracle.
Products oracle(const TruncatedState& s1, const TruncatedState& s2, int mp, int np) {
    return {dense_expectation(s1, {0, mp, 0, np}) * dense_expectation(s2, {mp, 0, np, 0}),
            dense_expectation(s1, {0, mp, np, 0}) * dense_expectation(s2, {mp, 0, 0, np})};
}

TopCoefficients extract(const TruncatedState& s1, const TruncatedState& s2, int mp, int np, int oversample = 1) {
    return extract_top_coefficients(sample_correlator_grid(s1, s2, mp, np, plan_grid(mp, np, oversample)));
}

}  // namespace

TEST_CASE("grid plans") {
    CHECK(plan_grid(1, 1).u == 3);
    CHECK(plan_grid(1, 1).points() == 9);
    CHECK(plan_grid(1, 0).u == 3);
    CHECK(plan_grid(1, 0).v == 1);
    CHECK(plan_grid(2, 2).points() == 25);
    CHECK(plan_grid(1, 2, 2).u == 6);
    CHECK(plan_grid(1, 2, 2).v == 10);
    CHECK_THROWS_AS((void)plan_grid(0, 0), InvalidArgument);
    CHECK_THROWS_AS((void)plan_grid(1, 1, 0), InvalidArgument);
}

TEST_CASE("vacuum inputs give vanishing top coefficients") {
    const auto v = TruncatedState::vacuum(2);
    const auto top = extract(v, v, 1, 1);
    CHECK(std::abs(top.plus) == 0.0);
    CHECK(std::abs(top.minus) == 0.0);
}

TEST_CASE("TMSV against a real coherent reference") {
    const double l = 0.5, g = 0.9;
    TruncatedState s1 = build({Tmsv{l}}), s2 = build({CoherentProduct{g, g}});
    share_cutoff(s1, s2);
    const auto top = extract(s1, s2, 1, 1);
    CHECK(std::abs(top.plus - cplx(l / (1 - l * l) * g * g)) < 1e-8);
    const auto o = oracle(s1, s2, 1, 1);
    CHECK(std::abs(top.plus - o.plus) < 1e-8);
    CHECK(std::abs(top.minus - o.minus) < 1e-8);
}

TEST_CASE("NOON against a coherent reference") {
    const cplx alpha{0.6, 0.0}, beta{0.0, 0.8}, gamma{0.5, 0.2}, delta{-0.3, 0.4};
    TruncatedState s1 = build({Noon{2, alpha, beta}}), s2 = build({CoherentProduct{gamma, delta}});
    share_cutoff(s1, s2);
    const auto top = extract(s1, s2, 2, 2);
    // <a^2 b†^2> = alpha beta* 2!, <a†^2 b^2> of the coherent state = gamma*^2 delta^2
    const cplx expected = alpha * std::conj(beta) * 2.0 * std::conj(gamma) * std::conj(gamma) * delta * delta;
    CHECK(std::abs(top.minus - expected) < 1e-8);
    CHECK(std::abs(top.plus) < 1e-8);
}

TEST_CASE("exactness on minimal grids for random small states") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 6; ++trial) {
        const auto s1 = cvwit::testing::random_pure(rng, 3);
        const auto s2 = trial % 2 ? cvwit::testing::random_separable_mixture(rng, 3, 2)
                                  : cvwit::testing::random_pure(rng, 3);
        for (int mp = 0; mp <= 3; ++mp)
            for (int np = 0; np + mp <= 4; ++np) {
                if (mp == 0 && np == 0) continue;
                const auto top = extract(s1, s2, mp, np);
                const auto o = oracle(s1, s2, mp, np);
                CHECK(std::abs(top.plus - o.plus) < 1e-9);
                CHECK(std::abs(top.minus - o.minus) < 1e-9);
                CHECK(top.out_of_band == 0.0);
            }
    }
}

TEST_CASE("conjugate symmetry of the raw coefficients") {
    std::mt19937_64 rng(8);
    const auto s1 = cvwit::testing::random_pure(rng, 3);
    const auto s2 = cvwit::testing::random_pure(rng, 3);
    const auto grid = sample_correlator_grid(s1, s2, 2, 1, plan_grid(2, 1));
    for (int f = -2; f <= 2; ++f)
        for (int g = -1; g <= 1; ++g)
            CHECK(std::abs(fourier_coefficient(grid, -f, -g) - std::conj(fourier_coefficient(grid, f, g))) < 1e-12);
}

TEST_CASE("oversampling does not change the coefficients") {
    std::mt19937_64 rng(13);
    const auto s1 = cvwit::testing::random_pure(rng, 3);
    const auto s2 = cvwit::testing::random_pure(rng, 3);
    for (const auto& [mp, np] : {std::pair{1, 1}, std::pair{2, 1}, std::pair{1, 2}}) {
        const auto a = extract(s1, s2, mp, np, 1);
        const auto b = extract(s1, s2, mp, np, 2);
        CHECK(std::abs(a.plus - b.plus) < 1e-10);
        CHECK(std::abs(a.minus - b.minus) < 1e-10);
        CHECK(b.out_of_band < 1e-9);
    }
}

TEST_CASE("coarse grids are rejected") {
    std::mt19937_64 rng(1);
    const auto s = cvwit::testing::random_pure(rng, 3);
    const auto coarse = sample_correlator_grid(s, s, 2, 1, plan_grid(1, 1));
    CHECK_THROWS_AS((void)extract_top_coefficients(coarse), AliasingDetected);
}

TEST_CASE("out-of-band content is detected on oversampled grids") {
    std::mt19937_64 rng(6);
    const auto s = cvwit::testing::random_pure(rng, 3);
    auto grid = sample_correlator_grid(s, s, 1, 1, plan_grid(1, 1, 2));
    // inject a frequency above the band
    for (int u = 0; u < grid.plan.u; ++u)
        for (int v = 0; v < grid.plan.v; ++v)
            grid.values[static_cast<std::size_t>(u * grid.plan.v + v)] += 0.1 * std::cos(2.0 * grid.phases(u, v).phi());
    CHECK_THROWS_AS((void)extract_top_coefficients(grid), AliasingDetected);
    ExtractOptions off;
    off.band_tolerance = -1.0;
    CHECK_NOTHROW((void)extract_top_coefficients(grid, off));
}
