#include <doctest.h>

#include <numbers>
#include <random>

#include "cvwit/gaussian_ops.hpp"
#include "cvwit/states.hpp"
#include "support.hpp"

using namespace cvwit;

TEST_CASE("rotation of a number state") {
    const auto s = TruncatedState::fock(3, 1, 0);
    const double theta = 0.7;
    const auto r = apply_gaussian_op(s, Rotate{Mode::A, theta});
    const auto& amp = r.components()[0].amplitudes;
    CHECK(std::abs(amp[r.index(1, 0)] - std::polar(1.0, -theta)) < 1e-14);
    const auto p0 = photon_pmf(s), p1 = photon_pmf(r);
    for (std::size_t i = 0; i < p0.prob.size(); ++i) CHECK(p0.prob[i] == doctest::Approx(p1.prob[i]));
}

TEST_CASE("displacing the vacuum gives a coherent state") {
    const cplx gamma{0.8, -0.3};
    const auto d = apply_gaussian_op(TruncatedState::vacuum(25), Displace{Mode::A, gamma});
    CHECK(std::abs(expectation(d, {0, 1, 0, 0}) - gamma) < 1e-8);
    const auto ref = cvwit::testing::coherent_amplitudes(gamma, 25);
    const auto& amp = d.components()[0].amplitudes;
    for (int n = 0; n <= 25; ++n) CHECK(std::abs(amp[d.index(n, 0)] - ref[static_cast<std::size_t>(n)]) < 1e-10);
}

TEST_CASE("squeezing scales quadrature variances") {
    const double r = 0.4;
    const auto s = apply_gaussian_op(TruncatedState::vacuum(40), Squeeze{Mode::B, r});
    const auto cov = quadrature_covariance(s);
    CHECK(cov[2][2] == doctest::Approx(0.5 * std::exp(-2 * r)).epsilon(1e-9));
    CHECK(cov[3][3] == doctest::Approx(0.5 * std::exp(2 * r)).epsilon(1e-9));
    CHECK(cov[0][0] == doctest::Approx(0.5));
}

TEST_CASE("beamsplitter conserves photon number and mixes modes") {
    std::mt19937_64 rng(2);
    const auto s = cvwit::testing::random_pure(rng, 4).with_cutoff(8);
    const auto out = apply_gaussian_op(s, BeamSplit{0.3, 0.4});
    const double n_in = (expectation(s, {1, 1, 0, 0}) + expectation(s, {0, 0, 1, 1})).real();
    const double n_out = (expectation(out, {1, 1, 0, 0}) + expectation(out, {0, 0, 1, 1})).real();
    CHECK(n_in == doctest::Approx(n_out).epsilon(1e-12));

    // Heisenberg picture: a -> cos t a + e^{i phase} sin t b
    const double t = std::acos(std::sqrt(0.3));
    const cplx a_in = expectation(s, {0, 1, 0, 0}), b_in = expectation(s, {0, 0, 0, 1});
    const cplx expected = std::cos(t) * a_in + std::polar(1.0, 0.4) * std::sin(t) * b_in;
    CHECK(std::abs(expectation(out, {0, 1, 0, 0}) - expected) < 1e-12);
}

TEST_CASE("a balanced splitter turns |1,1> into NOON") {
    const auto out = apply_gaussian_op(TruncatedState::fock(2, 1, 1), BeamSplit{0.5, 0.0});
    const auto pmf = photon_pmf(out);
    CHECK(pmf.at(1, 1) < 1e-14);
    CHECK(pmf.at(2, 0) == doctest::Approx(0.5));
    CHECK(pmf.at(0, 2) == doctest::Approx(0.5));
}

TEST_CASE("beamsplitter stays unitary at high photon number") {
    const auto in = TruncatedState::fock(300, 150, 150);
    const auto out = apply_gaussian_op(in, BeamSplit{0.5, 0.3});
    double norm = 0.0;
    for (const auto& a : out.components().front().amplitudes) norm += std::norm(a);
    CHECK(std::abs(norm - 1.0) < 1e-9);
    // the splitter with the opposite phase undoes it
    const auto back = apply_gaussian_op(out, BeamSplit{0.5, 0.3 + std::numbers::pi});
    CHECK(std::abs(back.components().front().amplitudes[150 * 301 + 150]) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("norm lost to truncation is guarded") {
    // a large displacement on a small space loses norm beyond the tolerance
    CHECK_THROWS_AS((void)apply_gaussian_op(TruncatedState::vacuum(3), Displace{Mode::A, 3.0}), CutoffTooSmall);
}
