#include <doctest.h>

#include <numbers>

#include "cvwit/gaussian_ops.hpp"
#include "cvwit/states.hpp"
#include "support.hpp"

using namespace cvwit;

namespace {

StateFamily dephased(FamilyTag tag, double p) { return StateFamily(std::move(tag), p); }

}  // namespace

TEST_CASE("TMSV with zero squeezing is the vacuum") {
    const auto s = build({Tmsv{0.0}});
    const auto pmf = photon_pmf(s);
    CHECK(pmf.at(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("TMSV moments against closed forms") {
    for (double l : {-0.9, -0.5, 0.1, 0.5, 0.9}) {
        const auto s = build({Tmsv{l}});
        CHECK(s.tail_mass() <= 1e-10);
        CHECK(std::abs(expectation(s, {1, 1, 0, 0}).real() - l * l / (1 - l * l)) < 1e-8);
        CHECK(std::abs(expectation(s, {0, 1, 0, 1}) - cplx(l / (1 - l * l))) < 1e-8);
    }
}

TEST_CASE("displaced TMSV shifts first moments") {
    const cplx da{0.3, 0.1}, db{-0.2, 0.4};
    const auto s = build({Tmsv{0.4, da, db}});
    CHECK(std::abs(expectation(s, {0, 1, 0, 0}) - da) < 1e-9);
    CHECK(std::abs(expectation(s, {0, 0, 0, 1}) - db) < 1e-9);
}

TEST_CASE("odd cat state") {
    const auto s = build({Cat{1.1, 1.1, std::numbers::pi}});
    CHECK(std::abs(expectation(s, {0, 1, 0, 0})) < 1e-10);
    const auto pmf = photon_pmf(s);
    for (int j = 0; j <= pmf.cutoff; ++j)
        for (int k = 0; k <= pmf.cutoff; ++k)
            if ((j + k) % 2 == 0) CHECK(pmf.at(j, k) < 1e-14);
}

TEST_CASE("cat normalisation matches the built vector") {
    const Cat c{0.6, cplx(0.2, 0.5), 0.9};
    const double n = cat_normalization(c);
    // the unnormalised vector has squared norm 2 + 2 cos(theta) e^{-2(|a|^2+|b|^2)}
    CHECK(n * n * (2 + 2 * std::cos(c.theta) * std::exp(-2 * (std::norm(c.alpha) + std::norm(c.beta)))) ==
          doctest::Approx(1.0));
    CHECK(build({c}).tail_ok());
}

TEST_CASE("NOON amplitudes") {
    const double r = 1.0 / std::sqrt(2.0);
    const auto s = build({Noon{2, r, r}});
    const auto& amp = s.components()[0].amplitudes;
    CHECK(std::abs(amp[s.index(2, 0)] - cplx(r)) < 1e-14);
    CHECK(std::abs(amp[s.index(0, 2)] - cplx(r)) < 1e-14);
    for (int n = 1; n <= 6; ++n) {
        const auto t = build({Noon{n, 0.6, cplx(0.0, 0.8)}});
        CHECK(std::abs(expectation(t, {n, n, n, n})) == 0.0);
    }
}

TEST_CASE("dephasing") {
    const double r = 1.0 / std::sqrt(2.0);
    const auto pure = build({Noon{3, r, r}});
    const auto p0 = build(dephased(Noon{3, r, r}, 0.0));
    CHECK(p0.is_pure());
    CHECK(std::abs(expectation(p0, {3, 0, 0, 3}) - expectation(pure, {3, 0, 0, 3})) < 1e-14);

    const auto full = build(dephased(Noon{3, r, r}, 1.0));
    CHECK(std::abs(expectation(full, {3, 0, 0, 3})) < 1e-14);
    const auto pmf = photon_pmf(full);
    CHECK(pmf.at(3, 0) == doctest::Approx(0.5));
    CHECK(pmf.at(0, 3) == doctest::Approx(0.5));

    double last = 1e300;
    for (int i = 0; i <= 10; ++i) {
        const double p = i / 10.0;
        const double c = std::abs(expectation(build(dephased(Noon{3, r, r}, p)), {3, 0, 0, 3}));
        CHECK(c == doctest::Approx((1 - p) * 3.0).epsilon(1e-12));
        CHECK(c <= last);
        last = c;
    }
}

TEST_CASE("dephased cat interpolates its coherences") {
    const Cat c{0.9, 0.7, 0.4};
    const auto pure = build({c});
    const auto half = build(dephased(c, 0.5));
    // oracle: rho_p ~ A + (1 - p) B with A the diagonal pair and B the
    // coherences, so it is a mixture of the cat and its fully dephased version
    // with weights set by the traces tr A = 2, tr B = 2 cos(theta) <alpha,beta|-alpha,-beta>.
    const auto flat = build(dephased(c, 1.0));
    const double trb = 2.0 * std::cos(c.theta) * std::exp(-2.0 * (std::norm(c.alpha) + std::norm(c.beta)));
    const double w_pure = 0.5 * (2.0 + trb) / (2.0 + 0.5 * trb);
    for (const ModeMonomial mono : {ModeMonomial{0, 1, 0, 1}, ModeMonomial{1, 0, 0, 1}, ModeMonomial{0, 2, 0, 0},
                                    ModeMonomial{1, 1, 1, 1}}) {
        const cplx expected = w_pure * expectation(pure, mono) + (1.0 - w_pure) * expectation(flat, mono);
        CHECK(std::abs(expectation(half, mono) - expected) < 1e-10);
    }
    CHECK_THROWS_AS((void)apply_dephasing({Tmsv{0.3}}, 0.2), Unsupported);
}

TEST_CASE("Hermite-Gaussian moments") {
    const auto m = hermite_gaussian_moments({1.0, 1.0});
    CHECK(m.x1x1 == doctest::Approx(1.0));
    CHECK(m.p1p1 == doctest::Approx(1.0));

    for (const auto& [sp, sm] : {std::pair{1.0, 1.0}, std::pair{0.6, 1.3}, std::pair{1.4, 0.8}}) {
        const HermiteGaussian hg{sp, sm};
        const auto s = build({hg});
        const auto mom = hermite_gaussian_moments(hg);
        const auto cov = quadrature_covariance(s);
        CHECK(cov[0][0] == doctest::Approx(mom.x1x1).epsilon(1e-8));
        CHECK(cov[1][1] == doctest::Approx(mom.p1p1).epsilon(1e-8));
        CHECK(cov[0][2] == doctest::Approx(mom.x1x2).epsilon(1e-8));
        CHECK(cov[1][3] == doctest::Approx(mom.p1p2).epsilon(1e-8));
        const auto analytic = covariance_matrix({hg});
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) CHECK(std::abs(cov[i][j] - analytic[i][j]) < 1e-8);
    }
}

TEST_CASE("Hermite-Gaussian fourth moments against Fock space") {
    // x = (a + a†)/sqrt 2: <x1^2 x2^2> from normal-ordered moments
    const HermiteGaussian hg{0.7, 1.2};
    const auto s = build({hg});
    const auto mom = hermite_gaussian_moments(hg);
    using cvwit::testing::Mat;
    const int d = s.cutoff();
    const Mat a = cvwit::testing::mode_a(d), b = cvwit::testing::mode_b(d);
    const Mat x1 = (a + a.adjoint()) / std::sqrt(2.0), x2 = (b + b.adjoint()) / std::sqrt(2.0);
    const Mat p1 = (a - a.adjoint()) / cplx(0.0, std::sqrt(2.0)), p2 = (b - b.adjoint()) / cplx(0.0, std::sqrt(2.0));
    const auto v = cvwit::testing::to_vec(s.components()[0].amplitudes);
    const auto ev = [&](const Mat& op) { return v.dot(op * v).real(); };
    CHECK(ev(x1 * x1 * x2 * x2) == doctest::Approx(mom.x1x1_x2x2).epsilon(1e-7));
    CHECK(ev(x1 * x1 * p2 * p2) == doctest::Approx(mom.x1x1_p2p2).epsilon(1e-7));
    CHECK(ev(p1 * p1 * p2 * p2) == doctest::Approx(mom.p1p1_p2p2).epsilon(1e-7));
}

TEST_CASE("squeezing the pm variables") {
    const HermiteGaussian hg{1.0, 1.0};
    const auto plain = covariance_matrix({hg});
    const auto var = [](const Covariance4& v, double s) {
        return std::pair{v[0][0] + v[2][2] + 2 * s * v[0][2], v[1][1] + v[3][3] - 2 * s * v[1][3]};
    };
    for (const auto orientation : {SqueezeOrientation::X, SqueezeOrientation::P}) {
        const StateFamily f(hg, 0.0, PmTransform{0.0, 2.0, orientation});
        const auto num = quadrature_covariance(build(f));
        const auto [r0, s0] = var(plain, 1.0);
        const auto [r1, s1] = var(num, 1.0);
        const double up = orientation == SqueezeOrientation::X ? 4.0 : 0.25;
        CHECK(r1 == doctest::Approx(r0 * up).epsilon(1e-7));
        CHECK(s1 == doctest::Approx(s0 / up).epsilon(1e-7));
        const auto analytic = covariance_matrix(f);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) CHECK(std::abs(num[i][j] - analytic[i][j]) < 1e-7);
    }
}

TEST_CASE("factory states pass the fock-core invariants") {
    const double r = 1.0 / std::sqrt(2.0);
    for (const auto& f : {StateFamily{Tmsv{0.7}}, StateFamily{Cat{1.3, 1.3, std::numbers::pi}},
                          StateFamily{Noon{5, r, r}}, StateFamily{CoherentProduct{1.5, cplx(0, -1)}},
                          StateFamily{HermiteGaussian{0.5, 1.5}}, dephased(Cat{0.8, 0.8, 0.0}, 0.3)}) {
        const auto s = build(f);
        CHECK(s.tail_ok());
        CHECK(s.norm_defect() <= 1e-6);
        double total = 0.0;
        for (double p : photon_pmf(s).prob) total += p;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(validate({Tmsv{1.0}}), InvalidArgument);
    CHECK_THROWS_AS(validate({Noon{0, 1.0, 0.0}}), InvalidArgument);
    CHECK_THROWS_AS(validate({Noon{2, 1.0, 1.0}}), InvalidArgument);
    CHECK_THROWS_AS(validate({HermiteGaussian{0.0, 1.0}}), InvalidArgument);
    CHECK_THROWS_AS(validate(dephased(Tmsv{0.2}, 1.5)), InvalidArgument);
    CHECK_THROWS_AS(validate(StateFamily(Tmsv{0.2}, 0.0, PmTransform{})), InvalidArgument);
    CHECK_THROWS_AS(validate({Cat{0.0, 0.0, std::numbers::pi}}), InvalidArgument);
}
