#include <doctest.h>

#include <numbers>
#include <random>

#include "cvwit/gaussian_ops.hpp"
#include "cvwit/interferometer.hpp"
#include "cvwit/states.hpp"
#include "cvwit/witness.hpp"
#include "support.hpp"

using namespace cvwit;

namespace {

double d_value(const TruncatedState& s, const MinorSpec& spec) { return minor_d(s, spec).value; }

// Minor straight from the definition with dense-matrix moments.
double oracle_d(const TruncatedState& s, const MinorSpec& sp) {
    const double f = cvwit::testing::dense_expectation(s, {sp.m, sp.m, sp.n, sp.n}).real() *
                     cvwit::testing::dense_expectation(s, {sp.p, sp.p, sp.q, sp.q}).real();
    return f - std::norm(cvwit::testing::dense_expectation(s, {sp.m, sp.p, sp.q, sp.n}));
}

}  // namespace

TEST_CASE("spec validation") {
    CHECK_NOTHROW((MinorSpec{1, 0, 0, 1}.validate()));
    CHECK_NOTHROW((MinorSpec{0, 0, 3, 3}.validate()));
    CHECK_THROWS_AS((MinorSpec{0, 3, 0, 3}.validate()), InvalidArgument);
    CHECK_THROWS_AS((MinorSpec{1, 0, 0, 0}.validate()), InvalidArgument);
    CHECK_THROWS_AS((MinorSpec{1, 1, 1, 0}.validate()), InvalidArgument);
    CHECK_THROWS_AS((MinorSpec{-1, 0, 0, 1}.validate()), InvalidArgument);
    CHECK((MinorSpec{1, 2, 0, 0}.str() == "1,2,0,0"));
    CHECK(valid_specs(2).size() == 4);
    for (const auto& s : valid_specs(5)) CHECK_NOTHROW(s.validate());
}

TEST_CASE("minor examples") {
    for (const auto& spec : valid_specs(4))
        CHECK(std::abs(d_value(build({CoherentProduct{cplx(0.7, -0.2), 1.1}}), spec)) < 1e-10);
    CHECK(d_value(build({Tmsv{0.5}}), {1, 0, 0, 1}) == doctest::Approx(-1.0 / 3.0).epsilon(1e-9));
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(d_value(build({Noon{2, r, r}}), {0, 0, 2, 2}) == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("minor_d matches a dense oracle on random states") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 5; ++t) {
        const auto s = cvwit::testing::random_pure(rng, 4);
        for (const auto& spec : valid_specs(4)) CHECK(std::abs(d_value(s, spec) - oracle_d(s, spec)) < 1e-11);
    }
}

TEST_CASE("two-state minor") {
    const auto tmsv = build({Tmsv{0.5}});
    const auto d = minor_d(tmsv, {1, 0, 0, 1});
    const auto same = minor_dprime(tmsv, tmsv, {1, 0, 0, 1});
    CHECK(same.value == d.value);
    CHECK(same.first == d.first);
    CHECK(same.second == d.second);
    CHECK(*same.epsilon_term == 0.0);

    for (double l : {-0.9, -0.3, 0.2, 0.6}) {
        TruncatedState s = build({Tmsv{l}});
        const auto ref = optimal_reference(s, {1, 0, 0, 1});
        TruncatedState c = build({ref.reference});
        share_cutoff(s, c);
        const auto dp = minor_dprime(s, c, {1, 0, 0, 1});
        CHECK(dp.value == doctest::Approx(-l * l / (2 * (1 - l * l))).epsilon(1e-8));
        CHECK(*dp.epsilon_term < 1e-16);
        // d' = (d1 + d2 + eps)/2
        const double d1 = d_value(s, {1, 0, 0, 1}), d2 = d_value(c, {1, 0, 0, 1});
        CHECK(dp.value == doctest::Approx(0.5 * (d1 + d2 + *dp.epsilon_term)).epsilon(1e-10));
    }

    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 0.8);
    for (int t = 0; t < 20; ++t) {
        TruncatedState a = build({CoherentProduct{{g(rng), g(rng)}, {g(rng), g(rng)}}});
        TruncatedState b = build({CoherentProduct{{g(rng), g(rng)}, {g(rng), g(rng)}}});
        share_cutoff(a, b);
        for (const auto& spec : valid_specs(3)) CHECK(minor_dprime(a, b, spec).value >= -1e-10);
    }
}

TEST_CASE("lossy minor") {
    const auto tmsv = build({Tmsv{0.5}});
    const MinorSpec spec{1, 0, 0, 1};
    const auto mm = minor_moments(tmsv, spec);
    const auto full = minor_d_lossy(tmsv, spec, 1.0, 1.0);
    CHECK(full.value == doctest::Approx(mm.diagonal - std::norm(mm.cross) / 4.0));
    CHECK(full.sound);
    CHECK_FALSE(minor_d_lossy(tmsv, spec, 0.3, 0.9).sound);
    CHECK_THROWS_AS((void)minor_d_lossy(tmsv, spec, 1.2, 0.5), InvalidArgument);

    const auto coh = build({CoherentProduct{0.9, cplx(0.3, 0.6)}});
    for (double e1 : {0.2, 0.5, 1.0})
        for (double e2 : {0.1, 0.4, 1.0})
            if (e1 >= e2 / 2)
                for (const auto& s : valid_specs(4)) CHECK(minor_d_lossy(coh, s, e1, e2).value >= -1e-10);
}

TEST_CASE("separable states are never flagged") {
    std::mt19937_64 rng(101);
    const auto specs = valid_specs(4);
    for (int t = 0; t < 40; ++t) {
        const int d = 2 + t % 3;
        const auto s1 = t % 2 ? cvwit::testing::random_product(rng, d)
                              : cvwit::testing::random_separable_mixture(rng, d, 1 + t % 4);
        const auto s2 = cvwit::testing::random_separable_mixture(rng, d, 2);
        for (const auto& spec : specs) {
            CHECK(minor_d(s1, spec).value >= -1e-9);
            CHECK(minor_dprime(s1, s2, spec).value >= -1e-9);
        }
    }
}

TEST_CASE("minor_d is invariant under local rotations") {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 5; ++t) {
        const auto s = cvwit::testing::random_pure(rng, 4);
        const auto rot = apply_gaussian_op(apply_gaussian_op(s, Rotate{Mode::A, 0.3 + t}), Rotate{Mode::B, 2.0 - t});
        for (const auto& spec : valid_specs(4)) CHECK(std::abs(d_value(s, spec) - d_value(rot, spec)) < 1e-9);
    }
}

TEST_CASE("violation grows with squeezing") {
    double last = 1.0;
    for (int i = 1; i <= 9; ++i) {
        const double l = 0.1 * i;
        const auto s = build({Tmsv{l}});
        const auto ref = analytic_minor({Tmsv{l}}, {1, 0, 0, 1}, optimal_reference(s, {1, 0, 0, 1}).reference);
        CHECK(ref.value < last);
        last = ref.value;
        // symmetric in the sign of lambda
        const auto neg = build({Tmsv{-l}});
        const auto rn = analytic_minor({Tmsv{-l}}, {1, 0, 0, 1}, optimal_reference(neg, {1, 0, 0, 1}).reference);
        CHECK(rn.value == doctest::Approx(ref.value).epsilon(1e-9));
    }
}

TEST_CASE("lossy violation shrinks as efficiency drops") {
    const double r = 1.0 / std::sqrt(2.0);
    const auto noon = build({Noon{2, r, r}});
    const auto cat = build({Cat{0.8, 0.8, std::numbers::pi}});
    for (const auto& [state, spec] :
         {std::pair{&noon, MinorSpec{0, 0, 2, 2}}, std::pair{&cat, MinorSpec{1, 1, 0, 0}}}) {
        double last = 1e300;
        const double sign = minor_d_lossy(*state, spec, 1.0, 1.0).value < 0.0 ? -1.0 : 1.0;
        for (int i = 20; i >= 1; --i) {
            const double eta = i / 20.0;
            const double v = minor_d_lossy(*state, spec, eta, eta).value;
            CHECK(sign * v >= 0.0);
            CHECK(std::abs(v) <= last + 1e-12);
            last = std::abs(v);
        }
    }
}

TEST_CASE("analytic minors agree with Fock evaluation") {
    const auto check = [](const StateFamily& f, const MinorSpec& spec, std::optional<CoherentProduct> ref) {
        const auto a = analytic_minor(f, spec, ref);
        TruncatedState s = build(f);
        double num;
        if (ref) {
            TruncatedState c = build({*ref});
            share_cutoff(s, c);
            num = minor_dprime(s, c, spec).value;
        } else {
            num = minor_d(s, spec).value;
        }
        CHECK(a.provenance == Provenance::Analytic);
        CHECK(std::abs(a.value - num) < 1e-8 * std::max(1.0, std::abs(num)));
    };
    for (double alpha : {0.3, 0.8, 1.2})
        for (double theta : {0.0, std::numbers::pi / 3, std::numbers::pi})
            for (double p : {0.0, 0.4})
                for (const auto& spec : valid_specs(4)) {
                    check(StateFamily(Cat{alpha, cplx(0.5, 0.3), theta}, p), spec, std::nullopt);
                    check(StateFamily(Cat{alpha, alpha, theta}, p), spec, CoherentProduct{0.4, cplx(0.1, 0.5)});
                }
    for (double l : {-0.7, 0.3, 0.8}) {
        check({Tmsv{l}}, {1, 0, 0, 1}, std::nullopt);
        check({Tmsv{l, cplx(0.2, 0.1), -0.3}}, {1, 0, 0, 1}, std::nullopt);
        check({Tmsv{l}}, {1, 0, 0, 1}, CoherentProduct{0.6, 0.6});
    }
    for (int n = 1; n <= 5; ++n)
        for (double p : {0.0, 0.5}) {
            check(StateFamily(Noon{n, 0.6, cplx(0, 0.8)}, p), {0, 0, n, n}, std::nullopt);
            check(StateFamily(Noon{n, 0.6, cplx(0, 0.8)}, p), {n, n, 0, 0}, CoherentProduct{0.9, 0.7});
        }
    for (const auto& [sp, sm] : {std::pair{1.0, 1.0}, std::pair{0.5, 1.0}, std::pair{1.5, 0.7}}) {
        check({HermiteGaussian{sp, sm}}, {1, 0, 0, 1}, std::nullopt);
        check({HermiteGaussian{sp, sm}}, {1, 1, 0, 0}, std::nullopt);
        check(StateFamily(HermiteGaussian{sp, sm}, 0.0, PmTransform{std::numbers::pi / 4}), {1, 1, 0, 0}, std::nullopt);
    }
    for (const auto& spec : valid_specs(4)) check({CoherentProduct{0.8, cplx(-0.2, 0.9)}}, spec, std::nullopt);

    CHECK_THROWS_AS((void)analytic_minor({Tmsv{0.3}}, {1, 1, 0, 0}), Unsupported);
    CHECK_THROWS_AS((void)analytic_minor({Noon{2, 0.6, 0.8}}, {1, 0, 0, 1}), Unsupported);
    CHECK_THROWS_AS((void)analytic_minor(StateFamily(HermiteGaussian{1, 1}, 0.0, PmTransform{0.0, 2.0}), {1, 1, 0, 0}),
                    Unsupported);
}

TEST_CASE("optimal reference") {
    const auto tmsv = optimal_reference(build({Tmsv{0.5}}), {1, 0, 0, 1});
    CHECK(std::abs(tmsv.reference.gamma * tmsv.reference.delta - cplx(2.0 / 3.0)) < 1e-9);
    CHECK(tmsv.degenerate);
    CHECK_FALSE(tmsv.no_solution);

    const auto vac = optimal_reference(TruncatedState::vacuum(3), {1, 0, 0, 1});
    CHECK(vac.no_solution);
    CHECK(std::abs(vac.reference.gamma) == 0.0);
    CHECK(std::abs(vac.reference.delta) == 0.0);

    const double r = 1.0 / std::sqrt(2.0);
    const auto noon = optimal_reference(build({Noon{2, r, r}}), {0, 0, 2, 2});
    const cplx prod = noon.reference.gamma * std::conj(noon.reference.delta);
    CHECK(std::abs(prod * prod - 1.0) < 1e-9);
    CHECK(std::abs(prod - 1.0) < 1e-9);

    // the reference reproduces the target moment for every spec, so eps vanishes
    const auto s = build({Cat{0.7, cplx(0.4, -0.5), 1.0}});
    for (const auto& spec : valid_specs(4)) {
        const auto o = optimal_reference(s, spec);
        const auto c = build({o.reference});
        CHECK(std::abs(expectation(c, spec.cross_monomial()) - o.target) < 1e-8);
    }
}

TEST_CASE("second-moment criteria") {
    const auto vac = quadrature_covariance(TruncatedState::vacuum(2));
    for (const auto b : {Branch::Plus, Branch::Minus}) {
        CHECK(mgvt(vac, b) == doctest::Approx(1.0));
        CHECK(second_moment_criterion(vac, b) == doctest::Approx(0.0).epsilon(1e-12));
    }
    const HermiteGaussian hg{1.0, 1.0};
    const auto cov = covariance_matrix({hg});
    CHECK(mgvt(cov, Branch::Plus) == doctest::Approx(3.0));
    CHECK(second_moment_criterion(cov, Branch::Plus) == doctest::Approx(4.0));

    // positive lambda is caught by the - branch
    const auto t = quadrature_covariance(build({Tmsv{0.5}}));
    CHECK(mgvt(t, Branch::Minus) < 1.0);
    CHECK(second_moment_criterion(t, Branch::Minus) < 0.0);

    // rotation leaves minors alone but moves MGVT
    const HermiteGaussian off{0.5, 1.0};
    const StateFamily rotated(off, 0.0, PmTransform{std::numbers::pi / 4});
    CHECK(std::abs(mgvt(covariance_matrix({off}), Branch::Plus) - mgvt(covariance_matrix(rotated), Branch::Plus)) > 1e-3);
    CHECK(std::abs(analytic_minor({off}, {1, 1, 0, 0}).value - analytic_minor(rotated, {1, 1, 0, 0}).value) < 1e-12);
    CHECK(std::abs(second_moment_criterion(covariance_matrix({off}), Branch::Plus) -
                   second_moment_criterion(covariance_matrix(rotated), Branch::Plus)) < 1e-9);
}
