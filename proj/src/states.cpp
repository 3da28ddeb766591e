#include "cvwit/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cvwit/gaussian_ops.hpp"

namespace cvwit {
namespace {

constexpr double kParamTol = 1e-12;

std::size_t at(int d, int j, int k) {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(d) + static_cast<std::size_t>(k);
}

// e^{-|z|^2/2} z^n / sqrt(n!) for n = 0..cutoff, by recurrence.
std::vector<cplx> coherent_amplitudes(cplx z, int cutoff) {
    std::vector<cplx> c(static_cast<std::size_t>(cutoff) + 1);
    c[0] = std::exp(-0.5 * std::norm(z));
    for (int n = 1; n <= cutoff; ++n)
        c[static_cast<std::size_t>(n)] = c[static_cast<std::size_t>(n) - 1] * z / std::sqrt(static_cast<double>(n));
    return c;
}

std::vector<cplx> product(const std::vector<cplx>& u, const std::vector<cplx>& v) {
    const int d = static_cast<int>(u.size());
    std::vector<cplx> out(static_cast<std::size_t>(d) * static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) out[at(d, j, k)] = u[static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(k)];
    return out;
}

void normalise(std::vector<cplx>& v) {
    double n2 = 0.0;
    for (const auto& a : v) n2 += std::norm(a);
    const double s = 1.0 / std::sqrt(n2);
    for (auto& a : v) a *= s;
}

// Cutoff generous enough for a coherent amplitude of modulus r.
int coherent_cutoff(double r) {
    return static_cast<int>(std::ceil(r * r + 12.0 * r + 24.0));
}

// Smallest cutoff meeting the tail bound, never below the requested floor.
TruncatedState trim(const TruncatedState& s, const BuildOptions& options) {
    const int c = std::max(s.minimal_cutoff(options.tail_bound * 1e-2, 1), options.min_cutoff);
    if (c > options.max_cutoff)
        throw CutoffTooSmall("state needs cutoff " + std::to_string(c) + " > max_cutoff " +
                             std::to_string(options.max_cutoff));
    return s.with_cutoff(c);
}

void check_working_tail(const TruncatedState& s, const BuildOptions& options) {
    if (s.tail_mass() > options.tail_bound * 1e-2)
        throw CutoffTooSmall("working cutoff " + std::to_string(s.cutoff()) +
                             " leaves tail mass " + std::to_string(s.tail_mass()));
}

std::vector<cplx> cat_vector(const Cat& c, int cutoff, double theta) {
    auto plus = product(coherent_amplitudes(c.alpha, cutoff), coherent_amplitudes(c.beta, cutoff));
    const auto minus = product(coherent_amplitudes(-c.alpha, cutoff), coherent_amplitudes(-c.beta, cutoff));
    const cplx ph = std::polar(1.0, theta);
    for (std::size_t i = 0; i < plus.size(); ++i) plus[i] += ph * minus[i];
    return plus;
}

std::vector<cplx> noon_vector(const Noon& s, int cutoff, double sign) {
    const int d = cutoff + 1;
    std::vector<cplx> v(static_cast<std::size_t>(d) * static_cast<std::size_t>(d));
    v[at(d, s.n, 0)] += s.alpha;
    v[at(d, 0, s.n)] += sign * s.beta;
    return v;
}

int squeeze_cutoff(double r) {
    const double t = std::tanh(std::abs(r));
    if (t < 1e-3) return 12;
    return static_cast<int>(std::ceil(std::log(1e-16) / std::log(t))) + 12;
}

TruncatedState build_pure(const FamilyTag& tag, const BuildOptions& options) {
    if (const auto* t = std::get_if<Tmsv>(&tag)) {
        const double l2 = t->lambda * t->lambda;
        int cutoff = 2;
        if (l2 > 0.0) cutoff = static_cast<int>(std::ceil(std::log(options.tail_bound * 1e-4) / std::log(l2))) + 2;
        cutoff = std::max(cutoff, 2);
        const int d = cutoff + 1;
        std::vector<cplx> v(static_cast<std::size_t>(d) * static_cast<std::size_t>(d));
        double ln = 1.0;
        for (int n = 0; n <= cutoff; ++n, ln *= t->lambda) v[at(d, n, n)] = std::sqrt(1.0 - l2) * ln;
        normalise(v);
        TruncatedState s(cutoff, std::move(v), options.tail_bound);
        if (t->disp_a != 0.0 || t->disp_b != 0.0) {
            const int grow = coherent_cutoff(std::max(std::abs(t->disp_a), std::abs(t->disp_b)));
            GaussianOpOptions go;
            go.output_cutoff = cutoff + grow;
            s = apply_gaussian_op(s, Displace{Mode::A, t->disp_a}, go);
            go.output_cutoff = -1;
            s = apply_gaussian_op(s, Displace{Mode::B, t->disp_b}, go);
            check_working_tail(s, options);
        }
        return trim(s, options);
    }
    if (const auto* c = std::get_if<Cat>(&tag)) {
        const int cutoff = coherent_cutoff(std::max(std::abs(c->alpha), std::abs(c->beta)));
        auto v = cat_vector(*c, cutoff, c->theta);
        normalise(v);
        return trim(TruncatedState(cutoff, std::move(v), options.tail_bound), options);
    }
    if (const auto* n = std::get_if<Noon>(&tag)) {
        const int cutoff = std::max(n->n + 1, options.min_cutoff);
        return {cutoff, noon_vector(*n, cutoff, 1.0), options.tail_bound};
    }
    if (const auto* coh = std::get_if<CoherentProduct>(&tag)) {
        const int cutoff = coherent_cutoff(std::max(std::abs(coh->gamma), std::abs(coh->delta)));
        auto v = product(coherent_amplitudes(coh->gamma, cutoff), coherent_amplitudes(coh->delta, cutoff));
        normalise(v);
        return trim(TruncatedState(cutoff, std::move(v), options.tail_bound), options);
    }
    const auto& hg = std::get<HermiteGaussian>(tag);
    const double r_plus = -std::log(hg.sigma_plus);
    const double r_minus = -std::log(hg.sigma_minus);
    const int cutoff = std::max(squeeze_cutoff(r_plus), squeeze_cutoff(r_minus)) + 2;
    if (cutoff > 2 * options.max_cutoff)
        throw CutoffTooSmall("Hermite-Gaussian squeezing needs a working cutoff of " + std::to_string(cutoff));
    TruncatedState s = TruncatedState::fock(cutoff, 1, 0);
    GaussianOpOptions go;
    go.padding = std::max(40, cutoff / 2);
    s = apply_gaussian_op(s, Squeeze{Mode::A, r_plus}, go);
    s = apply_gaussian_op(s, Squeeze{Mode::B, r_minus}, go);
    // a -> (a - b)/sqrt 2, b -> (a + b)/sqrt 2, so x1 + x2 = sqrt 2 x_A carries the photon.
    s = apply_gaussian_op(s, BeamSplit{0.5, std::numbers::pi}, go);
    check_working_tail(s, options);
    return trim(s, options);
}

TruncatedState apply_pm_transform(const TruncatedState& s, const PmTransform& t, const BuildOptions& options) {
    TruncatedState out = s;
    if (t.phi != 0.0) {
        out = apply_gaussian_op(out, Rotate{Mode::A, t.phi});
        out = apply_gaussian_op(out, Rotate{Mode::B, -t.phi});
    }
    if (t.xi != 1.0) {
        const double r = (t.orientation == SqueezeOrientation::X) ? -std::log(t.xi) : std::log(t.xi);
        GaussianOpOptions go;
        go.output_cutoff = out.cutoff() + squeeze_cutoff(r);
        go.padding = std::max(40, go.output_cutoff / 2);
        out = apply_gaussian_op(out, Squeeze{Mode::A, r}, go);
        go.output_cutoff = -1;
        out = apply_gaussian_op(out, Squeeze{Mode::B, r}, go);
        check_working_tail(out, options);
        out = trim(out, options);
    }
    return out;
}

}  // namespace

std::string family_name(const FamilyTag& tag) {
    struct V {
        std::string operator()(const Tmsv&) const { return "tmsv"; }
        std::string operator()(const Cat&) const { return "cat"; }
        std::string operator()(const Noon&) const { return "noon"; }
        std::string operator()(const CoherentProduct&) const { return "coherent"; }
        std::string operator()(const HermiteGaussian&) const { return "hermite-gaussian"; }
    };
    return std::visit(V{}, tag);
}

void validate(const StateFamily& family) {
    if (!(family.dephasing >= 0.0 && family.dephasing <= 1.0))
        throw InvalidArgument("dephasing p must lie in [0, 1]");
    if (const auto* t = std::get_if<Tmsv>(&family.tag)) {
        if (!(std::abs(t->lambda) < 1.0)) throw InvalidArgument("TMSV requires lambda in (-1, 1)");
    } else if (const auto* n = std::get_if<Noon>(&family.tag)) {
        if (n->n < 1) throw InvalidArgument("NOON requires N >= 1");
        const double s = std::norm(n->alpha) + std::norm(n->beta);
        if (std::abs(s - 1.0) > kParamTol)
            throw InvalidArgument("NOON requires |alpha|^2 + |beta|^2 = 1 (got " + std::to_string(s) + ")");
    } else if (const auto* h = std::get_if<HermiteGaussian>(&family.tag)) {
        if (!(h->sigma_plus > 0.0 && h->sigma_minus > 0.0))
            throw InvalidArgument("Hermite-Gaussian requires sigma_+ > 0 and sigma_- > 0");
    } else if (const auto* c = std::get_if<Cat>(&family.tag)) {
        if (std::abs(c->alpha) == 0.0 && std::abs(c->beta) == 0.0 && std::cos(c->theta) < -1.0 + 1e-12)
            throw InvalidArgument("odd cat with alpha = beta = 0 is not normalisable");
    }
    if (family.pm_transform) {
        if (!std::holds_alternative<HermiteGaussian>(family.tag))
            throw InvalidArgument("the +/- transform applies to Hermite-Gaussian states only");
        if (!(family.pm_transform->xi >= 1.0)) throw InvalidArgument("squeeze factor xi must be >= 1");
    }
    if (family.dephasing > 0.0 && !std::holds_alternative<Noon>(family.tag) &&
        !std::holds_alternative<Cat>(family.tag))
        throw Unsupported("dephasing is defined for NOON and cat states only");
}

double cat_normalization(const Cat& cat) {
    const double delta = 2.0 * (std::norm(cat.alpha) + std::norm(cat.beta));
    return 1.0 / std::sqrt(2.0 + 2.0 * std::cos(cat.theta) * std::exp(-delta));
}

TruncatedState apply_dephasing(const StateFamily& family, double p, const BuildOptions& options) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("dephasing p must lie in [0, 1]");
    StateFamily pure = family;
    pure.dephasing = 0.0;
    validate(pure);
    if (p == 0.0) return build(pure, options);

    // rho = (1 - p/2) |psi_theta><psi_theta| + (p/2) |psi_{theta+pi}><psi_{theta+pi}|
    // with unnormalised branch sums; the coherences come out scaled by (1 - p).
    if (const auto* n = std::get_if<Noon>(&family.tag)) {
        const int cutoff = std::max(n->n + 1, options.min_cutoff);
        std::vector<PureComponent> comps;
        comps.push_back({1.0 - 0.5 * p, noon_vector(*n, cutoff, 1.0)});
        comps.push_back({0.5 * p, noon_vector(*n, cutoff, -1.0)});
        return {cutoff, std::move(comps), options.tail_bound};
    }
    if (const auto* c = std::get_if<Cat>(&family.tag)) {
        const int cutoff = std::max(coherent_cutoff(std::max(std::abs(c->alpha), std::abs(c->beta))),
                                    options.min_cutoff);
        auto even = cat_vector(*c, cutoff, c->theta);
        auto odd = cat_vector(*c, cutoff, c->theta + std::numbers::pi);
        double n_even = 0.0, n_odd = 0.0;
        for (const auto& a : even) n_even += std::norm(a);
        for (const auto& a : odd) n_odd += std::norm(a);
        double w_even = (1.0 - 0.5 * p) * n_even;
        double w_odd = 0.5 * p * n_odd;
        const double wsum = w_even + w_odd;
        w_even /= wsum;
        w_odd = 1.0 - w_even;
        std::vector<PureComponent> comps;
        normalise(even);
        comps.push_back({w_even, std::move(even)});
        if (n_odd > 0.0 && w_odd > 0.0) {
            normalise(odd);
            comps.push_back({w_odd, std::move(odd)});
        } else {
            comps.front().weight = 1.0;
        }
        return trim(TruncatedState(cutoff, std::move(comps), options.tail_bound), options);
    }
    throw Unsupported("dephasing is defined for NOON and cat states only");
}

TruncatedState build(const StateFamily& family, const BuildOptions& options) {
    validate(family);
    if (family.dephasing > 0.0) return apply_dephasing(family, family.dephasing, options);
    TruncatedState s = build_pure(family.tag, options);
    if (family.pm_transform) s = apply_pm_transform(s, *family.pm_transform, options);
    if (s.cutoff() < options.min_cutoff) s = s.with_cutoff(options.min_cutoff);
    return s;
}

HermiteGaussianMoments hermite_gaussian_moments(const HermiteGaussian& hg) {
    const double sp2 = hg.sigma_plus * hg.sigma_plus;
    const double sm2 = hg.sigma_minus * hg.sigma_minus;
    HermiteGaussianMoments m;
    m.x1x1 = (3.0 * sp2 + sm2) / 4.0;
    m.x1x2 = (3.0 * sp2 - sm2) / 4.0;
    m.p1p1 = (sp2 + 3.0 * sm2) / (4.0 * sp2 * sm2);
    m.p1p2 = (3.0 * sm2 - sp2) / (4.0 * sp2 * sm2);
    m.x1x1_x2x2 = 3.0 / 16.0 * (5.0 * sp2 * sp2 - 2.0 * sm2 * sp2 + sm2 * sm2);
    m.x1x1_p2p2 = 3.0 / 16.0 * (sp2 + sm2) * (sp2 + sm2) / (sp2 * sm2);
    // Same shape as <x1^2 x2^2> with sigma -> 1/sigma.
    m.p1p1_p2p2 = 3.0 / 16.0 * (5.0 * sm2 * sm2 - 2.0 * sp2 * sm2 + sp2 * sp2) / (sp2 * sp2 * sm2 * sm2);
    return m;
}

Covariance4 covariance_matrix(const StateFamily& family) {
    validate(family);
    const auto* hg = std::get_if<HermiteGaussian>(&family.tag);
    if (hg == nullptr) throw InvalidArgument("covariance_matrix requires a Hermite-Gaussian family");
    const auto mom = hermite_gaussian_moments(*hg);
    Covariance4 v{};
    v[0][0] = v[2][2] = mom.x1x1;
    v[1][1] = v[3][3] = mom.p1p1;
    v[0][2] = v[2][0] = mom.x1x2;
    v[1][3] = v[3][1] = mom.p1p2;
    if (!family.pm_transform) return v;

    const auto& t = *family.pm_transform;
    const double c = std::cos(t.phi), s = std::sin(t.phi);
    const double g = (t.orientation == SqueezeOrientation::X) ? t.xi : 1.0 / t.xi;
    // x1' = g (c x1 + s p1), p1' = (-s x1 + c p1)/g, x2' = g (c x2 - s p2), p2' = (s x2 + c p2)/g
    const std::array<std::array<double, 4>, 4> m{{
        {g * c, g * s, 0.0, 0.0},
        {-s / g, c / g, 0.0, 0.0},
        {0.0, 0.0, g * c, -g * s},
        {0.0, 0.0, s / g, c / g},
    }};
    Covariance4 out{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double acc = 0.0;
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l) acc += m[i][k] * v[k][l] * m[j][l];
            out[i][j] = acc;
        }
    return out;
}

Covariance4 quadrature_covariance(const TruncatedState& state) {
    const auto e = [&](int n, int m, int k, int l) { return expectation(state, {n, m, k, l}); };
    const double rt2 = std::numbers::sqrt2;
    const cplx a = e(0, 1, 0, 0), b = e(0, 0, 0, 1);
    const std::array<double, 4> mean{rt2 * a.real(), rt2 * a.imag(), rt2 * b.real(), rt2 * b.imag()};

    const cplx aa = e(0, 2, 0, 0), na = e(1, 1, 0, 0);
    const cplx bb = e(0, 0, 0, 2), nb = e(0, 0, 1, 1);
    const cplx ab = e(0, 1, 0, 1), adb = e(1, 0, 0, 1);

    Covariance4 raw{};
    raw[0][0] = aa.real() + na.real() + 0.5;
    raw[1][1] = -aa.real() + na.real() + 0.5;
    raw[0][1] = aa.imag();
    raw[2][2] = bb.real() + nb.real() + 0.5;
    raw[3][3] = -bb.real() + nb.real() + 0.5;
    raw[2][3] = bb.imag();
    raw[0][2] = ab.real() + adb.real();   // x1 x2
    raw[1][3] = -ab.real() + adb.real();  // p1 p2
    raw[0][3] = ab.imag() + adb.imag();   // x1 p2
    raw[1][2] = ab.imag() - adb.imag();   // p1 x2
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < i; ++j) raw[i][j] = raw[j][i];
    Covariance4 cov{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) cov[i][j] = raw[i][j] - mean[static_cast<std::size_t>(i)] * mean[static_cast<std::size_t>(j)];
    return cov;
}

}  // namespace cvwit
