#include "cvwit/witness.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace cvwit {
namespace {

double ipow(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

cplx ipow(cplx x, int k) {
    cplx r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

double sign_pow(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

// <a†^x a^y b†^z b^w> of the (possibly dephased) cat state in closed form.
cplx cat_moment(const Cat& c, double p, const ModeMonomial& mono) {
    const double kappa = (1.0 - p) * std::exp(-2.0 * (std::norm(c.alpha) + std::norm(c.beta)));
    const double norm2 = 1.0 / (2.0 + 2.0 * std::cos(c.theta) * kappa);
    const cplx base = ipow(std::conj(c.alpha), mono.n) * ipow(c.alpha, mono.m) * ipow(std::conj(c.beta), mono.k) *
                      ipow(c.beta, mono.l);
    const cplx bracket = (1.0 + sign_pow(mono.order())) +
                         kappa * (sign_pow(mono.m + mono.l) * std::polar(1.0, c.theta) +
                                  sign_pow(mono.n + mono.k) * std::polar(1.0, -c.theta));
    return norm2 * base * bracket;
}

cplx coherent_moment(const CoherentProduct& c, const ModeMonomial& mono) {
    return ipow(std::conj(c.gamma), mono.n) * ipow(c.gamma, mono.m) * ipow(std::conj(c.delta), mono.k) *
           ipow(c.delta, mono.l);
}

MinorMoments from_moment_function(const MinorSpec& spec, const auto& moment) {
    return {moment(spec.first_monomial()).real() * moment(spec.second_monomial()).real(),
            moment(spec.cross_monomial())};
}

void add_spec(Metadata& md, const MinorSpec& spec) { md.emplace_back("spec", spec.str()); }

}  // namespace

void MinorSpec::validate() const {
    if (m < 0 || n < 0 || p < 0 || q < 0) throw InvalidArgument("minor indices must be non-negative: " + str());
    const bool mp_ok = (m == 0) != (p == 0);
    const bool nq_ok = (n == 0) != (q == 0);
    if (!mp_ok || !nq_ok)
        throw InvalidArgument("minor " + str() +
                              " violates the zero pattern: exactly one of {m,p} and exactly one of {n,q} "
                              "must be non-zero (e.g. 1,0,0,1 or 0,0,N,N)");
}

std::string MinorSpec::str() const {
    std::ostringstream os;
    os << m << ',' << n << ',' << p << ',' << q;
    return os.str();
}

std::vector<MinorSpec> valid_specs(int max_order) {
    std::vector<MinorSpec> out;
    for (int m = 0; m <= max_order; ++m)
        for (int n = 0; n <= max_order; ++n)
            for (int p = 0; p <= max_order; ++p)
                for (int q = 0; q <= max_order; ++q) {
                    const MinorSpec s{m, n, p, q};
                    if (s.order() < 1 || s.order() > max_order) continue;
                    if (((m == 0) != (p == 0)) && ((n == 0) != (q == 0))) out.push_back(s);
                }
    return out;
}

std::string provenance_name(Provenance p) {
    switch (p) {
        case Provenance::Analytic: return "analytic";
        case Provenance::FockNumeric: return "fock-numeric";
        case Provenance::FourierExtracted: return "fourier-extracted";
        case Provenance::ShotEstimated: return "shot-estimated";
    }
    return "unknown";
}

MinorMoments minor_moments(const TruncatedState& state, const MinorSpec& spec) {
    spec.validate();
    return from_moment_function(spec, [&](const ModeMonomial& mono) { return expectation(state, mono); });
}

double cross_term(cplx x, cplx y) { return x.real() * y.real() + x.imag() * y.imag(); }

WitnessResult assemble_d(const MinorMoments& mm, Provenance provenance) {
    WitnessResult r;
    r.first = mm.diagonal;
    r.second = cross_term(mm.cross, mm.cross);
    r.value = r.first - r.second;
    r.provenance = provenance;
    return r;
}

WitnessResult assemble_dprime(const MinorMoments& m1, const MinorMoments& m2, Provenance provenance) {
    WitnessResult r;
    r.first = 0.5 * (m1.diagonal + m2.diagonal);
    r.second = cross_term(m1.cross, m2.cross);
    r.value = r.first - r.second;
    r.epsilon_term = std::norm(m1.cross - m2.cross);
    r.provenance = provenance;
    return r;
}

WitnessResult minor_d(const TruncatedState& state, const MinorSpec& spec) {
    auto r = assemble_d(minor_moments(state, spec), Provenance::FockNumeric);
    add_spec(r.metadata, spec);
    r.metadata.emplace_back("cutoff", static_cast<std::int64_t>(state.cutoff()));
    return r;
}

WitnessResult minor_dprime(const TruncatedState& state1, const TruncatedState& state2, const MinorSpec& spec) {
    auto r = assemble_dprime(minor_moments(state1, spec), minor_moments(state2, spec), Provenance::FockNumeric);
    add_spec(r.metadata, spec);
    r.metadata.emplace_back("cutoff1", static_cast<std::int64_t>(state1.cutoff()));
    r.metadata.emplace_back("cutoff2", static_cast<std::int64_t>(state2.cutoff()));
    return r;
}

WitnessResult assemble_d_lossy(const MinorMoments& mm, int order, double eta1, double eta2, Provenance provenance) {
    if (!(eta1 >= 0.0 && eta1 <= 1.0 && eta2 >= 0.0 && eta2 <= 1.0))
        throw InvalidArgument("efficiencies must lie in [0, 1]");
    WitnessResult r;
    r.first = ipow(eta1, order) * mm.diagonal;
    r.second = ipow(0.5 * eta2, order) * cross_term(mm.cross, mm.cross);
    r.value = r.first - r.second;
    r.sound = eta1 >= 0.5 * eta2;
    r.provenance = provenance;
    return r;
}

WitnessResult minor_d_lossy(const TruncatedState& state, const MinorSpec& spec, double eta1, double eta2) {
    auto r = assemble_d_lossy(minor_moments(state, spec), spec.order(), eta1, eta2, Provenance::FockNumeric);
    add_spec(r.metadata, spec);
    r.metadata.emplace_back("eta1", eta1);
    r.metadata.emplace_back("eta2", eta2);
    r.metadata.emplace_back("cutoff", static_cast<std::int64_t>(state.cutoff()));
    return r;
}

MinorMoments analytic_minor_moments(const StateFamily& family, const MinorSpec& spec) {
    validate(family);
    spec.validate();
    const double p = family.dephasing;

    if (const auto* c = std::get_if<Cat>(&family.tag))
        return from_moment_function(spec, [&](const ModeMonomial& mono) { return cat_moment(*c, p, mono); });

    if (const auto* c = std::get_if<CoherentProduct>(&family.tag))
        return from_moment_function(spec, [&](const ModeMonomial& mono) { return coherent_moment(*c, mono); });

    if (const auto* t = std::get_if<Tmsv>(&family.tag)) {
        if (!(spec == MinorSpec{1, 0, 0, 1})) throw Unsupported("analytic TMSV minor is defined for 1,0,0,1 only");
        const double l2 = t->lambda * t->lambda;
        const double nbar = l2 / (1.0 - l2);
        const double c = t->lambda / (1.0 - l2);
        return {(nbar + std::norm(t->disp_a)) * (nbar + std::norm(t->disp_b)),
                c + std::conj(t->disp_a * t->disp_b)};
    }

    if (const auto* n = std::get_if<Noon>(&family.tag)) {
        const int N = n->n;
        // <a^N b†^N> = alpha beta* N!, <a†^N b^N> its conjugate; the diagonal
        // product always contains <a†^N a^N b†^N b^N> = 0.
        const cplx coherence = (1.0 - p) * n->alpha * std::conj(n->beta) * factorial(N);
        if (spec == MinorSpec{0, 0, N, N}) return {0.0, coherence};
        if (spec == MinorSpec{N, N, 0, 0}) return {0.0, std::conj(coherence)};
        throw Unsupported("analytic NOON minor is defined for 0,0,N,N and N,N,0,0 only");
    }

    const auto& hg = std::get<HermiteGaussian>(family.tag);
    double phi = 0.0;
    if (family.pm_transform) {
        if (family.pm_transform->xi != 1.0)
            throw Unsupported("analytic Hermite-Gaussian minors do not cover squeezed transforms");
        phi = family.pm_transform->phi;
    }
    const auto mom = hermite_gaussian_moments(hg);
    const double nbar = 0.5 * (mom.x1x1 + mom.p1p1 - 1.0);
    if (spec == MinorSpec{1, 0, 0, 1}) return {nbar * nbar, 0.5 * (mom.x1x2 - mom.p1p2)};
    if (spec == MinorSpec{1, 1, 0, 0}) {
        const double nn = 0.25 * (mom.x1x1_x2x2 + 2.0 * mom.x1x1_p2p2 + mom.p1p1_p2p2 - 2.0 * mom.x1x1 -
                                  2.0 * mom.p1p1 + 1.0);
        return {nn, std::polar(1.0, 2.0 * phi) * 0.5 * (mom.x1x2 + mom.p1p2)};
    }
    throw Unsupported("analytic Hermite-Gaussian minor is defined for 1,0,0,1 and 1,1,0,0 only");
}

WitnessResult analytic_minor(const StateFamily& family, const MinorSpec& spec,
                             const std::optional<CoherentProduct>& reference) {
    const auto mm = analytic_minor_moments(family, spec);
    WitnessResult r;
    if (reference) {
        const auto ref = from_moment_function(
            spec, [&](const ModeMonomial& mono) { return coherent_moment(*reference, mono); });
        r = assemble_dprime(mm, ref, Provenance::Analytic);
    } else {
        r = assemble_d(mm, Provenance::Analytic);
    }
    add_spec(r.metadata, spec);
    r.metadata.emplace_back("family", family_name(family.tag));
    return r;
}

OptimalReference optimal_reference(cplx target, const MinorSpec& spec) {
    spec.validate();
    OptimalReference out;
    out.target = target;
    if (std::abs(target) == 0.0) {
        out.no_solution = true;
        return out;
    }
    // The reference moment is gamma*^m gamma^p delta*^q delta^n; one power of
    // each mode is non-zero. Take gamma = r >= 0 and delta = r e^{i chi}.
    const int ka = spec.m + spec.p;
    const int kb = spec.n + spec.q;
    const double r = std::pow(std::abs(target), 1.0 / static_cast<double>(ka + kb));
    const double arg = std::arg(target);
    const double chi = (spec.n > 0) ? arg / kb : -arg / kb;
    out.reference = {r, std::polar(r, chi)};
    return out;
}

OptimalReference optimal_reference(const TruncatedState& state, const MinorSpec& spec) {
    spec.validate();
    return optimal_reference(expectation(state, spec.cross_monomial()), spec);
}

double mgvt(const Covariance4& v, Branch branch) {
    const double s = (branch == Branch::Plus) ? 1.0 : -1.0;
    const double var_r = v[0][0] + v[2][2] + 2.0 * s * v[0][2];
    const double var_s = v[1][1] + v[3][3] - 2.0 * s * v[1][3];
    return var_r * var_s;
}

double second_moment_criterion(const Covariance4& v, Branch branch) {
    const double s = (branch == Branch::Plus) ? 1.0 : -1.0;
    const double var_r = v[0][0] + v[2][2] + 2.0 * s * v[0][2];
    const double var_s = v[1][1] + v[3][3] - 2.0 * s * v[1][3];
    // cov(x1 + s x2, p1 - s p2)
    const double cov = v[0][1] - s * v[0][3] + s * v[2][1] - v[2][3];
    return (var_r + 1.0) * (var_s + 1.0) - cov * cov - 4.0;
}

}  // namespace cvwit
