#include "cvwit/interferometer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "linalg.hpp"

namespace cvwit {
namespace {

double reduce_phase(double x) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(x, two_pi);
    if (r < 0.0) r += two_pi;
    if (r >= two_pi) r = 0.0;
    return r;
}

struct Grid4 {
    // amplitude[(na, c1)][(nb, d1)] flattened; offsets per total number
    std::vector<std::size_t> offset;  // offset[n] = sum_{t<n} (t+1)
    std::size_t count = 0;
    explicit Grid4(int max_total) {
        offset.resize(static_cast<std::size_t>(max_total) + 2);
        for (int n = 0; n <= max_total; ++n)
            offset[static_cast<std::size_t>(n) + 1] = offset[static_cast<std::size_t>(n)] + static_cast<std::size_t>(n) + 1;
        count = offset.back();
    }
    [[nodiscard]] std::size_t at(int n, int j) const { return offset[static_cast<std::size_t>(n)] + static_cast<std::size_t>(j); }
};

// Adds w * P(c1, d1) for one pair of pure components.
void accumulate_pure(std::span<const cplx> psi1, std::span<const cplx> psi2, int cutoff, double w,
                     const PhasePair& phases, const std::vector<Eigen::MatrixXcd>& blocks,
                     std::vector<double>& prob) {
    const int d = cutoff + 1;
    const int max_total = 2 * cutoff;
    const int out = max_total + 1;
    const auto idx = [d](int j, int k) { return static_cast<std::size_t>(j) * static_cast<std::size_t>(d) + static_cast<std::size_t>(k); };

    // phase shifts on a1 and b1: psi1 -> psi1 e^{i(phi a1 + phi' b1)}
    std::vector<cplx> p1(psi1.begin(), psi1.end());
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            p1[idx(a, b)] *= std::polar(1.0, phases.phi() * a + phases.phi_prime() * b);

    const Grid4 g(max_total);
    // stage 1: mix a1, a2 -> (na, c1); keep b1, b2
    const std::size_t bb = static_cast<std::size_t>(d) * static_cast<std::size_t>(d);
    std::vector<cplx> x(g.count * bb);
    for (int na = 0; na <= max_total; ++na) {
        const auto& u = blocks[static_cast<std::size_t>(na)];
        const int lo = std::max(0, na - cutoff), hi = std::min(na, cutoff);
        for (int c1 = 0; c1 <= na; ++c1) {
            cplx* row = &x[g.at(na, c1) * bb];
            for (int a1 = lo; a1 <= hi; ++a1) {
                const cplx coeff = u(c1, a1);
                if (coeff == 0.0) continue;
                const int a2 = na - a1;
                for (int b1 = 0; b1 < d; ++b1) {
                    const cplx l = coeff * p1[idx(a1, b1)];
                    if (l == 0.0) continue;
                    for (int b2 = 0; b2 < d; ++b2) row[idx(b1, b2)] += l * psi2[idx(a2, b2)];
                }
            }
        }
    }

    // stage 2: mix b1, b2 -> (nb, d1) and accumulate |amplitude|^2
    std::vector<cplx> y(g.count);
    for (int na = 0; na <= max_total; ++na) {
        for (int c1 = 0; c1 <= na; ++c1) {
            const cplx* row = &x[g.at(na, c1) * bb];
            bool any = false;
            for (std::size_t i = 0; i < bb && !any; ++i) any = row[i] != 0.0;
            if (!any) continue;
            for (int nb = 0; nb <= max_total; ++nb) {
                const auto& u = blocks[static_cast<std::size_t>(nb)];
                const int lo = std::max(0, nb - cutoff), hi = std::min(nb, cutoff);
                for (int d1 = 0; d1 <= nb; ++d1) {
                    cplx s = 0.0;
                    for (int b1 = lo; b1 <= hi; ++b1) s += u(d1, b1) * row[idx(b1, nb - b1)];
                    prob[static_cast<std::size_t>(c1) * static_cast<std::size_t>(out) + static_cast<std::size_t>(d1)] +=
                        w * std::norm(s);
                }
            }
        }
    }
}

}  // namespace

PhasePair::PhasePair(double phi, double phi_prime)
    : phi_(reduce_phase(phi)), phi_prime_(reduce_phase(phi_prime)) {}

double DetectorPmf::total() const {
    double s = 0.0;
    for (double p : prob) s += p;
    return s;
}

void share_cutoff(TruncatedState& state1, TruncatedState& state2) {
    const int c = std::max(state1.cutoff(), state2.cutoff());
    state1 = state1.with_cutoff(c);
    state2 = state2.with_cutoff(c);
}

DetectorPmf interfere(const TruncatedState& state1, const TruncatedState& state2, const PhasePair& phases) {
    if (state1.cutoff() != state2.cutoff())
        throw InvalidArgument("interfere: states must share a cutoff (" + std::to_string(state1.cutoff()) +
                              " vs " + std::to_string(state2.cutoff()) + ")");
    for (const auto* s : {&state1, &state2})
        if (!s->tail_ok())
            throw CutoffTooSmall("interfere: input tail mass " + std::to_string(s->tail_mass()) +
                                 " exceeds bound");
    const int cutoff = state1.cutoff();
    const int max_total = 2 * cutoff;
    const auto blocks = detail::beamsplitter_blocks(max_total, 0.5, 0.0);

    DetectorPmf pmf;
    pmf.max_count = max_total;
    pmf.phases = phases;
    pmf.prob.assign(static_cast<std::size_t>(max_total + 1) * static_cast<std::size_t>(max_total + 1), 0.0);
    for (const auto& c1 : state1.components())
        for (const auto& c2 : state2.components())
            accumulate_pure(c1.amplitudes, c2.amplitudes, cutoff, c1.weight * c2.weight, phases, blocks, pmf.prob);
    for (auto& p : pmf.prob) p = std::max(p, 0.0);
    return pmf;
}

double correlator(const DetectorPmf& pmf, int m_prime, int n_prime) {
    if (m_prime < 0 || n_prime < 0 || m_prime + n_prime < 1)
        throw InvalidArgument("correlator needs m', n' >= 0 with m' + n' >= 1");
    double s = 0.0;
    for (int j = 0; j < pmf.dim(); ++j) {
        const double wj = std::pow(static_cast<double>(j), m_prime);
        for (int k = 0; k < pmf.dim(); ++k) s += wj * std::pow(static_cast<double>(k), n_prime) * pmf.at(j, k);
    }
    return s;
}

double binomial_pmf(int n, int k, double eta) {
    if (k < 0 || k > n) return 0.0;
    if (eta == 0.0) return k == 0 ? 1.0 : 0.0;
    if (eta == 1.0) return k == n ? 1.0 : 0.0;
    const double logc = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    return std::exp(logc + k * std::log(eta) + (n - k) * std::log1p(-eta));
}

DetectorPmf apply_loss(const DetectorPmf& pmf, double eta_c, double eta_d) {
    if (!(eta_c >= 0.0 && eta_c <= 1.0 && eta_d >= 0.0 && eta_d <= 1.0))
        throw InvalidArgument("detector efficiencies must lie in [0, 1]");
    const int d = pmf.dim();
    const auto at = [d](int j, int k) { return static_cast<std::size_t>(j) * static_cast<std::size_t>(d) + static_cast<std::size_t>(k); };
    std::vector<double> rows(pmf.prob.size(), 0.0);
    for (int j = 0; j < d; ++j)
        for (int jp = 0; jp <= j; ++jp) {
            const double b = binomial_pmf(j, jp, eta_c);
            if (b == 0.0) continue;
            for (int k = 0; k < d; ++k) rows[at(jp, k)] += b * pmf.prob[at(j, k)];
        }
    DetectorPmf out = pmf;
    std::fill(out.prob.begin(), out.prob.end(), 0.0);
    for (int k = 0; k < d; ++k)
        for (int kp = 0; kp <= k; ++kp) {
            const double b = binomial_pmf(k, kp, eta_d);
            if (b == 0.0) continue;
            for (int j = 0; j < d; ++j) out.prob[at(j, kp)] += b * rows[at(j, k)];
        }
    out.eta_c = pmf.eta_c * eta_c;
    out.eta_d = pmf.eta_d * eta_d;
    return out;
}

}  // namespace cvwit
