#include "cvwit/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace cvwit {
namespace {

double squared_norm(std::span<const cplx> v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return s;
}

// sqrt(j! / (j-p)!)
double falling_sqrt(int j, int p) {
    double f = 1.0;
    for (int i = 0; i < p; ++i) f *= static_cast<double>(j - i);
    return std::sqrt(f);
}

}  // namespace

TruncatedState::TruncatedState(int cutoff, std::vector<cplx> amplitudes, double tail_bound)
    : cutoff_(cutoff), tail_bound_(tail_bound) {
    if (cutoff < 0) throw InvalidArgument("cutoff must be non-negative");
    if (amplitudes.size() != size())
        throw InvalidArgument("amplitude vector has length " + std::to_string(amplitudes.size()) +
                              ", expected " + std::to_string(size()));
    const double n2 = squared_norm(amplitudes);
    if (std::abs(n2 - 1.0) > 1e-6)
        throw InvalidArgument("pure state is not normalised (norm^2 = " + std::to_string(n2) + ")");
    const double scale = 1.0 / std::sqrt(n2);
    for (auto& a : amplitudes) a *= scale;
    components_.push_back({1.0, std::move(amplitudes)});
    validate_and_measure();
}

TruncatedState::TruncatedState(int cutoff, std::vector<PureComponent> components, double tail_bound)
    : cutoff_(cutoff), components_(std::move(components)), tail_bound_(tail_bound) {
    if (cutoff < 0) throw InvalidArgument("cutoff must be non-negative");
    validate_and_measure();
}

TruncatedState TruncatedState::vacuum(int cutoff) { return fock(cutoff, 0, 0); }

TruncatedState TruncatedState::fock(int cutoff, int j, int k) {
    if (j < 0 || k < 0 || j > cutoff || k > cutoff)
        throw InvalidArgument("Fock level outside the truncated space");
    std::vector<cplx> amp(static_cast<std::size_t>(cutoff + 1) * static_cast<std::size_t>(cutoff + 1));
    amp[static_cast<std::size_t>(j) * static_cast<std::size_t>(cutoff + 1) + static_cast<std::size_t>(k)] = 1.0;
    return {cutoff, std::move(amp)};
}

void TruncatedState::validate_and_measure() {
    if (components_.empty()) throw InvalidArgument("state has no components");
    double wsum = 0.0;
    for (const auto& c : components_) {
        if (!(c.weight >= 0.0)) throw InvalidArgument("mixture weight is negative");
        if (c.amplitudes.size() != size())
            throw InvalidArgument("component amplitude vector has wrong length");
        const double n2 = squared_norm(c.amplitudes);
        if (std::abs(std::sqrt(n2) - 1.0) > 1e-10)
            throw InvalidArgument("mixture component is not normalised (norm^2 = " +
                                  std::to_string(n2) + ")");
        wsum += c.weight;
    }
    if (std::abs(wsum - 1.0) > 1e-12)
        throw InvalidArgument("mixture weights sum to " + std::to_string(wsum));

    const int d = dim();
    tail_mass_ = 0.0;
    for (const auto& c : components_) {
        double t = 0.0;
        for (int j = 0; j < d; ++j) {
            for (int k = 0; k < d; ++k) {
                if (j == cutoff_ || k == cutoff_) t += std::norm(c.amplitudes[index(j, k)]);
            }
        }
        tail_mass_ += c.weight * t;
    }
}

TruncatedState TruncatedState::with_norm_defect(double defect) const {
    TruncatedState out = *this;
    out.norm_defect_ = std::max(norm_defect_, defect);
    return out;
}

TruncatedState TruncatedState::with_cutoff(int cutoff) const {
    if (cutoff == cutoff_) return *this;
    if (cutoff < 0) throw InvalidArgument("cutoff must be non-negative");
    const int nd = cutoff + 1;
    const int keep = std::min(nd, dim());
    std::vector<PureComponent> comps;
    double worst_loss = 0.0;
    for (const auto& c : components_) {
        std::vector<cplx> amp(static_cast<std::size_t>(nd) * static_cast<std::size_t>(nd));
        for (int j = 0; j < keep; ++j)
            for (int k = 0; k < keep; ++k)
                amp[static_cast<std::size_t>(j) * static_cast<std::size_t>(nd) + static_cast<std::size_t>(k)] =
                    c.amplitudes[index(j, k)];
        const double n2 = squared_norm(amp);
        worst_loss = std::max(worst_loss, 1.0 - n2);
        if (1.0 - n2 > tail_bound_)
            throw CutoffTooSmall("reducing cutoff to " + std::to_string(cutoff) + " discards mass " +
                                 std::to_string(1.0 - n2));
        const double s = 1.0 / std::sqrt(n2);
        for (auto& a : amp) a *= s;
        comps.push_back({c.weight, std::move(amp)});
    }
    TruncatedState out(cutoff, std::move(comps), tail_bound_);
    out.norm_defect_ = std::max(norm_defect_, worst_loss);
    return out;
}

int TruncatedState::minimal_cutoff(double bound, int floor) const {
    const PhotonPmf pmf = photon_pmf(*this);
    const int d = dim();
    for (int c = std::max(floor, 0); c <= cutoff_; ++c) {
        // mass at level c or above, in either mode
        double above = 0.0;
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                if (j >= c || k >= c) above += pmf.at(j, k);
        if (above <= bound) return c;
    }
    return cutoff_;
}

std::vector<cplx> lower(std::span<const cplx> amplitudes, int cutoff, int p, int q) {
    const int d = cutoff + 1;
    std::vector<cplx> out(amplitudes.size());
    for (int j = p; j < d; ++j) {
        const double fj = falling_sqrt(j, p);
        for (int k = q; k < d; ++k) {
            const double fk = falling_sqrt(k, q);
            out[static_cast<std::size_t>(j - p) * static_cast<std::size_t>(d) + static_cast<std::size_t>(k - q)] =
                fj * fk * amplitudes[static_cast<std::size_t>(j) * static_cast<std::size_t>(d) + static_cast<std::size_t>(k)];
        }
    }
    return out;
}

cplx expectation(const TruncatedState& state, const ModeMonomial& mono) {
    if (mono.n < 0 || mono.m < 0 || mono.k < 0 || mono.l < 0)
        throw InvalidArgument("monomial exponents must be non-negative");
    if (!state.tail_ok())
        throw CutoffTooSmall("state tail mass " + std::to_string(state.tail_mass()) +
                             " exceeds bound " + std::to_string(state.tail_bound()));
    cplx total = 0.0;
    for (const auto& c : state.components()) {
        // a†^n a^m b†^k b^l = (a^n b^k)† (a^m b^l) since the modes commute.
        const auto right = lower(c.amplitudes, state.cutoff(), mono.m, mono.l);
        const auto left = lower(c.amplitudes, state.cutoff(), mono.n, mono.k);
        cplx s = 0.0;
        for (std::size_t i = 0; i < right.size(); ++i) s += std::conj(left[i]) * right[i];
        total += c.weight * s;
    }
    return total;
}

PhotonPmf photon_pmf(const TruncatedState& state) {
    PhotonPmf pmf{state.cutoff(), std::vector<double>(state.size(), 0.0)};
    for (const auto& c : state.components())
        for (std::size_t i = 0; i < c.amplitudes.size(); ++i) pmf.prob[i] += c.weight * std::norm(c.amplitudes[i]);
    return pmf;
}

}  // namespace cvwit
