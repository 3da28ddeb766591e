#include "cvwit/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace cvwit {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Signed frequency represented by DFT bin i of an n-point axis.
int signed_bin(int i, int n) { return (2 * i <= n) ? i : i - n; }

}  // namespace

GridPlan plan_grid(int m_prime, int n_prime, int oversample) {
    if (m_prime < 0 || n_prime < 0 || m_prime + n_prime == 0)
        throw InvalidArgument("plan_grid needs m', n' >= 0, not both zero");
    if (oversample < 1) throw InvalidArgument("oversample must be >= 1");
    return {oversample * (2 * m_prime + 1), oversample * (2 * n_prime + 1)};
}

PhasePair CorrelatorGrid::phases(int u, int v) const {
    return {kTwoPi * u / plan.u, kTwoPi * v / plan.v};
}

std::vector<DetectorPmf> grid_pmfs(const TruncatedState& state1, const TruncatedState& state2,
                                   const GridPlan& plan) {
    std::vector<DetectorPmf> out;
    out.reserve(static_cast<std::size_t>(plan.points()));
    for (int u = 0; u < plan.u; ++u)
        for (int v = 0; v < plan.v; ++v)
            out.push_back(interfere(state1, state2, PhasePair(kTwoPi * u / plan.u, kTwoPi * v / plan.v)));
    return out;
}

CorrelatorGrid correlator_grid_from_pmfs(const std::vector<DetectorPmf>& pmfs, int m_prime, int n_prime,
                                         const GridPlan& plan) {
    if (pmfs.size() != static_cast<std::size_t>(plan.points()))
        throw InvalidArgument("number of detector distributions does not match the grid");
    CorrelatorGrid g{m_prime, n_prime, plan, {}};
    g.values.reserve(pmfs.size());
    for (const auto& p : pmfs) g.values.push_back(correlator(p, m_prime, n_prime));
    return g;
}

CorrelatorGrid sample_correlator_grid(const TruncatedState& state1, const TruncatedState& state2, int m_prime,
                                      int n_prime, const GridPlan& plan) {
    return correlator_grid_from_pmfs(grid_pmfs(state1, state2, plan), m_prime, n_prime, plan);
}

cplx fourier_coefficient(const CorrelatorGrid& grid, int f, int g) {
    cplx s = 0.0;
    for (int u = 0; u < grid.plan.u; ++u)
        for (int v = 0; v < grid.plan.v; ++v) {
            const double ang = kTwoPi * (static_cast<double>(f) * u / grid.plan.u +
                                         static_cast<double>(g) * v / grid.plan.v);
            s += grid.at(u, v) * std::polar(1.0, -ang);
        }
    return s / static_cast<double>(grid.plan.points());
}

TopCoefficients extract_top_coefficients(const CorrelatorGrid& grid, const ExtractOptions& options) {
    const int mp = grid.m_prime, np = grid.n_prime;
    if (grid.plan.u < 2 * mp + 1 || grid.plan.v < 2 * np + 1)
        throw AliasingDetected("grid " + std::to_string(grid.plan.u) + "x" + std::to_string(grid.plan.v) +
                               " is below the minimum " + std::to_string(2 * mp + 1) + "x" +
                               std::to_string(2 * np + 1));
    if (grid.values.size() != static_cast<std::size_t>(grid.plan.points()))
        throw InvalidArgument("correlator grid has the wrong number of values");

    TopCoefficients out;
    const double scale = std::ldexp(1.0, mp + np);
    out.plus = scale * fourier_coefficient(grid, mp, np);
    out.minus = scale * fourier_coefficient(grid, mp, -np);

    if (options.band_tolerance >= 0.0 && (grid.plan.u > 2 * mp + 1 || grid.plan.v > 2 * np + 1)) {
        double gmax = 0.0;
        for (double x : grid.values) gmax = std::max(gmax, std::abs(x));
        double worst = 0.0;
        for (int i = 0; i < grid.plan.u; ++i) {
            const int f = signed_bin(i, grid.plan.u);
            for (int j = 0; j < grid.plan.v; ++j) {
                const int g = signed_bin(j, grid.plan.v);
                if (std::abs(f) <= mp && std::abs(g) <= np) continue;
                worst = std::max(worst, std::abs(fourier_coefficient(grid, f, g)));
            }
        }
        out.out_of_band = gmax > 0.0 ? worst / gmax : 0.0;
        if (out.out_of_band > options.band_tolerance)
            throw AliasingDetected("correlator has out-of-band content " + std::to_string(out.out_of_band) +
                                   "; the grid or the requested order is inconsistent");
    }
    return out;
}

}  // namespace cvwit
