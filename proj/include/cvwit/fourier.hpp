#pragma once

#include <vector>

#include "cvwit/fock.hpp"
#include "cvwit/interferometer.hpp"

namespace cvwit {

struct GridPlan {
    int u = 1;  ///< points along phi
    int v = 1;  ///< points along phi'
    [[nodiscard]] int points() const { return u * v; }
};

/// Minimal alias-free grid for the correlator of order (m', n'):
/// (2m'+1) x (2n'+1) points, each axis multiplied by `oversample`.
[[nodiscard]] GridPlan plan_grid(int m_prime, int n_prime, int oversample = 1);

/// Correlator values at phi_u = 2 pi u / U, phi'_v = 2 pi v / V, row-major in (u, v).
struct CorrelatorGrid {
    int m_prime = 0;
    int n_prime = 0;
    GridPlan plan;
    std::vector<double> values;

    [[nodiscard]] double at(int u, int v) const {
        return values[static_cast<std::size_t>(u) * static_cast<std::size_t>(plan.v) + static_cast<std::size_t>(v)];
    }
    [[nodiscard]] PhasePair phases(int u, int v) const;
};

/// Exact detector distributions for every grid point, row-major in (u, v).
[[nodiscard]] std::vector<DetectorPmf> grid_pmfs(const TruncatedState& state1, const TruncatedState& state2,
                                                 const GridPlan& plan);

/// Noiseless correlator grid.
[[nodiscard]] CorrelatorGrid sample_correlator_grid(const TruncatedState& state1,
                                                    const TruncatedState& state2, int m_prime,
                                                    int n_prime, const GridPlan& plan);

[[nodiscard]] CorrelatorGrid correlator_grid_from_pmfs(const std::vector<DetectorPmf>& pmfs, int m_prime,
                                                       int n_prime, const GridPlan& plan);

/// Raw 2-D DFT coefficient of e^{i(f phi + g phi')}:
///   (1/UV) sum_{u,v} G(u,v) e^{-i(f phi_u + g phi'_v)}.
/// Lower-frequency coefficients are moment mixtures; this is a debugging aid.
[[nodiscard]] cplx fourier_coefficient(const CorrelatorGrid& grid, int f, int g);

/// The two top-frequency coefficients with the 1/2^{m'+n'} prefactor undone:
///   plus  = <a1^m' b1^n'>_1 <a2†^m' b2†^n'>_2      (frequency ( m',  n'))
///   minus = <a1^m' b1†^n'>_1 <a2†^m' b2^n'>_2      (frequency ( m', -n'))
struct TopCoefficients {
    cplx plus = 0.0;
    cplx minus = 0.0;
    /// Largest |coefficient| above the band limit relative to max |G|;
    /// zero on a minimal grid.
    double out_of_band = 0.0;
};

struct ExtractOptions {
    /// Throw AliasingDetected if out-of-band power exceeds this (relative).
    /// Negative disables the check, which noisy grids need.
    double band_tolerance = 1e-9;
};

[[nodiscard]] TopCoefficients extract_top_coefficients(const CorrelatorGrid& grid,
                                                       const ExtractOptions& options = {});

}  // namespace cvwit
