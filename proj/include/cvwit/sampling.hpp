#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cvwit/fourier.hpp"
#include "cvwit/interferometer.hpp"
#include "cvwit/witness.hpp"

namespace cvwit {

/// Name of the generator recorded in output metadata.
inline constexpr const char* kRngName = "mt19937_64/seed_seq";

/// Seeded generator for one independent stream. The (seed, stream) pair fully
/// determines the sequence; streams separate grid points and trials.
class ShotRng {
public:
    ShotRng(std::uint64_t seed, std::uint64_t stream);
    /// Uniform double in [0, 1) built from the top 53 bits.
    double uniform();

private:
    std::mt19937_64 engine_;
};

/// Tallies of detector outcomes for one phase setting.
struct ShotRecord {
    PhasePair phases;
    std::int64_t shots = 0;
    int max_count = 0;
    std::vector<std::int64_t> counts;  ///< row-major over (j, k), (max_count+1)^2 entries
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    [[nodiscard]] std::int64_t at(int j, int k) const {
        return counts[static_cast<std::size_t>(j) * static_cast<std::size_t>(max_count + 1) +
                      static_cast<std::size_t>(k)];
    }
    friend bool operator==(const ShotRecord&, const ShotRecord&) = default;
};

/// I.i.d. draws from the pmf by inverse CDF.
[[nodiscard]] ShotRecord simulate_shots(const DetectorPmf& pmf, std::int64_t shots, std::uint64_t seed,
                                        std::uint64_t stream = 0);
[[nodiscard]] ShotRecord simulate_shots(const PhotonPmf& pmf, std::int64_t shots, std::uint64_t seed,
                                        std::uint64_t stream = 0);

/// Empirical mean and standard error of f(j, k) over a record.
struct SampleMean {
    double mean = 0.0;
    double std_error = 0.0;
};

[[nodiscard]] SampleMean record_mean(const ShotRecord& record, int m_prime, int n_prime);

/// <a†^x a^x b†^y b^y> from a photon-number distribution via the Stirling
/// decomposition into moments of a†a and b†b.
[[nodiscard]] double normal_moment_from_pmf(const PhotonPmf& pmf, int x, int y);
[[nodiscard]] SampleMean normal_moment_from_record(const ShotRecord& record, int x, int y);

struct EstimateOptions {
    /// Shots per phase-grid point in step 2.
    std::int64_t shots_per_point = 1000;
    /// Shots on each state's photon-number distribution in step 1.
    std::int64_t shots_marginal = 1000;
    std::uint64_t seed = 0;
    int oversample = 1;
    /// Use exact distributions instead of sampling (infinite-shot limit).
    bool exact = false;
};

/// The two-state measurement procedure:
///   1. diagonal moments from the non-interfered photon statistics,
///   2. the cross term from the Fourier-analysed correlator grid,
///   3. d' = (F1 + F2)/2 - Re(A1 A2*).
/// Standard errors are stored in the metadata as se_first, se_second, se_value.
/// Provenance is fourier-extracted for exact runs and shot-estimated otherwise.
[[nodiscard]] WitnessResult estimate_minor(const TruncatedState& state1, const TruncatedState& state2,
                                           const MinorSpec& spec, const EstimateOptions& options);

/// Fourier order (m', n') used for the cross term of a spec, and whether the
/// (m', n') or (m', -n') coefficient carries it.
struct CrossTermPlan {
    int m_prime = 0;
    int n_prime = 0;
    bool use_plus = true;
};

[[nodiscard]] CrossTermPlan cross_term_plan(const MinorSpec& spec);

/// Exact variance of the step-2 cross-term estimator when each grid point gets
/// `shots_per_point` shots, i.e. Var(Re C) for the top coefficient.
[[nodiscard]] double cross_term_variance(const std::vector<DetectorPmf>& pmfs, const CrossTermPlan& plan,
                                         const GridPlan& grid, std::int64_t shots_per_point);

/// ceil(variance / (delta eps^2)), at least one.
[[nodiscard]] std::int64_t m0_chebyshev(double variance, double epsilon, double delta);

/// ceil((2N+1)^2 N^{4N} / (2 eps^2) ln(2/delta)), evaluated in log space.
/// Throws Overflow above 2^63.
[[nodiscard]] std::int64_t m0_hoeffding(int n, double epsilon, double delta);

/// Range-based Hoeffding bound ceil((b-a)^2 / (2 eps^2) ln(2/delta)).
[[nodiscard]] std::int64_t m0_hoeffding_range(double range, double epsilon, double delta);

/// Single-shot variance of the operator whose mean gives d_1100 of a state in
/// the replica scheme: Var(a†a b†b) on the state plus the weighted variance of
/// (c1†c1)(d1†d1) over the 3x3 phase grid, so that with m shots per setting the
/// estimator variance is this value divided by m.
[[nodiscard]] double minor_observable_variance(const TruncatedState& state, const MinorSpec& spec);

/// Variance of the estimate_minor value (or of its cross term alone) for the
/// given shot allocation, from the exact distributions.
[[nodiscard]] double estimator_variance(const TruncatedState& state1, const TruncatedState& state2,
                                        const MinorSpec& spec, std::int64_t shots_per_point,
                                        std::int64_t shots_marginal, bool cross_term_only = false);

/// Shrinking error margin for cat-state d_1100 runs: eps = min(0.025, |d_1100|).
[[nodiscard]] double cat_margin_epsilon(double d1100);

/// Standard deviation of a single shot of (c1†c1 d1†d1)^N for the replica
/// balanced NOON state, pooled over the (2N+1)^2 phase grid. This is the sigma
/// of the k-sigma accuracy presets.
[[nodiscard]] double noon_observable_sigma(int n);

/// Hoeffding m0 at accuracy eps = k * noon_observable_sigma(N).
[[nodiscard]] std::int64_t m0_noon_sigma_preset(int n, double k_sigma, double delta);

/// Repeated-trial coverage of the shot estimator.
struct CoverageConfig {
    std::int64_t shots_per_point = 1000;
    std::int64_t shots_marginal = 1000;
    int trials = 200;
    double epsilon = 0.1;
    std::uint64_t seed = 0;
    /// Count a trial as covered when the cross term (true) or the full minor
    /// (false) lies within epsilon of its exact value.
    bool cross_term_only = false;
    int threads = 1;
};

struct CoverageTrial {
    int index = 0;
    std::uint64_t seed = 0;
    double estimate = 0.0;
    double error = 0.0;
    bool covered = false;
};

struct CoverageResult {
    double exact = 0.0;
    std::vector<CoverageTrial> trials;
    [[nodiscard]] double coverage() const;
};

/// Derived per-trial seed; independent of thread scheduling.
[[nodiscard]] std::uint64_t trial_seed(std::uint64_t seed, int trial);

[[nodiscard]] CoverageResult coverage_experiment(const TruncatedState& state1, const TruncatedState& state2,
                                                 const MinorSpec& spec, const CoverageConfig& config);

}  // namespace cvwit
