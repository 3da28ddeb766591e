#include "cvwit/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <thread>

#include "cvwit/stirling.hpp"

namespace cvwit {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::uint64_t kMarginalStream = 1;
constexpr std::uint64_t kGridStream = 1000;

ShotRecord draw(const std::vector<double>& prob, int max_count, std::int64_t shots, std::uint64_t seed,
                std::uint64_t stream) {
    if (shots < 1) throw InvalidArgument("shots must be >= 1");
    std::vector<double> cdf(prob.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < prob.size(); ++i) {
        acc += std::max(prob[i], 0.0);
        cdf[i] = acc;
    }
    if (!(acc > 0.0)) throw InvalidArgument("cannot sample from an empty distribution");
    ShotRecord rec;
    rec.shots = shots;
    rec.max_count = max_count;
    rec.counts.assign(prob.size(), 0);
    rec.seed = seed;
    rec.stream = stream;
    ShotRng rng(seed, stream);
    for (std::int64_t s = 0; s < shots; ++s) {
        const double u = rng.uniform() * acc;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        if (it == cdf.end()) --it;
        ++rec.counts[static_cast<std::size_t>(it - cdf.begin())];
    }
    return rec;
}

// Mean and standard error of g(j, k) over a record.
template <class G>
SampleMean record_stat(const ShotRecord& rec, G g) {
    const int d = rec.max_count + 1;
    double s1 = 0.0, s2 = 0.0;
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
            const auto c = rec.at(j, k);
            if (c == 0) continue;
            const double x = g(j, k);
            s1 += static_cast<double>(c) * x;
            s2 += static_cast<double>(c) * x * x;
        }
    const double n = static_cast<double>(rec.shots);
    const double mean = s1 / n;
    double var = 0.0;
    if (rec.shots > 1) var = std::max(0.0, (s2 - n * mean * mean) / (n - 1.0));
    return {mean, std::sqrt(var / n)};
}

// Value of sum_{k,l} C[k][l] j^k k^l, the photon-count eigenvalue of the
// normal-ordered product written through moments of a†a and b†b.
double stirling_weight(const NumberMomentDecomposition& dec, int j, int k) {
    double s = 0.0;
    for (int p = 0; p <= dec.m; ++p) {
        const double jp = std::pow(static_cast<double>(j), p);
        for (int q = 0; q <= dec.n; ++q) {
            const auto c = dec.coeff[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)];
            if (c != 0) s += static_cast<double>(c) * jp * std::pow(static_cast<double>(k), q);
        }
    }
    return s;
}

double dft_weight(const GridPlan& grid, const CrossTermPlan& plan, int u, int v) {
    const int g = plan.use_plus ? plan.n_prime : -plan.n_prime;
    const double ang = kTwoPi * (static_cast<double>(plan.m_prime) * u / grid.u + static_cast<double>(g) * v / grid.v);
    return std::ldexp(1.0, plan.m_prime + plan.n_prime) * std::cos(ang) / grid.points();
}

double pmf_moment(const DetectorPmf& pmf, int m_prime, int n_prime, int power) {
    double s = 0.0;
    for (int j = 0; j < pmf.dim(); ++j)
        for (int k = 0; k < pmf.dim(); ++k) {
            const double x = std::pow(static_cast<double>(j), m_prime) * std::pow(static_cast<double>(k), n_prime);
            s += std::pow(x, power) * pmf.at(j, k);
        }
    return s;
}

struct Prepared {
    MinorSpec spec;
    PhotonPmf pmf1, pmf2;
    CrossTermPlan plan;
    GridPlan grid;
    std::vector<DetectorPmf> grid_pmfs;
};

Prepared prepare(const TruncatedState& state1, const TruncatedState& state2, const MinorSpec& spec,
                 int oversample) {
    spec.validate();
    TruncatedState s1 = state1, s2 = state2;
    share_cutoff(s1, s2);
    Prepared p{spec, photon_pmf(s1), photon_pmf(s2), cross_term_plan(spec), {}, {}};
    p.grid = plan_grid(p.plan.m_prime, p.plan.n_prime, oversample);
    p.grid_pmfs = grid_pmfs(s1, s2, p.grid);
    return p;
}

// Single-shot variance of the product-of-means estimate of
// <a†^m a^m b†^n b^n><a†^p a^p b†^q b^q> (first order in the shot noise).
double diagonal_variance(const PhotonPmf& pmf, const MinorSpec& spec) {
    const auto dec_a = number_moment_decomposition(spec.m, spec.n);
    const auto dec_b = number_moment_decomposition(spec.p, spec.q);
    double ma = 0.0, ma2 = 0.0, mb = 0.0, mb2 = 0.0;
    for (int j = 0; j <= pmf.cutoff; ++j)
        for (int k = 0; k <= pmf.cutoff; ++k) {
            const double pr = pmf.at(j, k);
            if (pr == 0.0) continue;
            const double xa = stirling_weight(dec_a, j, k), xb = stirling_weight(dec_b, j, k);
            ma += pr * xa;
            ma2 += pr * xa * xa;
            mb += pr * xb;
            mb2 += pr * xb * xb;
        }
    return std::max(0.0, mb * mb * (ma2 - ma * ma) + ma * ma * (mb2 - mb * mb));
}

struct Estimate {
    double f1 = 0.0, f2 = 0.0, cross = 0.0;
    double se_f1 = 0.0, se_f2 = 0.0, se_cross = 0.0;
};

SampleMean diagonal_product(const PhotonPmf& pmf, const MinorSpec& spec, bool exact, std::int64_t shots,
                            std::uint64_t seed, std::uint64_t stream) {
    if (exact) return {normal_moment_from_pmf(pmf, spec.m, spec.n) * normal_moment_from_pmf(pmf, spec.p, spec.q), 0.0};
    const auto rec = simulate_shots(pmf, shots, seed, stream);
    const auto a = normal_moment_from_record(rec, spec.m, spec.n);
    const auto b = normal_moment_from_record(rec, spec.p, spec.q);
    return {a.mean * b.mean, std::hypot(a.std_error * b.mean, a.mean * b.std_error)};
}

Estimate run_estimate(const Prepared& p, const EstimateOptions& o) {
    Estimate e;
    const auto d1 = diagonal_product(p.pmf1, p.spec, o.exact, o.shots_marginal, o.seed, kMarginalStream);
    const auto d2 = diagonal_product(p.pmf2, p.spec, o.exact, o.shots_marginal, o.seed, kMarginalStream + 1);
    e.f1 = d1.mean;
    e.se_f1 = d1.std_error;
    e.f2 = d2.mean;
    e.se_f2 = d2.std_error;

    CorrelatorGrid g{p.plan.m_prime, p.plan.n_prime, p.grid, {}};
    g.values.reserve(p.grid_pmfs.size());
    double var = 0.0;
    for (std::size_t i = 0; i < p.grid_pmfs.size(); ++i) {
        if (o.exact) {
            g.values.push_back(correlator(p.grid_pmfs[i], p.plan.m_prime, p.plan.n_prime));
            continue;
        }
        const auto rec = simulate_shots(p.grid_pmfs[i], o.shots_per_point, o.seed, kGridStream + i);
        const auto sm = record_mean(rec, p.plan.m_prime, p.plan.n_prime);
        g.values.push_back(sm.mean);
        const int u = static_cast<int>(i) / p.grid.v, v = static_cast<int>(i) % p.grid.v;
        const double w = dft_weight(p.grid, p.plan, u, v);
        var += w * w * sm.std_error * sm.std_error;
    }
    ExtractOptions eo;
    if (!o.exact) eo.band_tolerance = -1.0;
    const auto top = extract_top_coefficients(g, eo);
    e.cross = (p.plan.use_plus ? top.plus : top.minus).real();
    e.se_cross = std::sqrt(var);
    return e;
}

WitnessResult to_result(const Estimate& e, const Prepared& p, const EstimateOptions& o) {
    WitnessResult r;
    r.first = 0.5 * (e.f1 + e.f2);
    r.second = e.cross;
    r.value = r.first - r.second;
    r.provenance = o.exact ? Provenance::FourierExtracted : Provenance::ShotEstimated;
    const double se_first = 0.5 * std::hypot(e.se_f1, e.se_f2);
    r.metadata.emplace_back("spec", p.spec.str());
    r.metadata.emplace_back("cutoff", static_cast<std::int64_t>(p.pmf1.cutoff));
    r.metadata.emplace_back("grid_u", static_cast<std::int64_t>(p.grid.u));
    r.metadata.emplace_back("grid_v", static_cast<std::int64_t>(p.grid.v));
    r.metadata.emplace_back("coefficient", std::string(p.plan.use_plus ? "plus" : "minus"));
    if (!o.exact) {
        r.metadata.emplace_back("shots_per_point", o.shots_per_point);
        r.metadata.emplace_back("shots_marginal", o.shots_marginal);
        r.metadata.emplace_back("seed", static_cast<std::int64_t>(o.seed));
        r.metadata.emplace_back("rng", std::string(kRngName));
    }
    r.metadata.emplace_back("se_first", se_first);
    r.metadata.emplace_back("se_second", e.se_cross);
    r.metadata.emplace_back("se_value", std::hypot(se_first, e.se_cross));
    return r;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

ShotRng::ShotRng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
}

double ShotRng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

ShotRecord simulate_shots(const DetectorPmf& pmf, std::int64_t shots, std::uint64_t seed, std::uint64_t stream) {
    auto rec = draw(pmf.prob, pmf.max_count, shots, seed, stream);
    rec.phases = pmf.phases;
    return rec;
}

ShotRecord simulate_shots(const PhotonPmf& pmf, std::int64_t shots, std::uint64_t seed, std::uint64_t stream) {
    return draw(pmf.prob, pmf.cutoff, shots, seed, stream);
}

SampleMean record_mean(const ShotRecord& record, int m_prime, int n_prime) {
    return record_stat(record, [&](int j, int k) {
        return std::pow(static_cast<double>(j), m_prime) * std::pow(static_cast<double>(k), n_prime);
    });
}

double normal_moment_from_pmf(const PhotonPmf& pmf, int x, int y) {
    const auto dec = number_moment_decomposition(x, y);
    double s = 0.0;
    for (int j = 0; j <= pmf.cutoff; ++j)
        for (int k = 0; k <= pmf.cutoff; ++k) {
            const double p = pmf.at(j, k);
            if (p != 0.0) s += stirling_weight(dec, j, k) * p;
        }
    return s;
}

SampleMean normal_moment_from_record(const ShotRecord& record, int x, int y) {
    const auto dec = number_moment_decomposition(x, y);
    return record_stat(record, [&](int j, int k) { return stirling_weight(dec, j, k); });
}

CrossTermPlan cross_term_plan(const MinorSpec& spec) {
    spec.validate();
    // (m,0,0,q) and (0,n,p,0) pair a^.. with b^.. and read the (m', n')
    // coefficient; (m,n,0,0) and (0,0,p,q) pair a^.. with b†^.. and read (m', -n').
    const bool plus = (spec.m > 0 && spec.q > 0) || (spec.p > 0 && spec.n > 0);
    return {std::max(spec.m, spec.p), std::max(spec.n, spec.q), plus};
}

WitnessResult estimate_minor(const TruncatedState& state1, const TruncatedState& state2, const MinorSpec& spec,
                             const EstimateOptions& options) {
    if (!options.exact && (options.shots_per_point < 1 || options.shots_marginal < 1))
        throw InvalidArgument("shot counts must be >= 1");
    const auto p = prepare(state1, state2, spec, options.oversample);
    return to_result(run_estimate(p, options), p, options);
}

double cross_term_variance(const std::vector<DetectorPmf>& pmfs, const CrossTermPlan& plan, const GridPlan& grid,
                           std::int64_t shots_per_point) {
    if (shots_per_point < 1) throw InvalidArgument("shots_per_point must be >= 1");
    double var = 0.0;
    for (int u = 0; u < grid.u; ++u)
        for (int v = 0; v < grid.v; ++v) {
            const auto& pmf = pmfs[static_cast<std::size_t>(u * grid.v + v)];
            const double m1 = pmf_moment(pmf, plan.m_prime, plan.n_prime, 1);
            const double m2 = pmf_moment(pmf, plan.m_prime, plan.n_prime, 2);
            const double w = dft_weight(grid, plan, u, v);
            var += w * w * std::max(0.0, m2 - m1 * m1);
        }
    return var / static_cast<double>(shots_per_point);
}

std::int64_t m0_chebyshev(double variance, double epsilon, double delta) {
    if (!(variance >= 0.0)) throw InvalidArgument("variance must be >= 0");
    if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be > 0");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0, 1)");
    const double x = variance / (delta * epsilon * epsilon);
    if (x >= 0x1.0p63) throw Overflow("m0 exceeds 2^63");
    // Absorb rounding noise so exact integers are not bumped up by one.
    const auto m = static_cast<std::int64_t>(std::ceil(x * (1.0 - 1e-12)));
    return std::max<std::int64_t>(m, 1);
}

std::int64_t m0_hoeffding_range(double range, double epsilon, double delta) {
    if (!(range >= 0.0)) throw InvalidArgument("range must be >= 0");
    if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be > 0");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0, 1)");
    if (range == 0.0) return 1;
    const double lg = 2.0 * std::log(range) - std::log(2.0 * epsilon * epsilon) + std::log(std::log(2.0 / delta));
    if (lg >= 63.0 * std::numbers::ln2) throw Overflow("m0 exceeds 2^63");
    return std::max<std::int64_t>(static_cast<std::int64_t>(std::ceil(std::exp(lg) * (1.0 - 1e-12))), 1);
}

std::int64_t m0_hoeffding(int n, double epsilon, double delta) {
    if (n < 1) throw InvalidArgument("N must be >= 1");
    if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be > 0");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0, 1)");
    const double lg = 2.0 * std::log(2.0 * n + 1.0) + 4.0 * n * std::log(static_cast<double>(n)) -
                      std::log(2.0 * epsilon * epsilon) + std::log(std::log(2.0 / delta));
    if (lg >= 63.0 * std::numbers::ln2) throw Overflow("m0 exceeds 2^63");
    return std::max<std::int64_t>(static_cast<std::int64_t>(std::ceil(std::exp(lg) * (1.0 - 1e-12))), 1);
}

double minor_observable_variance(const TruncatedState& state, const MinorSpec& spec) {
    const auto p = prepare(state, state, spec, 1);
    return diagonal_variance(p.pmf1, spec) + cross_term_variance(p.grid_pmfs, p.plan, p.grid, 1);
}

double estimator_variance(const TruncatedState& state1, const TruncatedState& state2, const MinorSpec& spec,
                          std::int64_t shots_per_point, std::int64_t shots_marginal, bool cross_term_only) {
    if (shots_per_point < 1 || shots_marginal < 1) throw InvalidArgument("shot counts must be >= 1");
    const auto p = prepare(state1, state2, spec, 1);
    const double cross = cross_term_variance(p.grid_pmfs, p.plan, p.grid, shots_per_point);
    if (cross_term_only) return cross;
    const double first =
        0.25 * (diagonal_variance(p.pmf1, spec) + diagonal_variance(p.pmf2, spec)) / static_cast<double>(shots_marginal);
    return first + cross;
}

double cat_margin_epsilon(double d1100) { return std::min(0.025, std::abs(d1100)); }

double noon_observable_sigma(int n) {
    if (n < 1) throw InvalidArgument("N must be >= 1");
    const double amp = std::numbers::sqrt2 / 2.0;
    const auto s = build({Noon{n, amp, amp}});
    const auto grid = plan_grid(n, n);
    const auto pmfs = grid_pmfs(s, s, grid);
    double m1 = 0.0, m2 = 0.0;
    for (const auto& pmf : pmfs) {
        m1 += pmf_moment(pmf, n, n, 1);
        m2 += pmf_moment(pmf, n, n, 2);
    }
    m1 /= static_cast<double>(pmfs.size());
    m2 /= static_cast<double>(pmfs.size());
    return std::sqrt(std::max(0.0, m2 - m1 * m1));
}

std::int64_t m0_noon_sigma_preset(int n, double k_sigma, double delta) {
    return m0_hoeffding(n, k_sigma * noon_observable_sigma(n), delta);
}

double CoverageResult::coverage() const {
    if (trials.empty()) return 0.0;
    const auto hit = std::count_if(trials.begin(), trials.end(), [](const CoverageTrial& t) { return t.covered; });
    return static_cast<double>(hit) / static_cast<double>(trials.size());
}

std::uint64_t trial_seed(std::uint64_t seed, int trial) {
    return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(trial)));
}

CoverageResult coverage_experiment(const TruncatedState& state1, const TruncatedState& state2, const MinorSpec& spec,
                                   const CoverageConfig& config) {
    if (config.trials < 1) throw InvalidArgument("trials must be >= 1");
    if (!(config.epsilon > 0.0)) throw InvalidArgument("epsilon must be > 0");
    const auto p = prepare(state1, state2, spec, 1);
    EstimateOptions exact;
    exact.exact = true;
    const auto ex = run_estimate(p, exact);
    CoverageResult out;
    out.exact = config.cross_term_only ? ex.cross : 0.5 * (ex.f1 + ex.f2) - ex.cross;
    out.trials.resize(static_cast<std::size_t>(config.trials));

    const auto run_trial = [&](int t) {
        EstimateOptions o;
        o.shots_per_point = config.shots_per_point;
        o.shots_marginal = config.shots_marginal;
        o.seed = trial_seed(config.seed, t);
        const auto e = run_estimate(p, o);
        const double est = config.cross_term_only ? e.cross : 0.5 * (e.f1 + e.f2) - e.cross;
        auto& tr = out.trials[static_cast<std::size_t>(t)];
        tr = {t, o.seed, est, std::abs(est - out.exact), std::abs(est - out.exact) <= config.epsilon};
    };

    const int threads = std::max(1, std::min(config.threads, config.trials));
    if (threads == 1) {
        for (int t = 0; t < config.trials; ++t) run_trial(t);
        return out;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&, w] {
            try {
                for (int t = w; t < config.trials; t += threads) run_trial(t);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace cvwit
