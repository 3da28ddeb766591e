#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cvwit/fock.hpp"
#include "cvwit/states.hpp"

namespace cvwit {

/// Indices (m, n, p, q) of the second-order minor
///   d_mnpq = <a†^m a^m b†^n b^n><a†^p a^p b†^q b^q> - |<a†^m a^p b†^q b^n>|^2.
/// Exactly one of {m, p} and exactly one of {n, q} must be non-zero.
struct MinorSpec {
    int m = 0;
    int n = 0;
    int p = 0;
    int q = 0;

    /// Throws InvalidArgument when the zero pattern is violated.
    void validate() const;
    [[nodiscard]] int order() const { return m + n + p + q; }
    [[nodiscard]] std::string str() const;

    /// Monomial of the first diagonal entry, a†^m a^m b†^n b^n.
    [[nodiscard]] ModeMonomial first_monomial() const { return {m, m, n, n}; }
    /// Monomial of the second diagonal entry, a†^p a^p b†^q b^q.
    [[nodiscard]] ModeMonomial second_monomial() const { return {p, p, q, q}; }
    /// Off-diagonal entry a†^m a^p b†^q b^n.
    [[nodiscard]] ModeMonomial cross_monomial() const { return {m, p, q, n}; }

    friend bool operator==(const MinorSpec&, const MinorSpec&) = default;
};

/// All valid specs with order between 1 and max_order, in lexicographic order.
[[nodiscard]] std::vector<MinorSpec> valid_specs(int max_order);

enum class Provenance { Analytic, FockNumeric, FourierExtracted, ShotEstimated };

[[nodiscard]] std::string provenance_name(Provenance p);

using MetaValue = std::variant<double, std::int64_t, std::string>;
/// Insertion-ordered key/value metadata.
using Metadata = std::vector<std::pair<std::string, MetaValue>>;

struct WitnessResult {
    double value = 0.0;
    double first = 0.0;   ///< product of diagonal entries (averaged over the two states for d')
    double second = 0.0;  ///< |A|^2 for d, Re(A1 A2*) for d'
    /// |A1 - A2|^2 for d', where value = (d1 + d2 + epsilon) / 2.
    std::optional<double> epsilon_term;
    Provenance provenance = Provenance::FockNumeric;
    /// False only for a lossy minor evaluated with eta1 < eta2 / 2.
    bool sound = true;
    Metadata metadata;

    [[nodiscard]] bool witnessed() const { return value < 0.0; }
};

/// The two ingredients of a minor for one state: the product of the diagonal
/// entries and the off-diagonal moment.
struct MinorMoments {
    double diagonal = 0.0;
    cplx cross = 0.0;
};

[[nodiscard]] MinorMoments minor_moments(const TruncatedState& state, const MinorSpec& spec);

/// Re(x y*), written so that x == y gives exactly |x|^2.
[[nodiscard]] double cross_term(cplx x, cplx y);

[[nodiscard]] WitnessResult assemble_d(const MinorMoments& mm, Provenance provenance);
[[nodiscard]] WitnessResult assemble_dprime(const MinorMoments& m1, const MinorMoments& m2,
                                            Provenance provenance);

/// eta1^k F - (eta2/2)^k |A|^2; `sound` iff eta1 >= eta2/2.
[[nodiscard]] WitnessResult assemble_d_lossy(const MinorMoments& mm, int order, double eta1, double eta2,
                                             Provenance provenance);

[[nodiscard]] WitnessResult minor_d(const TruncatedState& state, const MinorSpec& spec);

/// Two-state minor
///   d' = (F1 + F2)/2 - Re(A1 A2*) = (d1 + d2 + |A1 - A2|^2)/2.
/// With state1 == state2 this is minor_d bit for bit.
[[nodiscard]] WitnessResult minor_dprime(const TruncatedState& state1, const TruncatedState& state2,
                                         const MinorSpec& spec);

/// eta1^k F - (eta2/2)^k |A|^2 with k the order of the spec.
/// `sound` is set iff eta1 >= eta2/2.
[[nodiscard]] WitnessResult minor_d_lossy(const TruncatedState& state, const MinorSpec& spec, double eta1,
                                          double eta2);

/// Closed-form minor of a family, against itself (no reference) or against a
/// coherent reference |gamma, delta>.
///
/// Supported pairs:
///   TMSV (optionally displaced)  x (1,0,0,1)
///   Cat (any theta, dephasing)   x every valid spec
///   NOON (dephasing)             x (0,0,N,N) and (N,N,0,0)
///   HermiteGaussian              x (1,0,0,1), (1,1,0,0), rotation-only transform
///   CoherentProduct              x every valid spec
/// Anything else throws Unsupported.
[[nodiscard]] WitnessResult analytic_minor(const StateFamily& family, const MinorSpec& spec,
                                           const std::optional<CoherentProduct>& reference = std::nullopt);

/// Closed-form (F, A) of a family; same support as analytic_minor.
[[nodiscard]] MinorMoments analytic_minor_moments(const StateFamily& family, const MinorSpec& spec);

struct OptimalReference {
    CoherentProduct reference;
    cplx target = 0.0;  ///< <a†^m a^p b†^q b^n> of the state
    /// Only gamma^.. delta^.. is fixed; the representative has gamma real,
    /// gamma >= 0 and |gamma| = |delta|.
    bool degenerate = true;
    /// Target moment is zero: every reference with a vanishing product works
    /// and the vacuum is returned.
    bool no_solution = false;
};

/// Coherent reference for which the epsilon term vanishes, so d' = d/2.
[[nodiscard]] OptimalReference optimal_reference(cplx target, const MinorSpec& spec);
[[nodiscard]] OptimalReference optimal_reference(const TruncatedState& state, const MinorSpec& spec);

/// Branch + uses (r_+, s_-) = (x1 + x2, p1 - p2); branch - uses (x1 - x2, p1 + p2).
enum class Branch { Plus, Minus };

/// sigma^2(r) sigma^2(s); below one flags entanglement. Vacuum gives 1.
[[nodiscard]] double mgvt(const Covariance4& cov, Branch branch);

/// (sigma^2(r) + 1)(sigma^2(s) + 1) - cov(r, s)^2 - 4; negative flags
/// entanglement. Vacuum gives 0.
[[nodiscard]] double second_moment_criterion(const Covariance4& cov, Branch branch);

}  // namespace cvwit
