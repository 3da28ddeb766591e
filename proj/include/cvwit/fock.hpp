#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "cvwit/error.hpp"

namespace cvwit {

using cplx = std::complex<double>;

/// Default bound on the probability of occupying the cutoff level.
inline constexpr double kDefaultTailBound = 1e-10;

/// Normal-ordered two-mode monomial a†^n a^m b†^k b^l.
struct ModeMonomial {
    int n = 0;  ///< power of a†
    int m = 0;  ///< power of a
    int k = 0;  ///< power of b†
    int l = 0;  ///< power of b

    [[nodiscard]] int order() const { return n + m + k + l; }
    /// Hermitian conjugate: (n, m, k, l) -> (m, n, l, k).
    [[nodiscard]] ModeMonomial adjoint() const { return {m, n, l, k}; }

    friend bool operator==(const ModeMonomial&, const ModeMonomial&) = default;
};

/// One pure component of a mixture: weight and amplitude vector over |j,k>.
struct PureComponent {
    double weight = 1.0;
    std::vector<cplx> amplitudes;
};

/// Two-mode bosonic state on the truncated space {0..D} x {0..D}, stored as
/// a convex mixture of pure vectors. Amplitude of |j,k> lives at j*(D+1)+k.
///
/// Instances are validated on construction and immutable afterwards.
class TruncatedState {
public:
    /// Pure state. The vector is normalised if its norm is within 1e-6 of
    /// one, otherwise InvalidArgument is thrown.
    TruncatedState(int cutoff, std::vector<cplx> amplitudes,
                   double tail_bound = kDefaultTailBound);

    /// Mixture. Weights must be non-negative and sum to one within 1e-12;
    /// every component must be normalised within 1e-10.
    TruncatedState(int cutoff, std::vector<PureComponent> components,
                   double tail_bound = kDefaultTailBound);

    static TruncatedState vacuum(int cutoff);
    static TruncatedState fock(int cutoff, int j, int k);

    [[nodiscard]] int cutoff() const { return cutoff_; }
    [[nodiscard]] int dim() const { return cutoff_ + 1; }
    [[nodiscard]] std::size_t size() const {
        return static_cast<std::size_t>(dim()) * static_cast<std::size_t>(dim());
    }
    [[nodiscard]] std::size_t index(int j, int k) const {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(dim()) +
               static_cast<std::size_t>(k);
    }

    [[nodiscard]] const std::vector<PureComponent>& components() const { return components_; }
    [[nodiscard]] bool is_pure() const { return components_.size() == 1; }

    /// Probability of occupying level D in either mode.
    [[nodiscard]] double tail_mass() const { return tail_mass_; }
    [[nodiscard]] double tail_bound() const { return tail_bound_; }
    [[nodiscard]] bool tail_ok() const { return tail_mass_ <= tail_bound_; }

    /// Largest norm defect that was renormalised away while producing this
    /// state (zero for exactly constructed states).
    [[nodiscard]] double norm_defect() const { return norm_defect_; }
    [[nodiscard]] TruncatedState with_norm_defect(double defect) const;

    /// Same state embedded in a larger cutoff (zero padded), or truncated to
    /// a smaller one if the discarded mass is below the tail bound.
    [[nodiscard]] TruncatedState with_cutoff(int cutoff) const;

    /// Smallest cutoff whose top level carries at most `bound` probability,
    /// never below `floor`.
    [[nodiscard]] int minimal_cutoff(double bound, int floor = 1) const;

private:
    void validate_and_measure();

    int cutoff_ = 0;
    std::vector<PureComponent> components_;
    double tail_bound_ = kDefaultTailBound;
    double tail_mass_ = 0.0;
    double norm_defect_ = 0.0;
};

/// Joint photon-number distribution over (j, k), row-major, (D+1)^2 entries.
struct PhotonPmf {
    int cutoff = 0;
    std::vector<double> prob;

    [[nodiscard]] double at(int j, int k) const {
        return prob[static_cast<std::size_t>(j) * static_cast<std::size_t>(cutoff + 1) +
                    static_cast<std::size_t>(k)];
    }
};

/// Sum_i w_i <psi_i| a†^n a^m b†^k b^l |psi_i>.
///
/// The monomial is evaluated as <a^n b^k psi | a^m b^l psi>, which only lowers
/// occupation numbers, so the truncated vector is used exactly. Throws
/// CutoffTooSmall when the state's tail mass exceeds its bound.
[[nodiscard]] cplx expectation(const TruncatedState& state, const ModeMonomial& mono);

[[nodiscard]] PhotonPmf photon_pmf(const TruncatedState& state);

/// Index tuple of mode-b exponents for a product b†^s b^r b†^k b^l.
struct ModeBIndices {
    int s = 0, r = 0, k = 0, l = 0;
    friend bool operator==(const ModeBIndices&, const ModeBIndices&) = default;
};

/// Partial transposition acts on mode b as b -> b†, so
/// <... b†^s b^r b†^k b^l>^PT = <... b†^l b^k b†^r b^s>.
[[nodiscard]] constexpr ModeBIndices partial_transpose_indices(ModeBIndices in) {
    return {in.l, in.k, in.r, in.s};
}

/// Apply a^p (mode a) and b^q (mode b) to a vector; result stays in the same
/// truncated space.
[[nodiscard]] std::vector<cplx> lower(std::span<const cplx> amplitudes, int cutoff, int p, int q);

}  // namespace cvwit
