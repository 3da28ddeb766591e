#pragma once

#include <vector>

#include "cvwit/fock.hpp"

namespace cvwit {

/// Phase shifts applied to a1 and b1 before the two balanced beamsplitters.
/// Stored reduced to [0, 2 pi).
class PhasePair {
public:
    PhasePair() = default;
    PhasePair(double phi, double phi_prime);

    [[nodiscard]] double phi() const { return phi_; }
    [[nodiscard]] double phi_prime() const { return phi_prime_; }

    friend bool operator==(const PhasePair&, const PhasePair&) = default;

private:
    double phi_ = 0.0;
    double phi_prime_ = 0.0;
};

/// Joint count distribution of the detectors on c1 and d1. Counts run from 0
/// to max_count = 2D, row-major in (j, k).
struct DetectorPmf {
    int max_count = 0;
    std::vector<double> prob;
    PhasePair phases;
    double eta_c = 1.0;
    double eta_d = 1.0;

    [[nodiscard]] int dim() const { return max_count + 1; }
    [[nodiscard]] double at(int j, int k) const {
        return prob[static_cast<std::size_t>(j) * static_cast<std::size_t>(dim()) + static_cast<std::size_t>(k)];
    }
    [[nodiscard]] double total() const;
};

/// Interferes (a1, a2) and (b1, b2) of rho1 (x) rho2 on balanced beamsplitters,
///   c1 = (a1 e^{i phi} + a2)/sqrt 2,   d1 = (b1 e^{i phi'} + b2)/sqrt 2,
/// and returns the photon-count distribution of (c1, d1) with c2 and d2
/// traced out. Mixtures are handled component by component.
///
/// Both states must share a cutoff (InvalidArgument otherwise) and satisfy
/// their tail bound (CutoffTooSmall otherwise).
[[nodiscard]] DetectorPmf interfere(const TruncatedState& state1, const TruncatedState& state2,
                                    const PhasePair& phases);

/// Pads the smaller of two states so both share the larger cutoff.
void share_cutoff(TruncatedState& state1, TruncatedState& state2);

/// <(c1†c1)^m' (d1†d1)^n'> = sum_{j,k} j^m' k^n' P(j, k).
[[nodiscard]] double correlator(const DetectorPmf& pmf, int m_prime, int n_prime);

/// Independent binomial thinning of both detector margins (loss with vacuum
/// ancillas and no dark counts).
[[nodiscard]] DetectorPmf apply_loss(const DetectorPmf& pmf, double eta_c, double eta_d);

/// Binomial probability C(n, k) eta^k (1 - eta)^(n - k).
[[nodiscard]] double binomial_pmf(int n, int k, double eta);

}  // namespace cvwit
