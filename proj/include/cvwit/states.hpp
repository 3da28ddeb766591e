#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "cvwit/fock.hpp"

namespace cvwit {

/// Two-mode squeezed vacuum sqrt(1-l^2) sum_n l^n |n,n>, optionally displaced
/// afterwards by (disp_a, disp_b).
struct Tmsv {
    double lambda = 0.0;
    cplx disp_a = 0.0;
    cplx disp_b = 0.0;
};

/// N (|alpha, beta> + e^{i theta} |-alpha, -beta>).
struct Cat {
    cplx alpha = 0.0;
    cplx beta = 0.0;
    double theta = 0.0;
};

/// alpha |N,0> + beta |0,N>.
struct Noon {
    int n = 1;
    cplx alpha = 0.0;
    cplx beta = 0.0;
};

/// Product coherent state |gamma, delta>.
struct CoherentProduct {
    cplx gamma = 0.0;
    cplx delta = 0.0;
};

/// First-order Hermite-Gaussian wavefunction
///   psi(x1, x2) ~ (x1 + x2) exp(-[(x1+x2)^2/s+^2 + (x1-x2)^2/s-^2] / 4),
/// prepared as a single photon squeezed to width s+ and a vacuum squeezed to
/// width s-, mixed on a balanced beamsplitter.
struct HermiteGaussian {
    double sigma_plus = 1.0;
    double sigma_minus = 1.0;
};

enum class SqueezeOrientation {
    X,  ///< r_± variances scale by xi^2, s_∓ by xi^-2
    P,  ///< the opposite
};

/// Rotation and squeezing of the commuting pairs (r_+, s_-) and (r_-, s_+).
///
/// The rotation by phi is realised as a -> a e^{-i phi}, b -> b e^{+i phi},
/// which turns (x1 + x2, p1 - p2) by phi. The squeeze scales x1 and x2 by xi
/// (orientation X) or by 1/xi (orientation P). Rotation is applied first.
struct PmTransform {
    double phi = 0.0;
    double xi = 1.0;
    SqueezeOrientation orientation = SqueezeOrientation::X;
};

using FamilyTag = std::variant<Tmsv, Cat, Noon, CoherentProduct, HermiteGaussian>;

struct StateFamily {
    StateFamily() = default;
    StateFamily(FamilyTag t, double p = 0.0, std::optional<PmTransform> pm = std::nullopt)
        : tag(std::move(t)), dephasing(p), pm_transform(pm) {}

    FamilyTag tag;
    double dephasing = 0.0;
    std::optional<PmTransform> pm_transform;
};

[[nodiscard]] std::string family_name(const FamilyTag& tag);

/// Checks the parameter invariants of a family; throws InvalidArgument.
void validate(const StateFamily& family);

struct BuildOptions {
    double tail_bound = kDefaultTailBound;
    int max_cutoff = 220;
    /// Force at least this cutoff (useful when two states must share one).
    int min_cutoff = 0;
};

/// Factory for every supported family. The cutoff is chosen automatically as
/// the smallest one whose top level carries at most `tail_bound`; it is
/// reported through TruncatedState::cutoff().
[[nodiscard]] TruncatedState build(const StateFamily& family, const BuildOptions& options = {});

/// Dephased NOON or cat state as a rank-2 mixture; coherences between the two
/// branches are scaled by (1 - p). Throws Unsupported for other families.
[[nodiscard]] TruncatedState apply_dephasing(const StateFamily& family, double p,
                                             const BuildOptions& options = {});

/// Normalisation constant [2 + 2 cos(theta) exp(-2(|alpha|^2 + |beta|^2))]^{-1/2}.
[[nodiscard]] double cat_normalization(const Cat& cat);

/// Symmetrised covariance matrix over (x1, p1, x2, p2), with a = (x + ip)/sqrt 2.
using Covariance4 = std::array<std::array<double, 4>, 4>;

/// Closed-form second and fourth moments of the untransformed
/// Hermite-Gaussian state. Cross moments between x and p vanish.
struct HermiteGaussianMoments {
    double x1x1 = 0.0;   ///< <x1^2> = <x2^2>
    double p1p1 = 0.0;   ///< <p1^2> = <p2^2>
    double x1x2 = 0.0;
    double p1p2 = 0.0;
    double x1x1_x2x2 = 0.0;  ///< <x1^2 x2^2>
    double x1x1_p2p2 = 0.0;  ///< <x1^2 p2^2> = <p1^2 x2^2>
    double p1p1_p2p2 = 0.0;  ///< <p1^2 p2^2>
};

[[nodiscard]] HermiteGaussianMoments hermite_gaussian_moments(const HermiteGaussian& hg);

/// Analytic covariance of a Hermite-Gaussian family with its optional
/// transform. Throws InvalidArgument for other families.
[[nodiscard]] Covariance4 covariance_matrix(const StateFamily& family);

/// Covariance evaluated numerically from Fock-space moments.
[[nodiscard]] Covariance4 quadrature_covariance(const TruncatedState& state);

}  // namespace cvwit
