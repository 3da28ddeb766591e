#pragma once

#include <variant>

#include "cvwit/fock.hpp"

namespace cvwit {

enum class Mode { A, B };

/// S(xi) = exp((xi* a^2 - xi a†^2) / 2). Real positive xi scales the x
/// quadrature by e^{-xi} and the p quadrature by e^{+xi}.
struct Squeeze {
    Mode mode = Mode::A;
    cplx xi = 0.0;
};

/// exp(-i theta a†a): |n> picks up e^{-i n theta}, so <a> -> e^{-i theta} <a>.
struct Rotate {
    Mode mode = Mode::A;
    double theta = 0.0;
};

/// D(alpha) = exp(alpha a† - alpha* a).
struct Displace {
    Mode mode = Mode::A;
    cplx alpha = 0.0;
};

/// exp(t (e^{i phase} a† b - e^{-i phase} a b†)) with cos^2 t = transmissivity.
/// In the Heisenberg picture a -> cos t a + e^{i phase} sin t b.
struct BeamSplit {
    double transmissivity = 0.5;
    double phase = 0.0;
};

using GaussianOp = std::variant<Squeeze, Rotate, Displace, BeamSplit>;

struct GaussianOpOptions {
    /// Cutoff of the returned state; negative keeps the input cutoff.
    int output_cutoff = -1;
    /// Extra levels used while exponentiating single-mode generators.
    int padding = 40;
    /// Norm lost to truncation above this is an error; below it the state is
    /// renormalised and the defect recorded on the result.
    double max_norm_defect = 1e-6;
};

[[nodiscard]] TruncatedState apply_gaussian_op(const TruncatedState& state, const GaussianOp& op,
                                               const GaussianOpOptions& options = {});

}  // namespace cvwit
