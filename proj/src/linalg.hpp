#pragma once

// Internal dense helpers shared by the Gaussian-op and interferometer code.

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "cvwit/fock.hpp"

namespace cvwit::detail {

/// exp(G) for anti-Hermitian G, via the eigendecomposition of the Hermitian
/// matrix -iG. The result is unitary to working precision.
Eigen::MatrixXcd exp_anti_hermitian(const Eigen::MatrixXcd& g);

/// U a† U† = x a† + y b†,  U b† U† = z a† + w b†.
struct BeamsplitterModes {
    cplx x, y, z, w;
};

BeamsplitterModes beamsplitter_modes(double transmissivity, double phase);

/// cols[j_in - lo][j_out] = <j_out, N-j_out| U |j_in, N-j_in> for lo <= j_in <= min(N, max_in).
using BlockVisitor = std::function<void(int n, int lo, const std::vector<std::vector<cplx>>& cols)>;

/// Streams the beamsplitter blocks N = 0 .. max_total restricted to inputs with
/// both occupations at most max_in. Each block is built from the previous one
/// by one creation operator, so memory stays O(N^2).
void for_each_beamsplitter_block(int max_in, int max_total, double transmissivity, double phase,
                                 const BlockVisitor& visit);

/// Unitary blocks of a two-mode beamsplitter on fixed total photon number.
/// blocks[N](j_out, j_in) is the amplitude <j_out, N-j_out| U |j_in, N-j_in>.
std::vector<Eigen::MatrixXcd> beamsplitter_blocks(int max_total, double transmissivity, double phase);

}  // namespace cvwit::detail
