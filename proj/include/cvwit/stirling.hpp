#pragma once

#include <cstdint>
#include <vector>

#include "cvwit/error.hpp"

namespace cvwit {

/// Exact Stirling numbers of the second kind S(n, k) for 0 <= k <= n <= max_order,
/// filled by S(n,k) = k S(n-1,k) + S(n-1,k-1). Construction throws Overflow if
/// any entry does not fit in int64.
///
/// (a†a)^n = sum_k S(n,k) a†^k a^k.
class StirlingTable {
public:
    explicit StirlingTable(int max_order);

    [[nodiscard]] int max_order() const { return max_order_; }
    /// S(n, k); zero for k > n.
    [[nodiscard]] std::int64_t operator()(int n, int k) const;

private:
    int max_order_;
    std::vector<std::vector<std::int64_t>> s_;
};

/// S(n, k) without keeping a table around.
[[nodiscard]] std::int64_t stirling(int n, int k);

/// Signed Stirling numbers of the first kind s(n, k): the exact inverse of the
/// second-kind matrix, so a†^n a^n = sum_k s(n,k) (a†a)^k.
[[nodiscard]] std::int64_t stirling_first(int n, int k);

/// Coefficients C[k][l] with
///   <a†^m a^m b†^n b^n> = sum_{k,l} C[k][l] <(a†a)^k (b†b)^l>.
/// Dimensions (m+1) x (n+1).
struct NumberMomentDecomposition {
    int m = 0;
    int n = 0;
    std::vector<std::vector<std::int64_t>> coeff;
};

[[nodiscard]] NumberMomentDecomposition number_moment_decomposition(int m, int n);

/// Falling factorial j (j-1) ... (j-p+1) as a double; the photon-count
/// eigenvalue of a†^p a^p.
[[nodiscard]] double falling_factorial(int j, int p);

}  // namespace cvwit
