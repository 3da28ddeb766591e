#include "cvwit/stirling.hpp"

#include <string>

namespace cvwit {
namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r)) throw Overflow("Stirling number exceeds int64 range");
    return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r = 0;
    if (__builtin_add_overflow(a, b, &r)) throw Overflow("Stirling number exceeds int64 range");
    return r;
}

}  // namespace

StirlingTable::StirlingTable(int max_order) : max_order_(max_order) {
    if (max_order < 0) throw InvalidArgument("max_order must be non-negative");
    s_.assign(static_cast<std::size_t>(max_order) + 1, {});
    for (int n = 0; n <= max_order; ++n) {
        auto& row = s_[static_cast<std::size_t>(n)];
        row.assign(static_cast<std::size_t>(n) + 1, 0);
        row[0] = (n == 0) ? 1 : 0;
        for (int k = 1; k <= n; ++k) {
            const auto& prev = s_[static_cast<std::size_t>(n) - 1];
            const std::int64_t same = (k <= n - 1) ? prev[static_cast<std::size_t>(k)] : 0;
            row[static_cast<std::size_t>(k)] =
                checked_add(checked_mul(k, same), prev[static_cast<std::size_t>(k) - 1]);
        }
    }
}

std::int64_t StirlingTable::operator()(int n, int k) const {
    if (n < 0 || k < 0 || n > max_order_)
        throw InvalidArgument("Stirling index out of range: (" + std::to_string(n) + ", " +
                              std::to_string(k) + ")");
    if (k > n) return 0;
    return s_[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

std::int64_t stirling(int n, int k) {
    if (n < 0 || k < 0) throw InvalidArgument("Stirling indices must be non-negative");
    if (k > n) return 0;
    return StirlingTable(n)(n, k);
}

std::int64_t stirling_first(int n, int k) {
    if (n < 0 || k < 0) throw InvalidArgument("Stirling indices must be non-negative");
    if (k > n) return 0;
    // s(n,k) = s(n-1,k-1) - (n-1) s(n-1,k)
    std::vector<std::int64_t> row{1};
    for (int i = 1; i <= n; ++i) {
        std::vector<std::int64_t> next(static_cast<std::size_t>(i) + 1, 0);
        for (int j = 1; j <= i; ++j) {
            const std::int64_t diag = row[static_cast<std::size_t>(j) - 1];
            const std::int64_t same = (j <= i - 1) ? row[static_cast<std::size_t>(j)] : 0;
            next[static_cast<std::size_t>(j)] = checked_add(diag, -checked_mul(i - 1, same));
        }
        row = std::move(next);
    }
    return row[static_cast<std::size_t>(k)];
}

NumberMomentDecomposition number_moment_decomposition(int m, int n) {
    if (m < 0 || n < 0) throw InvalidArgument("moment orders must be non-negative");
    NumberMomentDecomposition out{m, n, {}};
    out.coeff.assign(static_cast<std::size_t>(m) + 1,
                     std::vector<std::int64_t>(static_cast<std::size_t>(n) + 1, 0));
    for (int k = 0; k <= m; ++k)
        for (int l = 0; l <= n; ++l)
            out.coeff[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] =
                checked_mul(stirling_first(m, k), stirling_first(n, l));
    return out;
}

double falling_factorial(int j, int p) {
    double f = 1.0;
    for (int i = 0; i < p; ++i) f *= static_cast<double>(j - i);
    return f;
}

}  // namespace cvwit
