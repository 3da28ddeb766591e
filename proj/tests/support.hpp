#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "cvwit/fock.hpp"
#include "cvwit/states.hpp"

namespace cvwit::testing {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Dense two-mode lowering operators on the truncated space, used as an
// oracle independent of the library's index arithmetic.
inline Mat annihilation(int dim) {
    Mat a = Mat::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

inline Mat kron(const Mat& x, const Mat& y) {
    Mat out(x.rows() * y.rows(), x.cols() * y.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = 0; j < x.cols(); ++j)
            out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    return out;
}

inline Mat mode_a(int cutoff) {
    const int d = cutoff + 1;
    return kron(annihilation(d), Mat::Identity(d, d));
}

inline Mat mode_b(int cutoff) {
    const int d = cutoff + 1;
    return kron(Mat::Identity(d, d), annihilation(d));
}

inline Mat mpow(const Mat& m, int k) {
    Mat r = Mat::Identity(m.rows(), m.cols());
    for (int i = 0; i < k; ++i) r = r * m;
    return r;
}

inline Vec to_vec(const std::vector<cplx>& v) {
    Vec out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
    return out;
}

// sum_i w_i <psi_i| a†^n a^m b†^k b^l |psi_i> by dense matrices.
inline cplx dense_expectation(const TruncatedState& s, const ModeMonomial& mono) {
    const Mat a = mode_a(s.cutoff()), b = mode_b(s.cutoff());
    const Mat ad = a.adjoint(), bd = b.adjoint();
    // The operators are normal ordered and the two modes commute, so
    // a†^n b†^k a^m b^l is the same operator; truncating a† only on the left
    // is exact because <psi| a†^n = (a^n |psi>)†.
    const Mat op = mpow(ad, mono.n) * mpow(bd, mono.k) * mpow(a, mono.m) * mpow(b, mono.l);
    cplx acc = 0.0;
    for (const auto& c : s.components()) {
        const Vec v = to_vec(c.amplitudes);
        acc += c.weight * v.dot(op * v);
    }
    return acc;
}

inline std::vector<cplx> random_vector(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<cplx> v(n);
    double norm = 0.0;
    for (auto& x : v) {
        x = {g(rng), g(rng)};
        norm += std::norm(x);
    }
    for (auto& x : v) x /= std::sqrt(norm);
    return v;
}

// Generic entangled pure state on cutoff D. The tail bound is relaxed to one
// because random vectors occupy every level.
inline TruncatedState random_pure(std::mt19937_64& rng, int cutoff) {
    const auto d = static_cast<std::size_t>(cutoff + 1);
    return TruncatedState(cutoff, random_vector(rng, d * d), 1.0);
}

inline std::vector<cplx> kron(const std::vector<cplx>& x, const std::vector<cplx>& y) {
    std::vector<cplx> out;
    out.reserve(x.size() * y.size());
    for (const auto& xi : x)
        for (const auto& yj : y) out.push_back(xi * yj);
    return out;
}

inline TruncatedState random_product(std::mt19937_64& rng, int cutoff) {
    const auto d = static_cast<std::size_t>(cutoff + 1);
    return TruncatedState(cutoff, kron(random_vector(rng, d), random_vector(rng, d)), 1.0);
}

// Convex mixture of `terms` random product states.
inline TruncatedState random_separable_mixture(std::mt19937_64& rng, int cutoff, int terms) {
    const auto d = static_cast<std::size_t>(cutoff + 1);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::vector<PureComponent> comps;
    double total = 0.0;
    for (int t = 0; t < terms; ++t) {
        const double w = u(rng);
        total += w;
        comps.push_back({w, kron(random_vector(rng, d), random_vector(rng, d))});
    }
    for (auto& c : comps) c.weight /= total;
    return TruncatedState(cutoff, comps, 1.0);
}

inline double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

// Coherent amplitudes e^{-|z|^2/2} z^n / sqrt(n!) on levels 0..D.
inline std::vector<cplx> coherent_amplitudes(cplx z, int cutoff) {
    std::vector<cplx> v(static_cast<std::size_t>(cutoff + 1));
    for (int n = 0; n <= cutoff; ++n)
        v[static_cast<std::size_t>(n)] = std::exp(-0.5 * std::norm(z)) * std::pow(z, n) / std::sqrt(factorial(n));
    return v;
}

}  // namespace cvwit::testing
