#include "cvwit/gaussian_ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "linalg.hpp"

namespace cvwit {
namespace detail {

Eigen::MatrixXcd exp_anti_hermitian(const Eigen::MatrixXcd& g) {
    const Eigen::MatrixXcd h = cplx(0.0, -1.0) * g;  // Hermitian
    const Eigen::MatrixXcd hs = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hs);
    const Eigen::VectorXd w = es.eigenvalues();
    Eigen::VectorXcd phases(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) phases(i) = std::exp(cplx(0.0, w(i)));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

BeamsplitterModes beamsplitter_modes(double transmissivity, double phase) {
    if (!(transmissivity >= 0.0 && transmissivity <= 1.0))
        throw InvalidArgument("beamsplitter transmissivity must lie in [0, 1]");
    const double t = std::acos(std::sqrt(transmissivity));
    const cplx ep = std::polar(1.0, phase);
    // generator t (e^{i phase} a† b - e^{-i phase} a b†) on the one-photon block {|0,1>, |1,0>}
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(2, 2);
    g(1, 0) = t * ep;
    g(0, 1) = -t * std::conj(ep);
    const Eigen::MatrixXcd u = exp_anti_hermitian(g);
    return {u(1, 1), u(0, 1), u(1, 0), u(0, 0)};
}

void for_each_beamsplitter_block(int max_in, int max_total, double transmissivity, double phase,
                                 const BlockVisitor& visit) {
    const auto m = beamsplitter_modes(transmissivity, phase);
    std::vector<std::vector<cplx>> prev{{1.0}}, cols;
    visit(0, 0, prev);
    int prev_lo = 0;
    std::vector<double> root(static_cast<std::size_t>(max_total) + 1);
    for (std::size_t i = 0; i < root.size(); ++i) root[i] = std::sqrt(static_cast<double>(i));
    for (int n = 1; n <= max_total; ++n) {
        const int lo = std::max(0, n - max_in), hi = std::min(n, max_in);
        const int prev_hi = std::min(n - 1, max_in);
        const auto old = [&](int p, int j) -> cplx {
            if (j < prev_lo || j > prev_hi || p < 0 || p > n - 1) return 0.0;
            return prev[static_cast<std::size_t>(j - prev_lo)][static_cast<std::size_t>(p)];
        };
        cols.assign(static_cast<std::size_t>(hi - lo + 1), std::vector<cplx>(static_cast<std::size_t>(n) + 1, 0.0));
        const double inv_n = 1.0 / static_cast<double>(n);
        for (int ji = lo; ji <= hi; ++ji) {
            const double sj = root[static_cast<std::size_t>(ji)];
            const double sk = root[static_cast<std::size_t>(n - ji)];
            auto& dst = cols[static_cast<std::size_t>(ji - lo)];
            // average of the a- and b-lowering identities, weighted by p/n and (n-p)/n:
            //   a U|j,k> = x sqrt j U|j-1,k> + z sqrt k U|j,k-1>
            //   b U|j,k> = y sqrt j U|j-1,k> + w sqrt k U|j,k-1>
            for (int p = 0; p <= n; ++p) {
                const double sp = root[static_cast<std::size_t>(p)];
                const double sq = root[static_cast<std::size_t>(n - p)];
                cplx v = 0.0;
                if (p > 0) v += sp * (m.x * sj * old(p - 1, ji - 1) + m.z * sk * old(p - 1, ji));
                if (p < n) v += sq * (m.y * sj * old(p, ji - 1) + m.w * sk * old(p, ji));
                dst[static_cast<std::size_t>(p)] = v * inv_n;
            }
        }
        visit(n, lo, cols);
        std::swap(prev, cols);
        prev_lo = lo;
    }
}

std::vector<Eigen::MatrixXcd> beamsplitter_blocks(int max_total, double transmissivity, double phase) {
    std::vector<Eigen::MatrixXcd> blocks;
    blocks.reserve(static_cast<std::size_t>(max_total) + 1);
    for_each_beamsplitter_block(max_total, max_total, transmissivity, phase,
                                [&](int n, int lo, const std::vector<std::vector<cplx>>& cols) {
                                    Eigen::MatrixXcd b(n + 1, n + 1);
                                    for (int ji = 0; ji <= n; ++ji)
                                        for (int jo = 0; jo <= n; ++jo)
                                            b(jo, ji) = cols[static_cast<std::size_t>(ji - lo)][static_cast<std::size_t>(jo)];
                                    blocks.push_back(std::move(b));
                                });
    return blocks;
}

}  // namespace detail

namespace {

Eigen::MatrixXcd single_mode_unitary(const GaussianOp& op, int dim) {
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(dim, dim);
    if (const auto* s = std::get_if<Squeeze>(&op)) {
        // (xi* a^2 - xi a†^2) / 2
        for (int j = 0; j + 2 < dim; ++j) {
            const double c = std::sqrt(static_cast<double>((j + 1) * (j + 2)));
            g(j, j + 2) += 0.5 * std::conj(s->xi) * c;
            g(j + 2, j) -= 0.5 * s->xi * c;
        }
    } else if (const auto* d = std::get_if<Displace>(&op)) {
        for (int j = 0; j + 1 < dim; ++j) {
            const double c = std::sqrt(static_cast<double>(j + 1));
            g(j + 1, j) += d->alpha * c;
            g(j, j + 1) -= std::conj(d->alpha) * c;
        }
    }
    return detail::exp_anti_hermitian(g);
}

Mode op_mode(const GaussianOp& op) {
    if (const auto* s = std::get_if<Squeeze>(&op)) return s->mode;
    if (const auto* r = std::get_if<Rotate>(&op)) return r->mode;
    return std::get<Displace>(op).mode;
}

TruncatedState finish(int out_cutoff, const TruncatedState& in, std::vector<PureComponent> comps,
                      double max_defect) {
    double worst = 0.0;
    for (auto& c : comps) {
        double n2 = 0.0;
        for (const auto& a : c.amplitudes) n2 += std::norm(a);
        const double defect = std::abs(1.0 - std::sqrt(n2));
        worst = std::max(worst, defect);
        if (defect > max_defect)
            throw CutoffTooSmall("Gaussian operation loses norm " + std::to_string(defect) +
                                 " at cutoff " + std::to_string(out_cutoff));
        const double s = 1.0 / std::sqrt(n2);
        for (auto& a : c.amplitudes) a *= s;
    }
    TruncatedState out(out_cutoff, std::move(comps), in.tail_bound());
    return out.with_norm_defect(std::max(worst, in.norm_defect()));
}

}  // namespace

TruncatedState apply_gaussian_op(const TruncatedState& state, const GaussianOp& op,
                                 const GaussianOpOptions& options) {
    const int din = state.dim();
    const int out_cutoff = options.output_cutoff < 0 ? state.cutoff() : options.output_cutoff;
    const int dout = out_cutoff + 1;
    const auto sz = [](int d) { return static_cast<std::size_t>(d) * static_cast<std::size_t>(d); };
    const auto at = [](int d, int j, int k) {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(d) + static_cast<std::size_t>(k);
    };

    std::vector<PureComponent> comps;
    comps.reserve(state.components().size());

    if (const auto* r = std::get_if<Rotate>(&op)) {
        for (const auto& c : state.components()) {
            std::vector<cplx> amp(sz(dout));
            for (int j = 0; j < std::min(din, dout); ++j)
                for (int k = 0; k < std::min(din, dout); ++k) {
                    const int n = (r->mode == Mode::A) ? j : k;
                    amp[at(dout, j, k)] = c.amplitudes[at(din, j, k)] * std::polar(1.0, -r->theta * n);
                }
            comps.push_back({c.weight, std::move(amp)});
        }
        return finish(out_cutoff, state, std::move(comps), options.max_norm_defect);
    }

    if (const auto* bs = std::get_if<BeamSplit>(&op)) {
        const int d_in = state.cutoff();
        for (const auto& c : state.components()) comps.push_back({c.weight, std::vector<cplx>(sz(dout))});
        detail::for_each_beamsplitter_block(
            d_in, 2 * d_in, bs->transmissivity, bs->phase, [&](int n, int lo, const std::vector<std::vector<cplx>>& cols) {
                const int hi = std::min(n, d_in);
                for (std::size_t ci = 0; ci < comps.size(); ++ci) {
                    const auto& in = state.components()[ci].amplitudes;
                    auto& out = comps[ci].amplitudes;
                    for (int ji = lo; ji <= hi; ++ji) {
                        const cplx a = in[at(din, ji, n - ji)];
                        if (a == 0.0) continue;
                        const auto& col = cols[static_cast<std::size_t>(ji - lo)];
                        for (int jo = std::max(0, n - out_cutoff); jo <= std::min(n, out_cutoff); ++jo)
                            out[at(dout, jo, n - jo)] += col[static_cast<std::size_t>(jo)] * a;
                    }
                }
            });
        return finish(out_cutoff, state, std::move(comps), options.max_norm_defect);
    }

    const int work = std::max(din, dout) + std::max(options.padding, 0);
    const Eigen::MatrixXcd u = single_mode_unitary(op, work);
    const Mode mode = op_mode(op);
    for (const auto& c : state.components()) {
        std::vector<cplx> amp(sz(dout));
        for (int other = 0; other < std::min(din, dout); ++other) {
            Eigen::VectorXcd v = Eigen::VectorXcd::Zero(work);
            for (int j = 0; j < din; ++j)
                v(j) = (mode == Mode::A) ? c.amplitudes[at(din, j, other)] : c.amplitudes[at(din, other, j)];
            const Eigen::VectorXcd w = u * v;
            for (int j = 0; j < dout; ++j) {
                if (mode == Mode::A)
                    amp[at(dout, j, other)] = w(j);
                else
                    amp[at(dout, other, j)] = w(j);
            }
        }
        comps.push_back({c.weight, std::move(amp)});
    }
    return finish(out_cutoff, state, std::move(comps), options.max_norm_defect);
}

}  // namespace cvwit
