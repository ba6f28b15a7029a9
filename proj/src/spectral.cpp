#include "appdo/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "appdo/error.hpp"
#include "appdo/parallel.hpp"

namespace appdo {
namespace {

bool complex_less(const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

std::string num(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

Complex snap(Complex z) {
    if (std::abs(z.real()) < 1e-12) z.real(0.0);
    if (std::abs(z.imag()) < 1e-12) z.imag(0.0);
    return z;
}

}  // namespace

std::string to_string(SpectralKind k) {
    switch (k) {
        case SpectralKind::Point: return "point";
        case SpectralKind::ContinuousWitness: return "continuous-witness";
        case SpectralKind::FiniteSection: return "finite-section";
        case SpectralKind::Essential: return "essential";
    }
    return "unknown";
}

std::vector<Complex> SpectrumReport::of_kind(SpectralKind k) const {
    std::vector<Complex> out;
    for (const auto& v : values) {
        if (v.kind == k) out.push_back(v.approx);
    }
    return out;
}

SpectrumReport multiplier_spectrum(const APSymbol& a, const std::vector<RealVector>& xi_grid) {
    if (!a.is_x_independent()) throw DomainError("multiplier spectrum needs an x-independent symbol (Lambda(a) = {0})");
    const std::size_t d = a.dim();
    const CoeffFn g = bohr_fourier(a, Frequency::zero(a.generators()->count()));
    SpectrumReport r;
    r.metadata["method"] = "multiplier";
    r.metadata["closure"] = "spectrum = closure of range(g); sampled values are eigenvalues with eigenfunction e_xi";
    std::vector<Complex> samples(xi_grid.size());
    parallel_for(xi_grid.size(), [&](std::size_t i) {
        if (xi_grid[i].size() != d) throw InputError("xi grid point has the wrong dimension");
        samples[i] = g(xi_grid[i]);
    });
    for (std::size_t i = 0; i < xi_grid.size(); ++i) {
        r.values.push_back({samples[i], SpectralKind::Point, std::numeric_limits<double>::quiet_NaN(), xi_grid[i]});
    }
    // Limits at infinity along +-e_k; heuristic, labelled as such.
    std::vector<Complex> limits;
    for (std::size_t k = 0; k < d; ++k) {
        for (double sign : {1.0, -1.0}) {
            RealVector p(d, 0.0);
            Complex prev;
            bool converged = true;
            for (double t : {1e6, 1e7, 1e8}) {
                p[k] = sign * t;
                Complex v;
                try {
                    v = g(p);
                } catch (const PoleError&) {
                    converged = false;
                    break;
                }
                if (t > 1e6) converged = converged && std::abs(v - prev) <= 1e-6 * std::max(1.0, std::abs(v));
                prev = v;
            }
            if (converged) limits.push_back(snap(prev));
        }
    }
    for (const Complex& l : limits) {
        bool attained = false;
        for (const Complex& s : samples) attained = attained || std::abs(s - l) <= 1e-9;
        bool seen = false;
        for (const auto& v : r.values) {
            seen = seen || (v.kind == SpectralKind::ContinuousWitness && std::abs(v.approx - l) <= 1e-9);
        }
        if (!attained && !seen) {
            r.values.push_back({l, SpectralKind::ContinuousWitness, std::numeric_limits<double>::quiet_NaN(), {}});
        }
    }
    r.metadata["witness_rule"] = "limit of g along coordinate axes at |xi| = 1e6, 1e7, 1e8, not attained on the grid";
    return r;
}

SpectrumReport multiplication_spectrum(const APSymbol& a, const std::vector<RealVector>& x_grid) {
    if (!a.is_xi_independent()) throw DomainError("multiplication spectrum needs a symbol constant in xi");
    const RealVector zero(a.dim(), 0.0);
    SpectrumReport r;
    r.metadata["method"] = "multiplication";
    r.metadata["closure"] = "spectrum = essential spectrum = closure of range(a)";
    double lo_re = INFINITY, hi_re = -INFINITY, lo_im = INFINITY, hi_im = -INFINITY;
    for (const auto& x : x_grid) {
        const Complex v = evaluate_symbol(a, x, zero);
        lo_re = std::min(lo_re, v.real());
        hi_re = std::max(hi_re, v.real());
        lo_im = std::min(lo_im, v.imag());
        hi_im = std::max(hi_im, v.imag());
        r.values.push_back({v, SpectralKind::Essential, std::numeric_limits<double>::quiet_NaN(), x});
    }
    if (!x_grid.empty()) {
        r.metadata["range_re"] = "[" + num(lo_re) + ", " + num(hi_re) + "]";
        r.metadata["range_im"] = "[" + num(lo_im) + ", " + num(hi_im) + "]";
    }
    return r;
}

std::vector<Complex> kernel_eigenvalues(const KernelMatrix& K, bool* hermitian) {
    const Eigen::MatrixXcd& M = K.entries;
    const bool herm = M.size() == 0 || (M - M.adjoint()).cwiseAbs().maxCoeff() <= kDefaultPositivityTol;
    if (hermitian) *hermitian = herm;
    const auto blocks = kernel_blocks(M);
    std::vector<std::vector<Complex>> parts(blocks.size());
    parallel_for(blocks.size(), [&](std::size_t b) {
        const Eigen::MatrixXcd B = principal_block(M, blocks[b]);
        if (herm) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(B, Eigen::EigenvaluesOnly);
            if (es.info() != Eigen::Success) throw Error("Hermitian eigensolver failed");
            for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) parts[b].emplace_back(es.eigenvalues()(i), 0.0);
        } else {
            Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(B, false);
            if (es.info() != Eigen::Success) throw Error("general eigensolver failed");
            for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) parts[b].push_back(es.eigenvalues()(i));
        }
    });
    std::vector<Complex> out;
    for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    std::sort(out.begin(), out.end(), complex_less);
    return out;
}

SpectrumReport finite_section_spectrum(const APSymbol& a, const FrequencyWindow& w, const RealVector& xi,
                                       double window_radius) {
    const KernelMatrix K = build_kernel(a, xi, w);
    bool herm = false;
    const auto eig = kernel_eigenvalues(K, &herm);
    SpectrumReport r;
    r.metadata["method"] = "finite-section";
    r.metadata["hermitian"] = herm ? "true" : "false";
    if (!herm) r.metadata["advisory"] = "non-Hermitian finite sections may show spectral pollution";
    r.metadata["window_size"] = std::to_string(w.size());
    for (const auto& z : eig) r.values.push_back({z, SpectralKind::FiniteSection, window_radius, xi});
    return r;
}

WeylSequenceResult weyl_residual(const APSymbol& a, const RealVector& xi0, const std::vector<RealVector>& xi_seq,
                                 double hyp_tol) {
    if (xi0.size() != a.dim()) throw InputError("xi0 has the wrong dimension");
    for (const auto& [lam, g] : a.terms()) {
        if (lam.is_zero()) continue;
        const Complex v = g(xi0);
        if (std::abs(v) > hyp_tol) {
            throw DomainError("Weyl sequence hypothesis fails: a_lambda(xi0) != 0 for lambda = " + lam.str() +
                              " (|value| = " + num(std::abs(v)) + ")");
        }
    }
    const Frequency zero = Frequency::zero(a.generators()->count());
    const CoeffFn a0 = bohr_fourier(a, zero);
    WeylSequenceResult r;
    r.xi0 = xi0;
    r.s = a0(xi0);
    for (const auto& xi : xi_seq) {
        if (xi.size() != a.dim()) throw InputError("sequence point has the wrong dimension");
        double r2 = std::norm(a0(xi) - r.s);
        for (const auto& [lam, g] : a.terms()) {
            if (!lam.is_zero()) r2 += std::norm(g(xi));
        }
        r.residuals.emplace_back(xi, std::sqrt(r2));
    }
    return r;
}

ResolventResult resolvent_window(const APSymbol& a, Complex s, const FrequencyWindow& w, const RealVector& xi,
                                 double threshold_rel) {
    const KernelMatrix K = build_kernel(a, xi, w);
    const double knorm = spectral_norm(K.entries);
    Eigen::MatrixXcd M = K.entries;
    M.diagonal().array() -= s;
    const auto blocks = kernel_blocks(M);
    std::vector<double> mins(blocks.size());
    parallel_for(blocks.size(), [&](std::size_t b) {
        const Eigen::MatrixXcd B = principal_block(M, blocks[b]);
        if (B.rows() == 1) {
            mins[b] = std::abs(B(0, 0));
        } else {
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(B);
            mins[b] = svd.singularValues()(svd.singularValues().size() - 1);
        }
    });
    ResolventResult r;
    r.sigma_min = mins.empty() ? INFINITY : *std::min_element(mins.begin(), mins.end());
    r.inv_norm = r.sigma_min > 0.0 ? 1.0 / r.sigma_min : INFINITY;
    r.solvable = r.sigma_min > threshold_rel * knorm;
    return r;
}

double hausdorff_distance(const std::vector<Complex>& A, const std::vector<Complex>& B) {
    if (A.empty() && B.empty()) return 0.0;
    if (A.empty() || B.empty()) return INFINITY;
    auto directed = [](const std::vector<Complex>& P, const std::vector<Complex>& Q) {
        double worst = 0.0;
        for (const auto& p : P) {
            double best = INFINITY;
            for (const auto& q : Q) best = std::min(best, std::abs(p - q));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(A, B), directed(B, A));
}

std::vector<Complex> compressed_A_spectrum(const APSymbol& a, const FrequencyWindow& w, const HermiteBasis& basis) {
    if (!same_generators(a.generators(), w.generators())) throw InputError("window and symbol use different generators");
    const std::size_t nb = basis.count();
    const auto cn = static_cast<Eigen::Index>(nb);
    // P_lambda(m, n) = (e_lambda a_lambda(D) phi_n, phi_m); independent of mu.
    std::vector<Frequency> lams = a.frequencies();
    std::vector<Eigen::MatrixXcd> P(lams.size());
    parallel_for(lams.size(), [&](std::size_t t) {
        const CoeffFn& g = a.terms().at(lams[t]);
        const RealVector l = embed(lams[t], *a.generators());
        P[t].resize(cn, cn);
        for (std::size_t n = 0; n < nb; ++n) {
            GridFn v = apply_multiplier(basis[n], [&](std::span<const double> xi) { return g(xi); });
            if (!lams[t].is_zero()) v = v.modulated(l);
            for (std::size_t m = 0; m < nb; ++m) {
                P[t](static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) = l2_inner(v, basis[m]);
            }
        }
    });
    // Window components under mu ~ mu + lambda.
    const std::size_t n = w.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& lam : lams) {
            const std::ptrdiff_t j = w.index_of(w[i] + lam);
            if (j >= 0) {
                const auto x = find(i);
                const auto y = find(static_cast<std::size_t>(j));
                if (x != y) parent[std::max(x, y)] = std::min(x, y);
            }
        }
    }
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);
    std::vector<std::vector<std::size_t>> comps;
    for (auto& kv : groups) comps.push_back(std::move(kv.second));

    std::vector<std::vector<Complex>> parts(comps.size());
    parallel_for(comps.size(), [&](std::size_t c) {
        const auto& idx = comps[c];
        const auto dimc = static_cast<Eigen::Index>(idx.size()) * cn;
        Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(dimc, dimc);
        for (std::size_t col = 0; col < idx.size(); ++col) {
            for (std::size_t t = 0; t < lams.size(); ++t) {
                const Frequency target = w[idx[col]] + lams[t];
                const std::ptrdiff_t j = w.index_of(target);
                if (j < 0) continue;
                const auto pos = std::lower_bound(idx.begin(), idx.end(), static_cast<std::size_t>(j));
                const auto row = static_cast<Eigen::Index>(pos - idx.begin());
                M.block(row * cn, static_cast<Eigen::Index>(col) * cn, cn, cn) += P[t];
            }
        }
        const Eigen::MatrixXcd H = 0.5 * (M + M.adjoint());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) throw Error("Hermitian eigensolver failed");
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) parts[c].emplace_back(es.eigenvalues()(i), 0.0);
    });
    std::vector<Complex> out;
    for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    std::sort(out.begin(), out.end(), complex_less);
    return out;
}

InvarianceResult invariance_check(const APSymbol& a, const FrequencyWindow& w, const std::vector<RealVector>& xi_grid,
                                  const HermiteBasis& basis, double herm_tol) {
    if (a.cls().m > 0.0) {
        throw DomainError("spectral invariance needs a symbol of order m <= 0, got m = " + std::to_string(a.cls().m));
    }
    const RealVector zero(a.dim(), 0.0);
    const KernelMatrix K0 = build_kernel(a, zero, w);
    if (K0.entries.size() > 0) {
        const double defect = (K0.entries - K0.entries.adjoint()).cwiseAbs().maxCoeff();
        if (defect > herm_tol) {
            throw DomainError("spectral invariance needs a Hermitian symbol; max |K - K^H| = " + num(defect));
        }
    }
    InvarianceResult r;
    r.set_U0 = kernel_eigenvalues(K0);
    std::vector<std::vector<Complex>> per(xi_grid.size());
    for (std::size_t i = 0; i < xi_grid.size(); ++i) per[i] = kernel_eigenvalues(build_kernel(a, xi_grid[i], w));
    for (auto& p : per) r.set_Uxi.insert(r.set_Uxi.end(), p.begin(), p.end());
    std::sort(r.set_Uxi.begin(), r.set_Uxi.end(), complex_less);
    r.set_A = compressed_A_spectrum(a, w, basis);
    r.hausdorff_Ul2_vs_UxiD = hausdorff_distance(r.set_U0, r.set_Uxi);
    r.hausdorff_Ul2_vs_A = hausdorff_distance(r.set_U0, r.set_A);
    return r;
}

void write_spectrum_csv(std::ostream& os, const SpectrumReport& r) {
    os << "value_re,value_im,kind,window_radius\n";
    os << std::setprecision(17);
    for (const auto& v : r.values) {
        os << v.approx.real() << ',' << v.approx.imag() << ',' << to_string(v.kind) << ',';
        if (!std::isnan(v.window_radius)) os << v.window_radius;
        os << '\n';
    }
}

}  // namespace appdo
