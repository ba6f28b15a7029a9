#include "appdo/gladyshev.hpp"

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

RealVector minus(const RealVector& a, const RealVector& b) {
    RealVector r(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) r[k] = a[k] - b[k];
    return r;
}

std::string complex_cell(Complex z) {
    std::ostringstream os;
    os << std::setprecision(17) << '"' << z.real() << ',' << z.imag() << '"';
    return os.str();
}

}  // namespace

KernelMatrix build_kernel(const APSymbol& a, const RealVector& xi, const FrequencyWindow& w) {
    if (!same_generators(a.generators(), w.generators())) {
        throw InputError("kernel window and symbol use different generator sets");
    }
    if (xi.size() != a.dim()) throw InputError("xi has dimension " + std::to_string(xi.size()) + ", expected " +
                                               std::to_string(a.dim()));
    KernelMatrix K;
    K.window = w;
    K.xi = xi;
    const std::size_t n = w.size();
    K.entries = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    std::vector<std::vector<char>> used(n, std::vector<char>(a.terms().size(), 0));
    parallel_for(n, [&](std::size_t j) {
        const Frequency& lp = w[j];
        const RealVector arg = minus(xi, embed(lp, *w.generators()));
        std::size_t t = 0;
        for (const auto& [nu, g] : a.terms()) {
            const std::ptrdiff_t i = w.index_of(lp - nu);
            if (i >= 0) {
                const Complex v = g(arg);
                K.entries(i, static_cast<Eigen::Index>(j)) = v;
                if (v != Complex(0.0, 0.0)) used[j][t] = 1;
            }
            ++t;
        }
    });
    std::size_t t = 0;
    for (const auto& kv : a.terms()) {
        bool any = false;
        for (std::size_t j = 0; j < n && !any; ++j) any = used[j][t] != 0;
        if (any) K.band.push_back(kv.first);
        ++t;
    }
    return K;
}

std::vector<std::vector<std::size_t>> kernel_blocks(const Eigen::MatrixXcd& K) {
    const auto n = static_cast<std::size_t>(K.rows());
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (Eigen::Index j = 0; j < K.cols(); ++j) {
        for (Eigen::Index i = 0; i < K.rows(); ++i) {
            if (K(i, j) != Complex(0.0, 0.0)) {
                const auto a = find(static_cast<std::size_t>(i));
                const auto b = find(static_cast<std::size_t>(j));
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }
        }
    }
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);
    std::vector<std::vector<std::size_t>> out;
    out.reserve(groups.size());
    for (auto& kv : groups) out.push_back(std::move(kv.second));
    return out;
}

Eigen::MatrixXcd principal_block(const Eigen::MatrixXcd& K, const std::vector<std::size_t>& idx) {
    const auto m = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXcd B(m, m);
    for (Eigen::Index c = 0; c < m; ++c) {
        for (Eigen::Index r = 0; r < m; ++r) {
            B(r, c) = K(static_cast<Eigen::Index>(idx[r]), static_cast<Eigen::Index>(idx[c]));
        }
    }
    return B;
}

double spectral_norm(const Eigen::MatrixXcd& K) {
    if (K.size() == 0) return 0.0;
    const auto blocks = kernel_blocks(K);
    std::vector<double> norms(blocks.size(), 0.0);
    parallel_for(blocks.size(), [&](std::size_t b) {
        const Eigen::MatrixXcd B = principal_block(K, blocks[b]);
        if (B.rows() == 1) {
            norms[b] = std::abs(B(0, 0));
        } else {
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(B);
            norms[b] = svd.singularValues()(0);
        }
    });
    return *std::max_element(norms.begin(), norms.end());
}

WeightedWindow::WeightedWindow(FrequencyWindow w, double s_) : window(std::move(w)), s(s_) {
    weights.resize(static_cast<Eigen::Index>(window.size()));
    for (std::size_t i = 0; i < window.size(); ++i) {
        const RealVector l = embed(window[i], *window.generators());
        weights(static_cast<Eigen::Index>(i)) = std::pow(japanese_bracket(l), s);
    }
}

double weighted_norm(const KernelMatrix& K, double s, double m) {
    const WeightedWindow left(K.window, s - m);
    const WeightedWindow right(K.window, s);
    const Eigen::MatrixXcd W =
        left.weights.asDiagonal() * K.entries * right.weights.cwiseInverse().asDiagonal();
    return spectral_norm(W);
}

PositivityResult positivity_check(const KernelMatrix& K, double tol) {
    PositivityResult r;
    if (K.entries.size() == 0) {
        r.hermitian = r.psd = true;
        return r;
    }
    const Eigen::MatrixXcd H = K.entries.adjoint();
    r.hermitian = (K.entries - H).cwiseAbs().maxCoeff() <= tol;
    const Eigen::MatrixXcd S = 0.5 * (K.entries + H);
    const auto blocks = kernel_blocks(S);
    std::vector<double> mins(blocks.size());
    parallel_for(blocks.size(), [&](std::size_t b) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(principal_block(S, blocks[b]), Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) throw Error("Hermitian eigensolver failed");
        mins[b] = es.eigenvalues()(0);
    });
    r.min_eig = *std::min_element(mins.begin(), mins.end());
    r.psd = r.hermitian && r.min_eig >= -tol * spectral_norm(K.entries);
    return r;
}

std::vector<double> isometry_sweep(const APSymbol& a, const std::vector<RealVector>& xi_list,
                                   const FrequencyWindow& w) {
    if (a.cls().m > 0.0) {
        throw DomainError("isometry needs a symbol of order m <= 0, got m = " + std::to_string(a.cls().m));
    }
    std::vector<double> out;
    out.reserve(xi_list.size());
    for (const auto& xi : xi_list) out.push_back(spectral_norm(build_kernel(a, xi, w).entries));
    return out;
}

double VectorField::l2_norm() const {
    double s = 0.0;
    for (const auto& kv : values) {
        const double n = kv.second.l2_norm();
        s += n * n;
    }
    return std::sqrt(s);
}

VectorField& VectorField::operator-=(const VectorField& o) {
    if (!(grid == o.grid)) throw InputError("vector fields live on different grids");
    for (const auto& [lam, f] : o.values) {
        auto it = values.find(lam);
        if (it == values.end()) {
            values.emplace(lam, f.scaled(-1.0));
        } else {
            it->second -= f;
        }
    }
    return *this;
}

Complex field_inner(const VectorField& F, const VectorField& G) {
    if (!(F.grid == G.grid)) throw InputError("vector fields live on different grids");
    Complex s(0.0, 0.0);
    for (const auto& [lam, f] : F.values) {
        auto it = G.values.find(lam);
        if (it != G.values.end()) s += l2_inner(f, it->second);
    }
    return s;
}

VectorField apply_UaD(const APSymbol& a, const VectorField& F, std::size_t cap) {
    if (!same_generators(a.generators(), F.gens)) throw InputError("field and symbol use different generator sets");
    if (F.grid.dim != a.dim()) throw InputError("field grid dimension does not match the symbol");
    VectorField out{F.gens, F.grid, {}};
    std::set<Frequency> targets;
    for (const auto& kv : F.values) {
        for (const auto& t : a.terms()) {
            targets.insert(kv.first - t.first);
            if (targets.size() > cap) {
                throw CapExceeded("U(a)(D) output exceeds the component cap of " + std::to_string(cap));
            }
        }
    }
    struct Task {
        Frequency src;
        const CoeffFn* g;
        Frequency dst;
    };
    std::vector<Task> tasks;
    for (const auto& kv : F.values) {
        for (const auto& [nu, g] : a.terms()) tasks.push_back({kv.first, &g, kv.first - nu});
    }
    std::vector<GridFn> results(tasks.size());
    parallel_for(tasks.size(), [&](std::size_t i) {
        const Task& t = tasks[i];
        const RealVector shift = embed(t.src, *F.gens);
        const GridFn& f = F.values.at(t.src);
        if (t.g->is_constant()) {
            results[i] = f.scaled((*t.g)(RealVector(shift.size(), 0.0)));
            return;
        }
        results[i] = apply_multiplier(f, [&](std::span<const double> xi) {
            RealVector arg(xi.begin(), xi.end());
            for (std::size_t k = 0; k < arg.size(); ++k) arg[k] -= shift[k];
            return (*t.g)(arg);
        });
    });
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        auto it = out.values.find(tasks[i].dst);
        if (it == out.values.end()) {
            out.values.emplace(tasks[i].dst, std::move(results[i]));
        } else {
            it->second += results[i];
        }
    }
    return out;
}

void write_kernel_csv(std::ostream& os, const KernelMatrix& K) {
    os << "\"freq\"";
    for (const auto& f : K.window) os << ",\"" << f.str() << '"';
    os << '\n';
    for (Eigen::Index i = 0; i < K.entries.rows(); ++i) {
        os << '"' << K.window[static_cast<std::size_t>(i)].str() << '"';
        for (Eigen::Index j = 0; j < K.entries.cols(); ++j) os << ',' << complex_cell(K.entries(i, j));
        os << '\n';
    }
}

}  // namespace appdo
