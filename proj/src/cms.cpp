#include "appdo/cms.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>

#include "appdo/error.hpp"
#include "appdo/parallel.hpp"

namespace appdo {
namespace {

void require_compatible(const TensorTP& u, const TensorTP& v) {
    if (!(u.grid == v.grid)) throw InputError("tensors live on different grids");
    if (!same_generators(u.gens, v.gens)) throw InputError("tensors use different generator sets");
}

std::vector<double> hermite_1d(std::size_t count, const GridSpec& g) {
    // Row-major: function n occupies [n*N, (n+1)*N).
    std::vector<double> out(count * g.N);
    const double c = std::pow(2.0 * std::numbers::pi, 0.25);
    const double s = std::sqrt(2.0 * std::numbers::pi);
    for (std::size_t j = 0; j < g.N; ++j) {
        const double u = s * (static_cast<double>(j) * g.step() - 0.5 * g.L);
        double prev = 0.0;
        double cur = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * u * u);
        for (std::size_t n = 0; n < count; ++n) {
            out[n * g.N + j] = c * cur;
            const double dn = static_cast<double>(n);
            const double next = std::sqrt(2.0 / (dn + 1.0)) * u * cur - std::sqrt(dn / (dn + 1.0)) * prev;
            prev = cur;
            cur = next;
        }
    }
    return out;
}

std::vector<std::vector<std::size_t>> degree_ordered_indices(std::size_t dim, std::size_t count) {
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t total = 0; out.size() < count; ++total) {
        std::vector<std::size_t> cur(dim, 0);
        std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t k, std::size_t left) {
            if (out.size() >= count) return;
            if (k + 1 == dim) {
                cur[k] = left;
                out.push_back(cur);
                return;
            }
            for (std::size_t v = left + 1; v-- > 0;) {
                cur[k] = v;
                rec(k + 1, left - v);
            }
        };
        rec(0, total);
    }
    return out;
}

GridFn random_combination(const HermiteBasis& basis, std::size_t modes, std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    GridFn f(basis.grid());
    for (std::size_t n = 0; n < std::min(modes, basis.count()); ++n) {
        f += basis[n].scaled(Complex(nd(rng), nd(rng)));
    }
    return f;
}

}  // namespace

TensorTP TensorTP::elementary(GeneratorSetPtr gens, const Frequency& mu, GridFn f) {
    TensorTP u{std::move(gens), f.spec(), {}};
    u.terms.emplace(mu, std::move(f));
    return u;
}

double TensorTP::norm() const {
    double s = 0.0;
    for (const auto& kv : terms) {
        const double n = kv.second.l2_norm();
        s += n * n;
    }
    return std::sqrt(s);
}

TensorTP& TensorTP::operator+=(const TensorTP& o) {
    if (terms.empty() && !gens) {
        *this = o;
        return *this;
    }
    require_compatible(*this, o);
    for (const auto& [mu, f] : o.terms) {
        auto it = terms.find(mu);
        if (it == terms.end()) {
            terms.emplace(mu, f);
        } else {
            it->second += f;
        }
    }
    return *this;
}

TensorTP& TensorTP::operator-=(const TensorTP& o) { return *this += o.scaled(-1.0); }

TensorTP TensorTP::scaled(Complex c) const {
    TensorTP out{gens, grid, {}};
    for (const auto& [mu, f] : terms) out.terms.emplace(mu, f.scaled(c));
    return out;
}

Complex tensor_inner(const TensorTP& u, const TensorTP& v) {
    require_compatible(u, v);
    Complex s(0.0, 0.0);
    for (const auto& [mu, f] : u.terms) {
        auto it = v.terms.find(mu);
        if (it != v.terms.end()) s += l2_inner(f, it->second);
    }
    return s;
}

HermiteBasis::HermiteBasis(std::size_t count, GridSpec grid) : grid_(grid) {
    grid_.validate();
    if (count == 0) throw InputError("Hermite basis needs at least one function");
    const auto idx = degree_ordered_indices(grid_.dim, count);
    std::size_t max_deg = 0;
    for (const auto& m : idx) {
        for (auto v : m) max_deg = std::max(max_deg, v);
    }
    const auto h = hermite_1d(max_deg + 1, grid_);
    for (const auto& m : idx) {
        GridFn f(grid_);
        for (std::size_t i = 0; i < f.size(); ++i) {
            std::size_t rest = i;
            double v = 1.0;
            for (std::size_t k = grid_.dim; k-- > 0;) {
                v *= h[m[k] * grid_.N + rest % grid_.N];
                rest /= grid_.N;
            }
            f[i] = v;
        }
        // Modified Gram-Schmidt against the functions accepted so far.
        for (const auto& q : functions_) f -= q.scaled(l2_inner(f, q));
        const double nrm = f.l2_norm();
        if (!(nrm > 1e-8)) throw DomainError("Hermite functions are not resolved on this grid; increase N or L");
        functions_.push_back(f.scaled(1.0 / nrm));
    }
}

double HermiteBasis::gram_defect() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < functions_.size(); ++i) {
        for (std::size_t j = 0; j < functions_.size(); ++j) {
            const Complex g = l2_inner(functions_[i], functions_[j]);
            worst = std::max(worst, std::abs(g - Complex(i == j ? 1.0 : 0.0, 0.0)));
        }
    }
    return worst;
}

TensorTP apply_A(const APSymbol& a, const TensorTP& u) {
    if (!same_generators(a.generators(), u.gens)) throw InputError("tensor and symbol use different generator sets");
    if (u.grid.dim != a.dim()) throw InputError("tensor grid dimension does not match the symbol");
    struct Task {
        const Frequency* mu;
        const GridFn* f;
        const Frequency* lambda;
        const CoeffFn* g;
    };
    std::vector<Task> tasks;
    for (const auto& [mu, f] : u.terms) {
        for (const auto& [lam, g] : a.terms()) tasks.push_back({&mu, &f, &lam, &g});
    }
    std::vector<GridFn> results(tasks.size());
    parallel_for(tasks.size(), [&](std::size_t i) {
        const Task& t = tasks[i];
        GridFn v = t.g->is_constant()
                       ? t.f->scaled((*t.g)(RealVector(u.grid.dim, 0.0)))
                       : apply_multiplier(*t.f, [&](std::span<const double> xi) { return (*t.g)(xi); });
        results[i] = t.lambda->is_zero() ? std::move(v) : v.modulated(embed(*t.lambda, *u.gens));
    });
    TensorTP out{u.gens, u.grid, {}};
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const Frequency key = *tasks[i].mu + *tasks[i].lambda;
        auto it = out.terms.find(key);
        if (it == out.terms.end()) {
            out.terms.emplace(key, std::move(results[i]));
        } else {
            it->second += results[i];
        }
    }
    return out;
}

VectorField q_map(const TensorTP& u) {
    VectorField F{u.gens, u.grid, {}};
    for (const auto& [mu, f] : u.terms) {
        const Frequency neg = -mu;
        F.values.emplace(neg, mu.is_zero() ? f : f.modulated(embed(neg, *u.gens)));
    }
    return F;
}

double equivalence_residual(const APSymbol& a, const Frequency& mu, std::size_t n, const HermiteBasis& basis) {
    if (a.cls().m > 0.0) {
        throw DomainError("unitary equivalence needs a symbol of order m <= 0, got m = " + std::to_string(a.cls().m));
    }
    if (!(basis.grid().dim == a.dim())) throw InputError("basis grid dimension does not match the symbol");
    const TensorTP u = TensorTP::elementary(a.generators(), mu, basis[n]);
    VectorField lhs = q_map(apply_A(a, u));
    const VectorField rhs = apply_UaD(a, q_map(u));
    lhs -= rhs;
    return lhs.l2_norm();
}

TensorTP random_tensor(const GeneratorSetPtr& gens, const std::vector<Frequency>& freqs, const HermiteBasis& basis,
                       std::size_t modes, std::size_t terms, std::mt19937_64& rng) {
    if (freqs.empty()) throw InputError("random tensor needs a nonempty frequency pool");
    TensorTP u{gens, basis.grid(), {}};
    std::uniform_int_distribution<std::size_t> pick(0, freqs.size() - 1);
    for (std::size_t t = 0; t < terms; ++t) {
        u += TensorTP::elementary(gens, freqs[pick(rng)], random_combination(basis, modes, rng));
    }
    return u;
}

double adjoint_residual_A(const APSymbol& a, int trials, const HermiteBasis& basis, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const APSymbol ap = adjoint_symbol(a);
    std::vector<Frequency> pool = a.frequencies();
    pool.push_back(Frequency::zero(a.generators()->count()));
    const auto window = module_closure(a.generators(), pool, 1);
    std::vector<Frequency> freqs(window.begin(), window.end());
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        const TensorTP u = random_tensor(a.generators(), freqs, basis, 6, 3, rng);
        const TensorTP v = random_tensor(a.generators(), freqs, basis, 6, 3, rng);
        const Complex lhs = tensor_inner(apply_A(a, u), v);
        const Complex rhs = tensor_inner(u, apply_A(ap, v));
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

void write_tensor_csv(std::ostream& os, const TensorTP& u) {
    os << std::setprecision(17);
    for (const auto& [mu, f] : u.terms) {
        os << "# freq " << mu.str() << '\n';
        for (std::size_t i = 0; i < f.size(); ++i) {
            for (double x : u.grid.point(i)) os << x << ',';
            os << f[i].real() << ',' << f[i].imag() << '\n';
        }
    }
}

}  // namespace appdo
