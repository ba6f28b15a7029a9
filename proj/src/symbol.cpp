#include "appdo/symbol.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "appdo/error.hpp"
#include "appdo/parallel.hpp"

namespace appdo {
namespace {

void require_gens(const GeneratorSetPtr& a, const GeneratorSetPtr& b, const char* what) {
    if (!same_generators(a, b)) throw InputError(std::string(what) + ": operands use different generator sets");
}

Complex character_value(const RealVector& lambda, std::span<const double> x) {
    double phase = 0.0;
    for (std::size_t k = 0; k < lambda.size(); ++k) phase += lambda[k] * x[k];
    return std::polar(1.0, 2.0 * std::numbers::pi * phase);
}

std::vector<std::vector<int>> multi_indices(std::size_t dim, int order) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(dim, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t k, int left) {
        if (k + 1 == dim) {
            cur[k] = left;
            out.push_back(cur);
            return;
        }
        for (int v = left; v >= 0; --v) {
            cur[k] = v;
            rec(k + 1, left - v);
        }
    };
    rec(0, order);
    return out;
}

std::string index_key(const std::vector<int>& alpha, const std::vector<int>& beta) {
    std::ostringstream os;
    for (std::size_t k = 0; k < alpha.size(); ++k) os << (k ? "," : "") << alpha[k];
    os << '|';
    for (std::size_t k = 0; k < beta.size(); ++k) os << (k ? "," : "") << beta[k];
    return os.str();
}

// prod_k (2 pi i lambda_k)^beta_k
Complex x_derivative_factor(const RealVector& lambda, std::span<const int> beta) {
    Complex f(1.0, 0.0);
    for (std::size_t k = 0; k < beta.size(); ++k) {
        const Complex w(0.0, 2.0 * std::numbers::pi * lambda[k]);
        for (int j = 0; j < beta[k]; ++j) f *= w;
    }
    return f;
}

// Value of d_xi^alpha d_x^beta a at (x, xi) from per-frequency derivative trees.
struct DerivedSymbol {
    std::vector<RealVector> lambdas;
    std::vector<CoeffFn> coeffs;
    std::vector<Complex> factors;

    DerivedSymbol(const APSymbol& a, std::span<const int> alpha, std::span<const int> beta) {
        int order = 0;
        for (int v : alpha) order += v;
        for (int v : beta) order += v;
        if (order > kMaxSymbolicOrder) {
            throw DomainError("derivative order " + std::to_string(order) + " exceeds the symbolic limit " +
                              std::to_string(kMaxSymbolicOrder));
        }
        for (const auto& [lam, g] : a.terms()) {
            RealVector l = embed(lam, *a.generators());
            Complex f = x_derivative_factor(l, beta);
            if (f == Complex(0.0, 0.0)) continue;
            lambdas.push_back(std::move(l));
            coeffs.push_back(g.derivative(alpha));
            factors.push_back(f);
        }
    }

    Complex operator()(std::span<const double> x, std::span<const double> xi) const {
        Complex s(0.0, 0.0);
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            s += factors[i] * coeffs[i](xi) * character_value(lambdas[i], x);
        }
        return s;
    }
};

std::vector<RealVector> default_x_grid(std::size_t dim) {
    constexpr int n = 64;
    std::vector<RealVector> grid;
    std::vector<int> idx(dim, 0);
    while (true) {
        RealVector x(dim);
        for (std::size_t k = 0; k < dim; ++k) x[k] = static_cast<double>(idx[k]) / n;
        grid.push_back(std::move(x));
        std::size_t k = 0;
        while (k < dim && ++idx[k] == n) idx[k++] = 0;
        if (k == dim) break;
    }
    return grid;
}

}  // namespace

void SymbolClassParams::validate() const {
    if (!(rho > 0.0 && rho <= 1.0 && delta >= 0.0 && delta < 1.0 && delta <= rho)) {
        std::ostringstream os;
        os << "symbol class violates 0 < rho <= 1, 0 <= delta < 1, delta <= rho (rho = " << rho
           << ", delta = " << delta << ")";
        throw InputError(os.str());
    }
    if (!std::isfinite(m)) throw InputError("symbol order m must be finite");
    if (m0 && !(*m0 <= m)) throw InputError("hypoelliptic order m0 must satisfy m0 <= m");
}

APSymbol::APSymbol(GeneratorSetPtr gens, Terms terms, SymbolClassParams cls)
    : gens_(std::move(gens)), cls_(cls) {
    if (!gens_) throw InputError("symbol needs a generator set");
    cls_.validate();
    for (auto& [lam, g] : terms) {
        if (lam.rank() != gens_->count()) throw InputError("symbol frequency " + lam.str() + " has the wrong rank");
        if (g.dim() != gens_->dim()) throw InputError("coefficient dimension does not match the generator set");
        if (!g.is_zero()) terms_.emplace(lam, std::move(g));
    }
}

APSymbol APSymbol::constant(GeneratorSetPtr gens, Complex c, SymbolClassParams cls) {
    const std::size_t d = gens->dim();
    const std::size_t r = gens->count();
    return APSymbol(std::move(gens), {{Frequency::zero(r), CoeffFn::constant(c, d)}}, cls);
}

APSymbol APSymbol::multiplier(GeneratorSetPtr gens, CoeffFn g, SymbolClassParams cls) {
    const std::size_t r = gens->count();
    return APSymbol(std::move(gens), {{Frequency::zero(r), std::move(g)}}, cls);
}

APSymbol APSymbol::character(GeneratorSetPtr gens, Frequency lambda, CoeffFn g, SymbolClassParams cls) {
    return APSymbol(std::move(gens), {{std::move(lambda), std::move(g)}}, cls);
}

APSymbol APSymbol::with_class(SymbolClassParams cls) const {
    APSymbol out = *this;
    cls.validate();
    out.cls_ = cls;
    return out;
}

std::vector<Frequency> APSymbol::frequencies() const {
    std::vector<Frequency> out;
    out.reserve(terms_.size());
    for (const auto& kv : terms_) out.push_back(kv.first);
    return out;
}

bool APSymbol::is_x_independent() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& kv) { return kv.first.is_zero(); });
}

bool APSymbol::is_xi_independent() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& kv) { return kv.second.is_constant(); });
}

APSymbol operator+(const APSymbol& a, const APSymbol& b) {
    require_gens(a.gens_, b.gens_, "symbol sum");
    APSymbol::Terms t = a.terms_;
    for (const auto& [lam, g] : b.terms_) {
        auto it = t.find(lam);
        if (it == t.end()) {
            t.emplace(lam, g);
        } else {
            it->second = it->second + g;
        }
    }
    SymbolClassParams cls = a.cls_;
    cls.m = std::max(a.cls_.m, b.cls_.m);
    cls.rho = std::min(a.cls_.rho, b.cls_.rho);
    cls.delta = std::max(a.cls_.delta, b.cls_.delta);
    cls.m0.reset();
    return APSymbol(a.gens_, std::move(t), cls);
}

APSymbol operator-(const APSymbol& a, const APSymbol& b) { return a + b.scaled(-1.0); }

APSymbol APSymbol::scaled(Complex c) const {
    Terms t;
    const bool minus_one = c == Complex(-1.0, 0.0);
    for (const auto& [lam, g] : terms_) {
        t.emplace(lam, minus_one ? -g : CoeffFn::constant(c, g.dim()) * g);
    }
    return APSymbol(gens_, std::move(t), cls_);
}

bool operator==(const APSymbol& a, const APSymbol& b) {
    return same_generators(a.gens_, b.gens_) && a.terms_ == b.terms_;
}

// ---------------------------------------------------------------- TPFunction

TPFunction::TPFunction(GeneratorSetPtr gens, Coeffs coeffs) : gens_(std::move(gens)) {
    if (!gens_) throw InputError("trigonometric polynomial needs a generator set");
    for (auto& [lam, c] : coeffs) {
        if (lam.rank() != gens_->count()) throw InputError("frequency " + lam.str() + " has the wrong rank");
        if (c != Complex(0.0, 0.0)) coeffs_.emplace(lam, c);
    }
}

TPFunction TPFunction::character(GeneratorSetPtr gens, Frequency lambda, Complex c) {
    return TPFunction(std::move(gens), {{std::move(lambda), c}});
}

Complex TPFunction::coeff(const Frequency& lambda) const {
    auto it = coeffs_.find(lambda);
    return it == coeffs_.end() ? Complex(0.0, 0.0) : it->second;
}

Complex TPFunction::operator()(std::span<const double> x) const {
    Complex s(0.0, 0.0);
    for (const auto& [lam, c] : coeffs_) s += c * character_value(embed(lam, *gens_), x);
    return s;
}

TPFunction operator+(const TPFunction& a, const TPFunction& b) {
    require_gens(a.gens_, b.gens_, "sum");
    TPFunction::Coeffs c = a.coeffs_;
    for (const auto& [lam, v] : b.coeffs_) c[lam] += v;
    return TPFunction(a.gens_, std::move(c));
}

TPFunction operator-(const TPFunction& a, const TPFunction& b) { return a + b.scaled(-1.0); }

TPFunction TPFunction::scaled(Complex c) const {
    Coeffs out;
    for (const auto& [lam, v] : coeffs_) out.emplace(lam, c * v);
    return TPFunction(gens_, std::move(out));
}

TPFunction operator*(const TPFunction& a, const TPFunction& b) {
    require_gens(a.gens_, b.gens_, "product");
    TPFunction::Coeffs c;
    for (const auto& [la, va] : a.coeffs_) {
        for (const auto& [lb, vb] : b.coeffs_) c[la + lb] += va * vb;
    }
    return TPFunction(a.gens_, std::move(c));
}

TPFunction TPFunction::conj() const {
    Coeffs out;
    for (const auto& [lam, v] : coeffs_) out.emplace(-lam, std::conj(v));
    return TPFunction(gens_, std::move(out));
}

double TPFunction::coeff_l1() const {
    double s = 0.0;
    for (const auto& kv : coeffs_) s += std::abs(kv.second);
    return s;
}

Complex besicovitch_inner(const TPFunction& f, const TPFunction& g) {
    require_gens(f.generators(), g.generators(), "inner product");
    Complex s(0.0, 0.0);
    for (const auto& [lam, v] : f.coeffs()) s += v * std::conj(g.coeff(lam));
    return s;
}

// ---------------------------------------------------------------- operations

Complex evaluate_symbol(const APSymbol& a, std::span<const double> x, std::span<const double> xi) {
    if (x.size() != a.dim() || xi.size() != a.dim()) throw InputError("evaluation point dimension mismatch");
    Complex s(0.0, 0.0);
    for (const auto& [lam, g] : a.terms()) s += g(xi) * character_value(embed(lam, *a.generators()), x);
    return s;
}

Complex mean_value_exact(const TPFunction& f) {
    if (!f.generators()) return {0.0, 0.0};
    return f.coeff(Frequency::zero(f.generators()->count()));
}

Complex mean_value_box(const std::function<Complex(std::span<const double>)>& f, std::size_t dim, double T,
                       std::span<const double> s, const BoxQuadrature& q) {
    using Rule = boost::math::quadrature::gauss<double, 10>;
    if (!(T > 0.0)) throw InputError("box side T must be positive");
    if (s.size() != dim) throw InputError("box base point dimension mismatch");
    const auto panels = static_cast<std::size_t>(std::max(1.0, std::ceil(T * q.panels_per_unit)));
    const std::size_t per_axis = panels * 10;
    double total = 1.0;
    for (std::size_t k = 0; k < dim; ++k) total *= static_cast<double>(per_axis);
    if (total > static_cast<double>(q.node_budget)) {
        throw CapExceeded("quadrature needs " + std::to_string(static_cast<long long>(total)) +
                          " nodes, above the budget of " + std::to_string(q.node_budget));
    }
    // Nodes and weights on [0, T] per axis.
    std::vector<double> nodes, weights;
    nodes.reserve(per_axis);
    weights.reserve(per_axis);
    const auto& abscissa = Rule::abscissa();
    const auto& w = Rule::weights();
    const double h = T / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const double mid = (static_cast<double>(p) + 0.5) * h;
        for (std::size_t j = 0; j < abscissa.size(); ++j) {
            const double a = abscissa[j] * 0.5 * h;
            const double wt = w[j] * 0.5 * h;
            if (abscissa[j] == 0.0) {
                nodes.push_back(mid);
                weights.push_back(wt);
            } else {
                nodes.push_back(mid - a);
                weights.push_back(wt);
                nodes.push_back(mid + a);
                weights.push_back(wt);
            }
        }
    }
    const std::size_t m = nodes.size();
    std::vector<std::size_t> idx(dim, 0);
    RealVector x(dim);
    Complex acc(0.0, 0.0);
    while (true) {
        double wt = 1.0;
        for (std::size_t k = 0; k < dim; ++k) {
            x[k] = s[k] + nodes[idx[k]];
            wt *= weights[idx[k]];
        }
        acc += wt * f(x);
        std::size_t k = 0;
        while (k < dim && ++idx[k] == m) idx[k++] = 0;
        if (k == dim) break;
    }
    return acc / std::pow(T, static_cast<double>(dim));
}

CoeffFn bohr_fourier(const APSymbol& a, const Frequency& lambda) {
    auto it = a.terms().find(lambda);
    if (it == a.terms().end()) return CoeffFn::constant(Rational(0), a.dim());
    return it->second;
}

TPFunction apply_to_tp(const APSymbol& a, const TPFunction& f) {
    require_gens(a.generators(), f.generators(), "apply_to_tp");
    TPFunction::Coeffs out;
    for (const auto& [eta, fe] : f.coeffs()) {
        const RealVector e = embed(eta, *f.generators());
        for (const auto& [nu, g] : a.terms()) out[nu + eta] += g(e) * fe;
    }
    return TPFunction(f.generators(), std::move(out));
}

APSymbol adjoint_symbol(const APSymbol& a) {
    APSymbol::Terms t;
    for (const auto& [lam, g] : a.terms()) {
        const Frequency mu = -lam;
        t.emplace(mu, g.shifted(embed(mu, *a.generators())).conj());
    }
    return APSymbol(a.generators(), std::move(t), a.cls());
}

APSymbol compose_symbols(const APSymbol& a, const APSymbol& b) {
    require_gens(a.generators(), b.generators(), "compose_symbols");
    APSymbol::Terms t;
    for (const auto& [nu, ga] : a.terms()) {
        for (const auto& [nup, gb] : b.terms()) {
            CoeffFn term = ga.shifted(embed(nup, *a.generators())) * gb;
            auto it = t.find(nu + nup);
            if (it == t.end()) {
                t.emplace(nu + nup, std::move(term));
            } else {
                it->second = it->second + term;
            }
        }
    }
    SymbolClassParams cls;
    cls.m = a.cls().m + b.cls().m;
    cls.rho = std::min(a.cls().rho, b.cls().rho);
    cls.delta = std::max(a.cls().delta, b.cls().delta);
    if (a.cls().m0 && b.cls().m0) cls.m0 = *a.cls().m0 + *b.cls().m0;
    return APSymbol(a.generators(), std::move(t), cls);
}

APSymbol translate_symbol(const APSymbol& a, const RealVector& xi0) {
    if (xi0.size() != a.dim()) throw InputError("translation vector dimension mismatch");
    APSymbol::Terms t;
    for (const auto& [lam, g] : a.terms()) t.emplace(lam, g.shifted(xi0));
    return APSymbol(a.generators(), std::move(t), a.cls());
}

int MultiIndex::order() const { return std::accumulate(alpha.begin(), alpha.end(), 0); }

double japanese_bracket(std::span<const double> v) {
    double s = 1.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

SeminormEstimate seminorm_estimate(const APSymbol& a, std::span<const int> alpha, std::span<const int> beta,
                                   std::span<const RealVector> xi_grid, std::span<const RealVector> x_grid) {
    if (alpha.size() != a.dim() || beta.size() != a.dim()) throw InputError("multi-index length must equal dim");
    const DerivedSymbol d(a, alpha, beta);
    const int na = std::accumulate(alpha.begin(), alpha.end(), 0);
    const int nb = std::accumulate(beta.begin(), beta.end(), 0);
    const double expo = -a.cls().m + a.cls().rho * na - a.cls().delta * nb;

    std::vector<RealVector> xs_default;
    if (x_grid.empty()) {
        xs_default = default_x_grid(a.dim());
        x_grid = xs_default;
    }
    std::vector<SeminormEstimate> per_xi(xi_grid.size());
    parallel_for(xi_grid.size(), [&](std::size_t i) {
        const auto& xi = xi_grid[i];
        const double w = std::pow(japanese_bracket(xi), expo);
        SeminormEstimate best;
        for (const auto& x : x_grid) {
            const double v = w * std::abs(d(x, xi));
            if (v > best.value || best.argmax_x.empty()) {
                best.value = v;
                best.argmax_x = x;
                best.argmax_xi = xi;
            }
        }
        per_xi[i] = std::move(best);
    });
    SeminormEstimate out;
    for (auto& e : per_xi) {
        if (e.value > out.value || out.argmax_xi.empty()) out = std::move(e);
    }
    return out;
}

HypoReport hypoellipticity_check(const APSymbol& a, double R, int max_order, std::span<const RealVector> xi_grid,
                                 std::span<const RealVector> x_grid, const HypoOptions& opts) {
    if (!a.cls().m0) throw DomainError("hypoellipticity check needs the lower order m0 in the symbol class");
    if (max_order > kMaxSymbolicOrder) {
        throw DomainError("derivative order " + std::to_string(max_order) + " exceeds the symbolic limit");
    }
    const double m0 = *a.cls().m0;
    const std::size_t dim = a.dim();
    HypoReport rep;
    rep.C = std::numeric_limits<double>::infinity();

    struct Deriv {
        std::string key;
        DerivedSymbol sym;
        double weight_expo;
    };
    std::vector<Deriv> derivs;
    for (int order = 1; order <= max_order; ++order) {
        for (int na = 0; na <= order; ++na) {
            for (const auto& alpha : multi_indices(dim, na)) {
                for (const auto& beta : multi_indices(dim, order - na)) {
                    derivs.push_back({index_key(alpha, beta), DerivedSymbol(a, alpha, beta),
                                      a.cls().rho * na - a.cls().delta * (order - na)});
                    rep.ratio_constants[derivs.back().key] = 0.0;
                }
            }
        }
    }

    bool any_point = false;
    for (const auto& xi : xi_grid) {
        double norm = 0.0;
        for (double v : xi) norm += v * v;
        if (std::sqrt(norm) < R) continue;
        const double jb = japanese_bracket(xi);
        for (const auto& x : x_grid) {
            any_point = true;
            const double av = std::abs(evaluate_symbol(a, x, xi));
            const double lower = av / std::pow(jb, m0);
            if (lower < rep.C) rep.C = lower;
            if (lower <= opts.c_floor) {
                if (rep.witnesses.size() < opts.max_witnesses) rep.witnesses.push_back({x, xi, "|a| below C<xi>^m0"});
                continue;
            }
            for (auto& d : derivs) {
                const double ratio = std::abs(d.sym(x, xi)) / av * std::pow(jb, d.weight_expo);
                auto& c = rep.ratio_constants[d.key];
                if (!std::isfinite(ratio)) {
                    if (rep.witnesses.size() < opts.max_witnesses) rep.witnesses.push_back({x, xi, "ratio " + d.key + " not finite"});
                } else {
                    c = std::max(c, ratio);
                }
            }
        }
    }
    if (!any_point) rep.C = 0.0;
    rep.ok = any_point && rep.C > opts.c_floor && rep.witnesses.empty();
    return rep;
}

double fejer_weight(std::span<const std::int64_t> lattice_coords, int n) {
    double w = 1.0;
    for (auto m : lattice_coords) w *= std::max(0.0, 1.0 - std::abs(static_cast<double>(m)) / n);
    return w;
}

LatticeBasis lattice_basis(std::span<const Frequency> freqs) {
    LatticeBasis out;
    if (freqs.empty()) return out;
    const std::size_t r = freqs.front().rank();
    std::int64_t L = 1;
    for (const auto& f : freqs) {
        for (const auto& q : f.coeffs()) L = std::lcm(L, q.den());
    }
    auto scaled = [&](const Frequency& f) {
        std::vector<std::int64_t> v(r);
        for (std::size_t i = 0; i < r; ++i) v[i] = (f[i] * Rational(L)).num();
        return v;
    };
    std::vector<std::vector<std::int64_t>> rows;
    for (const auto& f : freqs) rows.push_back(scaled(f));

    // Integer row echelon form by Euclidean row reduction.
    std::vector<std::vector<std::int64_t>> basis;
    std::vector<std::size_t> pivots;
    std::size_t top = 0;
    for (std::size_t col = 0; col < r && top < rows.size(); ++col) {
        while (true) {
            std::size_t best = rows.size();
            for (std::size_t i = top; i < rows.size(); ++i) {
                if (rows[i][col] != 0 && (best == rows.size() || std::abs(rows[i][col]) < std::abs(rows[best][col]))) {
                    best = i;
                }
            }
            if (best == rows.size()) break;
            std::swap(rows[top], rows[best]);
            bool reduced = false;
            for (std::size_t i = top + 1; i < rows.size(); ++i) {
                if (rows[i][col] == 0) continue;
                const std::int64_t q = rows[i][col] / rows[top][col];
                for (std::size_t k = 0; k < r; ++k) rows[i][k] -= q * rows[top][k];
                reduced = true;
            }
            bool clear = true;
            for (std::size_t i = top + 1; i < rows.size(); ++i) clear = clear && rows[i][col] == 0;
            if (clear) {
                if (rows[top][col] < 0) {
                    for (auto& v : rows[top]) v = -v;
                }
                basis.push_back(rows[top]);
                pivots.push_back(col);
                ++top;
                break;
            }
            if (!reduced) break;
        }
    }
    for (const auto& b : basis) {
        std::vector<Rational> c(r);
        for (std::size_t i = 0; i < r; ++i) c[i] = Rational(b[i], L);
        out.basis.emplace_back(std::move(c));
    }
    for (const auto& f : freqs) {
        auto v = scaled(f);
        std::vector<std::int64_t> coords(basis.size(), 0);
        for (std::size_t j = 0; j < basis.size(); ++j) {
            const std::int64_t p = v[pivots[j]];
            if (p % basis[j][pivots[j]] != 0) throw Error("lattice coordinate solve failed");
            coords[j] = p / basis[j][pivots[j]];
            for (std::size_t k = 0; k < r; ++k) v[k] -= coords[j] * basis[j][k];
        }
        if (std::any_of(v.begin(), v.end(), [](std::int64_t x) { return x != 0; })) {
            throw Error("lattice coordinate solve left a residual");
        }
        out.coords.push_back(std::move(coords));
    }
    return out;
}

TPFunction bochner_fejer(const TPFunction& f, int n) {
    if (n <= 0) throw InputError("Bochner-Fejer index n must be positive");
    if (f.coeffs().empty()) return f;
    std::vector<Frequency> freqs;
    for (const auto& kv : f.coeffs()) freqs.push_back(kv.first);
    const LatticeBasis lb = lattice_basis(freqs);
    TPFunction::Coeffs out;
    std::size_t i = 0;
    for (const auto& [lam, c] : f.coeffs()) out.emplace(lam, fejer_weight(lb.coords[i++], n) * c);
    return TPFunction(f.generators(), std::move(out));
}

double besicovitch_sobolev_norm(const TPFunction& f, double s) {
    double acc = 0.0;
    for (const auto& [lam, c] : f.coeffs()) {
        const RealVector l = embed(lam, *f.generators());
        acc += std::pow(japanese_bracket(l), 2.0 * s) * std::norm(c);
    }
    return std::sqrt(acc);
}

}  // namespace appdo
