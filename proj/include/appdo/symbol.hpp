#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "appdo/coeff_fn.hpp"
#include "appdo/frequency.hpp"

namespace appdo {

/// Hoermander class parameters (m, rho, delta) plus an optional
/// hypoelliptic lower order m0.
struct SymbolClassParams {
    double m = 0.0;
    double rho = 1.0;
    double delta = 0.0;
    std::optional<double> m0;

    /// Throws InputError unless 0 < rho <= 1, 0 <= delta < 1, delta <= rho,
    /// and m0 <= m when m0 is present.
    void validate() const;

    bool operator==(const SymbolClassParams&) const = default;
};

/// Finite trigonometric polynomial of characters of x with coefficient
/// functions of xi: a(x, xi) = sum over lambda of a_lambda(xi) e^{2 pi i lambda.x}.
class APSymbol {
public:
    using Terms = std::map<Frequency, CoeffFn>;

    APSymbol() = default;
    /// Drops identically-zero coefficients; validates ranks and dimensions.
    APSymbol(GeneratorSetPtr gens, Terms terms, SymbolClassParams cls = {});

    /// The constant symbol c.
    static APSymbol constant(GeneratorSetPtr gens, Complex c, SymbolClassParams cls = {});
    /// The x-independent symbol g(xi).
    static APSymbol multiplier(GeneratorSetPtr gens, CoeffFn g, SymbolClassParams cls = {});
    /// e_lambda(x) * g(xi).
    static APSymbol character(GeneratorSetPtr gens, Frequency lambda, CoeffFn g, SymbolClassParams cls = {});

    const GeneratorSetPtr& generators() const noexcept { return gens_; }
    std::size_t dim() const { return gens_->dim(); }
    const Terms& terms() const noexcept { return terms_; }
    const SymbolClassParams& cls() const noexcept { return cls_; }
    APSymbol with_class(SymbolClassParams cls) const;

    /// The frequency set Lambda(a).
    std::vector<Frequency> frequencies() const;
    bool is_x_independent() const;
    bool is_xi_independent() const;

    friend APSymbol operator+(const APSymbol& a, const APSymbol& b);
    friend APSymbol operator-(const APSymbol& a, const APSymbol& b);
    APSymbol scaled(Complex c) const;

    /// Structural equality of frequency sets and coefficient trees.
    friend bool operator==(const APSymbol& a, const APSymbol& b);

private:
    GeneratorSetPtr gens_;
    Terms terms_;
    SymbolClassParams cls_;
};

/// Trigonometric polynomial f(x) = sum of coeffs_lambda e^{2 pi i lambda.x}.
class TPFunction {
public:
    using Coeffs = std::map<Frequency, Complex>;

    TPFunction() = default;
    TPFunction(GeneratorSetPtr gens, Coeffs coeffs);
    static TPFunction character(GeneratorSetPtr gens, Frequency lambda, Complex c = 1.0);

    const GeneratorSetPtr& generators() const noexcept { return gens_; }
    const Coeffs& coeffs() const noexcept { return coeffs_; }
    Complex coeff(const Frequency& lambda) const;

    Complex operator()(std::span<const double> x) const;

    friend TPFunction operator+(const TPFunction& a, const TPFunction& b);
    friend TPFunction operator-(const TPFunction& a, const TPFunction& b);
    TPFunction scaled(Complex c) const;
    /// Pointwise product; frequencies add.
    friend TPFunction operator*(const TPFunction& a, const TPFunction& b);
    TPFunction conj() const;

    /// Sum of |coeff| (an upper bound for the sup norm).
    double coeff_l1() const;

private:
    GeneratorSetPtr gens_;
    Coeffs coeffs_;
};

/// (f, g)_B = sum_lambda f_lambda conj(g_lambda).
Complex besicovitch_inner(const TPFunction& f, const TPFunction& g);

Complex evaluate_symbol(const APSymbol& a, std::span<const double> x, std::span<const double> xi);

/// Coefficient of the zero frequency: the mean value of f.
Complex mean_value_exact(const TPFunction& f);

struct BoxQuadrature {
    /// Gauss-Legendre panels per unit length along each axis.
    double panels_per_unit = 4.0;
    /// Total node budget over the d-dimensional box.
    std::size_t node_budget = 50'000'000;
};

/// T^{-d} times the integral of f over s + [0,T]^d, by composite
/// Gauss-Legendre quadrature.
Complex mean_value_box(const std::function<Complex(std::span<const double>)>& f, std::size_t dim, double T,
                       std::span<const double> s, const BoxQuadrature& q = {});

/// a_lambda, or the zero function when lambda is not a frequency of a.
CoeffFn bohr_fourier(const APSymbol& a, const Frequency& lambda);

/// Exact action on a trigonometric polynomial:
/// (a(x,D) f)_mu = sum over nu + eta = mu of a_nu(eta) f_eta.
TPFunction apply_to_tp(const APSymbol& a, const TPFunction& f);

/// Formal adjoint: (a+)_mu(eta) = conj(a_{-mu}(eta + mu)).
APSymbol adjoint_symbol(const APSymbol& a);

/// Symbol of a(x,D) b(x,D):
/// (a o b)_mu(eta) = sum over nu + nu' = mu of a_nu(eta + nu') b_nu'(eta).
APSymbol compose_symbols(const APSymbol& a, const APSymbol& b);

/// xi -> a(x, xi + xi0).
APSymbol translate_symbol(const APSymbol& a, const RealVector& xi0);

struct MultiIndex {
    std::vector<int> alpha;
    int order() const;
};

struct SeminormEstimate {
    double value = 0.0;
    RealVector argmax_x;
    RealVector argmax_xi;
    /// Always true: a grid maximum never exceeds the true supremum.
    bool lower_bound = true;
};

/// Maximum derivative order differentiated symbolically.
inline constexpr int kMaxSymbolicOrder = 6;

/// Grid maximum of <xi>^{-m + rho|alpha| - delta|beta|} |d_xi^alpha d_x^beta a|.
/// The x-grid defaults to 64 points per axis over [0, 1) when empty.
SeminormEstimate seminorm_estimate(const APSymbol& a, std::span<const int> alpha, std::span<const int> beta,
                                   std::span<const RealVector> xi_grid, std::span<const RealVector> x_grid = {});

struct HypoWitness {
    RealVector x;
    RealVector xi;
    std::string reason;
};

struct HypoReport {
    bool ok = false;
    /// Best lower constant: min over |xi| >= R of |a| / <xi>^{m0}.
    double C = 0.0;
    /// Best ratio constants C_{alpha,beta}, keyed by "alpha|beta".
    std::map<std::string, double> ratio_constants;
    std::vector<HypoWitness> witnesses;
};

struct HypoOptions {
    /// The lower constant must exceed this floor for ok = true.
    double c_floor = 1e-8;
    std::size_t max_witnesses = 16;
};

HypoReport hypoellipticity_check(const APSymbol& a, double R, int max_order, std::span<const RealVector> xi_grid,
                                 std::span<const RealVector> x_grid, const HypoOptions& opts = {});

/// Product-Fejer kernel value prod_i max(0, 1 - |m_i|/n) over lattice coordinates.
double fejer_weight(std::span<const std::int64_t> lattice_coords, int n);

/// A Z-basis of the lattice generated by `freqs` and the integer coordinates
/// of every element of `freqs` in it.
struct LatticeBasis {
    std::vector<Frequency> basis;
    std::vector<std::vector<std::int64_t>> coords;
};
LatticeBasis lattice_basis(std::span<const Frequency> freqs);

TPFunction bochner_fejer(const TPFunction& f, int n);

/// (sum_lambda <lambda>^{2s} |f_lambda|^2)^{1/2}.
double besicovitch_sobolev_norm(const TPFunction& f, double s);

/// <v> = (1 + |v|^2)^{1/2}.
double japanese_bracket(std::span<const double> v);

}  // namespace appdo
