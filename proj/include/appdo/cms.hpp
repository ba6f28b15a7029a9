#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <random>
#include <vector>

#include "appdo/gladyshev.hpp"
#include "appdo/grid.hpp"
#include "appdo/symbol.hpp"

namespace appdo {

/// u(x, y) = sum over mu of e_mu(x) f_mu(y), an element of B^2 (x) L^2.
struct TensorTP {
    GeneratorSetPtr gens;
    GridSpec grid;
    std::map<Frequency, GridFn> terms;

    /// e_mu (x) f.
    static TensorTP elementary(GeneratorSetPtr gens, const Frequency& mu, GridFn f);

    double norm() const;
    TensorTP& operator+=(const TensorTP& o);
    TensorTP& operator-=(const TensorTP& o);
    TensorTP scaled(Complex c) const;
};

/// sum over mu of (f_mu, g_mu) on the grid.
Complex tensor_inner(const TensorTP& u, const TensorTP& v);

/// Hermite functions phi_n(t) = (2 pi)^{1/4} h_n(sqrt(2 pi) (t - L/2)),
/// products over axes for d > 1, orthonormalized on the grid.
class HermiteBasis {
public:
    HermiteBasis(std::size_t count, GridSpec grid);

    std::size_t count() const noexcept { return functions_.size(); }
    const GridSpec& grid() const noexcept { return grid_; }
    const GridFn& operator[](std::size_t n) const { return functions_.at(n); }
    /// Max |G - I| over the discrete Gram matrix.
    double gram_defect() const;

private:
    GridSpec grid_;
    std::vector<GridFn> functions_;
};

/// A(e_mu (x) f) = sum over lambda of e_{mu+lambda}(x) (x) [e_lambda(y) a_lambda(D) f].
TensorTP apply_A(const APSymbol& a, const TensorTP& u);

/// Component -mu of the result is f_mu(y) e_{-mu}(y).
VectorField q_map(const TensorTP& u);

/// || Q A(a)(e_mu (x) phi_n) - U(a)(D) Q(e_mu (x) phi_n) ||. Requires m <= 0.
double equivalence_residual(const APSymbol& a, const Frequency& mu, std::size_t n, const HermiteBasis& basis);

/// Random element with `terms` frequency components drawn from `freqs`
/// and Hermite coefficients from the first `modes` functions of `basis`.
TensorTP random_tensor(const GeneratorSetPtr& gens, const std::vector<Frequency>& freqs, const HermiteBasis& basis,
                       std::size_t modes, std::size_t terms, std::mt19937_64& rng);

/// max over random u, v of |(A(a) u, v) - (u, A(a+) v)|.
double adjoint_residual_A(const APSymbol& a, int trials, const HermiteBasis& basis, std::uint64_t seed);

/// Blocks "# freq (..)" followed by lines "x,re,im" (one coordinate column per axis).
void write_tensor_csv(std::ostream& os, const TensorTP& u);

}  // namespace appdo
