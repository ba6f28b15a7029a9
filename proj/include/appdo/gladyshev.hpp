#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <map>
#include <vector>

#include "appdo/grid.hpp"
#include "appdo/symbol.hpp"

namespace appdo {

/// Windowed matrix U(a)(xi)_{lambda,lambda'} = a_{lambda'-lambda}(xi - lambda').
struct KernelMatrix {
    FrequencyWindow window;
    RealVector xi;
    Eigen::MatrixXcd entries;
    /// Differences lambda' - lambda carrying at least one nonzero entry.
    std::vector<Frequency> band;
};

KernelMatrix build_kernel(const APSymbol& a, const RealVector& xi, const FrequencyWindow& w);

/// Index sets of the connected components of the sparsity graph of K
/// (i ~ j when K(i,j) or K(j,i) is nonzero). Every block is sorted.
std::vector<std::vector<std::size_t>> kernel_blocks(const Eigen::MatrixXcd& K);

/// Submatrix of K on rows and columns `idx`.
Eigen::MatrixXcd principal_block(const Eigen::MatrixXcd& K, const std::vector<std::size_t>& idx);

/// Largest singular value, computed block by block.
double spectral_norm(const Eigen::MatrixXcd& K);

/// Window with weights <lambda>^s.
struct WeightedWindow {
    FrequencyWindow window;
    double s = 0.0;
    Eigen::VectorXd weights;

    WeightedWindow(FrequencyWindow w, double s);
};

/// Largest singular value of D_{s-m} K D_s^{-1}.
double weighted_norm(const KernelMatrix& K, double s, double m);

struct PositivityResult {
    bool hermitian = false;
    bool psd = false;
    /// Smallest eigenvalue of (K + K^H)/2.
    double min_eig = 0.0;
};

inline constexpr double kDefaultPositivityTol = 1e-10;

/// hermitian iff max|K - K^H| <= tol; psd iff also min_eig >= -tol ||K||.
PositivityResult positivity_check(const KernelMatrix& K, double tol = kDefaultPositivityTol);

/// ||U(a)(xi)|| on w for each xi. Requires m <= 0.
std::vector<double> isometry_sweep(const APSymbol& a, const std::vector<RealVector>& xi_list, const FrequencyWindow& w);

/// Components F_lambda on a periodic grid, indexed by frequency.
struct VectorField {
    GeneratorSetPtr gens;
    GridSpec grid;
    std::map<Frequency, GridFn> values;

    /// (sum over lambda of ||F_lambda||^2)^{1/2}.
    double l2_norm() const;
    VectorField& operator-=(const VectorField& o);
};

Complex field_inner(const VectorField& F, const VectorField& G);

/// Cap on the number of output components of apply_UaD.
inline constexpr std::size_t kFieldComponentCap = 100000;

/// (U(a)(D) F)_kappa = sum over nu in Lambda(a) of
/// IDFT[ a_nu(xi_k - kappa - nu) DFT F_{kappa + nu} ].
VectorField apply_UaD(const APSymbol& a, const VectorField& F, std::size_t cap = kFieldComponentCap);

/// CSV with a header row of frequencies and entries quoted as "re,im".
void write_kernel_csv(std::ostream& os, const KernelMatrix& K);

}  // namespace appdo
