#pragma once

#include <iosfwd>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "appdo/cms.hpp"
#include "appdo/gladyshev.hpp"
#include "appdo/symbol.hpp"

namespace appdo {

enum class SpectralKind { Point, ContinuousWitness, FiniteSection, Essential };

std::string to_string(SpectralKind k);

struct SpectralValue {
    Complex approx;
    SpectralKind kind = SpectralKind::Point;
    /// Window radius for finite-section values, NaN otherwise.
    double window_radius = std::numeric_limits<double>::quiet_NaN();
    /// Grid point (xi or x) that produced the value, when there is one.
    RealVector at;
};

struct SpectrumReport {
    std::vector<SpectralValue> values;
    std::map<std::string, std::string> metadata;

    std::vector<Complex> of_kind(SpectralKind k) const;
};

/// Samples g over xi_grid as point spectrum; limits of g at infinity along
/// the coordinate axes that the grid does not attain are reported as
/// continuous-spectrum witnesses.
SpectrumReport multiplier_spectrum(const APSymbol& a, const std::vector<RealVector>& xi_grid);

/// Samples a(x) over x_grid; every value lies in the essential spectrum.
SpectrumReport multiplication_spectrum(const APSymbol& a, const std::vector<RealVector>& x_grid);

/// Eigenvalues of U(a)(xi) on w, sorted by real then imaginary part. Values of
/// non-Hermitian kernels are tagged advisory in the metadata.
SpectrumReport finite_section_spectrum(const APSymbol& a, const FrequencyWindow& w, const RealVector& xi,
                                       double window_radius = std::numeric_limits<double>::quiet_NaN());

/// Eigenvalues of U(a)(xi) on w, sorted.
std::vector<Complex> kernel_eigenvalues(const KernelMatrix& K, bool* hermitian = nullptr);

struct WeylSequenceResult {
    RealVector xi0;
    Complex s;
    std::vector<std::pair<RealVector, double>> residuals;
};

/// r_j^2 = |a_0(xi_j) - s|^2 + sum over lambda != 0 of |a_lambda(xi_j)|^2, s = a_0(xi0).
/// Throws DomainError unless every a_lambda(xi0), lambda != 0, vanishes to `hyp_tol`.
WeylSequenceResult weyl_residual(const APSymbol& a, const RealVector& xi0, const std::vector<RealVector>& xi_seq,
                                 double hyp_tol = 1e-12);

struct ResolventResult {
    bool solvable = false;
    double sigma_min = 0.0;
    double inv_norm = 0.0;
};

inline constexpr double kDefaultSolvableRel = 1e-8;

/// Smallest singular value of U(a)(xi) - s I on w; solvable iff it exceeds
/// threshold_rel ||U(a)(xi)||.
ResolventResult resolvent_window(const APSymbol& a, Complex s, const FrequencyWindow& w, const RealVector& xi,
                                 double threshold_rel = kDefaultSolvableRel);

/// Symmetric Hausdorff distance between finite subsets of C.
double hausdorff_distance(const std::vector<Complex>& A, const std::vector<Complex>& B);

struct InvarianceResult {
    double hausdorff_Ul2_vs_UxiD = 0.0;
    double hausdorff_Ul2_vs_A = 0.0;
    std::vector<Complex> set_U0;
    std::vector<Complex> set_Uxi;
    std::vector<Complex> set_A;
};

/// Rayleigh-Ritz values of A(a) compressed to span{e_mu (x) phi_n : mu in w, n < count}.
std::vector<Complex> compressed_A_spectrum(const APSymbol& a, const FrequencyWindow& w, const HermiteBasis& basis);

/// Compares eigenvalues of U(a)(0) on w, the union over xi_grid of those of
/// U(a)(xi), and the compressed spectrum of A. Requires m <= 0 and a Hermitian kernel.
InvarianceResult invariance_check(const APSymbol& a, const FrequencyWindow& w, const std::vector<RealVector>& xi_grid,
                                  const HermiteBasis& basis, double herm_tol = kDefaultPositivityTol);

/// value_re,value_im,kind,window_radius
void write_spectrum_csv(std::ostream& os, const SpectrumReport& r);

}  // namespace appdo
