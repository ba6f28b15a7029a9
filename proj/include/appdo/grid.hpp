#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "appdo/frequency.hpp"

namespace appdo {

using Complex = std::complex<double>;

/// Uniform periodic grid on [0, L)^d with N points per axis.
struct GridSpec {
    double L = 16.0;
    std::size_t N = 256;
    std::size_t dim = 1;

    /// Throws InputError unless L > 0, N >= 2 and dim >= 1.
    void validate() const;
    std::size_t total() const;
    double step() const { return L / static_cast<double>(N); }
    /// Spatial point of flat index i (last axis fastest).
    RealVector point(std::size_t i) const;
    /// DFT frequency of flat index i: (k < N/2 ? k : k - N) / L per axis.
    RealVector frequency(std::size_t i) const;

    bool operator==(const GridSpec&) const = default;
};

/// Complex samples on a GridSpec.
class GridFn {
public:
    GridFn() = default;
    explicit GridFn(GridSpec spec);
    GridFn(GridSpec spec, std::vector<Complex> values);
    /// Samples f at every grid point.
    static GridFn sample(GridSpec spec, const std::function<Complex(std::span<const double>)>& f);

    const GridSpec& spec() const noexcept { return spec_; }
    std::vector<Complex>& values() noexcept { return values_; }
    const std::vector<Complex>& values() const noexcept { return values_; }
    Complex& operator[](std::size_t i) { return values_[i]; }
    const Complex& operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const noexcept { return values_.size(); }

    GridFn& operator+=(const GridFn& o);
    GridFn& operator-=(const GridFn& o);
    friend GridFn operator+(GridFn a, const GridFn& b) { return a += b; }
    friend GridFn operator-(GridFn a, const GridFn& b) { return a -= b; }
    GridFn scaled(Complex c) const;
    /// Pointwise product with e^{2 pi i lambda.y}.
    GridFn modulated(const RealVector& lambda) const;

    /// (L/N)^d sum f conj(g).
    friend Complex l2_inner(const GridFn& f, const GridFn& g);
    double l2_norm() const;
    double max_abs() const;

private:
    GridSpec spec_;
    std::vector<Complex> values_;
};

/// Unnormalized forward DFT (sign -1), FFTW-backed.
std::vector<Complex> dft(const GridSpec& g, std::span<const Complex> values);
/// Inverse of dft(): sign +1, divided by N^d.
std::vector<Complex> idft(const GridSpec& g, std::span<const Complex> values);

/// IDFT[ m(xi_k) * DFT f ] with xi_k the grid frequencies.
GridFn apply_multiplier(const GridFn& f, const std::function<Complex(std::span<const double>)>& m);

}  // namespace appdo
