#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "appdo/rational.hpp"

namespace appdo {

using RealVector = std::vector<double>;

/// Finitely many real vectors in R^d declared linearly independent over Q.
///
/// Frequencies are stored as exact rational coordinates over these
/// generators; the generators carry the irrational content numerically.
class GeneratorSet {
public:
    struct Options {
        /// Integer relations with coefficients up to this bound are probed.
        int probe_bound = 16;
        /// Relative tolerance under which a probed combination counts as zero.
        double probe_tol = 1e-10;
    };

    /// Validates dimensions and runs the rational-relation probe; throws
    /// InputError on a dimension mismatch and DomainError on a relation.
    static std::shared_ptr<const GeneratorSet> make(std::size_t dim, std::vector<RealVector> generators,
                                                    std::vector<std::string> names = {});
    static std::shared_ptr<const GeneratorSet> make(std::size_t dim, std::vector<RealVector> generators,
                                                    std::vector<std::string> names, const Options& opts);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t count() const noexcept { return generators_.size(); }
    const std::vector<RealVector>& generators() const noexcept { return generators_; }
    const std::vector<std::string>& names() const noexcept { return names_; }

    /// Index of a generator equal to the k-th unit vector, or -1.
    int unit_generator(std::size_t axis) const noexcept;

    bool operator==(const GeneratorSet& o) const { return dim_ == o.dim_ && generators_ == o.generators_; }

private:
    GeneratorSet() = default;
    std::size_t dim_ = 0;
    std::vector<RealVector> generators_;
    std::vector<std::string> names_;
};

using GeneratorSetPtr = std::shared_ptr<const GeneratorSet>;

/// True when both pointers denote the same generators (by value).
bool same_generators(const GeneratorSetPtr& a, const GeneratorSetPtr& b);

/// Element of the Q-module spanned by a GeneratorSet, in exact coordinates.
class Frequency {
public:
    Frequency() = default;
    explicit Frequency(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {}

    static Frequency zero(std::size_t rank) { return Frequency(std::vector<Rational>(rank)); }
    /// Generator `index` scaled by `c`.
    static Frequency unit(std::size_t rank, std::size_t index, Rational c = 1);

    std::size_t rank() const noexcept { return coeffs_.size(); }
    const std::vector<Rational>& coeffs() const noexcept { return coeffs_; }
    const Rational& operator[](std::size_t i) const { return coeffs_[i]; }
    bool is_zero() const noexcept;

    Frequency operator-() const;
    Frequency& operator+=(const Frequency& o);
    Frequency& operator-=(const Frequency& o);
    Frequency& operator*=(const Rational& c);
    friend Frequency operator+(Frequency a, const Frequency& b) { return a += b; }
    friend Frequency operator-(Frequency a, const Frequency& b) { return a -= b; }
    friend Frequency operator*(Frequency a, const Rational& c) { return a *= c; }

    friend bool operator==(const Frequency&, const Frequency&) = default;
    /// Lexicographic on coefficients.
    friend std::strong_ordering operator<=>(const Frequency& a, const Frequency& b);

    /// "(c1,c2,...)" with each coordinate in p/q form.
    std::string str() const;
    /// Inverse of str(); also accepts bare "c" for rank one.
    static Frequency parse(const std::string& text);

private:
    std::vector<Rational> coeffs_;
};

/// Sum of coeffs_i * generators_i in double precision.
RealVector embed(const Frequency& f, const GeneratorSet& g);

/// The frequency with embedding v, expressed through generators equal to the
/// unit vectors. Throws InputError when an axis has no unit generator or a
/// coordinate is not an exact dyadic or small-denominator rational.
Frequency frequency_from_real(const GeneratorSet& g, const RealVector& v);

/// Finite, sorted, duplicate-free set of frequencies over one GeneratorSet.
class FrequencyWindow {
public:
    FrequencyWindow() = default;
    /// Sorts and deduplicates `elements`.
    FrequencyWindow(GeneratorSetPtr gens, std::vector<Frequency> elements);

    const GeneratorSetPtr& generators() const noexcept { return gens_; }
    const std::vector<Frequency>& elements() const noexcept { return elements_; }
    std::size_t size() const noexcept { return elements_.size(); }
    const Frequency& operator[](std::size_t i) const { return elements_[i]; }

    /// Position of `f`, or -1 when absent.
    std::ptrdiff_t index_of(const Frequency& f) const;
    bool contains(const Frequency& f) const { return index_of(f) >= 0; }

    /// Minkowski sum with `shifts` (this + shifts), plus the window itself.
    FrequencyWindow padded(std::span<const Frequency> shifts) const;

    auto begin() const { return elements_.begin(); }
    auto end() const { return elements_.end(); }

private:
    GeneratorSetPtr gens_;
    std::vector<Frequency> elements_;
};

/// Default element cap for window enumeration and module closure.
inline constexpr std::size_t kDefaultWindowCap = 250000;

/// All frequencies with coordinates k/denom_bound, |k/denom_bound| <= coeff_bound.
FrequencyWindow window_enumerate(const GeneratorSetPtr& g, const Rational& coeff_bound,
                                 std::int64_t denom_bound, std::size_t cap = kDefaultWindowCap);

/// Sums of at most `depth` elements of freqs and their negatives.
FrequencyWindow module_closure(const GeneratorSetPtr& g, std::span<const Frequency> freqs, int depth,
                               std::size_t cap = kDefaultWindowCap);

}  // namespace appdo
