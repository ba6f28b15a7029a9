#include "appdo/frequency.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "appdo/error.hpp"

namespace appdo {

std::shared_ptr<const GeneratorSet> GeneratorSet::make(std::size_t dim, std::vector<RealVector> generators,
                                                       std::vector<std::string> names) {
    return make(dim, std::move(generators), std::move(names), Options{});
}

std::shared_ptr<const GeneratorSet> GeneratorSet::make(std::size_t dim, std::vector<RealVector> generators,
                                                       std::vector<std::string> names, const Options& opts) {
    if (dim == 0) throw InputError("generator dimension must be positive");
    if (generators.empty()) throw InputError("at least one generator is required");
    for (std::size_t i = 0; i < generators.size(); ++i) {
        if (generators[i].size() != dim) {
            throw InputError("generator " + std::to_string(i) + " has length " +
                             std::to_string(generators[i].size()) + ", expected dim " + std::to_string(dim));
        }
        for (double v : generators[i]) {
            if (!std::isfinite(v)) throw InputError("generator " + std::to_string(i) + " is not finite");
        }
    }
    if (names.empty()) {
        for (std::size_t i = 0; i < generators.size(); ++i) names.push_back("g" + std::to_string(i + 1));
    }
    if (names.size() != generators.size()) throw InputError("generator name count does not match generator count");

    // Probe for small integer relations sum c_i g_i = 0 (which covers all
    // rational relations with bounded denominators after clearing them).
    const std::size_t r = generators.size();
    const int bound = opts.probe_bound;
    double combos = 1.0;
    for (std::size_t i = 0; i < r; ++i) combos *= 2.0 * bound + 1.0;
    if (combos > 5e6) throw CapExceeded("independence probe too large; lower probe_bound");
    std::vector<int> c(r, -bound);
    while (true) {
        bool nonzero = std::any_of(c.begin(), c.end(), [](int v) { return v != 0; });
        // Only the first nonzero coefficient positive: each relation once.
        auto first = std::find_if(c.begin(), c.end(), [](int v) { return v != 0; });
        if (nonzero && *first > 0) {
            double norm_sum = 0.0, scale = 0.0;
            for (std::size_t k = 0; k < dim; ++k) {
                double s = 0.0;
                for (std::size_t i = 0; i < r; ++i) {
                    s += c[i] * generators[i][k];
                    scale += std::abs(c[i] * generators[i][k]);
                }
                norm_sum += std::abs(s);
            }
            if (norm_sum <= opts.probe_tol * std::max(scale, 1.0)) {
                std::ostringstream os;
                os << "generators are not Q-independent: relation";
                for (std::size_t i = 0; i < r; ++i) os << ' ' << c[i] << '*' << names[i];
                os << " = 0";
                throw DomainError(os.str());
            }
        }
        std::size_t i = 0;
        while (i < r && c[i] == bound) {
            c[i] = -bound;
            ++i;
        }
        if (i == r) break;
        ++c[i];
    }

    auto gs = std::shared_ptr<GeneratorSet>(new GeneratorSet());
    gs->dim_ = dim;
    gs->generators_ = std::move(generators);
    gs->names_ = std::move(names);
    return gs;
}

int GeneratorSet::unit_generator(std::size_t axis) const noexcept {
    for (std::size_t i = 0; i < generators_.size(); ++i) {
        bool unit = true;
        for (std::size_t k = 0; k < dim_; ++k) {
            if (generators_[i][k] != (k == axis ? 1.0 : 0.0)) unit = false;
        }
        if (unit) return static_cast<int>(i);
    }
    return -1;
}

bool same_generators(const GeneratorSetPtr& a, const GeneratorSetPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

Frequency Frequency::unit(std::size_t rank, std::size_t index, Rational c) {
    Frequency f = zero(rank);
    f.coeffs_.at(index) = c;
    return f;
}

bool Frequency::is_zero() const noexcept {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& q) { return q.is_zero(); });
}

Frequency Frequency::operator-() const {
    Frequency f = *this;
    for (auto& q : f.coeffs_) q = -q;
    return f;
}

Frequency& Frequency::operator+=(const Frequency& o) {
    if (o.rank() != rank()) throw InputError("frequency rank mismatch");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
}

Frequency& Frequency::operator-=(const Frequency& o) {
    if (o.rank() != rank()) throw InputError("frequency rank mismatch");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
}

Frequency& Frequency::operator*=(const Rational& c) {
    for (auto& q : coeffs_) q *= c;
    return *this;
}

std::strong_ordering operator<=>(const Frequency& a, const Frequency& b) {
    return std::lexicographical_compare_three_way(a.coeffs_.begin(), a.coeffs_.end(), b.coeffs_.begin(),
                                                  b.coeffs_.end());
}

std::string Frequency::str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (i) s += ',';
        s += coeffs_[i].str();
    }
    return s + ")";
}

Frequency Frequency::parse(const std::string& text) {
    std::string body = text;
    auto l = body.find_first_not_of(" \t");
    auto r = body.find_last_not_of(" \t");
    if (l == std::string::npos) throw InputError("empty frequency");
    body = body.substr(l, r - l + 1);
    if (body.front() == '(' || body.front() == '[') {
        const char close = body.front() == '(' ? ')' : ']';
        if (body.back() != close) throw InputError("unbalanced frequency tuple '" + text + "'");
        body = body.substr(1, body.size() - 2);
    }
    std::vector<Rational> coeffs;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) coeffs.push_back(Rational::parse(item));
    if (coeffs.empty()) throw InputError("empty frequency tuple '" + text + "'");
    return Frequency(std::move(coeffs));
}

RealVector embed(const Frequency& f, const GeneratorSet& g) {
    if (f.rank() != g.count()) {
        throw InputError("frequency has " + std::to_string(f.rank()) + " coordinates but the generator set has " +
                         std::to_string(g.count()));
    }
    RealVector v(g.dim(), 0.0);
    for (std::size_t i = 0; i < f.rank(); ++i) {
        if (f[i].is_zero()) continue;
        const double c = f[i].to_double();
        for (std::size_t k = 0; k < g.dim(); ++k) v[k] += c * g.generators()[i][k];
    }
    return v;
}

Frequency frequency_from_real(const GeneratorSet& g, const RealVector& v) {
    if (v.size() != g.dim()) throw InputError("vector has the wrong dimension for the generator set");
    std::vector<Rational> c(g.count());
    for (std::size_t k = 0; k < g.dim(); ++k) {
        if (v[k] == 0.0) continue;
        const int idx = g.unit_generator(k);
        if (idx < 0) throw InputError("no generator equals unit vector " + std::to_string(k + 1));
        c[static_cast<std::size_t>(idx)] = Rational::from_double(v[k]);
    }
    return Frequency(std::move(c));
}

FrequencyWindow::FrequencyWindow(GeneratorSetPtr gens, std::vector<Frequency> elements)
    : gens_(std::move(gens)), elements_(std::move(elements)) {
    for (const auto& f : elements_) {
        if (gens_ && f.rank() != gens_->count()) throw InputError("window element rank mismatch");
    }
    std::sort(elements_.begin(), elements_.end());
    elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
}

std::ptrdiff_t FrequencyWindow::index_of(const Frequency& f) const {
    auto it = std::lower_bound(elements_.begin(), elements_.end(), f);
    if (it == elements_.end() || *it != f) return -1;
    return it - elements_.begin();
}

FrequencyWindow FrequencyWindow::padded(std::span<const Frequency> shifts) const {
    std::vector<Frequency> out = elements_;
    for (const auto& f : elements_) {
        for (const auto& s : shifts) out.push_back(f + s);
    }
    return FrequencyWindow(gens_, std::move(out));
}

FrequencyWindow window_enumerate(const GeneratorSetPtr& g, const Rational& coeff_bound, std::int64_t denom_bound,
                                 std::size_t cap) {
    if (!g) throw InputError("window_enumerate needs a generator set");
    if (coeff_bound <= Rational(0)) throw InputError("coeff_bound must be positive");
    if (denom_bound <= 0) throw InputError("denom_bound must be positive");
    // Rationals with denominator dividing D are exactly k/D.
    const Rational kmax_q = coeff_bound * Rational(denom_bound);
    const std::int64_t kmax = kmax_q.num() / kmax_q.den();
    const std::size_t per_axis = static_cast<std::size_t>(2 * kmax + 1);
    double total = 1.0;
    for (std::size_t i = 0; i < g->count(); ++i) total *= static_cast<double>(per_axis);
    if (total > static_cast<double>(cap)) {
        throw CapExceeded("window of " + std::to_string(static_cast<long long>(total)) +
                          " elements exceeds the cap of " + std::to_string(cap));
    }
    std::vector<Rational> values;
    values.reserve(per_axis);
    for (std::int64_t k = -kmax; k <= kmax; ++k) values.emplace_back(k, denom_bound);

    const std::size_t r = g->count();
    std::vector<Frequency> out;
    out.reserve(static_cast<std::size_t>(total));
    std::vector<std::size_t> idx(r, 0);
    while (true) {
        std::vector<Rational> c(r);
        for (std::size_t i = 0; i < r; ++i) c[i] = values[idx[i]];
        out.emplace_back(std::move(c));
        std::size_t i = r;
        while (i > 0) {
            --i;
            if (++idx[i] < per_axis) break;
            idx[i] = 0;
            if (i == 0) return FrequencyWindow(g, std::move(out));
        }
    }
}

FrequencyWindow module_closure(const GeneratorSetPtr& g, std::span<const Frequency> freqs, int depth,
                               std::size_t cap) {
    if (!g) throw InputError("module_closure needs a generator set");
    if (depth <= 0) throw InputError("closure depth must be positive");
    std::set<Frequency> steps;
    for (const auto& f : freqs) {
        if (f.rank() != g->count()) throw InputError("frequency rank does not match the generator set");
        steps.insert(f);
        steps.insert(-f);
    }
    std::set<Frequency> current{Frequency::zero(g->count())};
    std::set<Frequency> frontier = current;
    for (int d = 0; d < depth && !frontier.empty(); ++d) {
        std::set<Frequency> next;
        for (const auto& base : frontier) {
            for (const auto& s : steps) {
                Frequency f = base + s;
                if (!current.contains(f)) next.insert(std::move(f));
            }
        }
        current.insert(next.begin(), next.end());
        if (current.size() > cap) {
            throw CapExceeded("module closure exceeds the cap of " + std::to_string(cap) + " elements");
        }
        frontier = std::move(next);
    }
    return FrequencyWindow(g, {current.begin(), current.end()});
}

}  // namespace appdo
