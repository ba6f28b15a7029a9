#include "appdo/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "appdo/error.hpp"

namespace appdo {

void GridSpec::validate() const {
    if (!(L > 0.0) || !std::isfinite(L)) throw InputError("grid box length L must be positive");
    if (N < 2) throw InputError("grid needs at least 2 points per axis");
    if (dim < 1) throw InputError("grid dimension must be at least 1");
}

std::size_t GridSpec::total() const {
    std::size_t t = 1;
    for (std::size_t k = 0; k < dim; ++k) t *= N;
    return t;
}

RealVector GridSpec::point(std::size_t i) const {
    RealVector x(dim);
    for (std::size_t k = dim; k-- > 0;) {
        x[k] = static_cast<double>(i % N) * step();
        i /= N;
    }
    return x;
}

RealVector GridSpec::frequency(std::size_t i) const {
    RealVector xi(dim);
    const auto n = static_cast<long long>(N);
    for (std::size_t k = dim; k-- > 0;) {
        const auto j = static_cast<long long>(i % N);
        xi[k] = static_cast<double>(j < (n + 1) / 2 ? j : j - n) / L;
        i /= N;
    }
    return xi;
}

GridFn::GridFn(GridSpec spec) : spec_(spec) {
    spec_.validate();
    values_.assign(spec_.total(), Complex(0.0, 0.0));
}

GridFn::GridFn(GridSpec spec, std::vector<Complex> values) : spec_(spec), values_(std::move(values)) {
    spec_.validate();
    if (values_.size() != spec_.total()) throw InputError("grid function has the wrong number of samples");
}

GridFn GridFn::sample(GridSpec spec, const std::function<Complex(std::span<const double>)>& f) {
    GridFn out(spec);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(spec.point(i));
    return out;
}

GridFn& GridFn::operator+=(const GridFn& o) {
    if (!(spec_ == o.spec_)) throw InputError("grid functions live on different grids");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
}

GridFn& GridFn::operator-=(const GridFn& o) {
    if (!(spec_ == o.spec_)) throw InputError("grid functions live on different grids");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
}

GridFn GridFn::scaled(Complex c) const {
    GridFn out = *this;
    for (auto& v : out.values_) v *= c;
    return out;
}

GridFn GridFn::modulated(const RealVector& lambda) const {
    if (lambda.size() != spec_.dim) throw InputError("modulation frequency dimension mismatch");
    GridFn out = *this;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const RealVector y = spec_.point(i);
        double phase = 0.0;
        for (std::size_t k = 0; k < y.size(); ++k) phase += lambda[k] * y[k];
        out.values_[i] *= std::polar(1.0, 2.0 * std::numbers::pi * phase);
    }
    return out;
}

Complex l2_inner(const GridFn& f, const GridFn& g) {
    if (!(f.spec_ == g.spec_)) throw InputError("grid functions live on different grids");
    Complex s(0.0, 0.0);
    for (std::size_t i = 0; i < f.values_.size(); ++i) s += f.values_[i] * std::conj(g.values_[i]);
    return s * std::pow(f.spec_.step(), static_cast<double>(f.spec_.dim));
}

double GridFn::l2_norm() const {
    double s = 0.0;
    for (const auto& v : values_) s += std::norm(v);
    return std::sqrt(s * std::pow(spec_.step(), static_cast<double>(spec_.dim)));
}

double GridFn::max_abs() const {
    double m = 0.0;
    for (const auto& v : values_) m = std::max(m, std::abs(v));
    return m;
}

namespace {

struct PlanDeleter {
    void operator()(fftw_plan_s* p) const {
        if (p) fftw_destroy_plan(p);
    }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

fftw_plan plan_for(const GridSpec& g, int sign) {
    static std::map<std::tuple<std::size_t, std::size_t, int>, Plan> cache;
    std::lock_guard lock(planner_mutex());
    auto key = std::make_tuple(g.N, g.dim, sign);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second.get();
    std::vector<int> n(g.dim, static_cast<int>(g.N));
    const std::size_t total = g.total();
    auto* in = fftw_alloc_complex(total);
    auto* out = fftw_alloc_complex(total);
    fftw_plan p = fftw_plan_dft(static_cast<int>(g.dim), n.data(), in, out, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    if (!p) throw Error("FFTW could not create a plan");
    cache.emplace(key, Plan(p));
    return p;
}

std::vector<Complex> transform(const GridSpec& g, std::span<const Complex> values, int sign) {
    g.validate();
    if (values.size() != g.total()) throw InputError("transform input has the wrong number of samples");
    fftw_plan p = plan_for(g, sign);
    std::vector<Complex> in(values.begin(), values.end());
    std::vector<Complex> out(values.size());
    // std::complex<double> is layout-compatible with fftw_complex.
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(in.data()), reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

}  // namespace

std::vector<Complex> dft(const GridSpec& g, std::span<const Complex> values) { return transform(g, values, FFTW_FORWARD); }

std::vector<Complex> idft(const GridSpec& g, std::span<const Complex> values) {
    auto out = transform(g, values, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(g.total());
    for (auto& v : out) v *= scale;
    return out;
}

GridFn apply_multiplier(const GridFn& f, const std::function<Complex(std::span<const double>)>& m) {
    const GridSpec& g = f.spec();
    auto hat = dft(g, f.values());
    for (std::size_t i = 0; i < hat.size(); ++i) {
        if (hat[i] != Complex(0.0, 0.0)) hat[i] *= m(g.frequency(i));
    }
    return GridFn(g, idft(g, hat));
}

}  // namespace appdo
