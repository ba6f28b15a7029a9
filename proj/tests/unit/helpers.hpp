#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "appdo/frequency.hpp"
#include "appdo/symbol.hpp"

namespace testing {

inline appdo::GeneratorSetPtr one() { return appdo::GeneratorSet::make(1, {{1.0}}); }
inline appdo::Frequency q1(appdo::Rational r) { return appdo::Frequency(std::vector<appdo::Rational>{r}); }
inline appdo::Frequency f(const std::string& t) { return appdo::Frequency::parse(t); }
inline appdo::CoeffFn cf(const char* t, std::size_t d = 1) { return appdo::CoeffFn::parse(t, d); }
inline double jb(double x) { return std::sqrt(1.0 + x * x); }

/// cos(2 pi g1 . x) times the given coefficient.
inline appdo::APSymbol cos_symbol(const appdo::GeneratorSetPtr& g, const char* coeff, appdo::SymbolClassParams c = {}) {
    std::vector<appdo::Rational> e(g->count());
    e[0] = 1;
    const appdo::Frequency one_(e);
    const auto half = cf(coeff) * appdo::CoeffFn::constant(appdo::Rational(1, 2), 1);
    return appdo::APSymbol(g, {{one_, half}, {-one_, half}}, c);
}

inline std::vector<appdo::RealVector> line(double a, double b, double step) {
    std::vector<appdo::RealVector> out;
    const int n = static_cast<int>(std::floor((b - a) / step + 1e-9));
    for (int k = 0; k <= n; ++k) out.push_back({a + k * step});
    return out;
}

}  // namespace testing
