#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "appdo/symbol.hpp"

namespace appdo {

/// d = 1 with generators {1, sqrt 2}.
GeneratorSetPtr default_generators();

struct RandomSymbolOptions {
    std::size_t max_terms = 3;
    /// Frequencies to draw from; defaults to 0, +-g1, +-g2, g1/2, g1 - g2.
    std::vector<Frequency> pool;
};

/// Trigonometric polynomial in x with coefficients drawn from
/// {c <xi>^p (p <= 0), c cos(xi) <xi>^-1, c exp(-xi^2/4), c/(2 + xi^2)};
/// every coefficient is bounded, so the class order is m = 0.
APSymbol random_symbol(const GeneratorSetPtr& gens, std::mt19937_64& rng, const RandomSymbolOptions& opts = {});

/// Random complex coefficients on `terms` distinct frequencies from `pool`.
TPFunction random_tp(const GeneratorSetPtr& gens, std::mt19937_64& rng, const std::vector<Frequency>& pool,
                     std::size_t terms);

struct VerifyEntry {
    std::string name;
    double measured = 0.0;
    double tol = 0.0;
    /// "<=" or ">=".
    std::string relation = "<=";
    bool pass = false;
};

struct VerifyReport {
    std::string suite;
    std::uint64_t seed = 0;
    std::vector<VerifyEntry> entries;

    bool all_pass() const;
    std::string text() const;
};

/// Suites: symbols, representation, cms, spectral, all.
VerifyReport run_verify(const std::string& suite, std::uint64_t seed);

std::vector<std::string> verify_suites();

}  // namespace appdo
