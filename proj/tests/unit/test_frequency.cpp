#include <doctest.h>

#include <cmath>
#include <random>

#include "appdo/error.hpp"
#include "appdo/frequency.hpp"

using namespace appdo;

namespace {
GeneratorSetPtr one() { return GeneratorSet::make(1, {{1.0}}); }
GeneratorSetPtr two() { return GeneratorSet::make(1, {{1.0}, {std::sqrt(2.0)}}); }
Frequency q(std::initializer_list<Rational> c) { return Frequency(std::vector<Rational>(c)); }
std::vector<Frequency> ints(std::initializer_list<std::pair<int, int>> v) {
    std::vector<Frequency> out;
    for (auto [p, d] : v) out.push_back(q({Rational(p, d)}));
    return out;
}
}  // namespace

TEST_CASE("embed") {
    CHECK(embed(q({Rational(3, 2)}), *one())[0] == 1.5);
    CHECK(embed(q({1, -1}), *two())[0] == doctest::Approx(1.0 - 1.4142135623730951).epsilon(1e-15));
    CHECK(embed(q({0, 0}), *two())[0] == 0.0);
    CHECK_THROWS_AS(embed(q({1}), *two()), InputError);
}

TEST_CASE("generator probe rejects rational relations") {
    CHECK_THROWS_AS(GeneratorSet::make(1, {{1.0}, {0.5}}), DomainError);
    CHECK_THROWS_AS(GeneratorSet::make(1, {{std::sqrt(2.0)}, {std::sqrt(8.0)}}), DomainError);
    CHECK_THROWS_AS(GeneratorSet::make(2, {{1.0}}), InputError);
    CHECK_NOTHROW(GeneratorSet::make(2, {{1.0, 0.0}, {0.0, 1.0}, {std::sqrt(2.0), std::sqrt(3.0)}}));
}

TEST_CASE("window_enumerate examples") {
    auto w = window_enumerate(one(), 2, 1);
    CHECK(w.elements() == ints({{-2, 1}, {-1, 1}, {0, 1}, {1, 1}, {2, 1}}));
    auto h = window_enumerate(one(), 1, 2);
    CHECK(h.elements() == ints({{-1, 1}, {-1, 2}, {0, 1}, {1, 2}, {1, 1}}));
    auto w2 = window_enumerate(two(), 1, 1);
    std::vector<Frequency> brute;
    for (int a = -1; a <= 1; ++a) {
        for (int b = -1; b <= 1; ++b) brute.push_back(q({a, b}));
    }
    std::sort(brute.begin(), brute.end());
    CHECK(w2.elements() == brute);
    CHECK(w2.contains(Frequency::zero(2)));
    CHECK_THROWS_AS(window_enumerate(two(), 400, 1), CapExceeded);
    CHECK(window_enumerate(one(), 4, 1).size() == 9);
}

TEST_CASE("module_closure examples") {
    const std::vector<Frequency> f1{q({1})};
    CHECK(module_closure(one(), f1, 2).elements() == ints({{-2, 1}, {-1, 1}, {0, 1}, {1, 1}, {2, 1}}));
    CHECK(module_closure(one(), std::vector<Frequency>{}, 3).elements() == ints({{0, 1}}));
    const std::vector<Frequency> f2{q({Rational(1, 2)}), q({1})};
    // Brute force: all sums of at most two elements of {+-1/2, +-1}.
    std::vector<Frequency> pm;
    for (const auto& f : f2) {
        pm.push_back(f);
        pm.push_back(-f);
    }
    std::vector<Frequency> brute{Frequency::zero(1)};
    for (const auto& a : pm) {
        brute.push_back(a);
        for (const auto& b : pm) brute.push_back(a + b);
    }
    std::sort(brute.begin(), brute.end());
    brute.erase(std::unique(brute.begin(), brute.end()), brute.end());
    CHECK(module_closure(one(), f2, 2).elements() == brute);
    CHECK(brute.size() == 9);
}

TEST_CASE("frequency properties") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> num(-20, 20), den(1, 12);
    auto g = two();
    for (int t = 0; t < 200; ++t) {
        const Frequency a = q({Rational(num(rng), den(rng)), Rational(num(rng), den(rng))});
        const Frequency b = q({Rational(num(rng), den(rng)), Rational(num(rng), den(rng))});
        const auto ea = embed(a, *g), eb = embed(b, *g), es = embed(a + b, *g);
        CHECK(std::abs(es[0] - (ea[0] + eb[0])) <= 1e-12);
        CHECK((a == b) == (a - b).is_zero());
        CHECK(a == a);
        CHECK((a == b) == (b == a));
    }
    CHECK(window_enumerate(g, 2, 2).elements() == window_enumerate(g, 2, 2).elements());
}

TEST_CASE("frequency text round trip") {
    const Frequency f = q({Rational(-3, 2), 4});
    CHECK(f.str() == "(-3/2,4)");
    CHECK(Frequency::parse(f.str()) == f);
    CHECK(Frequency::parse("5") == q({5}));
    CHECK(Frequency::parse("[1, 1/3]") == q({1, Rational(1, 3)}));
    CHECK_THROWS_AS(Frequency::parse("(1,"), InputError);
}

TEST_CASE("frequency_from_real uses unit generators") {
    auto g = two();
    CHECK(frequency_from_real(*g, {0.75}) == q({Rational(3, 4), 0}));
    auto irr = GeneratorSet::make(1, {{std::sqrt(2.0)}});
    CHECK_THROWS_AS(frequency_from_real(*irr, {1.0}), InputError);
}
