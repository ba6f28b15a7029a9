#include <doctest.h>

#include <random>
#include <sstream>

#include "appdo/error.hpp"
#include "appdo/gladyshev.hpp"
#include "appdo/verify.hpp"
#include "helpers.hpp"

using namespace appdo;
using namespace testing;

namespace {
double max_rel(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B) {
    const double scale = std::max(1.0, B.cwiseAbs().maxCoeff());
    return (A - B).cwiseAbs().maxCoeff() / scale;
}

Eigen::MatrixXcd restrict(const Eigen::MatrixXcd& K, const FrequencyWindow& big, const FrequencyWindow& small) {
    Eigen::MatrixXcd out(small.size(), small.size());
    for (std::size_t i = 0; i < small.size(); ++i) {
        for (std::size_t j = 0; j < small.size(); ++j) {
            out(i, j) = K(big.index_of(small[i]), big.index_of(small[j]));
        }
    }
    return out;
}
}  // namespace

TEST_CASE("identity kernel") {
    auto g = default_generators();
    const auto I = APSymbol::constant(g, 1.0);
    for (int r : {4, 8}) {
        const auto w = window_enumerate(g, r, 1);
        for (double xi : {0.0, 0.37, -2.0}) {
            const auto K = build_kernel(I, {xi}, w);
            CHECK(K.entries == Eigen::MatrixXcd::Identity(w.size(), w.size()));
            CHECK(K.band == std::vector<Frequency>{Frequency::zero(2)});
        }
    }
}

TEST_CASE("multiplier kernel is diagonal") {
    auto g = default_generators();
    const auto w = window_enumerate(g, 2, 1);
    const auto gx = cf("1/(2 + xi^2)");
    const auto K = build_kernel(APSymbol::multiplier(g, gx), {0.0}, w);
    for (std::size_t i = 0; i < w.size(); ++i) {
        for (std::size_t j = 0; j < w.size(); ++j) {
            const double lam = embed(w[i], *g)[0];
            const Complex want = i == j ? 1.0 / (2.0 + lam * lam) : 0.0;
            CHECK(std::abs(K.entries(i, j) - want) <= 1e-15);
        }
    }
}

TEST_CASE("character kernel sits on one off-diagonal") {
    auto g = one();
    const auto w = window_enumerate(g, 2, 1);  // -2..2
    const auto gx = cf("jbracket(xi)^(-1)");
    const double xi = 0.4;
    const auto K = build_kernel(APSymbol::character(g, q1(1), gx), {xi}, w);
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            const double lp = j - 2.0;
            const Complex want = (j - i == 1) ? 1.0 / jb(xi - lp) : 0.0;
            CHECK(std::abs(K.entries(i, j) - want) <= 1e-15);
        }
    }
    CHECK(K.band == std::vector<Frequency>{q1(1)});
}

TEST_CASE("homomorphism on padded windows") {
    auto g = default_generators();
    std::mt19937_64 rng(101);
    const auto w = window_enumerate(g, 2, 2);
    for (int t = 0; t < 8; ++t) {
        const auto a = random_symbol(g, rng), b = random_symbol(g, rng);
        const auto fa = a.frequencies();
        const auto wp = w.padded(fa);
        for (double xi : {0.0, -0.7, 1.9}) {
            const auto Kab = build_kernel(compose_symbols(a, b), {xi}, wp);
            const auto Ka = build_kernel(a, {xi}, wp), Kb = build_kernel(b, {xi}, wp);
            const Eigen::MatrixXcd prod = Ka.entries * Kb.entries;
            CHECK(max_rel(restrict(Kab.entries, wp, w), restrict(prod, wp, w)) <= 1e-10);
        }
    }
}

TEST_CASE("adjoint kernel and translation covariance") {
    auto g = default_generators();
    std::mt19937_64 rng(7);
    const auto w = window_enumerate(g, 2, 1);
    for (int t = 0; t < 10; ++t) {
        const auto a = random_symbol(g, rng);
        for (double xi : {0.0, 0.37, -2.0}) {
            const auto K = build_kernel(a, {xi}, w);
            const auto Kd = build_kernel(adjoint_symbol(a), {xi}, w);
            CHECK((Kd.entries - K.entries.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
            const auto Kt = build_kernel(translate_symbol(a, {0.5}), {xi}, w);
            const auto Ks = build_kernel(a, {xi + 0.5}, w);
            CHECK((Kt.entries - Ks.entries).cwiseAbs().maxCoeff() <= 1e-14);
        }
    }
}

TEST_CASE("translation covariance is exact on integer windows") {
    auto g = one();
    std::mt19937_64 rng(8);
    RandomSymbolOptions o;
    o.pool = {q1(0), q1(1), q1(-1), q1(2)};
    const auto w = window_enumerate(g, 4, 1);
    for (int t = 0; t < 10; ++t) {
        const auto a = random_symbol(g, rng, o);
        for (double xi : {0.0, 0.375, -2.0}) {
            for (double x0 : {0.5, -1.25, 3.0}) {
                CHECK(build_kernel(translate_symbol(a, {x0}), {xi}, w).entries == build_kernel(a, {xi + x0}, w).entries);
            }
        }
    }
}

TEST_CASE("kernel form matches the character action") {
    auto g = default_generators();
    std::mt19937_64 rng(19);
    const auto w = window_enumerate(g, 2, 1);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int t = 0; t < 10; ++t) {
        const auto a = random_symbol(g, rng);
        Eigen::VectorXcd vf(w.size()), vg(w.size());
        TPFunction::Coeffs cf_, cg;
        for (std::size_t i = 0; i < w.size(); ++i) {
            vf[i] = (t + i) % 3 == 0 ? Complex(u(rng), u(rng)) : 0.0;
            vg[i] = Complex(u(rng), u(rng));
            if (vf[i] != 0.0) cf_[-w[i]] = vf[i];
            cg[-w[i]] = vg[i];
        }
        const TPFunction fF(g, cf_), fG(g, cg);
        const Complex exact = besicovitch_inner(apply_to_tp(a, fF), fG);
        const auto K = build_kernel(a, {0.0}, w);
        const Complex form = vg.dot(K.entries * vf);
        CHECK(std::abs(exact - form) <= 1e-12);
    }
}

TEST_CASE("positivity") {
    auto g = default_generators();
    std::mt19937_64 rng(3);
    const auto w = window_enumerate(g, 2, 1);
    for (int t = 0; t < 5; ++t) {
        const auto b = random_symbol(g, rng);
        const auto bb = compose_symbols(adjoint_symbol(b), b);
        for (double xi : {-1.0, 0.0, 0.5}) {
            const auto r = positivity_check(build_kernel(bb, {xi}, w));
            CHECK(r.hermitian);
            CHECK(r.psd);
        }
    }
    const auto I = positivity_check(build_kernel(APSymbol::constant(g, 1.0), {0.0}, w));
    CHECK(I.psd);
    CHECK(std::abs(I.min_eig - 1.0) <= 1e-14);
    const auto e1 = APSymbol::character(g, Frequency::unit(2, 0), cf("1"));
    CHECK_FALSE(positivity_check(build_kernel(e1, {0.0}, w)).hermitian);
    const auto neg = APSymbol::multiplier(g, cf("xi"));
    const auto rn = positivity_check(build_kernel(neg, {0.0}, w));
    CHECK(rn.hermitian);
    CHECK_FALSE(rn.psd);
    CHECK(rn.min_eig < 0.0);
}

TEST_CASE("weighted norms") {
    auto g = default_generators();
    const auto w = window_enumerate(g, 2, 1);
    const auto KI = build_kernel(APSymbol::constant(g, 1.0), {0.3}, w);
    for (double s : {-1.0, 0.0, 2.0}) CHECK(std::abs(weighted_norm(KI, s, 0.0) - 1.0) <= 1e-14);
    const auto gx = cf("1/(2 + xi^2)");
    const auto K = build_kernel(APSymbol::multiplier(g, gx), {0.0}, w);
    double want = 0;
    for (const auto& l : w) want = std::max(want, std::abs(gx(-embed(l, *g)[0])));
    CHECK(std::abs(weighted_norm(K, 0.0, 0.0) - want) <= 1e-14);
    // Diagonal oracle for the weighted form: max <l>^{s-m} |g| <l>^{-s}.
    double wm = 0;
    for (const auto& l : w) {
        const double e = embed(l, *g)[0];
        wm = std::max(wm, std::pow(jb(e), 1.0) * std::abs(gx(-e)));
    }
    CHECK(std::abs(weighted_norm(K, 1.0, -1.0) - wm) <= 1e-12);
}

TEST_CASE("growth bound sweep") {
    auto g = default_generators();
    const auto w = window_enumerate(g, 4, 1);
    const auto a = cos_symbol(g, "jbracket(xi)^(-1)", {-1, 1, 0});
    const double m = -1;
    for (double s : {-1.0, 0.0, 1.0}) {
        const double p = std::abs(s) + std::abs(m - s);
        double C = 0;
        for (const auto& xi : line(-8, 8, 0.25)) {
            C = std::max(C, weighted_norm(build_kernel(a, xi, w), s, m) / std::pow(jb(xi[0]), p));
        }
        for (const auto& xi : line(-16, 16, 0.25)) {
            CHECK(weighted_norm(build_kernel(a, xi, w), s, m) <= C * std::pow(jb(xi[0]), p) * (1 + 1e-9));
        }
    }
}

TEST_CASE("isometry sweep") {
    auto g = default_generators();
    const std::vector<RealVector> xs{{0.0}, {0.3}, {1.0}, {2.0}};
    for (double v : isometry_sweep(APSymbol::constant(g, 1.0), xs, window_enumerate(g, 4, 1))) {
        CHECK(std::abs(v - 1.0) <= 1e-14);
    }
    auto deviation = [&](const APSymbol& a, int r) {
        const auto v = isometry_sweep(a, xs, window_enumerate(g, r, 1));
        double d = 0;
        for (double x : v) d = std::max(d, std::abs(x - v[0]));
        return d;
    };
    const auto mult = APSymbol::multiplier(g, cf("jbracket(xi)^(-1)"), {-1, 1, 0});
    const double d4 = deviation(mult, 4), d16 = deviation(mult, 16);
    CHECK(d16 <= d4);
    CHECK(d16 <= 0.05);
    CHECK(deviation(cos_symbol(g, "jbracket(xi)^(-2)", {-2, 1, 0}), 16) <= 0.05);
    CHECK_THROWS_AS(isometry_sweep(APSymbol::multiplier(g, cf("jbracket(xi)"), {1, 1, 0}), xs,
                                   window_enumerate(g, 2, 1)),
                    DomainError);
}

TEST_CASE("block utilities") {
    Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(4, 4);
    K(0, 2) = 3.0;
    K(1, 1) = -2.0;
    K(3, 3) = 1.0;
    const auto blocks = kernel_blocks(K);
    CHECK(blocks.size() == 3);
    CHECK(blocks[0] == std::vector<std::size_t>{0, 2});
    CHECK(std::abs(spectral_norm(K) - 3.0) <= 1e-14);
}

TEST_CASE("U(a)(D) on grid fields") {
    auto g = one();
    GridSpec grid;
    const auto phi = GridFn::sample(grid, [&](std::span<const double> x) {
        const double t = x[0] - grid.L / 2;
        return Complex(std::exp(-M_PI * t * t), 0.0);
    });
    VectorField F{g, grid, {{q1(1), phi}}};
    const auto same = apply_UaD(APSymbol::constant(g, 1.0), F);
    REQUIRE(same.values.size() == 1);
    CHECK((same.values.at(q1(1)) - phi).max_abs() <= 1e-14);

    const auto gx = cf("jbracket(xi)^(-1)");
    const auto out = apply_UaD(APSymbol::multiplier(g, gx), F);
    // Single-band oracle: multiply the DFT by g(xi_k - 1) directly.
    auto spec = dft(grid, phi.values());
    for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= gx(grid.frequency(k)[0] - 1.0);
    const GridFn want(grid, idft(grid, spec));
    CHECK((out.values.at(q1(1)) - want).max_abs() <= 1e-14);

    VectorField Z{g, grid, {}};
    CHECK(apply_UaD(APSymbol::multiplier(g, gx), Z).l2_norm() == 0.0);
}

TEST_CASE("kernel csv") {
    auto g = one();
    std::ostringstream os;
    write_kernel_csv(os, build_kernel(APSymbol::constant(g, 1.0), {0.0}, window_enumerate(g, 1, 1)));
    const std::string s = os.str();
    CHECK(s.rfind("\"freq\",\"(-1)\",\"(0)\",\"(1)\"\n", 0) == 0);
    CHECK(s.find("\"(0)\",\"0,0\",\"1,0\",\"0,0\"") != std::string::npos);
}
