#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "appdo/cms.hpp"
#include "appdo/error.hpp"
#include "appdo/gladyshev.hpp"
#include "appdo/spectral.hpp"
#include "appdo/verify.hpp"
#include "helpers.hpp"

using namespace appdo;
using namespace testing;

namespace {
APSymbol weyl_symbol(const GeneratorSetPtr& g) {
    return APSymbol::multiplier(g, cf("jbracket(xi)^(-1)"), {-1, 1, 0}) +
           cos_symbol(g, "xi*jbracket(xi)^(-3)", {-2, 1, 0});
}

/// Closed form of the residual for weyl_symbol at xi0 = 0.
double weyl_oracle(double t) {
    const double b = std::sqrt(1.0 + t * t);
    return std::sqrt((1.0 / b - 1.0) * (1.0 / b - 1.0) + t * t / std::pow(b, 6) / 2.0);
}
}  // namespace

TEST_CASE("multiplier spectrum") {
    auto g = one();
    const auto grid = line(-8, 8, 0.25);
    const auto c = multiplier_spectrum(APSymbol::constant(g, Complex(2.0, -1.0)), grid);
    CHECK(c.of_kind(SpectralKind::ContinuousWitness).empty());
    for (const auto& v : c.values) CHECK(v.approx == Complex(2.0, -1.0));

    const auto gx = cf("jbracket(xi)^(-2)");
    const auto a = APSymbol::multiplier(g, gx);
    const auto r = multiplier_spectrum(a, grid);
    const auto pts = r.of_kind(SpectralKind::Point);
    CHECK(std::find(pts.begin(), pts.end(), Complex(1.0, 0.0)) != pts.end());
    const auto wit = r.of_kind(SpectralKind::ContinuousWitness);
    REQUIRE(wit.size() >= 1);
    CHECK(std::abs(wit.front()) <= 1e-12);
    for (const auto& v : r.values) {
        if (v.kind != SpectralKind::Point) continue;
        const Frequency xi = frequency_from_real(*g, v.at);
        const auto out = apply_to_tp(a, TPFunction::character(g, xi));
        CHECK(out.coeffs().size() == 1);
        CHECK(out.coeff(xi) == v.approx);
    }
    CHECK_THROWS_AS(multiplier_spectrum(cos_symbol(g, "1"), grid), DomainError);
}

TEST_CASE("multiplication spectrum") {
    auto g = one();
    const auto grid = line(0, 1, 1.0 / 64);
    const auto r = multiplication_spectrum(cos_symbol(g, "1"), grid);
    std::vector<double> re;
    for (const auto& v : r.values) {
        CHECK(v.kind == SpectralKind::Essential);
        CHECK(std::abs(v.approx.imag()) <= 1e-15);
        re.push_back(v.approx.real());
    }
    std::sort(re.begin(), re.end());
    CHECK(std::abs(re.front() + 1.0) <= 1e-15);
    CHECK(std::abs(re.back() - 1.0) <= 1e-15);
    for (std::size_t i = 1; i < re.size(); ++i) CHECK(re[i] - re[i - 1] <= 2 * M_PI / 64);

    const auto cst = multiplication_spectrum(APSymbol::constant(g, 3.0), grid);
    for (const auto& v : cst.values) CHECK(v.approx == Complex(3.0, 0.0));

    const auto e1 = multiplication_spectrum(APSymbol::character(g, q1(1), cf("1")), grid);
    for (const auto& v : e1.values) CHECK(std::abs(std::abs(v.approx) - 1.0) <= 1e-15);
    CHECK_THROWS_AS(multiplication_spectrum(APSymbol::multiplier(g, cf("xi")), grid), DomainError);
}

TEST_CASE("finite-section spectra") {
    auto g = default_generators();
    const auto w = window_enumerate(g, 3, 1);
    for (const auto& v : finite_section_spectrum(APSymbol::constant(g, 1.0), w, {0.0}).values) {
        CHECK(std::abs(v.approx - 1.0) <= 1e-14);
        CHECK(v.kind == SpectralKind::FiniteSection);
    }
    const auto gx = cf("1/(2 + xi^2)");
    std::vector<double> want;
    for (const auto& l : w) want.push_back(gx(-embed(l, *g)[0]).real());
    std::sort(want.begin(), want.end());
    const auto r = finite_section_spectrum(APSymbol::multiplier(g, gx), w, {0.0});
    REQUIRE(r.values.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) CHECK(std::abs(r.values[i].approx - want[i]) <= 1e-15);

    std::mt19937_64 rng(6);
    const auto b = random_symbol(g, rng);
    const auto bb = compose_symbols(adjoint_symbol(b), b);
    const auto K = build_kernel(bb, {0.0}, w);
    const double nk = spectral_norm(K.entries);
    for (const auto& v : finite_section_spectrum(bb, w, {0.0}).values) {
        CHECK(v.approx.imag() == 0.0);
        CHECK(v.approx.real() >= -1e-10 * nk);
    }
    const auto e1 = APSymbol::character(g, f("(1,0)"), cf("1"));
    CHECK(finite_section_spectrum(e1, w, {0.0}).metadata.count("advisory") == 1);
}

TEST_CASE("finite sections lie in the numerical range of larger windows") {
    auto g = default_generators();
    std::mt19937_64 rng(9);
    for (int t = 0; t < 4; ++t) {
        const auto b = random_symbol(g, rng);
        const auto h = b + adjoint_symbol(b);
        const auto small = kernel_eigenvalues(build_kernel(h, {0.2}, window_enumerate(g, 2, 1)));
        const auto large = kernel_eigenvalues(build_kernel(h, {0.2}, window_enumerate(g, 4, 1)));
        for (const auto& v : small) {
            CHECK(v.real() >= large.front().real() - 1e-10);
            CHECK(v.real() <= large.back().real() + 1e-10);
        }
    }
}

TEST_CASE("Weyl residuals") {
    auto g = one();
    const auto gx = cf("jbracket(xi)^(-2)");
    const auto m = APSymbol::multiplier(g, gx);
    const auto rm = weyl_residual(m, {0.5}, {{0.5}, {1.0}, {-3.0}});
    for (const auto& [xi, r] : rm.residuals) CHECK(std::abs(r - std::abs(gx(xi[0]) - gx(0.5))) <= 1e-15);

    const auto a = weyl_symbol(g);
    std::vector<RealVector> seq;
    for (int k = 1; k <= 10; ++k) seq.push_back({std::ldexp(1.0, -k)});
    seq.push_back({0.1});
    seq.push_back({0.0});
    const auto r = weyl_residual(a, {0.0}, seq);
    CHECK(std::abs(r.s - 1.0) <= 1e-15);
    for (std::size_t j = 0; j < seq.size(); ++j) {
        const double rj = r.residuals[j].second;
        CHECK(std::abs(rj - weyl_oracle(seq[j][0])) <= 1e-12);
        // Independent path: B2 norm of (a - s) applied to the character e_xi.
        if (seq[j][0] != 0.0) {
            const auto e = TPFunction::character(g, frequency_from_real(*g, seq[j]));
            const auto out = apply_to_tp(a - APSymbol::constant(g, r.s), e);
            CHECK(std::abs(besicovitch_sobolev_norm(out, 0) - rj) <= 1e-12);
        }
        if (j > 0 && j < 10) CHECK(rj < r.residuals[j - 1].second);
    }
    CHECK(std::abs(r.residuals[10].second - weyl_oracle(0.1)) <= 1e-9);
    CHECK(std::abs(r.residuals[10].second - 0.0698) <= 1e-4);
    CHECK(r.residuals[11].second == 0.0);
    CHECK_THROWS_AS(weyl_residual(a, {0.5}, seq), DomainError);
}

TEST_CASE("windowed resolvents") {
    auto g = default_generators();
    const auto w = window_enumerate(g, 3, 1);
    const auto I = resolvent_window(APSymbol::constant(g, 1.0), 0.0, w, {0.0});
    CHECK(I.solvable);
    CHECK(std::abs(I.inv_norm - 1.0) <= 1e-14);

    const auto gx = cf("1/(2 + xi^2)");
    const auto m = APSymbol::multiplier(g, gx);
    const Complex hit = gx(-embed(w[5], *g)[0]);
    const auto r = resolvent_window(m, hit, w, {0.0});
    CHECK_FALSE(r.solvable);
    CHECK(r.sigma_min <= 1e-15);

    std::mt19937_64 rng(14);
    for (int t = 0; t < 4; ++t) {
        const auto b = random_symbol(g, rng);
        const auto h = b + adjoint_symbol(b);
        const auto ri = resolvent_window(h, Complex(0, 1), w, {0.3});
        CHECK(ri.inv_norm <= 1.0 + 1e-12);
        const auto eig = kernel_eigenvalues(build_kernel(h, {0.3}, w));
        for (Complex s : {Complex(0.1, 0.05), Complex(-0.4, 0.0), Complex(2.0, 1.0)}) {
            double d = 1e300;
            for (const auto& e : eig) d = std::min(d, std::abs(e - s));
            const auto rs = resolvent_window(h, s, w, {0.3});
            CHECK(std::abs(1.0 / rs.inv_norm - d) <= 1e-9 * std::max(d, 1e-300) + 1e-15);
        }
    }
}

TEST_CASE("Hausdorff distance") {
    const std::vector<Complex> A{0.0, 1.0}, B{0.0, 1.0, 3.0};
    CHECK(hausdorff_distance(A, B) == 2.0);
    CHECK(hausdorff_distance(B, A) == 2.0);
    CHECK(hausdorff_distance(A, A) == 0.0);
}

TEST_CASE("invariance across representations") {
    auto g = default_generators();
    const HermiteBasis B(12, GridSpec{});
    const auto xs = line(-1, 1, 0.25);
    const auto I = invariance_check(APSymbol::constant(g, 1.0), window_enumerate(g, 2, 1), xs, B);
    CHECK(I.hausdorff_Ul2_vs_UxiD <= 1e-12);
    CHECK(I.hausdorff_Ul2_vs_A <= 1e-8);
    const auto m = APSymbol::multiplier(g, cf("1/(2 + xi^2)"), {-2, 1, 0});
    const auto r = invariance_check(m, window_enumerate(g, 16, 1), xs, B);
    CHECK(r.hausdorff_Ul2_vs_UxiD <= 0.05);
    CHECK_THROWS_AS(invariance_check(APSymbol::character(g, f("(1,0)"), cf("1")), window_enumerate(g, 2, 1), xs, B),
                    DomainError);
}

TEST_CASE("spectrum csv") {
    auto g = one();
    std::ostringstream os;
    write_spectrum_csv(os, finite_section_spectrum(APSymbol::constant(g, 1.0), window_enumerate(g, 1, 1), {0.0}, 1.0));
    CHECK(os.str().rfind("value_re,value_im,kind,window_radius\n1,0,finite-section,1\n", 0) == 0);
}
