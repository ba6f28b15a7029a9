// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
// Usage: acceptance <path-to-appdo-cli> <symbol-data-dir> <scratch-dir>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "appdo/cms.hpp"
#include "appdo/error.hpp"
#include "appdo/gladyshev.hpp"
#include "appdo/spectral.hpp"
#include "appdo/symbol_file.hpp"
#include "appdo/verify.hpp"

using namespace appdo;
namespace fs = std::filesystem;

namespace {

int g_failed = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
    std::printf("%s %2d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failed;
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

CoeffFn cf(const char* t) { return CoeffFn::parse(t, 1); }
double jb(double x) { return std::sqrt(1.0 + x * x); }

Frequency g1(const GeneratorSetPtr& g, Rational c = 1) { return Frequency::unit(g->count(), 0, c); }

APSymbol cos_symbol(const GeneratorSetPtr& g, const char* coeff, SymbolClassParams c = {}) {
    const auto half = cf(coeff) * CoeffFn::constant(Rational(1, 2), 1);
    return APSymbol(g, {{g1(g), half}, {-g1(g), half}}, c);
}

std::vector<RealVector> line(double a, double b, double step) {
    std::vector<RealVector> out;
    const int n = static_cast<int>(std::floor((b - a) / step + 1e-9));
    for (int k = 0; k <= n; ++k) out.push_back({a + k * step});
    return out;
}

Eigen::MatrixXcd restrict(const Eigen::MatrixXcd& K, const FrequencyWindow& big, const FrequencyWindow& small) {
    Eigen::MatrixXcd out(small.size(), small.size());
    for (std::size_t i = 0; i < small.size(); ++i) {
        for (std::size_t j = 0; j < small.size(); ++j) out(i, j) = K(big.index_of(small[i]), big.index_of(small[j]));
    }
    return out;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

int run(const std::string& cmd, const std::string& stdout_to = "/dev/null") {
    const int rc = std::system((cmd + " >" + stdout_to + " 2>/dev/null").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

/// Regression symbols: the multiplier <xi>^-1 and cos(2 pi x) <xi>^-2.
std::vector<APSymbol> regression_symbols(const GeneratorSetPtr& g) {
    return {APSymbol::multiplier(g, cf("jbracket(xi)^(-1)"), {-1, 1, 0}),
            cos_symbol(g, "jbracket(xi)^(-2)", {-2, 1, 0})};
}

void c1_identity() {
    auto g = default_generators();
    const auto I = APSymbol::constant(g, 1.0);
    double worst = 0;
    for (int r : {4, 8}) {
        const auto w = window_enumerate(g, r, 1);
        for (double xi : {0.0, 0.37, -2.0}) {
            const auto K = build_kernel(I, {xi}, w);
            worst = std::max(worst, (K.entries - Eigen::MatrixXcd::Identity(w.size(), w.size())).cwiseAbs().maxCoeff());
        }
    }
    report(1, "identity kernel", worst == 0.0, fmt("max|U(1)(xi) - I| = %.3e (exact required)", worst));
}

void c2_homomorphism() {
    auto g = default_generators();
    std::mt19937_64 rng(20260001);
    const auto w = window_enumerate(g, 3, 1);
    double worst = 0;
    for (int t = 0; t < 20; ++t) {
        const auto a = random_symbol(g, rng), b = random_symbol(g, rng);
        const auto fa = a.frequencies();
        const auto wp = w.padded(fa);
        for (double xi : {0.0, 0.37, -2.0}) {
            const Eigen::MatrixXcd lhs = restrict(build_kernel(compose_symbols(a, b), {xi}, wp).entries, wp, w);
            const Eigen::MatrixXcd prod = build_kernel(a, {xi}, wp).entries * build_kernel(b, {xi}, wp).entries;
            const Eigen::MatrixXcd rhs = restrict(prod, wp, w);
            const double scale = std::max(rhs.cwiseAbs().maxCoeff(), 1e-300);
            worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff() / scale);
        }
    }
    report(2, "homomorphism", worst <= 1e-10, fmt("max relative error %.3e <= 1e-10 over 20 pairs", worst));
}

void c3_adjoint() {
    auto g = default_generators();
    std::mt19937_64 rng(20260002);
    const auto w = window_enumerate(g, 3, 1);
    double worst = 0;
    int structural = 0;
    for (int t = 0; t < 20; ++t) {
        const auto a = random_symbol(g, rng);
        const auto ad = adjoint_symbol(a);
        if (adjoint_symbol(ad) == a) ++structural;
        for (double xi : {0.0, 0.37, -2.0}) {
            const auto K = build_kernel(a, {xi}, w), Kd = build_kernel(ad, {xi}, w);
            worst = std::max(worst, (Kd.entries - K.entries.adjoint()).cwiseAbs().maxCoeff());
        }
    }
    report(3, "adjoint", worst <= 1e-12 && structural == 20,
           fmt("max|U(a+) - U(a)^H| = %.3e <= 1e-12; ", worst) + std::to_string(structural) +
               "/20 involutions structurally equal");
}

void c4_positivity() {
    auto g = default_generators();
    std::mt19937_64 rng(20260003);
    const auto w = window_enumerate(g, 3, 1);
    double worst = 1e300;
    bool all = true;
    for (int t = 0; t < 10; ++t) {
        const auto b = random_symbol(g, rng);
        const auto bb = compose_symbols(adjoint_symbol(b), b);
        for (double xi : {-2.0, -0.5, 0.0, 0.37, 1.5}) {
            const auto K = build_kernel(bb, {xi}, w);
            const auto r = positivity_check(K);
            all = all && r.psd;
            worst = std::min(worst, r.min_eig / std::max(spectral_norm(K.entries), 1e-300));
        }
    }
    const auto neg = positivity_check(build_kernel(APSymbol::multiplier(g, cf("xi")), {0.0}, w));
    const bool rejected = neg.hermitian && !neg.psd && neg.min_eig < 0;
    report(4, "positivity", all && rejected,
           fmt("min lambda_min/||K|| = %.3e >= -1e-10 over 50 kernels; ", worst) +
               fmt("negative multiplier rejected with lambda_min = %.3f", neg.min_eig));
}

void c5_character() {
    auto g = default_generators();
    std::mt19937_64 rng(20260005);
    std::uniform_real_distribution<double> u(-1, 1);
    const auto w = window_enumerate(g, 2, 1);
    double worst = 0;
    for (int t = 0; t < 20; ++t) {
        const auto a = random_symbol(g, rng);
        Eigen::VectorXcd vf = Eigen::VectorXcd::Zero(w.size()), vg(w.size());
        TPFunction::Coeffs cf_, cg;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (u(rng) > 0.3) {
                vf[i] = Complex(u(rng), u(rng));
                cf_[-w[i]] = vf[i];
            }
            vg[i] = Complex(u(rng), u(rng));
            cg[-w[i]] = vg[i];
        }
        const Complex exact = besicovitch_inner(apply_to_tp(a, TPFunction(g, cf_)), TPFunction(g, cg));
        const Complex form = vg.dot(build_kernel(a, {0.0}, w).entries * vf);
        worst = std::max(worst, std::abs(exact - form));
    }
    report(5, "character consistency", worst <= 1e-12, fmt("max|(a f, g)_B - <U(a)(0) Rf, Rg>| = %.3e <= 1e-12", worst));
}

void c6_isometry() {
    auto g = default_generators();
    const std::vector<RealVector> xs{{0.0}, {0.3}, {1.0}, {2.0}};
    bool ok = true;
    std::string detail;
    const char* names[] = {"<xi>^-1", "cos(2pi x)<xi>^-2"};
    int idx = 0;
    for (const auto& a : regression_symbols(g)) {
        std::vector<double> dev;
        for (int r : {4, 8, 16}) {
            const auto v = isometry_sweep(a, xs, window_enumerate(g, r, 1));
            double d = 0;
            for (double x : v) d = std::max(d, std::abs(x - v[0]));
            dev.push_back(d);
        }
        ok = ok && dev[1] <= dev[0] && dev[2] <= dev[1] && dev[2] <= 0.05;
        detail += std::string(idx ? "; " : "") + names[idx] + fmt(" deviation %.4f", dev[0]) + fmt(" -> %.4f", dev[1]) +
                  fmt(" -> %.4f", dev[2]);
        ++idx;
    }
    report(6, "isometry", ok, detail + " (radius 4 -> 8 -> 16, <= 0.05 at 16)");
}

void c7_equivalence() {
    auto g = default_generators();
    const HermiteBasis B(12, GridSpec{});
    const std::vector<APSymbol> syms{APSymbol::constant(g, 1.0),
                                     APSymbol::multiplier(g, cf("jbracket(xi)^(-1)"), {-1, 1, 0}),
                                     cos_symbol(g, "jbracket(xi)^(-2)", {-2, 1, 0})};
    double worst = 0;
    for (const auto& a : syms) {
        for (const auto& mu : {Frequency::zero(2), g1(g)}) {
            for (std::size_t n : {0, 1, 2}) worst = std::max(worst, equivalence_residual(a, mu, n, B));
        }
    }
    report(7, "CMS equivalence", worst <= 1e-6, fmt("max residual %.3e <= 1e-6 (18 cases, N=256, L=16)", worst));
}

void c8_representation() {
    auto g = default_generators();
    const HermiteBasis B(12, GridSpec{});
    std::vector<Frequency> freqs;
    for (const char* t : {"(0,0)", "(1,0)", "(-1,0)", "(0,1)", "(1/2,0)"}) freqs.push_back(Frequency::parse(t));
    std::mt19937_64 rng(20260008);
    double comp = 0, pair = 0, pos = 1e300;
    for (int t = 0; t < 10; ++t) {
        const auto a = random_symbol(g, rng), b = random_symbol(g, rng);
        const auto u = random_tensor(g, freqs, B, 8, 3, rng);
        auto d = apply_A(compose_symbols(a, b), u);
        d -= apply_A(a, apply_A(b, u));
        comp = std::max(comp, d.norm());
        pair = std::max(pair, adjoint_residual_A(a, 1, B, 20260008 + t));
        const auto bb = compose_symbols(adjoint_symbol(b), b);
        const double n2 = u.norm() * u.norm();
        pos = std::min(pos, tensor_inner(apply_A(bb, u), u).real() / n2);
    }
    report(8, "A-representation axioms", comp <= 1e-8 && pair <= 1e-8 && pos >= -1e-8,
           fmt("composition %.3e <= 1e-8; ", comp) + fmt("adjoint pairing %.3e <= 1e-8; ", pair) +
               fmt("min (A(b+b)u,u)/|u|^2 = %.3e >= -1e-8", pos));
}

void c9_weyl() {
    auto g = GeneratorSet::make(1, {{1.0}});
    const auto a = APSymbol::multiplier(g, cf("jbracket(xi)^(-1)"), {-1, 1, 0}) +
                   cos_symbol(g, "xi*jbracket(xi)^(-3)", {-2, 1, 0});
    std::vector<RealVector> seq;
    for (int k = 1; k <= 10; ++k) seq.push_back({std::ldexp(1.0, -k)});
    seq.push_back({0.1});
    const auto r = weyl_residual(a, {0.0}, seq);
    double path = 0;
    bool mono = true;
    for (std::size_t j = 0; j < seq.size(); ++j) {
        const auto e = TPFunction::character(g, frequency_from_real(*g, seq[j]));
        const double direct = besicovitch_sobolev_norm(apply_to_tp(a - APSymbol::constant(g, r.s), e), 0);
        path = std::max(path, std::abs(direct - r.residuals[j].second));
        if (j > 0 && j < 10) mono = mono && r.residuals[j].second < r.residuals[j - 1].second;
    }
    const double t = 0.1, b = jb(t);
    const double oracle = std::sqrt((1 / b - 1) * (1 / b - 1) + t * t / std::pow(b, 6) / 2);
    const double at01 = r.residuals[10].second;
    const bool ok = path <= 1e-12 && std::abs(at01 - oracle) <= 1e-9 && mono && r.residuals[9].second < 1e-2;
    report(9, "Weyl residual", ok,
           fmt("formula vs B2 path %.3e <= 1e-12; ", path) + fmt("r(0.1) = %.10f", at01) +
               fmt(" vs closed form %.10f (tol 1e-9); ", oracle) + (mono ? "monotone" : "NOT monotone") +
               fmt(" along 2^-k, r(2^-10) = %.3e", r.residuals[9].second));
}

void c10_one_variable() {
    auto g = GeneratorSet::make(1, {{1.0}});
    const auto a = APSymbol::multiplier(g, cf("jbracket(xi)^(-2)"));
    const auto rep = multiplier_spectrum(a, line(-8, 8, 0.25));
    int certified = 0, points = 0;
    for (const auto& v : rep.values) {
        if (v.kind != SpectralKind::Point) continue;
        ++points;
        const Frequency xi = frequency_from_real(*g, v.at);
        const auto out = apply_to_tp(a, TPFunction::character(g, xi));
        if (out.coeffs().size() == 1 && out.coeff(xi) == v.approx) ++certified;
    }
    const auto wit = rep.of_kind(SpectralKind::ContinuousWitness);
    const bool zero_witness = std::any_of(wit.begin(), wit.end(), [](Complex z) { return std::abs(z) <= 1e-12; });

    const double h = 1.0 / 256;
    const auto m = multiplication_spectrum(cos_symbol(g, "1"), line(0, 1, h));
    std::vector<double> re;
    for (const auto& v : m.values) re.push_back(v.approx.real());
    std::sort(re.begin(), re.end());
    double gap = 0;
    for (std::size_t i = 1; i < re.size(); ++i) gap = std::max(gap, re[i] - re[i - 1]);
    const bool covers = std::abs(re.front() + 1) <= 1e-15 && std::abs(re.back() - 1) <= 1e-15 && gap <= 2 * M_PI * h;
    report(10, "one-variable spectra", certified == points && points > 0 && zero_witness && covers,
           std::to_string(certified) + "/" + std::to_string(points) + " multiplier samples certified, 0 reported as " +
               (zero_witness ? "continuous witness" : "MISSING") + fmt("; cos(2pi x) range [-1,1] max gap %.4f", gap) +
               fmt(" <= 2 pi h = %.4f", 2 * M_PI * h));
}

void c11_invariance() {
    auto g = default_generators();
    const HermiteBasis B(12, GridSpec{});
    const auto xs = line(-1, 1, 0.25);
    const auto c = APSymbol::multiplier(g, cf("jbracket(xi)^(-1)"), {-1, 1, 0}) +
                   cos_symbol(g, "jbracket(xi)^(-2)", {-2, 1, 0});
    const std::vector<std::pair<std::string, APSymbol>> syms{
        {"<xi>^-1", APSymbol::multiplier(g, cf("jbracket(xi)^(-1)"), {-1, 1, 0})},
        {"herm(<xi>^-1 + cos(2pi x)<xi>^-2)", (c + adjoint_symbol(c)).scaled(0.5)}};
    bool ok = true;
    std::string detail;
    for (const auto& [name, a] : syms) {
        std::vector<double> d1, d2;
        for (int r : {4, 8, 16}) {
            const auto res = invariance_check(a, window_enumerate(g, r, 1), xs, B);
            d1.push_back(res.hausdorff_Ul2_vs_UxiD);
            d2.push_back(res.hausdorff_Ul2_vs_A);
        }
        const bool mono = d1[1] <= d1[0] + 1e-3 && d1[2] <= d1[1] + 1e-3 && d2[1] <= d2[0] + 1e-3 && d2[2] <= d2[1] + 1e-3;
        ok = ok && mono && d1[2] <= 0.05 && d2[2] <= 0.05;
        detail += (detail.empty() ? "" : "; ") + name + fmt(": U0~Uxi %.4f", d1[0]) + fmt("/%.4f", d1[1]) +
                  fmt("/%.4f", d1[2]) + fmt(", U0~A %.4f", d2[0]) + fmt("/%.4f", d2[1]) + fmt("/%.4f", d2[2]);
    }
    report(11, "spectral invariance", ok, detail + " (radius 4/8/16, need <= 0.05 at 16 and non-increasing)");
}

void c12_foundations() {
    auto g = default_generators();
    std::mt19937_64 rng(20260012);
    std::vector<Frequency> pool;
    for (const char* t : {"(0,0)", "(1,0)", "(-1,0)", "(0,1)", "(0,-1)", "(1/2,0)", "(1,-1)"}) pool.push_back(Frequency::parse(t));
    double planch = 0, mean = 0;
    std::uniform_real_distribution<double> us(-50, 50);
    for (int t = 0; t < 20; ++t) {
        const auto f = random_tp(g, rng, pool, 5);
        double s2 = 0;
        for (const auto& [k, v] : f.coeffs()) s2 += std::norm(v);
        const double n = besicovitch_sobolev_norm(f, 0);
        planch = std::max(planch, std::abs(n * n - s2) / s2);
        const double T = 100, s = us(rng);
        auto fn = [&](std::span<const double> x) { return f(x); };
        const Complex box = mean_value_box(fn, 1, T, std::span<const double>(&s, 1));
        mean = std::max(mean, std::abs(box - mean_value_exact(f)) / (2 * f.coeff_l1() / (M_PI * T)));
    }
    double bf = 0;
    for (int n : {1, 2, 3, 10, 100}) {
        const auto e = TPFunction::character(g, Frequency::parse("(1,-1)"));
        const auto d = bochner_fejer(e, n) - e;
        bf = std::max(bf, std::abs(std::abs(d.coeff(Frequency::parse("(1,-1)"))) - 1.0 / n));
    }
    const auto a = cos_symbol(g, "jbracket(xi)^(-1)", {-1, 1, 0});
    const auto w = window_enumerate(g, 4, 1);
    double growth = 0;
    for (double s : {-1.0, 0.0, 1.0}) {
        const double p = std::abs(s) + std::abs(-1.0 - s);
        double C = 0;
        for (const auto& xi : line(-8, 8, 0.25)) {
            C = std::max(C, weighted_norm(build_kernel(a, xi, w), s, -1) / std::pow(jb(xi[0]), p));
        }
        for (const auto& xi : line(-16, 16, 0.25)) {
            growth = std::max(growth, weighted_norm(build_kernel(a, xi, w), s, -1) / (C * std::pow(jb(xi[0]), p)));
        }
    }
    const bool ok = planch <= 1e-15 && mean <= 1.0 && bf <= 1e-15 && growth <= 1.0 + 1e-12;
    report(12, "foundations", ok,
           fmt("Plancherel rel %.1e; ", planch) + fmt("mean-value error / bound %.3f <= 1; ", mean) +
               fmt("Fejer |err - 1/n| %.1e; ", bf) + fmt("growth ratio to fitted C <xi>^p %.4f <= 1", growth));
}

void c13_cli(const std::string& cli, const fs::path& data, const fs::path& scratch) {
    fs::create_directories(scratch);
    int identical = 0, total = 0;
    for (const auto& e : fs::directory_iterator(data)) {
        if (e.path().extension() != ".toml" || e.path().stem() == "bad_rho") continue;
        ++total;
        const fs::path out = scratch / (e.path().stem().string() + ".fmt");
        if (run(cli + " fmt --symbol " + e.path().string(), out.string()) == 0 &&
            slurp(out) == slurp(e.path())) {
            ++identical;
        }
    }
    const fs::path v1 = scratch / "v1", v2 = scratch / "v2";
    const int r1 = run(cli + " verify --suite all --seed 7 --out " + v1.string());
    const int r2 = run(cli + " verify --suite all --seed 7 --out " + v2.string());
    const bool det = r1 == 0 && r2 == 0 && slurp(v1 / "verify_report.txt") == slurp(v2 / "verify_report.txt") &&
                     !slurp(v1 / "verify_report.txt").empty() && slurp(v1 / "manifest.json") == slurp(v2 / "manifest.json");
    const int rho = run(cli + " kernel --symbol " + (data / "bad_rho.toml").string() + " --out " + scratch.string());
    const bool ok = total > 0 && identical == total && det && rho == 2;
    report(13, "CLI", ok,
           std::to_string(identical) + "/" + std::to_string(total) + " files round-trip byte-identical; verify seed 7 " +
               (det ? "byte-identical across runs" : "NOT reproducible") + "; rho = 0 exit code " + std::to_string(rho));
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 4) {
        std::fprintf(stderr, "usage: acceptance <appdo-cli> <symbol-dir> <scratch-dir>\n");
        return 2;
    }
    const std::vector<void (*)()> criteria{c1_identity,   c2_homomorphism, c3_adjoint,       c4_positivity,
                                           c5_character,  c6_isometry,     c7_equivalence,   c8_representation,
                                           c9_weyl,       c10_one_variable, c11_invariance,  c12_foundations};
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        try {
            criteria[i]();
        } catch (const std::exception& e) {
            report(static_cast<int>(i + 1), "criterion", false, std::string("threw: ") + e.what());
        }
    }
    try {
        c13_cli(argv[1], argv[2], argv[3]);
    } catch (const std::exception& e) {
        report(13, "CLI", false, std::string("threw: ") + e.what());
    }
    std::printf("%d of 13 criteria failed\n", g_failed);
    return g_failed == 0 ? 0 : 1;
}
