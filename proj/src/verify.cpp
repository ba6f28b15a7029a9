#include "appdo/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>

#include "appdo/cms.hpp"
#include "appdo/error.hpp"
#include "appdo/gladyshev.hpp"
#include "appdo/spectral.hpp"
#include "appdo/symbol_file.hpp"

namespace appdo {
namespace {

std::string rational_complex(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-4, 4);
    std::uniform_int_distribution<int> den(1, 4);
    int re = num(rng);
    const int im = num(rng);
    const int q = den(rng);
    if (re == 0 && im == 0) re = 1;
    std::ostringstream os;
    os << "(" << re << "/" << q << (im < 0 ? " - " : " + ") << std::abs(im) << "/" << q << "*i)";
    return os.str();
}

std::vector<Frequency> default_pool(std::size_t r) {
    std::vector<Frequency> pool{Frequency::zero(r)};
    for (std::size_t i = 0; i < std::min<std::size_t>(r, 2); ++i) {
        pool.push_back(Frequency::unit(r, i));
        pool.push_back(Frequency::unit(r, i, -1));
    }
    pool.push_back(Frequency::unit(r, 0, Rational(1, 2)));
    if (r >= 2) pool.push_back(Frequency::unit(r, 0) - Frequency::unit(r, 1));
    return pool;
}

double max_abs(const Eigen::MatrixXcd& M) { return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff(); }

Eigen::MatrixXcd restrict_to(const KernelMatrix& K, const FrequencyWindow& w) {
    std::vector<std::size_t> idx;
    for (const auto& f : w) idx.push_back(static_cast<std::size_t>(K.window.index_of(f)));
    return principal_block(K.entries, idx);
}

struct Suite {
    VerifyReport& rep;
    void add(const std::string& name, double measured, double tol, const std::string& rel = "<=") {
        const bool pass = rel == "<=" ? measured <= tol : measured >= tol;
        rep.entries.push_back({name, measured, tol, rel, pass});
    }
};

FrequencyWindow small_window(const GeneratorSetPtr& g, int radius = 2) { return window_enumerate(g, radius, 1); }

void suite_symbols(Suite& s, std::mt19937_64& rng) {
    const auto g = default_generators();
    const auto pool = default_pool(g->count());
    const std::vector<RealVector> xis{{-3.0}, {-0.75}, {0.0}, {0.4}, {1.25}, {5.0}};

    double involution_fail = 0, pairing = 0, assoc = 0, action = 0;
    for (int t = 0; t < 20; ++t) {
        const APSymbol a = random_symbol(g, rng);
        const APSymbol b = random_symbol(g, rng);
        const APSymbol c = random_symbol(g, rng);
        if (!(adjoint_symbol(adjoint_symbol(a)) == a)) involution_fail += 1;
        const APSymbol ap = adjoint_symbol(a);
        for (const auto& eta : pool) {
            for (const auto& nu : pool) {
                const Complex lhs = besicovitch_inner(apply_to_tp(a, TPFunction::character(g, eta)), TPFunction::character(g, nu));
                const Complex rhs = besicovitch_inner(apply_to_tp(ap, TPFunction::character(g, nu)), TPFunction::character(g, eta));
                pairing = std::max(pairing, std::abs(lhs - std::conj(rhs)));
            }
        }
        const APSymbol l = compose_symbols(compose_symbols(a, b), c);
        const APSymbol r = compose_symbols(a, compose_symbols(b, c));
        for (const auto& xi : xis) {
            for (double x : {0.0, 0.3, 0.71}) {
                const RealVector xv{x};
                const Complex u = evaluate_symbol(l, xv, xi);
                const Complex v = evaluate_symbol(r, xv, xi);
                assoc = std::max(assoc, std::abs(u - v) / std::max(1.0, std::abs(u)));
            }
        }
        const TPFunction f = random_tp(g, rng, pool, 3);
        const TPFunction lhs = apply_to_tp(compose_symbols(a, b), f);
        const TPFunction rhs = apply_to_tp(a, apply_to_tp(b, f));
        action = std::max(action, std::sqrt(std::norm(besicovitch_inner(lhs - rhs, lhs - rhs))));
    }
    s.add("symbols.adjoint_involution_failures", involution_fail, 0);
    s.add("symbols.adjoint_pairing", pairing, 1e-12);
    s.add("symbols.composition_associativity_rel", assoc, 1e-10);
    s.add("symbols.composition_vs_action", action, 1e-12);

    // Mean value: frequencies of modulus >= 1/2 keep the 1/(pi T |lambda|) envelope under 2/(pi T).
    const std::vector<Frequency> wide{Frequency::zero(2), Frequency::unit(2, 0), Frequency::unit(2, 1, -1),
                                      Frequency::unit(2, 0, 2) - Frequency::unit(2, 1)};
    std::uniform_real_distribution<double> base(-50.0, 50.0);
    double mean_ratio = 0;
    for (int t = 0; t < 4; ++t) {
        const TPFunction f = random_tp(g, rng, wide, 3);
        const double T = 100.0;
        const RealVector s0{base(rng)};
        const Complex box = mean_value_box([&](std::span<const double> x) { return f(x); }, 1, T, s0);
        const double bound = 2.0 * f.coeff_l1() / (std::numbers::pi * T);
        mean_ratio = std::max(mean_ratio, std::abs(box - mean_value_exact(f)) / bound);
    }
    s.add("symbols.mean_value_box_over_bound", mean_ratio, 1.0);

    double fejer_bad = 0;
    for (int t = 0; t < 10; ++t) {
        const TPFunction f = random_tp(g, rng, pool, 4);
        for (int n : {1, 2, 5, 17}) {
            const TPFunction bf = bochner_fejer(f, n);
            for (const auto& [lam, c] : f.coeffs()) {
                const Complex w = bf.coeff(lam) / c;
                if (!(std::abs(w.imag()) <= 1e-15 && w.real() >= -1e-15 && w.real() <= 1.0 + 1e-15)) fejer_bad += 1;
            }
        }
    }
    s.add("symbols.bochner_fejer_kernel_violations", fejer_bad, 0);

    double planch = 0;
    for (int t = 0; t < 10; ++t) {
        const TPFunction f = random_tp(g, rng, pool, 4);
        double sum = 0;
        for (const auto& kv : f.coeffs()) sum += std::norm(kv.second);
        planch = std::max(planch, std::abs(besicovitch_sobolev_norm(f, 0.0) - std::sqrt(sum)));
    }
    s.add("symbols.plancherel", planch, 0);
}

void suite_representation(Suite& s, std::mt19937_64& rng) {
    const auto g = default_generators();
    const auto w = small_window(g, 2);
    const std::vector<RealVector> xis{{0.0}, {0.37}, {-2.0}};

    double ident = 0;
    const APSymbol one = APSymbol::constant(g, 1.0);
    for (const auto& xi : xis) {
        const auto K = build_kernel(one, xi, w);
        ident = std::max(ident, max_abs(K.entries - Eigen::MatrixXcd::Identity(K.entries.rows(), K.entries.cols())));
    }
    s.add("representation.identity", ident, 0);

    double hom = 0, adj = 0, herm_gap = 0, pos = 0;
    for (int t = 0; t < 20; ++t) {
        const APSymbol a = random_symbol(g, rng);
        const APSymbol b = random_symbol(g, rng);
        std::vector<Frequency> shifts = a.frequencies();
        for (const auto& f : b.frequencies()) shifts.push_back(-f);
        const auto pad = w.padded(shifts);
        for (const auto& xi : xis) {
            const auto Ka = build_kernel(a, xi, pad);
            const auto Kb = build_kernel(b, xi, pad);
            KernelMatrix prod = Ka;
            prod.entries = Ka.entries * Kb.entries;
            const Eigen::MatrixXcd lhs = restrict_to(build_kernel(compose_symbols(a, b), xi, pad), w);
            const Eigen::MatrixXcd rhs = restrict_to(prod, w);
            hom = std::max(hom, max_abs(lhs - rhs) / std::max(1e-300, max_abs(rhs)));
            const auto Kad = build_kernel(adjoint_symbol(a), xi, w);
            const auto Kw = build_kernel(a, xi, w);
            adj = std::max(adj, max_abs(Kad.entries - Kw.entries.adjoint()));
        }
        if (t < 10) {
            const APSymbol gram = compose_symbols(adjoint_symbol(b), b);
            for (double x : {-1.5, -0.25, 0.0, 0.6, 2.0}) {
                const auto K = build_kernel(gram, {x}, w);
                const auto pc = positivity_check(K);
                herm_gap = std::max(herm_gap, pc.hermitian ? 0.0 : 1.0);
                pos = std::max(pos, -pc.min_eig / std::max(1e-300, spectral_norm(K.entries)));
            }
        }
    }
    s.add("representation.homomorphism_rel", hom, 1e-10);
    s.add("representation.adjoint_hermitian_transpose", adj, 1e-12);
    s.add("representation.gram_non_hermitian", herm_gap, 0);
    s.add("representation.gram_min_eig_rel", pos, 1e-10);

    // Translation covariance on an integer window with dyadic arguments: exact in floating point.
    const auto gi = GeneratorSet::make(1, {{1.0}}, {"one"});
    const auto wi = window_enumerate(gi, 4, 1);
    double trans = 0;
    RandomSymbolOptions io;
    io.pool = {Frequency::zero(1), Frequency::unit(1, 0), Frequency::unit(1, 0, -1), Frequency::unit(1, 0, 2)};
    for (int t = 0; t < 10; ++t) {
        const APSymbol a = random_symbol(gi, rng, io);
        for (double xi0 : {0.5, -0.25, 1.75}) {
            for (double xi : {0.0, 0.375, -2.5}) {
                const auto lhs = build_kernel(translate_symbol(a, {xi0}), {xi}, wi);
                const auto rhs = build_kernel(a, {xi + xi0}, wi);
                trans = std::max(trans, max_abs(lhs.entries - rhs.entries));
            }
        }
    }
    s.add("representation.translation_covariance", trans, 0);

    // Character consistency: f, g supported in -w.
    std::vector<Frequency> neg;
    for (const auto& f : w) neg.push_back(-f);
    double chi = 0;
    for (int t = 0; t < 20; ++t) {
        const APSymbol a = random_symbol(g, rng);
        const TPFunction f = random_tp(g, rng, neg, 4);
        const TPFunction h = random_tp(g, rng, neg, 4);
        const Complex exact = besicovitch_inner(apply_to_tp(a, f), h);
        const auto K = build_kernel(a, {0.0}, w);
        Eigen::VectorXcd vf(static_cast<Eigen::Index>(w.size())), vh(static_cast<Eigen::Index>(w.size()));
        for (std::size_t i = 0; i < w.size(); ++i) {
            vf(static_cast<Eigen::Index>(i)) = f.coeff(-w[i]);
            vh(static_cast<Eigen::Index>(i)) = h.coeff(-w[i]);
        }
        const Complex form = vh.dot(K.entries * vf);
        chi = std::max(chi, std::abs(exact - form));
    }
    s.add("representation.character_consistency", chi, 1e-12);
}

void suite_cms(Suite& s, std::mt19937_64& rng) {
    const auto g = default_generators();
    const GridSpec grid{16.0, 256, 1};
    const HermiteBasis basis(12, grid);
    s.add("cms.hermite_gram_defect", basis.gram_defect(), 1e-8);
    RandomSymbolOptions ro;
    ro.pool = {Frequency::zero(2), Frequency::unit(2, 0), Frequency::unit(2, 0, -1), Frequency::unit(2, 1)};
    const std::vector<Frequency> freqs{Frequency::zero(2), Frequency::unit(2, 0), Frequency::unit(2, 1, -1)};

    double qun = 0, comp = 0, adj = 0, pos = 0;
    for (int t = 0; t < 10; ++t) {
        const APSymbol a = random_symbol(g, rng, ro);
        const APSymbol b = random_symbol(g, rng, ro);
        const TensorTP u = random_tensor(g, freqs, basis, 6, 3, rng);
        const TensorTP v = random_tensor(g, freqs, basis, 6, 3, rng);
        qun = std::max(qun, std::abs(tensor_inner(u, v) - field_inner(q_map(u), q_map(v))));
        TensorTP d = apply_A(compose_symbols(a, b), u);
        d -= apply_A(a, apply_A(b, u));
        comp = std::max(comp, d.norm());
        adj = std::max(adj, std::abs(tensor_inner(apply_A(a, u), v) - tensor_inner(u, apply_A(adjoint_symbol(a), v))));
        const Complex q = tensor_inner(apply_A(compose_symbols(adjoint_symbol(b), b), u), u);
        const double nu = u.norm();
        pos = std::max(pos, -q.real() / (nu * nu));
    }
    s.add("cms.q_unitarity", qun, 1e-10);
    s.add("cms.composition", comp, 1e-8);
    s.add("cms.adjoint_pairing", adj, 1e-8);
    s.add("cms.positivity_transfer_rel", pos, 1e-8);

    const std::vector<APSymbol> syms{
        APSymbol::constant(g, 1.0),
        APSymbol::multiplier(g, CoeffFn::parse("jbracket(xi)^(-1)", 1), {-1.0}),
        APSymbol(g,
                 {{Frequency::unit(2, 0), CoeffFn::parse("1/2*jbracket(xi)^(-2)", 1)},
                  {Frequency::unit(2, 0, -1), CoeffFn::parse("1/2*jbracket(xi)^(-2)", 1)}},
                 {-2.0})};
    double eq = 0;
    for (const auto& a : syms) {
        for (const auto& mu : {Frequency::zero(2), Frequency::unit(2, 0)}) {
            for (std::size_t n = 0; n < 3; ++n) eq = std::max(eq, equivalence_residual(a, mu, n, basis));
        }
    }
    s.add("cms.equivalence_residual", eq, 1e-6);
}

void suite_spectral(Suite& s, std::mt19937_64& rng) {
    const auto g = GeneratorSet::make(1, {{1.0}}, {"one"});
    const APSymbol m = APSymbol::multiplier(g, CoeffFn::parse("jbracket(xi)^(-2)", 1), {-2.0});
    double eig_fail = 0;
    for (int k = -32; k <= 32; ++k) {
        const double xi = 0.25 * k;
        const Frequency f = frequency_from_real(*g, {xi});
        const TPFunction out = apply_to_tp(m, TPFunction::character(g, f));
        const Complex expect = bohr_fourier(m, Frequency::zero(1))(xi);
        if (out.coeffs().size() != 1 || out.coeff(f) != expect) eig_fail += 1;
    }
    s.add("spectral.multiplier_eigen_identity_failures", eig_fail, 0);

    const APSymbol w = parse_symbol_string(
        "dim = 1\n[[generator]]\nname = \"one\"\nvector = [1]\n[class]\nm = -1\nrho = 1\ndelta = 0\n"
        "[[term]]\nfreq = \"(0)\"\ncoeff = \"jbracket(xi)^(-1)\"\n"
        "[[term]]\nfreq = \"(1)\"\ncoeff = \"1/2*xi*jbracket(xi)^(-3)\"\n"
        "[[term]]\nfreq = \"(-1)\"\ncoeff = \"1/2*xi*jbracket(xi)^(-3)\"\n");
    std::vector<RealVector> seq{{0.1}};
    for (int k = 1; k <= 10; ++k) seq.push_back({std::ldexp(1.0, -k)});
    const auto wr = weyl_residual(w, {0.0}, seq);
    double weyl = 0;
    const APSymbol shifted = w - APSymbol::constant(w.generators(), wr.s);
    for (const auto& [xi, r] : wr.residuals) {
        const TPFunction img = apply_to_tp(shifted, TPFunction::character(w.generators(), frequency_from_real(*w.generators(), xi)));
        weyl = std::max(weyl, std::abs(r - besicovitch_sobolev_norm(img, 0.0)));
    }
    s.add("spectral.weyl_residual_vs_direct", weyl, 1e-12);

    const auto gd = default_generators();
    const auto win = window_enumerate(gd, 3, 1);
    const auto big = window_enumerate(gd, 5, 1);
    double res = 0, mono = 0;
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 5; ++t) {
        const APSymbol b = random_symbol(gd, rng);
        const APSymbol h = compose_symbols(adjoint_symbol(b), b);
        const auto K = build_kernel(h, {0.0}, win);
        const auto ev = kernel_eigenvalues(K);
        const Complex z(u(rng) * 2.0, 0.1 + std::abs(u(rng)));
        double dist = INFINITY;
        for (const auto& e : ev) dist = std::min(dist, std::abs(z - e));
        const auto rr = resolvent_window(h, z, win, {0.0});
        res = std::max(res, std::abs(rr.inv_norm - 1.0 / dist) * dist);
        const auto evb = kernel_eigenvalues(build_kernel(h, {0.0}, big));
        const double lo = evb.front().real(), hi = evb.back().real();
        for (const auto& e : ev) mono = std::max({mono, lo - e.real(), e.real() - hi});
    }
    s.add("spectral.resolvent_consistency_rel", res, 1e-9);
    s.add("spectral.finite_section_in_numerical_range", mono, 1e-10);
}

}  // namespace

GeneratorSetPtr default_generators() { return GeneratorSet::make(1, {{1.0}, {std::sqrt(2.0)}}, {"one", "sqrt2"}); }

APSymbol random_symbol(const GeneratorSetPtr& gens, std::mt19937_64& rng, const RandomSymbolOptions& opts) {
    const auto pool = opts.pool.empty() ? default_pool(gens->count()) : opts.pool;
    const std::string v = gens->dim() == 1 ? "xi" : "xi1";
    std::uniform_int_distribution<std::size_t> nterms(1, std::max<std::size_t>(1, opts.max_terms));
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::uniform_int_distribution<int> family(0, 3);
    std::uniform_int_distribution<int> power(0, 3);
    const char* powers[] = {"0", "-1", "-2", "-1/2"};
    APSymbol::Terms terms;
    const std::size_t n = nterms(rng);
    for (std::size_t t = 0; t < n; ++t) {
        const Frequency f = pool[pick(rng)];
        std::string body;
        switch (family(rng)) {
            case 0: body = "jbracket(" + v + ")^(" + powers[power(rng)] + ")"; break;
            case 1: body = "cos(" + v + ")*jbracket(" + v + ")^(-1)"; break;
            case 2: body = "exp(-" + v + "^2/4)"; break;
            default: body = "1/(2 + " + v + "^2)"; break;
        }
        const CoeffFn c = CoeffFn::parse(rational_complex(rng) + "*" + body, gens->dim());
        auto it = terms.find(f);
        if (it == terms.end()) {
            terms.emplace(f, c);
        } else {
            it->second = it->second + c;
        }
    }
    return APSymbol(gens, std::move(terms), {0.0});
}

TPFunction random_tp(const GeneratorSetPtr& gens, std::mt19937_64& rng, const std::vector<Frequency>& pool,
                     std::size_t terms) {
    if (pool.empty()) throw InputError("random trigonometric polynomial needs a nonempty pool");
    std::vector<Frequency> p = pool;
    std::shuffle(p.begin(), p.end(), rng);
    std::normal_distribution<double> nd(0.0, 1.0);
    TPFunction::Coeffs c;
    for (std::size_t i = 0; i < std::min(terms, p.size()); ++i) c.emplace(p[i], Complex(nd(rng), nd(rng)));
    return TPFunction(gens, std::move(c));
}

bool VerifyReport::all_pass() const {
    return std::all_of(entries.begin(), entries.end(), [](const VerifyEntry& e) { return e.pass; });
}

std::string VerifyReport::text() const {
    std::ostringstream os;
    os << "# appdo verify suite=" << suite << " seed=" << seed << " rng=mt19937_64\n";
    char buf[256];
    for (const auto& e : entries) {
        std::snprintf(buf, sizeof buf, "%s %s measured=%.6e %s %.1e\n", e.pass ? "PASS" : "FAIL", e.name.c_str(),
                      e.measured, e.relation.c_str(), e.tol);
        os << buf;
    }
    os << "# " << (all_pass() ? "all invariants hold" : "some invariants FAILED") << "\n";
    return os.str();
}

std::vector<std::string> verify_suites() { return {"symbols", "representation", "cms", "spectral", "all"}; }

VerifyReport run_verify(const std::string& suite, std::uint64_t seed) {
    const std::vector<std::pair<std::string, std::function<void(Suite&, std::mt19937_64&)>>> table{
        {"symbols", suite_symbols},
        {"representation", suite_representation},
        {"cms", suite_cms},
        {"spectral", suite_spectral}};
    VerifyReport rep;
    rep.suite = suite;
    rep.seed = seed;
    Suite s{rep};
    bool found = false;
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (suite == "all" || suite == table[i].first) {
            found = true;
            std::mt19937_64 rng(seed + i);
            table[i].second(s, rng);
        }
    }
    if (!found) throw InputError("unknown verify suite '" + suite + "' (expected symbols, representation, cms, spectral or all)");
    return rep;
}

}  // namespace appdo
