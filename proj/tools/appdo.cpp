// appdo: command-line front end for the almost-periodic operator toolkit.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "appdo/cms.hpp"
#include "appdo/error.hpp"
#include "appdo/gladyshev.hpp"
#include "appdo/parallel.hpp"
#include "appdo/spectral.hpp"
#include "appdo/symbol_file.hpp"
#include "appdo/verify.hpp"

namespace fs = std::filesystem;
using namespace appdo;

namespace {

constexpr const char* kVersion = "0.1.0";

struct RunConfig {
    std::vector<std::string> symbols;
    std::string xi = "0";
    std::string radius = "4";
    std::int64_t denom = 1;
    std::string grid = "-8:8:0.25";
    double s = 0.0;
    double m = 0.0;
    double L = 16.0;
    std::size_t N = 256;
    std::uint64_t seed = 7;
    unsigned threads = 1;
    std::string out = ".";
    double tol = kDefaultPositivityTol;

    // Command specific.
    std::string mode = "finite-section";
    std::vector<std::string> radii;
    std::string suite = "all";
    std::string z = "0,1";
    std::string mu = "";
    std::size_t n = 0;
    std::size_t modes = 12;
    std::string tp;
    std::vector<std::string> eta;
    bool in_place = false;
};

struct Manifest {
    nlohmann::ordered_json j;
    std::vector<std::string> outputs;
};

RealVector parse_vector_arg(const std::string& text, std::size_t dim, const char* flag) {
    RealVector v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw InputError(std::string(flag) + " expects comma-separated numbers, got '" + text + "'");
        }
    }
    if (v.size() != dim) {
        throw InputError(std::string(flag) + " needs " + std::to_string(dim) + " coordinate(s), got " +
                         std::to_string(v.size()));
    }
    return v;
}

std::vector<double> parse_axis(const std::string& spec) {
    std::vector<double> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) {
        try {
            parts.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw InputError("--grid expects a:b:step, got '" + spec + "'");
        }
    }
    if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
        throw InputError("--grid expects a:b:step with a <= b and step > 0, got '" + spec + "'");
    }
    const auto count = static_cast<std::size_t>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9)) + 1;
    if (count > 1000000) throw InputError("--grid has more than 10^6 points per axis");
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) out[k] = parts[0] + static_cast<double>(k) * parts[2];
    return out;
}

std::vector<RealVector> parse_grid(const std::string& spec, std::size_t dim) {
    const auto axis = parse_axis(spec);
    std::vector<RealVector> pts;
    std::vector<std::size_t> idx(dim, 0);
    while (true) {
        RealVector p(dim);
        for (std::size_t k = 0; k < dim; ++k) p[k] = axis[idx[k]];
        pts.push_back(std::move(p));
        std::size_t k = dim;
        while (k-- > 0) {
            if (++idx[k] < axis.size()) break;
            idx[k] = 0;
        }
        if (k == static_cast<std::size_t>(-1)) break;
    }
    return pts;
}

Complex parse_complex(const std::string& text) {
    const auto v = parse_vector_arg(text, 2, "--z");
    return {v[0], v[1]};
}

APSymbol load_symbol(const RunConfig& c, Manifest& mf) {
    if (c.symbols.empty()) throw InputError("--symbol PATH is required");
    mf.j["inputs"]["symbol"] = c.symbols.front();
    return parse_symbol_file(c.symbols.front());
}

FrequencyWindow make_window(const APSymbol& a, const std::string& radius, std::int64_t denom) {
    Rational r;
    try {
        r = Rational::parse(radius);
    } catch (const Error&) {
        throw InputError("--radius expects a rational number, got '" + radius + "'");
    }
    if (!(r > Rational(0))) throw InputError("--radius must be positive");
    if (denom < 1) throw InputError("--denom must be a positive integer");
    return window_enumerate(a.generators(), r, denom);
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

std::string fmt_vec(const RealVector& v) {
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ";" : "") + fmt(v[k]);
    return s;
}

std::ofstream open_out(const RunConfig& c, Manifest& mf, const std::string& name) {
    fs::create_directories(c.out);
    const fs::path p = fs::path(c.out) / name;
    std::ofstream os(p, std::ios::binary);
    if (!os) throw InputError("cannot write '" + p.string() + "'");
    mf.outputs.push_back(name);
    return os;
}

void write_manifest(const RunConfig& c, Manifest& mf) {
    mf.j["outputs"] = mf.outputs;
    fs::create_directories(c.out);
    std::ofstream os(fs::path(c.out) / "manifest.json", std::ios::binary);
    os << mf.j.dump(2) << '\n';
}

int cmd_kernel(const RunConfig& c, Manifest& mf) {
    const APSymbol a = load_symbol(c, mf);
    const auto w = make_window(a, c.radius, c.denom);
    const auto K = build_kernel(a, parse_vector_arg(c.xi, a.dim(), "--xi"), w);
    auto os = open_out(c, mf, "kernel.csv");
    write_kernel_csv(os, K);
    std::cout << "kernel " << w.size() << "x" << w.size() << " written to " << (fs::path(c.out) / "kernel.csv").string()
              << '\n';
    return 0;
}

int cmd_compose(const RunConfig& c, Manifest& mf) {
    if (c.symbols.size() < 2) throw InputError("compose needs at least two --symbol files");
    APSymbol acc = parse_symbol_file(c.symbols.front());
    for (std::size_t i = 1; i < c.symbols.size(); ++i) acc = compose_symbols(acc, parse_symbol_file(c.symbols[i]));
    mf.j["inputs"]["symbols"] = c.symbols;
    const std::string text = serialize_symbol(acc);
    open_out(c, mf, "composed.toml") << text;
    std::cout << text;
    return 0;
}

int cmd_adjoint(const RunConfig& c, Manifest& mf) {
    const std::string text = serialize_symbol(adjoint_symbol(load_symbol(c, mf)));
    open_out(c, mf, "adjoint.toml") << text;
    std::cout << text;
    return 0;
}

TPFunction read_tp_csv(const GeneratorSetPtr& g, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open TP file '" + path + "'");
    TPFunction::Coeffs c;
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (line.empty() || line[0] == '#' || line.rfind("freq", 0) == 0) continue;
        const auto p2 = line.rfind(',');
        const auto p1 = p2 == std::string::npos ? p2 : line.rfind(',', p2 - 1);
        if (p1 == std::string::npos) throw InputError(path + ":" + std::to_string(no) + ": expected freq,re,im");
        std::string f = line.substr(0, p1);
        if (f.size() >= 2 && f.front() == '"') f = f.substr(1, f.size() - 2);
        try {
            c[Frequency::parse(f)] += Complex(std::stod(line.substr(p1 + 1, p2 - p1 - 1)), std::stod(line.substr(p2 + 1)));
        } catch (const std::invalid_argument&) {
            throw InputError(path + ":" + std::to_string(no) + ": malformed number");
        }
    }
    return TPFunction(g, std::move(c));
}

int cmd_apply(const RunConfig& c, Manifest& mf) {
    const APSymbol a = load_symbol(c, mf);
    TPFunction f;
    if (!c.tp.empty()) {
        f = read_tp_csv(a.generators(), c.tp);
        mf.j["inputs"]["tp"] = c.tp;
    } else if (!c.eta.empty()) {
        TPFunction::Coeffs co;
        for (const auto& e : c.eta) co[Frequency::parse(e)] += 1.0;
        f = TPFunction(a.generators(), std::move(co));
        mf.j["inputs"]["eta"] = c.eta;
    } else {
        throw InputError("apply needs --tp FILE or at least one --eta FREQ");
    }
    const TPFunction out = apply_to_tp(a, f);
    auto os = open_out(c, mf, "apply.csv");
    os << "freq,re,im\n" << std::setprecision(17);
    for (const auto& [lam, v] : out.coeffs()) os << '"' << lam.str() << "\"," << v.real() << ',' << v.imag() << '\n';
    std::cout << "output has " << out.coeffs().size() << " frequencies\n";
    return 0;
}

int cmd_norm_sweep(const RunConfig& c, Manifest& mf) {
    const APSymbol a = load_symbol(c, mf);
    const auto w = make_window(a, c.radius, c.denom);
    const auto pts = parse_grid(c.grid, a.dim());
    const double expo = std::abs(c.s) + std::abs(c.m - c.s);
    std::vector<double> norms(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) { norms[i] = weighted_norm(build_kernel(a, pts[i], w), c.s, c.m); });
    double C = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) C = std::max(C, norms[i] / std::pow(japanese_bracket(pts[i]), expo));
    auto os = open_out(c, mf, "norm_sweep.csv");
    os << "xi,norm,bound\n";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        os << fmt_vec(pts[i]) << ',' << fmt(norms[i]) << ',' << fmt(C * std::pow(japanese_bracket(pts[i]), expo)) << '\n';
    }
    mf.j["results"]["fitted_C"] = C;
    mf.j["results"]["exponent"] = expo;
    std::cout << "fitted C = " << fmt(C) << " for exponent " << fmt(expo) << '\n';
    return 0;
}

int cmd_isometry(const RunConfig& c, Manifest& mf) {
    const APSymbol a = load_symbol(c, mf);
    const auto w = make_window(a, c.radius, c.denom);
    const auto pts = parse_grid(c.grid, a.dim());
    const auto norms = isometry_sweep(a, pts, w);
    const double base = spectral_norm(build_kernel(a, RealVector(a.dim(), 0.0), w).entries);
    double dev = 0.0;
    auto os = open_out(c, mf, "isometry.csv");
    os << "xi,norm,deviation\n";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        dev = std::max(dev, std::abs(norms[i] - base));
        os << fmt_vec(pts[i]) << ',' << fmt(norms[i]) << ',' << fmt(norms[i] - base) << '\n';
    }
    mf.j["results"]["norm_at_0"] = base;
    mf.j["results"]["max_deviation"] = dev;
    std::cout << "||U(a)(0)|| = " << fmt(base) << ", max deviation = " << fmt(dev) << '\n';
    return 0;
}

int cmd_positivity(const RunConfig& c, Manifest& mf) {
    const APSymbol a = load_symbol(c, mf);
    const auto w = make_window(a, c.radius, c.denom);
    const auto r = positivity_check(build_kernel(a, parse_vector_arg(c.xi, a.dim(), "--xi"), w), c.tol);
    nlohmann::ordered_json j{{"hermitian", r.hermitian}, {"psd", r.psd}, {"min_eig", r.min_eig}};
    open_out(c, mf, "positivity.json") << j.dump(2) << '\n';
    mf.j["results"] = j;
    std::cout << j.dump() << '\n';
    return 0;
}

int cmd_spectrum(const RunConfig& c, Manifest& mf) {
    const APSymbol a = load_symbol(c, mf);
    if (c.mode == "multiplier") {
        const auto r = multiplier_spectrum(a, parse_grid(c.grid, a.dim()));
        auto os = open_out(c, mf, "spectrum.csv");
        write_spectrum_csv(os, r);
        std::cout << r.of_kind(SpectralKind::Point).size() << " point samples, "
                  << r.of_kind(SpectralKind::ContinuousWitness).size() << " continuous witnesses\n";
    } else if (c.mode == "multiplication") {
        const auto r = multiplication_spectrum(a, parse_grid(c.grid, a.dim()));
        auto os = open_out(c, mf, "spectrum.csv");
        write_spectrum_csv(os, r);
        mf.j["results"]["range_re"] = r.metadata.count("range_re") ? r.metadata.at("range_re") : "";
        std::cout << r.values.size() << " essential-spectrum samples\n";
    } else if (c.mode == "finite-section") {
        const auto xi = parse_vector_arg(c.xi, a.dim(), "--xi");
        const std::vector<std::string> radii = c.radii.empty() ? std::vector<std::string>{c.radius} : c.radii;
        for (const auto& rad : radii) {
            const auto w = make_window(a, rad, c.denom);
            const auto r = finite_section_spectrum(a, w, xi, Rational::parse(rad).to_double());
            std::string tag = rad;
            std::replace(tag.begin(), tag.end(), '/', '_');
            auto os = open_out(c, mf, "spectrum_r" + tag + ".csv");
            write_spectrum_csv(os, r);
            std::cout << "radius " << rad << ": " << r.values.size() << " eigenvalues"
                      << (r.metadata.count("advisory") ? " (advisory: non-Hermitian)" : "") << '\n';
        }
    } else {
        throw InputError("--mode must be multiplier, multiplication or finite-section");
    }
    mf.j["inputs"]["mode"] = c.mode;
    return 0;
}

int cmd_weyl(const RunConfig& c, Manifest& mf) {
    const APSymbol a = load_symbol(c, mf);
    const auto r = weyl_residual(a, parse_vector_arg(c.xi, a.dim(), "--xi"), parse_grid(c.grid, a.dim()));
    auto os = open_out(c, mf, "weyl.csv");
    os << "xi,residual\n";
    for (const auto& [xi, v] : r.residuals) os << fmt_vec(xi) << ',' << fmt(v) << '\n';
    mf.j["results"]["s_re"] = r.s.real();
    mf.j["results"]["s_im"] = r.s.imag();
    std::cout << "s = " << fmt(r.s.real()) << (r.s.imag() < 0 ? " - " : " + ") << fmt(std::abs(r.s.imag())) << "i, "
              << r.residuals.size() << " residuals\n";
    return 0;
}

int cmd_resolvent(const RunConfig& c, Manifest& mf) {
    const APSymbol a = load_symbol(c, mf);
    const auto w = make_window(a, c.radius, c.denom);
    const auto r = resolvent_window(a, parse_complex(c.z), w, parse_vector_arg(c.xi, a.dim(), "--xi"));
    nlohmann::ordered_json j{{"solvable", r.solvable}, {"sigma_min", r.sigma_min},
                             {"inv_norm", std::isfinite(r.inv_norm) ? nlohmann::json(r.inv_norm) : nlohmann::json("inf")}};
    open_out(c, mf, "resolvent.json") << j.dump(2) << '\n';
    mf.j["results"] = j;
    std::cout << j.dump() << '\n';
    return 0;
}

int cmd_equivalence(const RunConfig& c, Manifest& mf) {
    const APSymbol a = load_symbol(c, mf);
    const HermiteBasis basis(std::max(c.modes, c.n + 1), GridSpec{c.L, c.N, a.dim()});
    const Frequency mu = c.mu.empty() ? Frequency::zero(a.generators()->count()) : Frequency::parse(c.mu);
    if (mu.rank() != a.generators()->count()) throw InputError("--mu has the wrong number of coordinates");
    const double r = equivalence_residual(a, mu, c.n, basis);
    mf.j["results"]["residual"] = r;
    open_out(c, mf, "equivalence.json") << nlohmann::ordered_json{{"mu", mu.str()}, {"n", c.n}, {"residual", r}}.dump(2)
                                        << '\n';
    std::cout << "residual = " << fmt(r) << '\n';
    return 0;
}

int cmd_invariance(const RunConfig& c, Manifest& mf) {
    const APSymbol a = load_symbol(c, mf);
    const auto w = make_window(a, c.radius, c.denom);
    const HermiteBasis basis(c.modes, GridSpec{c.L, c.N, a.dim()});
    const auto r = invariance_check(a, w, parse_grid(c.grid, a.dim()), basis, c.tol);
    auto os = open_out(c, mf, "invariance.csv");
    os << "set,value_re,value_im\n" << std::setprecision(17);
    for (const auto& [name, set] : {std::pair{"U0", &r.set_U0}, {"Uxi", &r.set_Uxi}, {"A", &r.set_A}}) {
        for (const auto& z : *set) os << name << ',' << z.real() << ',' << z.imag() << '\n';
    }
    mf.j["results"]["hausdorff_Ul2_vs_UxiD"] = r.hausdorff_Ul2_vs_UxiD;
    mf.j["results"]["hausdorff_Ul2_vs_A"] = r.hausdorff_Ul2_vs_A;
    std::cout << "hausdorff(U(a)(0), U(a)(xi)) = " << fmt(r.hausdorff_Ul2_vs_UxiD) << '\n'
              << "hausdorff(U(a)(0), A) = " << fmt(r.hausdorff_Ul2_vs_A) << '\n';
    return 0;
}

int cmd_verify(const RunConfig& c, Manifest& mf) {
    const auto rep = run_verify(c.suite, c.seed);
    const std::string text = rep.text();
    open_out(c, mf, "verify_report.txt") << text;
    mf.j["results"]["all_pass"] = rep.all_pass();
    std::cout << text;
    return rep.all_pass() ? 0 : 1;
}

int cmd_fmt(const RunConfig& c, Manifest&) {
    if (c.symbols.size() != 1) throw InputError("fmt needs exactly one --symbol file");
    const std::string text = serialize_symbol(parse_symbol_file(c.symbols.front()));
    if (c.in_place) {
        std::ofstream(c.symbols.front(), std::ios::binary) << text;
    } else {
        std::cout << text;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Almost-periodic pseudodifferential operators: symbols, kernels, representations, spectra"};
    app.require_subcommand(1);
    RunConfig c;
    app.add_option("--threads", c.threads, "Worker threads for parallel sweeps")->check(CLI::PositiveNumber);
    app.set_version_flag("--version", kVersion);

    using Handler = int (*)(const RunConfig&, Manifest&);
    std::vector<std::pair<CLI::App*, Handler>> subs;

    auto sub = [&](const char* name, const char* desc, Handler h) {
        CLI::App* s = app.add_subcommand(name, desc);
        s->add_option("--out", c.out, "Output directory");
        s->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
        subs.emplace_back(s, h);
        return s;
    };
    auto sym = [&](CLI::App* s) { s->add_option("--symbol", c.symbols, "Symbol file")->required(); };
    auto window = [&](CLI::App* s) {
        s->add_option("--radius", c.radius, "Window coefficient bound (rational)");
        s->add_option("--denom", c.denom, "Window denominator bound")->check(CLI::PositiveNumber);
    };
    auto xi = [&](CLI::App* s) { s->add_option("--xi", c.xi, "Point xi, comma separated"); };
    auto grid = [&](CLI::App* s) { s->add_option("--grid", c.grid, "Grid a:b:step (per axis)"); };
    auto box = [&](CLI::App* s) {
        s->add_option("--L", c.L, "Box length")->check(CLI::PositiveNumber);
        s->add_option("--N", c.N, "Points per axis")->check(CLI::Range(2, 1 << 20));
    };

    auto* k = sub("kernel", "Windowed kernel matrix U(a)(xi) as CSV", cmd_kernel);
    sym(k), window(k), xi(k);
    auto* co = sub("compose", "Symbol of a1(x,D) a2(x,D) ...", cmd_compose);
    sym(co);
    auto* ad = sub("adjoint", "Formal adjoint symbol", cmd_adjoint);
    sym(ad);
    auto* ap = sub("apply", "Exact action on a trigonometric polynomial", cmd_apply);
    sym(ap);
    ap->add_option("--tp", c.tp, "CSV of freq,re,im coefficients");
    ap->add_option("--eta", c.eta, "Character frequency, repeatable");
    auto* ns = sub("norm-sweep", "Weighted finite-section norms over a xi grid", cmd_norm_sweep);
    sym(ns), window(ns), grid(ns);
    ns->add_option("--s", c.s, "Sobolev index s");
    ns->add_option("--m", c.m, "Order m");
    auto* is = sub("isometry", "||U(a)(xi)|| over a xi grid (m <= 0)", cmd_isometry);
    sym(is), window(is), grid(is);
    auto* po = sub("positivity", "Hermiticity and positivity of U(a)(xi)", cmd_positivity);
    sym(po), window(po), xi(po);
    po->add_option("--tol", c.tol, "Tolerance")->check(CLI::PositiveNumber);
    auto* sp = sub("spectrum", "Spectral samples and finite-section eigenvalues", cmd_spectrum);
    sym(sp), xi(sp), grid(sp);
    sp->add_option("--mode", c.mode, "multiplier | multiplication | finite-section");
    sp->add_option("--radius", c.radii, "Window radius, repeatable for sweeps");
    sp->add_option("--denom", c.denom, "Window denominator bound")->check(CLI::PositiveNumber);
    auto* we = sub("weyl", "Weyl sequence residuals toward --xi along --grid", cmd_weyl);
    sym(we), xi(we), grid(we);
    auto* re = sub("resolvent", "Smallest singular value of U(a)(xi) - z", cmd_resolvent);
    sym(re), window(re), xi(re);
    re->add_option("--z", c.z, "Spectral parameter re,im");
    auto* eq = sub("equivalence", "Residual of Q A(a) = U(a)(D) Q on e_mu (x) phi_n", cmd_equivalence);
    sym(eq), box(eq);
    eq->add_option("--mu", c.mu, "Frequency mu, e.g. (1,0)");
    eq->add_option("--n", c.n, "Hermite index");
    auto* in = sub("invariance", "Hausdorff distances between the three spectral sets", cmd_invariance);
    sym(in), window(in), grid(in), box(in);
    in->add_option("--modes", c.modes, "Hermite modes")->check(CLI::PositiveNumber);
    in->add_option("--tol", c.tol, "Hermiticity tolerance")->check(CLI::PositiveNumber);
    auto* ve = sub("verify", "Run the seeded invariant suites", cmd_verify);
    ve->add_option("--suite", c.suite, "symbols | representation | cms | spectral | all");
    ve->add_option("--seed", c.seed, "Seed for randomized trials");
    auto* fm = sub("fmt", "Print a symbol file in canonical form", cmd_fmt);
    sym(fm);
    fm->add_flag("--in-place", c.in_place, "Rewrite the file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    Manifest mf;
    try {
        set_threads(c.threads);
        for (auto& [s, h] : subs) {
            if (!s->parsed()) continue;
            mf.j["tool"] = "appdo";
            mf.j["version"] = kVersion;
            mf.j["command"] = s->get_name();
            mf.j["seed"] = c.seed;
            mf.j["tolerances"] = {{"hermitian", c.tol}, {"solvable_rel", kDefaultSolvableRel}};
            mf.j["config"] = {{"xi", c.xi}, {"radius", c.radius}, {"denom", c.denom}, {"grid", c.grid},
                              {"s", c.s},   {"m", c.m},           {"L", c.L},         {"N", c.N}};
            const int rc = h(c, mf);
            if (s->get_name() != "fmt") write_manifest(c, mf);
            return rc;
        }
    } catch (const InputError& e) {
        std::cerr << "appdo: input error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "appdo: domain error: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        std::cerr << "appdo: error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "appdo: error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
