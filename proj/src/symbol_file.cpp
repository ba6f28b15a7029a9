#include "appdo/symbol_file.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "appdo/error.hpp"

namespace appdo {
namespace {

enum class Section { Top, Generator, Class, Term };

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string_view strip_comment(std::string_view s) {
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') quoted = !quoted;
        if (s[i] == '#' && !quoted) return s.substr(0, i);
    }
    return s;
}

struct LineError {
    std::string source;
    std::size_t line;
    [[noreturn]] void fail(const std::string& msg) const {
        throw InputError(source + ":" + std::to_string(line) + ": " + msg);
    }
};

double parse_number(std::string_view v, const LineError& at, const std::string& key) {
    v = trim(v);
    if (!v.empty() && v.front() == '+') v.remove_prefix(1);
    double out = 0.0;
    auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size() || v.empty()) {
        at.fail("field '" + key + "' expects a number, got '" + std::string(v) + "'");
    }
    return out;
}

std::string parse_string(std::string_view v, const LineError& at, const std::string& key) {
    v = trim(v);
    if (v.size() < 2 || v.front() != '"' || v.back() != '"') at.fail("field '" + key + "' expects a quoted string");
    return std::string(v.substr(1, v.size() - 2));
}

RealVector parse_vector(std::string_view v, const LineError& at, const std::string& key) {
    v = trim(v);
    if (v.size() < 2 || v.front() != '[' || v.back() != ']') at.fail("field '" + key + "' expects a list [..]");
    v = v.substr(1, v.size() - 2);
    RealVector out;
    while (!trim(v).empty()) {
        const auto comma = v.find(',');
        out.push_back(parse_number(v.substr(0, comma), at, key));
        if (comma == std::string_view::npos) break;
        v.remove_prefix(comma + 1);
    }
    return out;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

SymbolFile parse_symbol_text(std::string_view text, const std::string& source) {
    SymbolFile f;
    Section sec = Section::Top;
    bool have_dim = false, have_class = false;
    bool have_m = false, have_rho = false, have_delta = false;
    std::set<std::string> seen_keys;
    std::optional<std::string> pending_freq, pending_coeff;
    std::size_t block_line = 0;
    std::set<Frequency> freqs;
    bool gen_has_vector = true;

    auto close_block = [&](const LineError& at) {
        if (sec == Section::Term) {
            const LineError here{source, block_line};
            if (!pending_freq) here.fail("term block is missing 'freq'");
            if (!pending_coeff) here.fail("term block is missing 'coeff'");
            Frequency fr;
            try {
                fr = Frequency::parse(*pending_freq);
            } catch (const Error& e) {
                here.fail(e.what());
            }
            if (!freqs.insert(fr).second) here.fail("duplicate frequency " + fr.str());
            f.terms.emplace_back(fr, *pending_coeff);
            pending_freq.reset();
            pending_coeff.reset();
        } else if (sec == Section::Generator) {
            if (!gen_has_vector) LineError{source, block_line}.fail("generator block is missing 'vector'");
        }
        (void)at;
        seen_keys.clear();
    };

    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineno;
        const LineError at{source, lineno};
        const std::string_view line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            close_block(at);
            block_line = lineno;
            if (line == "[[generator]]") {
                sec = Section::Generator;
                f.names.emplace_back();
                f.generators.emplace_back();
                gen_has_vector = false;
            } else if (line == "[[term]]") {
                sec = Section::Term;
            } else if (line == "[class]") {
                if (have_class) at.fail("duplicate [class] table");
                have_class = true;
                sec = Section::Class;
            } else {
                at.fail("unknown table " + std::string(line));
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) at.fail("expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view val = trim(line.substr(eq + 1));
        if (!seen_keys.insert(key).second) at.fail("duplicate field '" + key + "'");
        switch (sec) {
            case Section::Top:
                if (key != "dim") at.fail("unknown top-level field '" + key + "'");
                {
                    const double d = parse_number(val, at, key);
                    if (!(d >= 1.0) || d != static_cast<double>(static_cast<std::size_t>(d))) {
                        at.fail("field 'dim' must be a positive integer");
                    }
                    f.dim = static_cast<std::size_t>(d);
                    have_dim = true;
                }
                break;
            case Section::Generator:
                if (key == "name") {
                    f.names.back() = parse_string(val, at, key);
                } else if (key == "vector") {
                    f.generators.back() = parse_vector(val, at, key);
                    gen_has_vector = true;
                } else {
                    at.fail("unknown generator field '" + key + "'");
                }
                break;
            case Section::Class:
                if (key == "m") {
                    f.cls.m = parse_number(val, at, key);
                    have_m = true;
                } else if (key == "rho") {
                    f.cls.rho = parse_number(val, at, key);
                    have_rho = true;
                } else if (key == "delta") {
                    f.cls.delta = parse_number(val, at, key);
                    have_delta = true;
                } else if (key == "m0") {
                    f.cls.m0 = parse_number(val, at, key);
                } else {
                    at.fail("unknown class field '" + key + "'");
                }
                break;
            case Section::Term:
                if (key == "freq") {
                    pending_freq = parse_string(val, at, key);
                } else if (key == "coeff") {
                    pending_coeff = parse_string(val, at, key);
                } else {
                    at.fail("unknown term field '" + key + "'");
                }
                break;
        }
    }
    close_block(LineError{source, lineno});
    const LineError end{source, lineno};
    if (!have_dim) end.fail("missing top-level field 'dim'");
    if (f.generators.empty()) end.fail("at least one [[generator]] block is required");
    if (!have_class) end.fail("missing [class] table");
    if (!have_m || !have_rho || !have_delta) end.fail("[class] needs m, rho and delta");
    for (std::size_t i = 0; i < f.names.size(); ++i) {
        if (f.names[i].empty()) f.names[i] = "g" + std::to_string(i + 1);
    }
    try {
        f.cls.validate();
    } catch (const InputError& e) {
        end.fail(e.what());
    }
    return f;
}

APSymbol to_symbol(const SymbolFile& f) {
    auto gens = GeneratorSet::make(f.dim, f.generators, f.names);
    APSymbol::Terms terms;
    for (const auto& [fr, text] : f.terms) {
        if (fr.rank() != gens->count()) {
            throw InputError("frequency " + fr.str() + " has " + std::to_string(fr.rank()) +
                             " coordinates, expected " + std::to_string(gens->count()));
        }
        terms.emplace(fr, CoeffFn::parse(text, f.dim));
    }
    return APSymbol(gens, std::move(terms), f.cls);
}

APSymbol parse_symbol_string(std::string_view text) { return to_symbol(parse_symbol_text(text)); }

APSymbol parse_symbol_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open symbol file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return to_symbol(parse_symbol_text(ss.str(), path));
}

std::string serialize_symbol(const APSymbol& a) {
    std::ostringstream os;
    os << "dim = " << a.dim() << "\n";
    const auto& g = *a.generators();
    for (std::size_t i = 0; i < g.count(); ++i) {
        os << "\n[[generator]]\n";
        os << "name = \"" << (i < g.names().size() && !g.names()[i].empty() ? g.names()[i] : "g" + std::to_string(i + 1))
           << "\"\n";
        os << "vector = [";
        for (std::size_t k = 0; k < g.dim(); ++k) os << (k ? ", " : "") << format_double(g.generators()[i][k]);
        os << "]\n";
    }
    os << "\n[class]\n";
    os << "m = " << format_double(a.cls().m) << "\n";
    os << "rho = " << format_double(a.cls().rho) << "\n";
    os << "delta = " << format_double(a.cls().delta) << "\n";
    if (a.cls().m0) os << "m0 = " << format_double(*a.cls().m0) << "\n";
    for (const auto& [fr, c] : a.terms()) {
        os << "\n[[term]]\n";
        os << "freq = \"" << fr.str() << "\"\n";
        os << "coeff = \"" << c.str() << "\"\n";
    }
    return os.str();
}

}  // namespace appdo
