#include "appdo/rational.hpp"

#include <cctype>
#include <cmath>
#include <numeric>
#include <ostream>

#include "appdo/error.hpp"

namespace appdo {
namespace {

std::int64_t narrow(__int128 v) {
    if (v > INT64_MAX || v < -static_cast<__int128>(INT64_MAX)) {
        throw Error("rational arithmetic overflow");
    }
    return static_cast<std::int64_t>(v);
}

void normalize(__int128 n, __int128 d, std::int64_t& num, std::int64_t& den) {
    if (d == 0) throw DomainError("rational with zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    __int128 a = n < 0 ? -n : n;
    __int128 b = d;
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    if (a > 1) {
        n /= a;
        d /= a;
    }
    num = narrow(n);
    den = narrow(d);
}

}  // namespace

Rational::Rational(std::int64_t num) : num_(num), den_(1) {}

Rational::Rational(std::int64_t num, std::int64_t den) { normalize(num, den, num_, den_); }

Rational Rational::operator-() const {
    Rational r;
    r.num_ = narrow(-static_cast<__int128>(num_));
    r.den_ = den_;
    return r;
}

Rational& Rational::operator+=(const Rational& o) {
    normalize(static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_,
              static_cast<__int128>(den_) * o.den_, num_, den_);
    return *this;
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
    normalize(static_cast<__int128>(num_) * o.num_, static_cast<__int128>(den_) * o.den_, num_, den_);
    return *this;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.num_ == 0) throw DomainError("rational division by zero");
    normalize(static_cast<__int128>(num_) * o.den_, static_cast<__int128>(den_) * o.num_, num_, den_);
    return *this;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string Rational::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    text = trim(text);
    if (text.empty()) throw InputError("empty rational literal");

    auto parse_int = [&](std::string_view s) -> std::int64_t {
        s = trim(s);
        bool neg = false;
        if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
            neg = s.front() == '-';
            s.remove_prefix(1);
        }
        if (s.empty()) throw InputError("malformed rational literal '" + std::string(text) + "'");
        __int128 v = 0;
        for (char c : s) {
            if (c < '0' || c > '9') throw InputError("malformed rational literal '" + std::string(text) + "'");
            v = v * 10 + (c - '0');
            if (v > INT64_MAX) throw InputError("rational literal out of range '" + std::string(text) + "'");
        }
        return static_cast<std::int64_t>(neg ? -v : v);
    };

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view ip = text.substr(0, dot);
        std::string_view fp = text.substr(dot + 1);
        bool neg = !ip.empty() && ip.front() == '-';
        if (!ip.empty() && (ip.front() == '-' || ip.front() == '+')) ip.remove_prefix(1);
        std::int64_t scale = 1;
        for (std::size_t i = 0; i < fp.size(); ++i) {
            if (scale > INT64_MAX / 10) throw InputError("decimal literal too long '" + std::string(text) + "'");
            scale *= 10;
        }
        const std::int64_t whole = ip.empty() ? 0 : parse_int(ip);
        const std::int64_t frac = fp.empty() ? 0 : parse_int(fp);
        Rational r = Rational(whole) + Rational(frac, scale);
        return neg ? -r : r;
    }
    return Rational(parse_int(text));
}

Rational Rational::from_double(double v, std::int64_t max_den) {
    if (!std::isfinite(v)) throw InputError("non-finite value has no rational form");
    for (std::int64_t d = 1; d <= max_den; d *= 2) {
        const double scaled = v * static_cast<double>(d);
        if (std::abs(scaled) > 9.0e15) break;
        if (scaled == std::nearbyint(scaled)) return Rational(static_cast<std::int64_t>(scaled), d);
    }
    // Non-dyadic denominators (e.g. 1/10) via bounded continued fractions.
    double x = v;
    std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    for (int it = 0; it < 64; ++it) {
        const double a = std::floor(x);
        if (std::abs(a) > 1e15) break;
        const auto ai = static_cast<std::int64_t>(a);
        const __int128 h2 = static_cast<__int128>(ai) * h1 + h0;
        const __int128 k2 = static_cast<__int128>(ai) * k1 + k0;
        if (k2 > max_den || h2 > INT64_MAX || h2 < -static_cast<__int128>(INT64_MAX)) break;
        h0 = h1;
        h1 = static_cast<std::int64_t>(h2);
        k0 = k1;
        k1 = static_cast<std::int64_t>(k2);
        if (static_cast<double>(h1) / static_cast<double>(k1) == v) return Rational(h1, k1);
        const double frac = x - a;
        if (frac == 0.0) break;
        x = 1.0 / frac;
    }
    throw InputError("value " + std::to_string(v) + " is not a rational with denominator <= " +
                     std::to_string(max_den));
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace appdo
