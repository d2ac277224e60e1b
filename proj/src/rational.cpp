#include "hartogs/rational.hpp"

#include "hartogs/errors.hpp"

#include <cctype>

namespace hartogs {

namespace {

BigInt pow10(int e) {
    BigInt r = 1;
    for (int i = 0; i < e; ++i) r *= 10;
    return r;
}

Rational parse_decimal(std::string_view s) {
    bool negative = false;
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        negative = s[i] == '-';
        ++i;
    }
    BigInt digits = 0;
    int frac_digits = 0;
    bool seen_point = false;
    bool seen_digit = false;
    for (; i < s.size(); ++i) {
        const char c = s[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            digits = digits * 10 + (c - '0');
            seen_digit = true;
            if (seen_point) ++frac_digits;
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (!seen_digit) throw ConfigError("not a number: '" + std::string(s) + "'");
    int exponent = 0;
    if (i < s.size()) {
        if (s[i] != 'e' && s[i] != 'E') throw ConfigError("not a number: '" + std::string(s) + "'");
        ++i;
        std::size_t used = 0;
        try {
            exponent = std::stoi(std::string(s.substr(i)), &used);
        } catch (const std::exception&) {
            throw ConfigError("bad exponent in '" + std::string(s) + "'");
        }
        if (i + used != s.size()) throw ConfigError("trailing characters in '" + std::string(s) + "'");
    }
    Rational r(digits, pow10(frac_digits));
    if (exponent > 0) r *= Rational(pow10(exponent));
    if (exponent < 0) r /= Rational(pow10(-exponent));
    return negative ? Rational(-r) : r;
}

} // namespace

Rational parse_rational(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) throw ConfigError("empty rational");
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return parse_decimal(text);
    const Rational num = parse_decimal(text.substr(0, slash));
    const Rational den = parse_decimal(text.substr(slash + 1));
    if (den == 0) throw ConfigError("zero denominator in '" + std::string(text) + "'");
    return num / den;
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

std::string to_string(const Rational& r) {
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

} // namespace hartogs
