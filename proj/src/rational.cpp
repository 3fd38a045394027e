#include "dofnet/rational.hpp"

#include "dofnet/errors.hpp"

#include <charconv>

namespace dofnet {

std::string to_string(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

namespace {

std::int64_t parse_int(std::string_view s, const std::string& whole) {
    std::int64_t v = 0;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw InvalidParameter("not a rational: '" + whole + "'");
    return v;
}

}  // namespace

Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(parse_int(text, text));
    std::int64_t p = parse_int(std::string_view(text).substr(0, slash), text);
    std::int64_t q = parse_int(std::string_view(text).substr(slash + 1), text);
    if (q == 0) throw InvalidParameter("zero denominator: '" + text + "'");
    return Rational(p, q);
}

}  // namespace dofnet
