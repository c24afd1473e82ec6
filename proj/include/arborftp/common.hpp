#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace arborftp {

// Edge costs are decimal strings with at most six fractional digits,
// stored exactly as 64-bit integers scaled by 10^6.
using Cost = std::int64_t;
inline constexpr Cost kCostScale = 1'000'000;

class CostParseError : public std::runtime_error {
public:
    explicit CostParseError(const std::string& what) : std::runtime_error(what) {}
};

class OverflowError : public std::runtime_error {
public:
    explicit OverflowError(const std::string& what) : std::runtime_error(what) {}
};

class InstanceTooLarge : public std::runtime_error {
public:
    explicit InstanceTooLarge(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

// Strips a '#' comment and splits on whitespace; false on blank lines.
inline bool strip_comment_and_tokens(const std::string& line, std::vector<std::string>& tokens) {
    std::string body = line;
    if (auto pos = body.find('#'); pos != std::string::npos) body.resize(pos);
    tokens.clear();
    std::istringstream in(body);
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
    return !tokens.empty();
}

}  // namespace detail

inline Cost parse_cost(std::string_view text, bool allow_negative) {
    std::size_t pos = 0;
    bool negative = false;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
        negative = text[pos] == '-';
        ++pos;
    }
    if (negative && !allow_negative)
        throw CostParseError("negative cost not allowed: " + std::string(text));
    if (pos >= text.size())
        throw CostParseError("empty cost value");

    std::int64_t integral = 0;
    bool any_digit = false;
    constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
        int d = text[pos] - '0';
        if (integral > (kMax - d) / 10)
            throw OverflowError("cost too large: " + std::string(text));
        integral = integral * 10 + d;
        any_digit = true;
        ++pos;
    }
    std::int64_t frac = 0;
    int frac_digits = 0;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
            if (frac_digits == 6)
                throw CostParseError("more than 6 fractional digits: " + std::string(text));
            frac = frac * 10 + (text[pos] - '0');
            ++frac_digits;
            any_digit = true;
            ++pos;
        }
    }
    if (!any_digit || pos != text.size())
        throw CostParseError("malformed cost value: " + std::string(text));
    for (int i = frac_digits; i < 6; ++i) frac *= 10;
    if (integral > (kMax - frac) / kCostScale)
        throw OverflowError("cost too large: " + std::string(text));
    Cost scaled = integral * kCostScale + frac;
    return negative ? -scaled : scaled;
}

inline std::string format_cost(Cost c) {
    std::string sign;
    if (c < 0) {
        sign = "-";
        c = -c;
    }
    Cost integral = c / kCostScale;
    Cost frac = c % kCostScale;
    std::string out = sign + std::to_string(integral);
    if (frac != 0) {
        std::string digits = std::to_string(frac);
        digits.insert(digits.begin(), 6 - digits.size(), '0');
        while (digits.back() == '0') digits.pop_back();
        out += "." + digits;
    }
    return out;
}

// Deterministic, platform-independent generator. std::uniform_int_distribution
// is implementation-defined, so bounded draws go through next_below().
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound).
    std::uint64_t next_below(std::uint64_t bound) { return next() % bound; }

    // Uniform in [lo, hi].
    std::int64_t next_in(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(next_below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Rational make(std::int64_t num, std::int64_t den) {
        std::int64_t g = std::gcd(num, den);
        if (g == 0) g = 1;
        return Rational{num / g, den / g};
    }

    bool operator==(const Rational&) const = default;
};

}  // namespace arborftp
