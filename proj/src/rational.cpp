/*
 * src/rational.cpp
 *
 * Copyright 2026 The fracbiot Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "fracbiot/rational.hpp"

#include <cctype>
#include <numeric>
#include <sstream>

#include "fracbiot/errors.hpp"

namespace fracbiot {
namespace {

__int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

__int128 pow10_128(int k) {
    __int128 r = 1;
    for (int i = 0; i < k; ++i) r *= 10;
    return r;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
    *this = from_wide(num, den);
}

Rational Rational::from_wide(__int128 num, __int128 den) {
    if (den == 0) throw ValidationError("rational", "rational number with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const __int128 g = gcd128(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    constexpr __int128 lim = static_cast<__int128>(INT64_MAX);
    if (num > lim || num < -lim || den > lim) {
        throw ValidationError("rational", "rational number exceeds 64-bit range");
    }
    Rational r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
}

Rational Rational::parse(std::string_view text) {
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    }
    auto fail = [&]() -> Rational {
        throw ValidationError("rational", "cannot parse exponent '" + std::string(text) + "' as a rational");
    };
    if (s.empty()) return fail();

    const auto slash = s.find('/');
    if (slash != std::string::npos) {
        const Rational p = parse(s.substr(0, slash));
        const Rational q = parse(s.substr(slash + 1));
        if (q.num_ == 0) return fail();
        return p / q;
    }

    std::size_t pos = 0;
    bool negative = false;
    if (s[pos] == '+' || s[pos] == '-') {
        negative = s[pos] == '-';
        ++pos;
    }
    __int128 mantissa = 0;
    int frac_digits = 0;
    bool seen_digit = false;
    bool seen_point = false;
    for (; pos < s.size(); ++pos) {
        const char c = s[pos];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            mantissa = mantissa * 10 + (c - '0');
            if (seen_point) ++frac_digits;
            seen_digit = true;
            if (mantissa > static_cast<__int128>(INT64_MAX) * 1000) return fail();
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (!seen_digit) return fail();
    int exponent = 0;
    if (pos < s.size()) {
        if (s[pos] != 'e' && s[pos] != 'E') return fail();
        ++pos;
        bool exp_negative = false;
        if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
            exp_negative = s[pos] == '-';
            ++pos;
        }
        if (pos >= s.size()) return fail();
        for (; pos < s.size(); ++pos) {
            if (!std::isdigit(static_cast<unsigned char>(s[pos]))) return fail();
            exponent = exponent * 10 + (s[pos] - '0');
            if (exponent > 30) return fail();
        }
        if (exp_negative) exponent = -exponent;
    }
    const int scale = exponent - frac_digits;
    if (scale > 30 || scale < -30) return fail();
    __int128 num = negative ? -mantissa : mantissa;
    __int128 den = 1;
    if (scale >= 0) {
        num *= pow10_128(scale);
    } else {
        den = pow10_128(-scale);
    }
    return from_wide(num, den);
}

std::string Rational::str() const {
    std::ostringstream os;
    os << *this;
    return os.str();
}

Rational operator+(const Rational& a, const Rational& b) {
    return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                               static_cast<__int128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
    return Rational::from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
    return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    return lhs <=> rhs;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
    os << r.num();
    if (r.den() != 1) os << '/' << r.den();
    return os;
}

}  // namespace fracbiot
