#include "dqp/text.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>

namespace dqp {

std::wstring utf8_to_wide(std::string_view s) {
    std::wstring out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size();) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        char32_t cp;
        int extra;
        if (c < 0x80) {
            cp = c;
            extra = 0;
        } else if ((c >> 5) == 0x6) {
            cp = c & 0x1f;
            extra = 1;
        } else if ((c >> 4) == 0xe) {
            cp = c & 0x0f;
            extra = 2;
        } else if ((c >> 3) == 0x1e) {
            cp = c & 0x07;
            extra = 3;
        } else {
            out.push_back(0xfffd);
            ++i;
            continue;
        }
        bool ok = true;
        for (int k = 1; k <= extra; ++k) {
            if (i + k >= s.size()) {
                ok = false;
                break;
            }
            unsigned char cc = static_cast<unsigned char>(s[i + k]);
            if ((cc >> 6) != 0x2) {
                ok = false;
                break;
            }
            cp = (cp << 6) | (cc & 0x3f);
        }
        if (!ok) {
            out.push_back(0xfffd);
            ++i;
            continue;
        }
        out.push_back(static_cast<wchar_t>(cp));
        i += extra + 1;
    }
    return out;
}

std::string wide_to_utf8(std::wstring_view s) {
    std::string out;
    out.reserve(s.size());
    for (wchar_t wc : s) {
        auto cp = static_cast<char32_t>(wc);
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
        } else {
            out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
        }
    }
    return out;
}

std::optional<std::wregex> compile_regex(const std::string& pattern) {
    try {
        return std::wregex(utf8_to_wide(pattern), std::regex::ECMAScript);
    } catch (const std::regex_error&) {
        return std::nullopt;
    }
}

namespace {

class Scanner {
public:
    explicit Scanner(std::string_view s) : s_(s) {}
    bool done() const { return pos_ == s_.size(); }
    bool eat(char c) {
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    bool peek(char c) const { return pos_ < s_.size() && s_[pos_] == c; }
    // Exactly n digits.
    std::optional<int> digits(int n) {
        if (pos_ + n > s_.size()) return std::nullopt;
        int v = 0;
        for (int i = 0; i < n; ++i) {
            char c = s_[pos_ + i];
            if (c < '0' || c > '9') return std::nullopt;
            v = v * 10 + (c - '0');
        }
        pos_ += n;
        return v;
    }
    // At least n digits.
    std::optional<long long> min_digits(int n) {
        std::size_t start = pos_;
        long long v = 0;
        while (pos_ < s_.size() && s_[pos_] >= '0' && s_[pos_] <= '9') {
            v = v * 10 + (s_[pos_] - '0');
            ++pos_;
        }
        if (static_cast<int>(pos_ - start) < n) return std::nullopt;
        // leading zeros are only allowed for four-digit years
        if (pos_ - start > 4 && s_[start] == '0') return std::nullopt;
        return v;
    }
    std::optional<double> fraction() {
        if (!eat('.')) return 0.0;
        std::size_t start = pos_;
        double v = 0, scale = 0.1;
        while (pos_ < s_.size() && s_[pos_] >= '0' && s_[pos_] <= '9') {
            v += (s_[pos_] - '0') * scale;
            scale /= 10;
            ++pos_;
        }
        if (pos_ == start) return std::nullopt;
        return v;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;
};

bool leap(long long y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(long long y, int m) {
    static const int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    return m == 2 && leap(y) ? 29 : kDays[m - 1];
}

// Days from 1970-01-01 (proleptic Gregorian).
long long days_from_civil(long long y, int m, int d) {
    y -= m <= 2;
    const long long era = (y >= 0 ? y : y - 399) / 400;
    const long long yoe = y - era * 400;
    const long long doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const long long doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + doe - 719468;
}

std::optional<long long> parse_date_part(Scanner& sc) {
    bool neg = sc.eat('-');
    auto y = sc.min_digits(4);
    if (!y || !sc.eat('-')) return std::nullopt;
    auto m = sc.digits(2);
    if (!m || !sc.eat('-')) return std::nullopt;
    auto d = sc.digits(2);
    if (!d) return std::nullopt;
    long long year = neg ? -*y : *y;
    if (*y == 0) return std::nullopt;  // no year zero in XSD 1.0
    if (*m < 1 || *m > 12) return std::nullopt;
    if (*d < 1 || *d > days_in_month(year, *m)) return std::nullopt;
    return days_from_civil(year, *m, *d);
}

std::optional<double> parse_time_part(Scanner& sc) {
    auto h = sc.digits(2);
    if (!h || !sc.eat(':')) return std::nullopt;
    auto mi = sc.digits(2);
    if (!mi || !sc.eat(':')) return std::nullopt;
    auto s = sc.digits(2);
    if (!s) return std::nullopt;
    auto frac = sc.fraction();
    if (!frac) return std::nullopt;
    if (*mi > 59 || *s > 59) return std::nullopt;
    if (*h > 24) return std::nullopt;
    if (*h == 24 && (*mi != 0 || *s != 0 || *frac != 0)) return std::nullopt;
    return *h * 3600.0 + *mi * 60.0 + *s + *frac;
}

// Zone offset in seconds; 0 when absent. nullopt for a malformed zone.
std::optional<int> parse_zone(Scanner& sc) {
    if (sc.done()) return 0;
    if (sc.eat('Z')) return sc.done() ? std::optional<int>(0) : std::nullopt;
    int sign;
    if (sc.eat('+')) sign = 1;
    else if (sc.eat('-')) sign = -1;
    else return std::nullopt;
    auto h = sc.digits(2);
    if (!h || !sc.eat(':')) return std::nullopt;
    auto m = sc.digits(2);
    if (!m || !sc.done()) return std::nullopt;
    if (*m > 59 || *h > 14 || (*h == 14 && *m != 0)) return std::nullopt;
    return sign * (*h * 3600 + *m * 60);
}

}  // namespace

std::optional<double> temporal_seconds(std::string_view s, char kind) {
    Scanner sc(s);
    double total = 0;
    if (kind == 'd' || kind == 'D') {
        auto days = parse_date_part(sc);
        if (!days) return std::nullopt;
        total = static_cast<double>(*days) * 86400.0;
        if (kind == 'D' && !sc.eat('T')) return std::nullopt;
    }
    if (kind == 't' || kind == 'D') {
        auto t = parse_time_part(sc);
        if (!t) return std::nullopt;
        total += *t;
    }
    auto zone = parse_zone(sc);
    if (!zone) return std::nullopt;
    return total - *zone;
}

bool is_xsd_date(std::string_view s) { return temporal_seconds(s, 'd').has_value(); }
bool is_xsd_time(std::string_view s) { return temporal_seconds(s, 't').has_value(); }
bool is_xsd_datetime(std::string_view s) { return temporal_seconds(s, 'D').has_value(); }

std::optional<double> parse_xsd_double(std::string_view s) {
    auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
    while (!s.empty() && ws(s.front())) s.remove_prefix(1);
    while (!s.empty() && ws(s.back())) s.remove_suffix(1);
    if (s.empty()) return std::nullopt;
    if (s == "INF" || s == "+INF") return HUGE_VAL;
    if (s == "-INF") return -HUGE_VAL;
    if (s == "NaN") return std::nan("");
    std::size_t i = 0;
    if (s[i] == '+' || s[i] == '-') ++i;
    std::size_t int_digits = 0, frac_digits = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++int_digits;
    if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++frac_digits;
    }
    if (int_digits + frac_digits == 0) return std::nullopt;
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
        std::size_t exp_digits = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++exp_digits;
        if (exp_digits == 0) return std::nullopt;
    }
    if (i != s.size()) return std::nullopt;
    return std::strtod(std::string(s).c_str(), nullptr);
}

std::string format_number(double v) {
    if (std::isnan(v)) return "NaN";
    if (std::isinf(v)) return v > 0 ? "INF" : "-INF";
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += '"';
    return out;
}

}  // namespace dqp
