#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "dqp/errors.hpp"
#include "dqp/io.hpp"
#include "dqp/text.hpp"

namespace dqp {

namespace {

class Reader {
public:
    explicit Reader(std::string_view text) : s_(text) {}

    bool done() const { return i_ >= s_.size(); }
    char peek() const { return done() ? '\0' : s_[i_]; }
    int line() const { return line_; }

    [[noreturn]] void error(const std::string& msg) const { throw ParseError(msg, line_, column()); }

    void advance() {
        if (s_[i_] == '\n') {
            ++line_;
            line_start_ = i_ + 1;
        }
        ++i_;
    }

    // Spaces, tabs and comments; newlines stay significant.
    void skip_blank() {
        while (!done()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r') advance();
            else if (c == '#')
                while (!done() && peek() != '\n') advance();
            else break;
        }
    }

    void skip_separators() {
        for (;;) {
            skip_blank();
            if (peek() == ',' || peek() == '\n') advance();
            else return;
        }
    }

    std::string key() {
        std::string k;
        while (!done() && peek() != '=' && peek() != '\n' && peek() != ',' && peek() != '#') {
            k += peek();
            advance();
        }
        while (!k.empty() && std::isspace(static_cast<unsigned char>(k.back()))) k.pop_back();
        if (peek() != '=') error("expected '=' after '" + k + "'");
        advance();
        return k;
    }

    std::string quoted() {
        if (peek() != '"') error("expected a quoted string");
        advance();
        std::string out;
        for (;;) {
            if (done()) error("unterminated string");
            char c = peek();
            advance();
            if (c == '"') {
                if (peek() == '"') {
                    out += '"';
                    advance();
                    continue;
                }
                return out;
            }
            out += c;
        }
    }

    std::string word() {
        std::string w;
        while (!done()) {
            char c = peek();
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.' ||
                c == '+' || c == '!' || c == '<' || c == '>' || c == '=') {
                w += c;
                advance();
            } else break;
        }
        if (w.empty()) error(std::string("unexpected character '") + peek() + "'");
        return w;
    }

    // ( item , item ... ) where item is read by `item`
    template <class F>
    void list(F item) {
        if (peek() != '(') error("expected '('");
        advance();
        skip_space();
        if (peek() == ')') {
            advance();
            return;
        }
        for (;;) {
            skip_space();
            item();
            skip_space();
            if (peek() == ',') {
                advance();
                continue;
            }
            if (peek() == ')') {
                advance();
                return;
            }
            error("malformed tuple");
        }
    }

    void skip_space() {
        while (!done() && std::isspace(static_cast<unsigned char>(peek()))) advance();
    }

    // Current entry must end here.
    void end_of_entry() {
        skip_blank();
        if (!done() && peek() != ',' && peek() != '\n') error("unexpected text after value");
    }

private:
    int column() const { return static_cast<int>(i_ - line_start_) + 1; }

    std::string_view s_;
    std::size_t i_ = 0;
    int line_ = 1;
    std::size_t line_start_ = 0;
};

const char* const kAxisWords[] = {"descendant-or-self", "descendant", "following", "child", "self"};

BindingValue classify_word(const std::string& w) {
    for (const char* a : kAxisWords) {
        std::string_view base(a);
        if (w.rfind(base, 0) != 0) continue;
        std::string_view rest = std::string_view(w).substr(base.size());
        if (rest.empty()) return BindingValue::axis_step(*parse_axis(base));
        if (std::all_of(rest.begin(), rest.end(), [](char c) { return c >= '0' && c <= '9'; })) {
            int depth = 0;
            std::from_chars(rest.data(), rest.data() + rest.size(), depth);
            return BindingValue::axis_step(*parse_axis(base), depth);
        }
    }
    if (!w.empty() && (std::isdigit(static_cast<unsigned char>(w[0])) || w[0] == '-' || w[0] == '+' || w[0] == '.'))
        if (auto d = parse_xsd_double(w)) return BindingValue::num(*d);
    return BindingValue::word(w);
}

BindingValue value(Reader& r) {
    r.skip_blank();
    if (r.peek() == '"') return BindingValue::string(r.quoted());
    if (r.peek() == '(') {
        std::vector<std::string> items;
        r.list([&] { items.push_back(r.quoted()); });
        return BindingValue::tuple(std::move(items));
    }
    std::string w = r.word();
    if (w == "attribute") {
        r.skip_blank();
        return BindingValue::attribute(r.quoted());
    }
    return classify_word(w);
}

bool is_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// Shape of a key suffix: trailing uppercase letters then digits ("A2", "1", "B").
std::pair<std::size_t, std::size_t> suffix_shape(std::string_view x) {
    std::size_t digits = 0;
    while (digits < x.size() && std::isdigit(static_cast<unsigned char>(x[x.size() - 1 - digits]))) ++digits;
    std::size_t letters = 0;
    while (letters + digits < x.size() && std::isupper(static_cast<unsigned char>(x[x.size() - 1 - digits - letters])))
        ++letters;
    return {letters, digits};
}

// "Property0" and "1" -> "Property1"; "PropertyA1" and "A2" -> "PropertyA2".
std::string sibling_key(const std::string& first, const std::string& suffix, const Reader& r) {
    auto [letters, digits] = suffix_shape(suffix);
    if (letters + digits != suffix.size()) r.error("bad key suffix '" + suffix + "'");
    std::size_t cut = first.size();
    if (digits) {
        while (cut > 0 && std::isdigit(static_cast<unsigned char>(first[cut - 1]))) --cut;
        if (cut == first.size()) r.error("key '" + first + "' has no numeric suffix");
    }
    for (std::size_t k = 0; k < letters; ++k) {
        if (cut == 0 || !std::isupper(static_cast<unsigned char>(first[cut - 1])))
            r.error("key '" + first + "' does not end like '" + suffix + "'");
        --cut;
    }
    return first.substr(0, cut) + suffix;
}

std::vector<std::string> expand_key(const std::string& raw, const Reader& r) {
    std::istringstream in(raw);
    std::vector<std::string> words;
    for (std::string w; in >> w;) words.push_back(w);
    if (words.empty()) r.error("empty key");
    if (words.size() % 2 == 0) r.error("malformed key '" + raw + "'");
    std::vector<std::string> keys{words[0]};
    for (std::size_t i = 1; i < words.size(); i += 2) {
        const std::string& conj = words[i];
        const std::string& suffix = words[i + 1];
        if (conj == "and") {
            keys.push_back(sibling_key(words[0], suffix, r));
        } else if (conj == "to") {
            std::string last = keys.back();
            std::string end = sibling_key(words[0], suffix, r);
            std::size_t cut = end.size() - suffix.size();
            std::string prefix = end.substr(0, cut);
            std::string from = last.substr(cut);
            if (last.compare(0, cut, prefix) != 0) r.error("range endpoints differ in '" + raw + "'");
            if (is_digits(from) && is_digits(suffix)) {
                int a = std::stoi(from), b = std::stoi(suffix);
                if (b < a) r.error("empty range in '" + raw + "'");
                for (int k = a + 1; k <= b; ++k) keys.push_back(prefix + std::to_string(k));
            } else if (from.size() == 1 && suffix.size() == 1 && std::isupper(static_cast<unsigned char>(from[0])) &&
                       std::isupper(static_cast<unsigned char>(suffix[0]))) {
                if (suffix[0] < from[0]) r.error("empty range in '" + raw + "'");
                for (char c = static_cast<char>(from[0] + 1); c <= suffix[0]; ++c) keys.push_back(prefix + c);
            } else {
                r.error("range needs numeric or single-letter endpoints: '" + raw + "'");
            }
        } else {
            r.error("expected 'and' or 'to' in key '" + raw + "'");
        }
    }
    return keys;
}

}  // namespace

std::vector<Binding> parse_bindings(std::string_view text) {
    Reader r(text);
    std::vector<Binding> out;
    for (;;) {
        r.skip_separators();
        if (r.done()) return out;
        Binding b;
        b.line = r.line();
        std::string raw = r.key();
        b.keys = expand_key(raw, r);
        b.value = value(r);
        r.end_of_entry();
        out.push_back(std::move(b));
    }
}

std::string format_bindings(const std::vector<Binding>& bindings) {
    std::string out;
    for (const auto& b : bindings)
        for (const auto& k : b.keys) out += k + " = " + describe(b.value) + "\n";
    return out;
}

AdaptionDecisions parse_decisions(std::string_view text) {
    Reader r(text);
    AdaptionDecisions out;
    for (;;) {
        r.skip_separators();
        if (r.done()) return out;
        std::string key = r.key();
        if (key.empty()) r.error("empty relation name");
        r.skip_blank();
        std::string kind = r.word();
        RelationDecision d;
        if (kind == "navigation") {
            r.skip_blank();
            if (r.peek() == '(') {
                d.axes.clear();
                r.list([&] {
                    std::string a = r.word();
                    auto axis = parse_axis(a);
                    if (!axis) r.error("unknown axis '" + a + "'");
                    d.axes.push_back(*axis);
                });
            }
        } else if (kind == "reference") {
            d = RelationDecision::reference();
            r.skip_blank();
            if (r.peek() == '(') {
                std::vector<std::string> names;
                r.list([&] { names.push_back(r.quoted()); });
                if (names.size() != 2) r.error("reference takes two property names");
                d.source_property = names[0];
                d.target_property = names[1];
            }
        } else {
            r.error("expected navigation or reference, got '" + kind + "'");
        }
        r.end_of_entry();
        if (!out.emplace(key, d).second) r.error("duplicate decision for '" + key + "'");
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace dqp
