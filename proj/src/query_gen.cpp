#include "dqp/query_gen.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <set>
#include <vector>

#include "dqp/errors.hpp"
#include "dqp/plan.hpp"
#include "dqp/text.hpp"

namespace dqp {

namespace {

// XQuery string literal: quotes doubled, '&' written as an entity reference.
std::string xq_string(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else if (c == '&') out += "&amp;";
        else out += c;
    }
    return out + "\"";
}

std::string_view cast_type(ValueType t) {
    switch (t) {
        case ValueType::Number: return "xs:double";
        case ValueType::Boolean: return "xs:boolean";
        case ValueType::Date: return "xs:date";
        case ValueType::Time: return "xs:time";
        case ValueType::DateTime: return "xs:dateTime";
        default: return "";
    }
}

std::string axis_path(Axis axis, int depth) {
    std::string step = std::string(to_string(axis)) + "::*";
    std::string out = step;
    for (int i = 1; i < depth; ++i) out += "/" + step;
    return out;
}

class Writer {
public:
    explicit Writer(const CompletePattern& p) : p_(p), plan_(make_plan(p)) {}

    std::string run() {
        const GraphPlan& outer = plan_.outer;
        if (outer.steps.empty()) throw PatternError("outer graph of '" + p_.name() + "' binds no element");
        std::string q;
        for (std::size_t i = 0; i < outer.steps.size(); ++i)
            q += "for " + var(outer.steps[i].slot) + " in " + path(outer, i) + "\n";
        q += "where " + condition(plan_.condition, 1) + "\n";
        q += "return ";
        if (plan_.returns.size() == 1) {
            q += var(plan_.returns[0]);
        } else {
            q += "(";
            for (std::size_t i = 0; i < plan_.returns.size(); ++i) q += (i ? ", " : "") + var(plan_.returns[i]);
            q += ")";
        }
        return q + "\n";
    }

private:
    static std::string var(int slot) { return "$var" + std::to_string(slot); }

    // Node bound to `slot`, seen from a predicate on `current`.
    static std::string node(int slot, int current) {
        if (slot == current) return ".";
        if (slot == 0) return "(/)";
        return var(slot);
    }

    static std::string access(const PropertyAccess& a, int current) {
        std::string base = node(a.slot, current) + "/";
        switch (a.kind) {
            case PropertyKind::Name: return base + "name()";
            case PropertyKind::Data: return base + "data()";
            case PropertyKind::Attribute:
                // prefixed names are matched as written, like element names
                if (a.attribute.find(':') != std::string::npos)
                    return base + "@*[name()=" + xq_string(a.attribute) + "]";
                return base + "@" + a.attribute;
        }
        return base;
    }

    // Path of step i with its predicates.
    std::string path(const GraphPlan& g, std::size_t i) {
        const PlanStep& s = g.steps[i];
        std::string out = s.anchor == 0 ? "/" : var(s.anchor) + "/";
        out += axis_path(s.axis, s.depth);
        if (i == 0)
            for (const auto& c : g.pre) out += "[" + check(*g.graph, c, s.slot) + "]";
        for (const auto& c : s.checks) out += "[" + check(*g.graph, c, s.slot) + "]";
        return out;
    }

    // -------------------------------------------------------------- checks

    struct Side {
        std::string text;
        bool list = false;
        bool element = false;
        int slot = 0;
    };

    Side operand(const Graph& g, const Comparable& c, int current) {
        Side s;
        if (auto* e = std::get_if<ElementId>(&c)) {
            s.slot = plan_.slot(*e);
            s.text = node(s.slot, current);
            s.element = true;
        } else if (auto* pr = std::get_if<PropertyId>(&c)) {
            s.text = access(plan_.access(*pr), current);
        } else if (auto* o = std::get_if<OperatorId>(&c)) {
            const Operator* op = g.find_operator(*o);
            if (!op) throw PatternError("unknown operator '" + o->str() + "'");
            s.text = "string(" + op_text(g, *op, current) + ")";
        } else {
            const Parameter* par = p_.find_parameter(std::get<ParameterId>(c));
            if (!par) throw PatternError("unknown parameter");
            std::visit(
                [&](const auto& body) {
                    using T = std::decay_t<decltype(body)>;
                    if constexpr (std::is_same_v<T, TextList>) {
                        s.list = true;
                        s.text = "(";
                        if (body.values)
                            for (std::size_t i = 0; i < body.values->size(); ++i)
                                s.text += (i ? "," : "") + xq_string((*body.values)[i]);
                        s.text += ")";
                    } else if constexpr (std::is_same_v<T, NumberValue>) {
                        s.text = xq_string(body.value ? format_number(*body.value) : "");
                    } else if constexpr (std::is_same_v<T, BooleanValue>) {
                        s.text = xq_string(body.value && *body.value ? "true" : "false");
                    } else if constexpr (std::is_same_v<T, TextLiteral> || std::is_same_v<T, DateValue> ||
                                         std::is_same_v<T, TimeValue> || std::is_same_v<T, DateTimeValue>) {
                        s.text = xq_string(body.value ? *body.value : "");
                    } else {
                        throw PatternError("parameter '" + par->name + "' is not a value");
                    }
                },
                par->body);
        }
        return s;
    }

    static std::string compare(const std::string& l, ComparisonOp op, const std::string& r, ValueType t,
                               bool sequences) {
        std::string sym(xquery_symbol(op));
        std::string_view cast = cast_type(t);
        if (cast.empty()) return l + sym + r;
        std::string c(cast);
        if (!sequences)
            return "(if (" + l + " castable as " + c + " and " + r + " castable as " + c + ") then " + c + "(" + l +
                   ")" + sym + c + "(" + r + ") else false())";
        return "(some $l in " + l + ", $r in " + r + " satisfies (if ($l castable as " + c + " and $r castable as " +
               c + ") then " + c + "($l)" + sym + c + "($r) else false()))";
    }

    std::string op_text(const Graph& g, const Operator& op, int current) {
        if (auto* m = std::get_if<Match>(&op.body)) {
            const Parameter* par = p_.find_parameter(m->regex_param);
            auto* lit = par ? std::get_if<TextLiteral>(&par->body) : nullptr;
            if (!lit || !lit->value) throw PatternError("match without a regular expression");
            PropertyAccess a = plan_.access(m->property);
            std::string subject = access(a, current);
            std::string test = "matches(" + subject + ", " + xq_string(*lit->value) + ")";
            // an absent attribute would be matched as ""
            if (a.kind == PropertyKind::Attribute) return "(exists(" + subject + ") and " + test + ")";
            return test;
        }
        const auto& c = std::get<Comparison>(op.body);
        ComparisonOp o = comparison_op(p_, c.op_param);
        Side l = operand(g, c.left, current), r = operand(g, c.right, current);
        if (l.element && r.element && (o == ComparisonOp::Equal || o == ComparisonOp::NotEqual)) {
            std::string eq = "deep-equal(" + l.text + ", " + r.text + ")";
            return o == ComparisonOp::Equal ? eq : "not(" + eq + ")";
        }
        ValueType t = c.value_type;
        if (t == ValueType::Unspecified) t = ValueType::String;
        if (o == ComparisonOp::NotEqual && (l.list || r.list)) {
            const Side& list = r.list ? r : l;
            const Side& other = r.list ? l : r;
            return "(every $item in " + list.text + " satisfies " +
                   compare(other.text, o, "$item", t, other.list) + ")";
        }
        return compare(l.text, o, r.text, t, l.list || r.list);
    }

    std::string check(const Graph& g, const PlanCheck& c, int current) {
        switch (c.kind) {
            case PlanCheck::Kind::Operator: return op_text(g, *c.op, current);
            case PlanCheck::Kind::Reference: {
                const Relation& r = *c.relation;
                return access(plan_.access(r.source_property), current) +
                       std::string(xquery_symbol(comparison_op(p_, r.comparison_param))) +
                       access(plan_.access(r.target_property), current);
            }
            case PlanCheck::Kind::Navigation: {
                const Relation& r = *c.relation;
                int axis_depth = 1;
                Axis axis = Axis::Child;
                if (const Parameter* ax = p_.find_parameter(r.axis_param))
                    if (auto* o = std::get_if<AxisOptions>(&ax->body)) {
                        if (o->value) axis = *o->value;
                        axis_depth = o->depth;
                    }
                return "(some $n in " + node(plan_.slot(r.source), current) + "/" + axis_path(axis, axis_depth) +
                       " satisfies $n is " + node(plan_.slot(r.target), current) + ")";
            }
        }
        return "true()";
    }

    std::string pre_conjunction(const GraphPlan& g) {
        std::string out;
        for (const auto& c : g.pre) out += (out.empty() ? "" : " and ") + check(*g.graph, c, -1);
        return out;
    }

    // ---------------------------------------------------------- conditions

    static std::string indent(int level) { return "\n" + std::string(static_cast<std::size_t>(level), ' '); }

    std::string condition(const ConditionPlan& c, int level) {
        switch (c.kind) {
            case ConditionPlan::Kind::True: return "true()";
            case ConditionPlan::Kind::Exists:
            case ConditionPlan::Kind::Forall: {
                bool exists = c.kind == ConditionPlan::Kind::Exists;
                std::string inner = condition(c.children[0], level + 1);
                const GraphPlan& g = c.graph;
                if (g.steps.empty()) {
                    if (g.pre.empty()) return inner;
                    std::string pre = pre_conjunction(g);
                    return exists ? "(" + pre + " and " + inner + ")" : "(not(" + pre + ") or " + inner + ")";
                }
                std::string out;
                for (std::size_t i = 0; i < g.steps.size(); ++i) {
                    if (i) out += indent(level) + "satisfies ";
                    out += std::string(exists ? "some " : "every ") + var(g.steps[i].slot) + " in " + path(g, i);
                }
                return out + indent(level) + "satisfies " + inner;
            }
            case ConditionPlan::Kind::And:
            case ConditionPlan::Kind::Or:
                return "(" + operand(c.children[0], level + 1) +
                       (c.kind == ConditionPlan::Kind::And ? " and " : " or ") + operand(c.children[1], level + 1) +
                       ")";
            case ConditionPlan::Kind::Not:
                return "not(" + indent(level + 1) + condition(c.children[0], level + 1) + indent(level) + ")";
            case ConditionPlan::Kind::Count: {
                std::string rhs = c.number ? std::to_string(*c.number) + ".0" : count(c.children[1], level);
                return count(c, level) + " " + std::string(xquery_symbol(c.op)) + " " + rhs;
            }
        }
        return "true()";
    }

    // quantified expressions are not allowed as bare operands of and/or
    std::string operand(const ConditionPlan& c, int level) {
        std::string s = condition(c, level);
        bool quantified = (c.kind == ConditionPlan::Kind::Exists || c.kind == ConditionPlan::Kind::Forall) &&
                          !c.graph.steps.empty();
        return quantified ? "(" + s + ")" : s;
    }

    std::string count(const ConditionPlan& c, int level) {
        const GraphPlan& g = c.graph;
        std::string inner = condition(c.children[0], level + 1);
        if (g.steps.empty()) {
            std::string test = g.pre.empty() ? inner : "(" + pre_conjunction(g) + " and " + inner + ")";
            return "count(if (" + test + ") then 1 else ())";
        }
        std::string out = "count(";
        for (std::size_t i = 0; i < g.steps.size(); ++i)
            out += indent(level) + "for " + var(g.steps[i].slot) + " in " + path(g, i);
        out += indent(level) + "where " + inner;
        out += indent(level) + "return " + var(g.steps[0].slot);
        return out + "\n)";
    }

    const CompletePattern& p_;
    QueryPlan plan_;
};

// ------------------------------------------------------------------ grammar

struct Token {
    enum class Kind { Name, Var, String, Number, Symbol, End } kind = Kind::End;
    std::string text;
    std::size_t offset = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view s) : s_(s) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip();
            Token t;
            t.offset = i_;
            if (i_ >= s_.size()) {
                out.push_back(t);
                return out;
            }
            char c = s_[i_];
            if (c == '$') {
                ++i_;
                t.kind = Token::Kind::Var;
                t.text = name();
                if (t.text.empty()) fail("variable name expected");
            } else if (c == '"' || c == '\'') {
                t.kind = Token::Kind::String;
                t.text = string(c);
            } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                       (c == '.' && i_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_ + 1])))) {
                t.kind = Token::Kind::Number;
                while (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.')) t.text += s_[i_++];
            } else if (name_start(c)) {
                t.kind = Token::Kind::Name;
                t.text = name();
            } else {
                t.kind = Token::Kind::Symbol;
                static const char* const two[] = {"::", "!=", "<=", ">=", "//", ".."};
                for (const char* x : two)
                    if (s_.substr(i_, 2) == x) t.text = x;
                if (t.text.empty()) {
                    if (std::string_view("/[](),=<>@*.?+-").find(c) == std::string_view::npos)
                        fail(std::string("unexpected character '") + c + "'");
                    t.text = std::string(1, c);
                }
                i_ += t.text.size();
            }
            out.push_back(std::move(t));
        }
    }

private:
    [[noreturn]] void fail(const std::string& m) const { throw std::runtime_error(m + " at offset " + std::to_string(i_)); }

    static bool name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
    static bool name_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
    }

    std::string name() {
        std::string n;
        while (i_ < s_.size() && name_char(s_[i_])) n += s_[i_++];
        // one prefix separator, not the '::' of an axis
        if (i_ + 1 < s_.size() && s_[i_] == ':' && s_[i_ + 1] != ':' && name_start(s_[i_ + 1])) {
            n += s_[i_++];
            while (i_ < s_.size() && name_char(s_[i_])) n += s_[i_++];
        }
        return n;
    }

    std::string string(char q) {
        ++i_;
        std::string out;
        for (;;) {
            if (i_ >= s_.size()) fail("unterminated string");
            char c = s_[i_++];
            if (c == q) {
                if (i_ < s_.size() && s_[i_] == q) {
                    out += q;
                    ++i_;
                    continue;
                }
                return out;
            }
            if (c == '&') {
                std::size_t semi = s_.find(';', i_);
                if (semi == std::string_view::npos) fail("unterminated entity reference");
                std::string_view ent = s_.substr(i_, semi - i_);
                if (ent != "amp" && ent != "lt" && ent != "gt" && ent != "quot" && ent != "apos" &&
                    (ent.empty() || ent[0] != '#'))
                    fail("unknown entity reference");
                i_ = semi + 1;
            }
            out += c;
        }
    }

    void skip() {
        for (;;) {
            while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
            if (s_.substr(i_, 2) == "(:") {
                std::size_t end = s_.find(":)", i_ + 2);
                if (end == std::string_view::npos) fail("unterminated comment");
                i_ = end + 2;
                continue;
            }
            return;
        }
    }

    std::string_view s_;
    std::size_t i_ = 0;
};

// Recursive descent over the subset; variables are scope checked.
class Parser {
public:
    explicit Parser(std::vector<Token> t) : t_(std::move(t)) {}

    void run() {
        expr();
        if (peek().kind != Token::Kind::End) fail("unexpected '" + peek().text + "'");
    }

private:
    const Token& peek(std::size_t k = 0) const { return t_[std::min(i_ + k, t_.size() - 1)]; }
    bool is(std::string_view sym, std::size_t k = 0) const {
        const Token& t = peek(k);
        return (t.kind == Token::Kind::Symbol || t.kind == Token::Kind::Name) && t.text == sym;
    }
    [[noreturn]] void fail(const std::string& m) const {
        throw std::runtime_error(m + " at offset " + std::to_string(peek().offset));
    }
    void expect(std::string_view sym) {
        if (!is(sym)) fail("expected '" + std::string(sym) + "'");
        ++i_;
    }

    void expr() {
        expr_single();
        while (is(",")) {
            ++i_;
            expr_single();
        }
    }

    void expr_single() {
        if ((is("for") || is("let")) && peek(1).kind == Token::Kind::Var) return flwor();
        if ((is("some") || is("every")) && peek(1).kind == Token::Kind::Var) return quantified();
        if (is("if") && is("(", 1)) return conditional();
        or_expr();
    }

    std::string bind_var() {
        if (peek().kind != Token::Kind::Var) fail("variable expected");
        return t_[i_++].text;
    }

    void flwor() {
        std::size_t scope = vars_.size();
        while ((is("for") || is("let")) && peek(1).kind == Token::Kind::Var) {
            bool let = is("let");
            ++i_;
            for (;;) {
                std::string v = bind_var();
                if (let) {
                    expect(":");
                    expect("=");
                } else {
                    expect("in");
                }
                expr_single();
                vars_.push_back(v);
                if (!is(",")) break;
                ++i_;
            }
        }
        if (is("where")) {
            ++i_;
            expr_single();
        }
        expect("return");
        expr_single();
        vars_.resize(scope);
    }

    void quantified() {
        std::size_t scope = vars_.size();
        ++i_;
        for (;;) {
            std::string v = bind_var();
            expect("in");
            expr_single();
            vars_.push_back(v);
            if (!is(",")) break;
            ++i_;
        }
        expect("satisfies");
        expr_single();
        vars_.resize(scope);
    }

    void conditional() {
        ++i_;
        expect("(");
        expr();
        expect(")");
        expect("then");
        expr_single();
        expect("else");
        expr_single();
    }

    void or_expr() {
        and_expr();
        while (is("or")) {
            ++i_;
            and_expr();
        }
    }

    void and_expr() {
        comparison();
        while (is("and")) {
            ++i_;
            comparison();
        }
    }

    void comparison() {
        castable();
        static const char* const ops[] = {"=", "!=", "<", "<=", ">", ">=", "is", "eq", "ne", "lt", "le", "gt", "ge"};
        for (const char* op : ops)
            if (is(op)) {
                ++i_;
                castable();
                return;
            }
    }

    void castable() {
        additive();
        if (is("castable") || is("cast")) {
            ++i_;
            expect("as");
            if (peek().kind != Token::Kind::Name) fail("type name expected");
            ++i_;
            if (is("?")) ++i_;
        }
    }

    void additive() {
        unary();
        while (is("+") || is("-")) {
            ++i_;
            unary();
        }
    }

    void unary() {
        while (is("-") || is("+")) ++i_;
        path();
    }

    void path() {
        if (is("/") || is("//")) {
            bool lone = is("/");
            ++i_;
            if (lone && !step_starts()) return;
        }
        step();
        while (is("/") || is("//")) {
            ++i_;
            step();
        }
    }

    bool step_starts() const {
        const Token& t = peek();
        if (t.kind == Token::Kind::Name || t.kind == Token::Kind::Var || t.kind == Token::Kind::String ||
            t.kind == Token::Kind::Number)
            return !(t.kind == Token::Kind::Name && (t.text == "and" || t.text == "or" || t.text == "satisfies" ||
                                                     t.text == "return" || t.text == "where"));
        return is("@") || is("*") || is(".") || is("..") || is("(");
    }

    void step() {
        const Token& t = peek();
        static const std::set<std::string> axes{"child",     "descendant", "self",      "descendant-or-self",
                                                "following", "parent",     "ancestor",  "ancestor-or-self",
                                                "preceding", "attribute",  "following-sibling", "preceding-sibling"};
        if (t.kind == Token::Kind::Name && is("::", 1)) {
            if (!axes.count(t.text)) fail("unknown axis '" + t.text + "'");
            i_ += 2;
            node_test();
        } else if (is("@")) {
            ++i_;
            node_test();
        } else if (is("..")) {
            ++i_;
        } else {
            primary();
        }
        while (is("[")) {
            ++i_;
            expr();
            expect("]");
        }
    }

    void node_test() {
        if (is("*")) {
            ++i_;
            return;
        }
        if (peek().kind != Token::Kind::Name) fail("node test expected");
        ++i_;
        if (is("(")) {  // kind test: node(), text(), element()
            ++i_;
            expect(")");
        }
    }

    void primary() {
        const Token& t = peek();
        switch (t.kind) {
            case Token::Kind::String:
            case Token::Kind::Number: ++i_; return;
            case Token::Kind::Var:
                if (std::find(vars_.begin(), vars_.end(), t.text) == vars_.end())
                    fail("unbound variable $" + t.text);
                ++i_;
                return;
            case Token::Kind::Name:
                if (!is("(", 1)) fail("unexpected name '" + t.text + "'");
                i_ += 2;
                if (!is(")")) {
                    expr_single();
                    while (is(",")) {
                        ++i_;
                        expr_single();
                    }
                }
                expect(")");
                return;
            default: break;
        }
        if (is(".")) {
            ++i_;
            return;
        }
        if (is("(")) {
            ++i_;
            if (!is(")")) expr();
            expect(")");
            return;
        }
        fail("unexpected '" + t.text + "'");
    }

    std::vector<Token> t_;
    std::size_t i_ = 0;
    std::vector<std::string> vars_;
};

}  // namespace

std::string generate_query(const CompletePattern& pattern) { return Writer(pattern).run(); }

std::string normalize_whitespace(std::string_view text) {
    std::string collapsed;
    bool space = false;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            space = true;
            continue;
        }
        if (space && !collapsed.empty()) collapsed += ' ';
        space = false;
        collapsed += c;
    }
    std::string out;
    auto tight = [](char c) { return c == '[' || c == ']' || c == '(' || c == ')'; };
    for (std::size_t i = 0; i < collapsed.size(); ++i) {
        char c = collapsed[i];
        if (c == ' ' && ((!out.empty() && tight(out.back())) || (i + 1 < collapsed.size() && tight(collapsed[i + 1]))))
            continue;
        out += c;
    }
    return out;
}

std::optional<std::string> check_grammar(std::string_view query) {
    try {
        Parser(Lexer(query).run()).run();
        return std::nullopt;
    } catch (const std::runtime_error& e) {
        return std::string(e.what());
    }
}

}  // namespace dqp
