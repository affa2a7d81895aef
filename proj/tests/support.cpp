#include "support.hpp"

#include <algorithm>
#include <map>
#include <regex>

#include "dqp/concretisation.hpp"
#include "dqp/errors.hpp"
#include "dqp/io.hpp"
#include "dqp/text.hpp"

namespace dqp::testing {

CompletePattern concrete(CatalogId id, const std::filesystem::path& bindings) {
    auto p = instantiate(id, AbstractionLevel::AbstractXml);
    bind_all(p, parse_bindings(read_file(bindings)));
    return finalize(p);
}

namespace {

template <class T>
const T& pick(std::mt19937& rng, const std::vector<T>& v) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

bool chance(std::mt19937& rng, double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; }

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '<') out += "&lt;";
        else if (c == '&') out += "&amp;";
        else if (c == '"') out += "&quot;";
        else out += c;
    }
    return out;
}

}  // namespace

std::string random_document(std::mt19937& rng, int max_elements, const Vocabulary& v) {
    int n = std::uniform_int_distribution<int>(std::min(max_elements, 6), max_elements)(rng);
    struct E {
        std::string name;
        std::vector<std::pair<std::string, std::string>> attrs;
        std::string text;
        std::vector<int> kids;
    };
    std::vector<E> es(static_cast<std::size_t>(n));
    es[0].name = pick(rng, v.names);
    for (int i = 1; i < n; ++i) {
        int parent = std::uniform_int_distribution<int>(0, i - 1)(rng);
        es[static_cast<std::size_t>(parent)].kids.push_back(i);
        E& e = es[static_cast<std::size_t>(i)];
        e.name = pick(rng, v.names);
        for (const auto& a : v.attributes)
            if (chance(rng, 0.3)) e.attrs.emplace_back(a, pick(rng, v.texts));
    }
    for (auto& e : es)
        if ((e.kids.empty() && chance(rng, 0.8)) || chance(rng, 0.1)) e.text = pick(rng, v.texts);
    std::string out;
    auto write = [&](auto& self, int i) -> void {
        const E& e = es[static_cast<std::size_t>(i)];
        out += "<" + e.name;
        for (const auto& [k, val] : e.attrs) out += " " + k + "=\"" + escape(val) + "\"";
        out += ">";
        // mixed content puts the text between the first and second child
        if (e.kids.empty()) out += escape(e.text);
        for (std::size_t k = 0; k < e.kids.size(); ++k) {
            self(self, e.kids[k]);
            if (k == 0) out += escape(e.text);
        }
        out += "</" + e.name + ">";
    };
    write(write, 0);
    return out;
}

std::string synthetic_buildings(std::size_t elements, unsigned seed) {
    std::mt19937 rng(seed);
    const std::vector<std::string> countries{"USA", "Germany", "France", "Japan"};
    std::string out = "<data>";
    std::size_t count = 1;
    for (int i = 1; count < elements; ++i) {
        int city = std::uniform_int_distribution<int>(0, 399)(rng);
        std::string country = countries[static_cast<std::size_t>(city) % countries.size()];
        if (chance(rng, 0.002)) country = "unknown";
        out += "<building id=\"" + std::to_string(i) + "\"><name>Building " + std::to_string(i) + "</name>";
        out += "<city>City " + std::to_string(city) + "</city>";
        count += 3;
        if (chance(rng, 0.01)) {
            out += "<city>City " + std::to_string(city + 1) + "</city>";
            ++count;
        }
        out += "<country>" + country + "</country>";
        if (!chance(rng, 0.01)) {
            std::string year = std::to_string(std::uniform_int_distribution<int>(1850, 2020)(rng));
            if (chance(rng, 0.01)) year += "?";
            if (chance(rng, 0.005)) year.clear();
            out += "<year>" + year + "</year>";
            ++count;
        }
        out += "</building>";
    }
    return out + "</data>";
}

std::optional<CompletePattern> random_concrete(CatalogId id, std::mt19937& rng, const Vocabulary& v) {
    CompletePattern p = instantiate(id, AbstractionLevel::AbstractXml);
    std::set<ParameterId> regex_params;
    for (const auto& g : p.graphs())
        for (const auto& op : g.operators)
            if (auto* m = std::get_if<Match>(&op.body)) regex_params.insert(m->regex_param);
    std::vector<std::string> pool = v.names;
    pool.insert(pool.end(), v.texts.begin(), v.texts.end());

    for (int round = 0; round < 4; ++round) {
        auto missing = missing_bindings(p);
        if (missing.empty()) break;
        for (const auto& pid : missing) {
            const Parameter* par = p.find_parameter(pid);
            if (!par || has_value(par->body)) continue;
            BindingValue val = BindingValue::word("");
            if (auto* ax = std::get_if<AxisOptions>(&par->body)) {
                double r = std::uniform_real_distribution<double>(0, 1)(rng);
                Axis a = pick(rng, ax->options);
                if (r < 0.6 && std::count(ax->options.begin(), ax->options.end(), Axis::Descendant)) a = Axis::Descendant;
                else if (r < 0.85 && std::count(ax->options.begin(), ax->options.end(), Axis::Child)) a = Axis::Child;
                int depth = a == Axis::Child && chance(rng, 0.2) ? 2 : 1;
                val = BindingValue::axis_step(a, depth);
            } else if (auto* k = std::get_if<PropertyKindOptions>(&par->body)) {
                // mostly names, so that identifying comparisons hit
                PropertyKind kind = chance(rng, 0.7) ? PropertyKind::Name : pick(rng, k->options);
                if (kind == PropertyKind::Attribute) val = BindingValue::attribute(pick(rng, v.attributes));
                else val = BindingValue::word(std::string(to_string(kind)));
            } else if (auto* c = std::get_if<ComparisonOptions>(&par->body)) {
                val = BindingValue::word(std::string(to_string(pick(rng, c->options))));
            } else if (std::holds_alternative<TextLiteral>(par->body)) {
                if (regex_params.count(pid)) val = BindingValue::string(pick(rng, v.regexes));
                else if (par->name.find("attributeName") != std::string::npos)
                    val = BindingValue::string(pick(rng, v.attributes));
                else val = BindingValue::string(chance(rng, 0.7) ? pick(rng, v.names) : pick(rng, v.texts));
            } else if (std::holds_alternative<TextList>(par->body)) {
                val = BindingValue::tuple({pick(rng, pool), pick(rng, pool)});
            } else if (std::holds_alternative<NumberValue>(par->body)) {
                val = BindingValue::num(std::uniform_int_distribution<int>(0, 10)(rng));
            } else if (std::holds_alternative<UnknownValue>(par->body)) {
                int r = std::uniform_int_distribution<int>(0, 9)(rng);
                if (r < 6) val = BindingValue::string(pick(rng, pool));
                else if (r < 8) val = BindingValue::num(std::uniform_int_distribution<int>(0, 10)(rng));
                else val = BindingValue::tuple({pick(rng, pool), pick(rng, pool)});
            } else {
                continue;
            }
            try {
                bind(p, pid, val);
            } catch (const BindingError&) {
                return std::nullopt;
            }
        }
    }
    try {
        return finalize(p);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

// ---------------------------------------------------------------- naive

namespace {

class Naive {
public:
    Naive(const CompletePattern& p, const Document& d) : p_(p), d_(d) {
        for (NodeId n = 0; n < d.node_count(); ++n)
            if (d.is_element(n)) elements_.push_back(n);
    }

    std::set<NodeId> run() {
        std::set<NodeId> out;
        const Graph& g = p_.outer_graph();
        assign(g, nullptr, [&] {
            if (holds(p_.condition()))
                for (const auto& r : g.return_elements) out.insert(at_.at(r));
            return false;
        });
        return out;
    }

private:
    // Parameter lookups ------------------------------------------------

    template <class T>
    const T* body(const ParameterId& id) const {
        const Parameter* par = p_.find_parameter(id);
        return par ? std::get_if<T>(&par->body) : nullptr;
    }

    ComparisonOp op_of(const ParameterId& id) const {
        auto* c = body<ComparisonOptions>(id);
        return c && c->value ? *c->value : ComparisonOp::Equal;
    }

    // Structure ---------------------------------------------------------

    bool is_ancestor(NodeId a, NodeId n) const {
        while (n != 0) {
            n = d_.parent(n);
            if (n == a) return true;
        }
        return false;
    }

    int distance_up(NodeId a, NodeId n) const {
        int k = 0;
        while (n != a) {
            if (n == 0) return -1;
            n = d_.parent(n);
            ++k;
        }
        return k;
    }

    bool on_axis(NodeId s, NodeId t, const ParameterId& axis_param) const {
        auto* ax = body<AxisOptions>(axis_param);
        Axis a = ax && ax->value ? *ax->value : Axis::Child;
        int depth = ax ? ax->depth : 1;
        if (!d_.is_element(t)) return false;
        switch (a) {
            case Axis::Child: return distance_up(s, t) == depth;
            case Axis::Descendant: return is_ancestor(s, t);
            case Axis::Self: return s == t;
            case Axis::DescendantOrSelf: return s == t || is_ancestor(s, t);
            case Axis::Following: return t > s && !is_ancestor(s, t);
        }
        return false;
    }

    // Values ------------------------------------------------------------

    std::vector<std::string> property(const PropertyId& id) const {
        PropertyRef ref = p_.find_property(id);
        NodeId n = at_.at(ref.owner->id);
        auto* k = body<PropertyKindOptions>(ref.property->kind_param);
        PropertyKind kind = k && k->value ? *k->value : PropertyKind::Data;
        if (kind == PropertyKind::Name) return {d_.name(n)};
        if (kind == PropertyKind::Data) return {std::string(d_.string_value(n))};
        auto* a = body<TextLiteral>(ref.property->attribute_param);
        for (const auto& attr : d_.attributes(n))
            if (a && a->value && attr.name == *a->value) return {attr.value};
        return {};
    }

    static std::optional<double> number(const std::string& s) { return parse_xsd_double(s); }

    static bool cmp_double(double x, ComparisonOp op, double y) {
        switch (op) {
            case ComparisonOp::Equal: return x == y;
            case ComparisonOp::NotEqual: return x != y;
            case ComparisonOp::Less: return x < y;
            case ComparisonOp::LessEq: return x <= y;
            case ComparisonOp::Greater: return x > y;
            case ComparisonOp::GreaterEq: return x >= y;
        }
        return false;
    }

    static bool cmp_string(const std::string& x, ComparisonOp op, const std::string& y) {
        int c = x.compare(y);
        return cmp_double(c < 0 ? -1 : c > 0 ? 1 : 0, op, 0);
    }

    static bool atom(const std::string& x, ComparisonOp op, const std::string& y, ValueType t) {
        if (t == ValueType::Number) {
            auto a = number(x), b = number(y);
            return a && b && cmp_double(*a, op, *b);
        }
        if (t == ValueType::Date || t == ValueType::Time || t == ValueType::DateTime) {
            char k = t == ValueType::Date ? 'd' : t == ValueType::Time ? 't' : 'D';
            auto a = temporal_seconds(x, k), b = temporal_seconds(y, k);
            return a && b && cmp_double(*a, op, *b);
        }
        if (t == ValueType::Boolean) {
            auto truth = [](const std::string& s) -> std::optional<int> {
                if (s == "true" || s == "1") return 1;
                if (s == "false" || s == "0") return 0;
                return std::nullopt;
            };
            auto a = truth(x), b = truth(y);
            return a && b && cmp_double(*a, op, *b);
        }
        return cmp_string(x, op, y);
    }

    std::vector<std::string> operand(const Graph& g, const Comparable& c, bool& is_list) const {
        is_list = false;
        if (auto* e = std::get_if<ElementId>(&c)) return {std::string(d_.string_value(at_.at(*e)))};
        if (auto* pr = std::get_if<PropertyId>(&c)) return property(*pr);
        if (auto* o = std::get_if<OperatorId>(&c)) return {op_holds(g, *g.find_operator(*o)) ? "true" : "false"};
        const Parameter* par = p_.find_parameter(std::get<ParameterId>(c));
        if (auto* t = std::get_if<TextLiteral>(&par->body)) return {*t->value};
        if (auto* l = std::get_if<TextList>(&par->body)) {
            is_list = true;
            return *l->values;
        }
        if (auto* n = std::get_if<NumberValue>(&par->body)) {
            // keep full precision for the numeric comparison
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", *n->value);
            return {buf};
        }
        if (auto* b = std::get_if<BooleanValue>(&par->body)) return {*b->value ? "true" : "false"};
        if (auto* x = std::get_if<DateValue>(&par->body)) return {*x->value};
        if (auto* x = std::get_if<TimeValue>(&par->body)) return {*x->value};
        if (auto* x = std::get_if<DateTimeValue>(&par->body)) return {*x->value};
        throw std::logic_error("unsupported operand");
    }

    bool op_holds(const Graph& g, const Operator& op) const {
        if (auto* m = std::get_if<Match>(&op.body)) {
            auto vals = property(m->property);
            std::wregex re(utf8_to_wide(*body<TextLiteral>(m->regex_param)->value), std::regex::ECMAScript);
            for (const auto& v : vals)
                if (std::regex_search(utf8_to_wide(v), re)) return true;
            return false;
        }
        const auto& c = std::get<Comparison>(op.body);
        ComparisonOp o = op_of(c.op_param);
        auto* le = std::get_if<ElementId>(&c.left);
        auto* re = std::get_if<ElementId>(&c.right);
        if (le && re && (o == ComparisonOp::Equal || o == ComparisonOp::NotEqual))
            return d_.deep_equal(at_.at(*le), at_.at(*re)) == (o == ComparisonOp::Equal);
        bool llist = false, rlist = false;
        auto l = operand(g, c.left, llist);
        auto r = operand(g, c.right, rlist);
        ValueType t = c.value_type == ValueType::Unspecified ? ValueType::String : c.value_type;
        if (o == ComparisonOp::NotEqual && (llist || rlist)) {
            // value must differ from every listed value
            const auto& list = rlist ? r : l;
            const auto& other = rlist ? l : r;
            for (const auto& item : list) {
                bool differs = false;
                for (const auto& x : other) differs = differs || atom(x, o, item, t);
                if (!differs) return false;
            }
            return true;
        }
        for (const auto& x : l)
            for (const auto& y : r)
                if (atom(x, o, y, t)) return true;
        return false;
    }

    // Assignment --------------------------------------------------------

    bool assigned(const ElementId& e) const { return at_.count(e) > 0; }

    // Every constraint of g whose elements are all assigned holds.
    bool consistent(const Graph& g, const Morphism* m) const {
        for (const auto& r : g.relations) {
            if (m && m->relation_preimage(r.id)) continue;
            if (!assigned(r.source) || !assigned(r.target)) continue;
            NodeId s = at_.at(r.source), t = at_.at(r.target);
            if (r.kind == RelationKind::XmlNavigation) {
                if (!on_axis(s, t, r.axis_param)) return false;
            } else if (r.kind == RelationKind::XmlReference) {
                auto* c = body<ComparisonOptions>(r.comparison_param);
                if (c && !c->enabled) continue;
                auto a = property(r.source_property), b = property(r.target_property);
                bool ok = false;
                for (const auto& x : a)
                    for (const auto& y : b) ok = ok || atom(x, op_of(r.comparison_param), y, ValueType::String);
                if (!ok) return false;
            }
        }
        std::set<OperatorId> nested;
        for (const auto& op : g.operators)
            if (auto* c = std::get_if<Comparison>(&op.body))
                for (const Comparable* side : {&c->left, &c->right})
                    if (auto* o = std::get_if<OperatorId>(side)) nested.insert(*o);
        for (const auto& op : g.operators) {
            if (nested.count(op.id) || !operator_enabled(p_, op)) continue;
            auto es = predicate_elements(p_, g, op);
            if (!std::all_of(es.begin(), es.end(), [&](const ElementId& e) { return assigned(e); })) continue;
            if (!op_holds(g, op)) return false;
        }
        return true;
    }

    // Calls f for every consistent assignment of g's unmapped elements;
    // stops when f returns true. Restores the assignment afterwards.
    template <class F>
    bool assign(const Graph& g, const Morphism* m, F&& f) {
        std::vector<ElementId> fresh;
        std::vector<ElementId> added;
        for (const auto& el : g.elements) {
            if (el.kind == ElementKind::XmlRoot) at_[el.id] = 0;
            else if (auto pre = m ? m->preimage(el.id) : std::nullopt) at_[el.id] = at_.at(*pre);
            else {
                fresh.push_back(el.id);
                continue;
            }
            added.push_back(el.id);
        }
        bool stop = false;
        if (consistent(g, m)) stop = extend(g, m, fresh, 0, f);
        for (const auto& e : added) at_.erase(e);
        return stop;
    }

    template <class F>
    bool extend(const Graph& g, const Morphism* m, const std::vector<ElementId>& fresh, std::size_t i, F& f) {
        if (i == fresh.size()) return f();
        for (NodeId n : elements_) {
            at_[fresh[i]] = n;
            if (consistent(g, m) && extend(g, m, fresh, i + 1, f)) {
                at_.erase(fresh[i]);
                return true;
            }
        }
        at_.erase(fresh[i]);
        return false;
    }

    std::uint64_t count(const CountPattern& c) {
        std::uint64_t n = 0;
        assign(p_.graph(c.graph), &c.morphism, [&] {
            if (holds(*c.inner)) ++n;
            return false;
        });
        return n;
    }

    bool holds(const Condition& c) {
        if (std::holds_alternative<TrueCondition>(c.node)) return true;
        if (auto* q = std::get_if<QuantifiedCondition>(&c.node)) {
            const Graph& g = p_.graph(q->graph);
            if (q->quantifier == Quantifier::Exists) return assign(g, &q->morphism, [&] { return holds(*q->inner); });
            return !assign(g, &q->morphism, [&] { return !holds(*q->inner); });
        }
        if (auto* f = std::get_if<Formula>(&c.node)) {
            bool l = holds(*f->left), r = holds(*f->right);
            return f->op == LogicOp::And ? l && r : l || r;
        }
        if (auto* n = std::get_if<NotCondition>(&c.node)) return !holds(*n->inner);
        const auto& k = std::get<CountCondition>(c.node);
        double lhs = static_cast<double>(count(k.count));
        double rhs = std::holds_alternative<NumberElement>(k.argument)
                         ? static_cast<double>(std::get<NumberElement>(k.argument).value)
                         : static_cast<double>(count(*std::get<Box<CountPattern>>(k.argument)));
        return cmp_double(lhs, k.op, rhs);
    }

    const CompletePattern& p_;
    const Document& d_;
    std::vector<NodeId> elements_;
    std::map<ElementId, NodeId> at_;
};

}  // namespace

std::set<NodeId> naive_evaluate(const CompletePattern& p, const Document& d) { return Naive(p, d).run(); }

std::string show(const Document& d, const std::set<NodeId>& nodes) {
    std::string out;
    for (NodeId n : nodes) out += (out.empty() ? "" : " ") + d.path(n);
    return out.empty() ? "{}" : out;
}

}  // namespace dqp::testing
