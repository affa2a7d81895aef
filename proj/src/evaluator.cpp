#include "dqp/evaluator.hpp"

#include <algorithm>
#include <optional>
#include <regex>
#include <unordered_map>

#include "dqp/errors.hpp"
#include "dqp/plan.hpp"
#include "dqp/text.hpp"

namespace dqp {

namespace {

// Cap on node ids kept in candidate caches, per evaluation.
constexpr std::size_t kCacheBudget = std::size_t{1} << 22;

using Seq = std::vector<std::string_view>;

bool xml_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

std::string_view trim(std::string_view s) {
    while (!s.empty() && xml_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && xml_space(s.back())) s.remove_suffix(1);
    return s;
}

std::optional<bool> parse_boolean(std::string_view s) {
    s = trim(s);
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    return std::nullopt;
}

template <class T>
bool apply(ComparisonOp op, const T& a, const T& b) {
    switch (op) {
        case ComparisonOp::Equal: return a == b;
        case ComparisonOp::NotEqual: return a != b;
        case ComparisonOp::Less: return a < b;
        case ComparisonOp::LessEq: return a <= b;
        case ComparisonOp::Greater: return a > b;
        case ComparisonOp::GreaterEq: return a >= b;
    }
    return false;
}

// One atomic comparison after casting both sides; a failed cast is false.
bool compare_atoms(std::string_view a, ComparisonOp op, std::string_view b, ValueType t) {
    switch (t) {
        case ValueType::Number: {
            auto x = parse_xsd_double(a), y = parse_xsd_double(b);
            return x && y && apply(op, *x, *y);
        }
        case ValueType::Boolean: {
            auto x = parse_boolean(a), y = parse_boolean(b);
            return x && y && apply(op, *x, *y);
        }
        case ValueType::Date:
        case ValueType::Time:
        case ValueType::DateTime: {
            char k = t == ValueType::Date ? 'd' : t == ValueType::Time ? 't' : 'D';
            auto x = temporal_seconds(trim(a), k), y = temporal_seconds(trim(b), k);
            return x && y && apply(op, *x, *y);
        }
        default: return apply(op, a, b);
    }
}

struct Operand {
    enum class Kind { Property, Element, Literal, List, Nested } kind = Kind::Literal;
    PropertyAccess property;
    int slot = 0;
    std::vector<std::string> literals;
    const Operator* nested = nullptr;
};

struct CompiledOp {
    const Operator* op = nullptr;
    bool match = false;
    Operand left, right;
    ComparisonOp cmp = ComparisonOp::Equal;
    ValueType type = ValueType::String;
    std::optional<std::wregex> regex;
};

struct CompiledCheck {
    PlanCheck::Kind kind = PlanCheck::Kind::Operator;
    const CompiledOp* op = nullptr;
    PropertyAccess source, target;  // reference
    ComparisonOp cmp = ComparisonOp::Equal;
    int from = 0, to = 0;  // navigation
    Axis axis = Axis::Child;
    int depth = 1;
    std::vector<int> slots;  // slots read by the check
};

// Enclosing-scope input of a sub-condition: a node identity or the value
// of a property read from it.
struct Dep {
    bool node = true;
    int slot = 0;
    PropertyAccess access;
};

struct Memo {
    std::vector<Dep> deps;
    std::unordered_map<std::string, std::uint64_t> results;
};

constexpr std::size_t kMemoBudget = std::size_t{1} << 20;
constexpr std::size_t kMemoKeyLimit = 1024;

using ValueIndex = std::unordered_map<std::string_view, std::vector<NodeId>>;

struct StepState {
    std::vector<CompiledCheck> local;  // read only the step's own slot
    std::vector<CompiledCheck> join;
    std::unordered_map<NodeId, std::vector<NodeId>> cache;

    // Set on a step A whose next step B is a child-axis step below A that
    // joins by string equality on an earlier slot. B is then looked up by
    // value and A recovered as B's ancestor.
    bool paired = false;
    PropertyAccess probe;  // earlier slot
    PropertyAccess keyed;  // B's own property
    int depth = 0;         // child steps from A's anchor to B
    int up = 0;            // child steps from A to B
    std::unordered_map<NodeId, ValueIndex> index;
};

class Evaluator {
public:
    Evaluator(const CompletePattern& p, const Document& d) : p_(p), d_(d), plan_(make_plan(p)) {
        b_.assign(static_cast<std::size_t>(plan_.slot_count), 0);
        prepare(plan_.outer);
        prepare(plan_.condition);
    }

    MatchSet run() {
        MatchSet out;
        out.pattern = p_.name();
        std::vector<char> seen(d_.node_count(), 0);
        if (checks_hold(pre_[&plan_.outer])) {
            enumerate(plan_.outer, 0, [&] {
                ++out.bindings;
                bool fresh = false;
                for (int s : plan_.returns) fresh |= !seen[b_[s]];
                if (fresh && holds(plan_.condition))
                    for (int s : plan_.returns) seen[b_[s]] = 1;
                return false;
            });
        }
        for (NodeId n = 0; n < seen.size(); ++n)
            if (seen[n]) out.nodes.push_back(n);
        return out;
    }

    std::uint64_t count_at(const ConditionPath& path, const std::map<ElementId, NodeId>& outer, bool argument) {
        const ConditionPlan* cp = &plan_.condition;
        for (int i : path) {
            if (static_cast<std::size_t>(i) >= cp->children.size()) throw PatternError("condition path out of range");
            // the counted argument's inner condition sits one level down
            if (cp->kind == ConditionPlan::Kind::Count && i == 1) cp = &cp->children[1].children[0];
            else cp = &cp->children[static_cast<std::size_t>(i)];
        }
        if (cp->kind != ConditionPlan::Kind::Count) throw PatternError("path does not lead to a count condition");
        if (argument) {
            if (cp->children.size() < 2) throw PatternError("count condition compares against a number");
            cp = &cp->children[1];
        }
        for (const auto& [e, n] : outer) b_[static_cast<std::size_t>(plan_.slot(e))] = n;
        return count(*cp);
    }

private:
    // ------------------------------------------------------------ preparation

    Operand operand(const Graph& g, const Comparable& c) {
        Operand o;
        if (auto* e = std::get_if<ElementId>(&c)) {
            o.kind = Operand::Kind::Element;
            o.slot = plan_.slot(*e);
        } else if (auto* pr = std::get_if<PropertyId>(&c)) {
            o.kind = Operand::Kind::Property;
            o.property = plan_.access(*pr);
        } else if (auto* op = std::get_if<OperatorId>(&c)) {
            o.kind = Operand::Kind::Nested;
            o.nested = g.find_operator(*op);
            if (!o.nested) throw PatternError("unknown operator '" + op->str() + "'");
            compile(g, *o.nested);
        } else {
            const Parameter* par = p_.find_parameter(std::get<ParameterId>(c));
            if (!par) throw PatternError("unknown parameter");
            std::visit(
                [&](const auto& body) {
                    using T = std::decay_t<decltype(body)>;
                    if constexpr (std::is_same_v<T, TextList>) {
                        o.kind = Operand::Kind::List;
                        if (body.values) o.literals = *body.values;
                    } else if constexpr (std::is_same_v<T, NumberValue>) {
                        if (body.value) o.literals.push_back(format_number(*body.value));
                    } else if constexpr (std::is_same_v<T, BooleanValue>) {
                        if (body.value) o.literals.push_back(*body.value ? "true" : "false");
                    } else if constexpr (std::is_same_v<T, TextLiteral> || std::is_same_v<T, DateValue> ||
                                         std::is_same_v<T, TimeValue> || std::is_same_v<T, DateTimeValue>) {
                        if (body.value) o.literals.push_back(*body.value);
                    } else {
                        throw PatternError("parameter '" + par->name + "' is not a value");
                    }
                },
                par->body);
        }
        return o;
    }

    const CompiledOp* compile(const Graph& g, const Operator& op) {
        auto it = ops_.find(&op);
        if (it != ops_.end()) return &it->second;
        CompiledOp c;
        c.op = &op;
        if (auto* m = std::get_if<Match>(&op.body)) {
            c.match = true;
            c.left.kind = Operand::Kind::Property;
            c.left.property = plan_.access(m->property);
            const Parameter* par = p_.find_parameter(m->regex_param);
            auto* lit = par ? std::get_if<TextLiteral>(&par->body) : nullptr;
            if (!lit || !lit->value) throw PatternError("match without a regular expression");
            c.regex = compile_regex(*lit->value);
            if (!c.regex) throw PatternError("invalid regular expression '" + *lit->value + "'");
        } else {
            const auto& cmp = std::get<Comparison>(op.body);
            c.left = operand(g, cmp.left);
            c.right = operand(g, cmp.right);
            c.cmp = comparison_op(p_, cmp.op_param);
            c.type = cmp.value_type;
        }
        return &ops_.emplace(&op, std::move(c)).first->second;
    }

    void collect_slots(const CompiledOp& c, std::vector<int>& out) {
        for (const Operand* o : {&c.left, &c.right}) {
            if (o->kind == Operand::Kind::Property) out.push_back(o->property.slot);
            else if (o->kind == Operand::Kind::Element) out.push_back(o->slot);
            else if (o->kind == Operand::Kind::Nested) collect_slots(ops_.at(o->nested), out);
        }
    }

    CompiledCheck check(const Graph& g, const PlanCheck& pc) {
        CompiledCheck c;
        c.kind = pc.kind;
        if (pc.kind == PlanCheck::Kind::Operator) {
            c.op = compile(g, *pc.op);
            collect_slots(*c.op, c.slots);
        } else if (pc.kind == PlanCheck::Kind::Reference) {
            c.source = plan_.access(pc.relation->source_property);
            c.target = plan_.access(pc.relation->target_property);
            c.cmp = comparison_op(p_, pc.relation->comparison_param);
            c.slots = {c.source.slot, c.target.slot};
        } else {
            c.from = plan_.slot(pc.relation->source);
            c.to = plan_.slot(pc.relation->target);
            if (const Parameter* ax = p_.find_parameter(pc.relation->axis_param))
                if (auto* o = std::get_if<AxisOptions>(&ax->body)) {
                    if (o->value) c.axis = *o->value;
                    c.depth = o->depth;
                }
            c.slots = {c.from, c.to};
        }
        return c;
    }

    void prepare(const GraphPlan& gp) {
        auto& pre = pre_[&gp];
        for (const auto& pc : gp.pre) pre.push_back(check(*gp.graph, pc));
        for (const auto& s : gp.steps) {
            StepState& st = steps_[&s];
            for (const auto& pc : s.checks) {
                CompiledCheck c = check(*gp.graph, pc);
                bool local = std::all_of(c.slots.begin(), c.slots.end(), [&](int x) { return x == s.slot; });
                (local ? st.local : st.join).push_back(std::move(c));
            }
        }
        for (std::size_t i = 0; i + 1 < gp.steps.size(); ++i) pair_steps(gp.steps[i], gp.steps[i + 1]);
    }

    void pair_steps(const PlanStep& a, const PlanStep& b) {
        if (b.anchor != a.slot || a.axis != Axis::Child || b.axis != Axis::Child) return;
        StepState& sa = steps_.at(&a);
        const StepState& sb = steps_.at(&b);
        for (const auto& c : sb.join) {
            if (c.kind != PlanCheck::Kind::Operator || c.op->match || c.op->cmp != ComparisonOp::Equal) continue;
            if (c.op->type != ValueType::String && c.op->type != ValueType::Unspecified) continue;
            const Operand& l = c.op->left;
            const Operand& r = c.op->right;
            if (l.kind != Operand::Kind::Property || r.kind != Operand::Kind::Property) continue;
            const PropertyAccess* mine = l.property.slot == b.slot ? &l.property : r.property.slot == b.slot ? &r.property : nullptr;
            const PropertyAccess* other = mine == &l.property ? &r.property : &l.property;
            if (!mine || other->slot >= a.slot) continue;
            sa.paired = true;
            sa.probe = *other;
            sa.keyed = *mine;
            sa.depth = a.depth + b.depth;
            sa.up = b.depth;
            return;
        }
    }

    static bool has_graph(const ConditionPlan& cp) {
        return cp.kind == ConditionPlan::Kind::Exists || cp.kind == ConditionPlan::Kind::Forall ||
               cp.kind == ConditionPlan::Kind::Count;
    }

    void prepare(const ConditionPlan& cp) {
        if (has_graph(cp)) prepare(cp.graph);
        for (const auto& c : cp.children) prepare(c);
        if (has_graph(cp)) {
            std::vector<Dep> deps;
            int first = cp.graph.steps.empty() ? plan_.slot_count : cp.graph.steps.front().slot;
            collect_deps(cp, first, deps);
            memo_[&cp].deps = std::move(deps);
        }
    }

    void add_dep(std::vector<Dep>& deps, Dep d, int first) {
        if (d.slot == 0 || d.slot >= first) return;
        for (const auto& x : deps)
            if (x.node == d.node && x.slot == d.slot &&
                (d.node || (x.access.kind == d.access.kind && x.access.attribute == d.access.attribute)))
                return;
        deps.push_back(std::move(d));
    }

    void op_deps(const CompiledOp& c, int first, std::vector<Dep>& deps) {
        for (const Operand* o : {&c.left, &c.right}) {
            if (o->kind == Operand::Kind::Property) add_dep(deps, {false, o->property.slot, o->property}, first);
            else if (o->kind == Operand::Kind::Element) add_dep(deps, {true, o->slot, {}}, first);
            else if (o->kind == Operand::Kind::Nested) op_deps(ops_.at(o->nested), first, deps);
        }
    }

    void check_deps(const CompiledCheck& c, int first, std::vector<Dep>& deps) {
        switch (c.kind) {
            case PlanCheck::Kind::Operator: op_deps(*c.op, first, deps); break;
            case PlanCheck::Kind::Reference:
                add_dep(deps, {false, c.source.slot, c.source}, first);
                add_dep(deps, {false, c.target.slot, c.target}, first);
                break;
            case PlanCheck::Kind::Navigation:
                add_dep(deps, {true, c.from, {}}, first);
                add_dep(deps, {true, c.to, {}}, first);
                break;
        }
    }

    // Everything below `cp` that reads slots bound before `first`.
    void collect_deps(const ConditionPlan& cp, int first, std::vector<Dep>& deps) {
        if (has_graph(cp)) {
            for (const auto& c : pre_.at(&cp.graph)) check_deps(c, first, deps);
            for (const auto& s : cp.graph.steps) {
                add_dep(deps, {true, s.anchor, {}}, first);
                const StepState& st = steps_.at(&s);
                for (const auto& c : st.local) check_deps(c, first, deps);
                for (const auto& c : st.join) check_deps(c, first, deps);
            }
        }
        for (const auto& c : cp.children) collect_deps(c, first, deps);
    }

    // Result of `compute` for the current values of the sub-condition's inputs.
    template <class F>
    std::uint64_t memoized(const ConditionPlan& cp, F&& compute) {
        Memo& m = memo_.at(&cp);
        std::string key;
        for (const auto& d : m.deps) {
            if (d.node) {
                NodeId n = b_[static_cast<std::size_t>(d.slot)];
                key.append(reinterpret_cast<const char*>(&n), sizeof n);
            } else if (auto v = value(d.access)) {
                std::uint32_t len = static_cast<std::uint32_t>(v->size());
                key += '+';
                key.append(reinterpret_cast<const char*>(&len), sizeof len);
                key.append(*v);
            } else {
                key += '-';
            }
            if (key.size() > kMemoKeyLimit) return compute();
        }
        auto it = m.results.find(key);
        if (it != m.results.end()) return it->second;
        std::uint64_t r = compute();
        if (memo_entries_ < kMemoBudget) {
            ++memo_entries_;
            m.results.emplace(std::move(key), r);
        }
        return r;
    }

    // ------------------------------------------------------------ values

    std::optional<std::string_view> value(const PropertyAccess& a) const {
        NodeId n = b_[static_cast<std::size_t>(a.slot)];
        switch (a.kind) {
            case PropertyKind::Name: return std::string_view(d_.name(n));
            case PropertyKind::Data: return d_.string_value(n);
            case PropertyKind::Attribute:
                if (const std::string* v = d_.attribute(n, a.attribute)) return std::string_view(*v);
                return std::nullopt;
        }
        return std::nullopt;
    }

    Seq atomize(const Operand& o) {
        Seq s;
        switch (o.kind) {
            case Operand::Kind::Property:
                if (auto v = value(o.property)) s.push_back(*v);
                break;
            case Operand::Kind::Element: s.push_back(d_.string_value(b_[static_cast<std::size_t>(o.slot)])); break;
            case Operand::Kind::Literal:
            case Operand::Kind::List:
                for (const auto& l : o.literals) s.push_back(l);
                break;
            case Operand::Kind::Nested: s.push_back(eval(ops_.at(o.nested)) ? "true" : "false"); break;
        }
        return s;
    }

    bool eval(const CompiledOp& c) {
        if (c.match) {
            auto v = value(c.left.property);
            if (!v) return false;
            std::wstring w = utf8_to_wide(*v);
            return std::regex_search(w, *c.regex);
        }
        if (c.left.kind == Operand::Kind::Element && c.right.kind == Operand::Kind::Element &&
            (c.cmp == ComparisonOp::Equal || c.cmp == ComparisonOp::NotEqual)) {
            bool eq = d_.deep_equal(b_[static_cast<std::size_t>(c.left.slot)],
                                    b_[static_cast<std::size_t>(c.right.slot)]);
            return c.cmp == ComparisonOp::Equal ? eq : !eq;
        }
        Seq l = atomize(c.left), r = atomize(c.right);
        ValueType t = c.type == ValueType::Unspecified ? ValueType::String : c.type;
        // A value list with != means "differs from every listed value".
        if (c.cmp == ComparisonOp::NotEqual && (c.left.kind == Operand::Kind::List || c.right.kind == Operand::Kind::List)) {
            bool list_right = c.right.kind == Operand::Kind::List;
            const Seq& list = list_right ? r : l;
            const Seq& other = list_right ? l : r;
            return std::all_of(list.begin(), list.end(), [&](std::string_view v) {
                return std::any_of(other.begin(), other.end(), [&](std::string_view x) {
                    return compare_atoms(x, ComparisonOp::NotEqual, v, t);
                });
            });
        }
        for (auto x : l)
            for (auto y : r)
                if (compare_atoms(x, c.cmp, y, t)) return true;
        return false;
    }

    bool check_holds(const CompiledCheck& c) {
        switch (c.kind) {
            case PlanCheck::Kind::Operator: return eval(*c.op);
            case PlanCheck::Kind::Reference: {
                auto s = value(c.source), t = value(c.target);
                return s && t && compare_atoms(*s, c.cmp, *t, ValueType::String);
            }
            case PlanCheck::Kind::Navigation: {
                NodeId target = b_[static_cast<std::size_t>(c.to)];
                bool found = false;
                axis_nodes(b_[static_cast<std::size_t>(c.from)], c.axis, c.depth, [&](NodeId n) {
                    if (n == target) found = true;
                    return found;
                });
                return found;
            }
        }
        return false;
    }

    bool checks_hold(const std::vector<CompiledCheck>& cs) {
        for (const auto& c : cs)
            if (!check_holds(c)) return false;
        return true;
    }

    // ------------------------------------------------------------ navigation

    // Calls f on every element reachable over the axis, in document order,
    // until f returns true.
    template <class F>
    void axis_nodes(NodeId from, Axis axis, int depth, F&& f) const {
        auto range = [&](NodeId a, NodeId z) {
            for (NodeId n = a; n < z; ++n)
                if (d_.is_element(n) && f(n)) return true;
            return false;
        };
        switch (axis) {
            case Axis::Child: {
                if (depth <= 1) {
                    for (NodeId c : d_.element_children(from))
                        if (f(c)) return;
                    return;
                }
                std::vector<NodeId> level{from};
                for (int i = 0; i < depth; ++i) {
                    std::vector<NodeId> next;
                    for (NodeId x : level)
                        for (NodeId c : d_.element_children(x)) next.push_back(c);
                    level.swap(next);
                }
                for (NodeId c : level)
                    if (f(c)) return;
                return;
            }
            case Axis::Descendant: range(from + 1, d_.subtree_end(from)); return;
            case Axis::DescendantOrSelf: range(from, d_.subtree_end(from)); return;
            case Axis::Self:
                if (d_.is_element(from)) f(from);
                return;
            case Axis::Following: range(d_.subtree_end(from), static_cast<NodeId>(d_.node_count())); return;
        }
    }

    // Candidates for a step after its local checks, cached per anchor node.
    template <class F>
    bool candidates(const PlanStep& s, StepState& st, F&& f) {
        NodeId anchor = b_[static_cast<std::size_t>(s.anchor)];
        auto hit = st.cache.find(anchor);
        if (hit != st.cache.end()) {
            for (NodeId n : hit->second)
                if (f(n)) return true;
            return false;
        }
        std::size_t slot = static_cast<std::size_t>(s.slot);
        std::vector<NodeId> list;
        bool keep = cached_ < kCacheBudget;
        bool stopped = false;
        axis_nodes(anchor, s.axis, s.depth, [&](NodeId n) {
            b_[slot] = n;
            if (!checks_hold(st.local)) return false;
            if (keep) list.push_back(n);
            if (!stopped && f(n)) {
                stopped = true;
                if (!keep) return true;
            }
            return false;
        });
        if (keep) {
            cached_ += list.size() + 1;
            st.cache.emplace(anchor, std::move(list));
        }
        return stopped;
    }

    // Calls f for each binding of the graph's steps from index i on; stops
    // and returns true as soon as f does.
    template <class F>
    bool enumerate(const GraphPlan& g, std::size_t i, F&& f) {
        if (i == g.steps.size()) return f();
        const PlanStep& s = g.steps[i];
        StepState& st = steps_.at(&s);
        std::size_t slot = static_cast<std::size_t>(s.slot);
        if (st.paired) return enumerate_pair(g, i, f);
        return candidates(s, st, [&](NodeId n) {
            b_[slot] = n;
            if (!checks_hold(st.join)) return false;
            return enumerate(g, i + 1, f);
        });
    }

    // Steps i and i + 1 through the value index of step i.
    template <class F>
    bool enumerate_pair(const GraphPlan& g, std::size_t i, F& f) {
        const PlanStep& a = g.steps[i];
        const PlanStep& b = g.steps[i + 1];
        StepState& sa = steps_.at(&a);
        StepState& sb = steps_.at(&b);
        auto probe = value(sa.probe);
        if (!probe) return false;
        const ValueIndex& index = value_index(a, sa, sb);
        auto hit = index.find(*probe);
        if (hit == index.end()) return false;
        std::size_t slot_a = static_cast<std::size_t>(a.slot), slot_b = static_cast<std::size_t>(b.slot);
        for (NodeId n : hit->second) {
            NodeId up = n;
            for (int k = 0; k < sa.up; ++k) up = d_.parent(up);
            b_[slot_a] = up;
            b_[slot_b] = n;
            if (!checks_hold(sa.join) || !checks_hold(sb.join)) continue;
            if (enumerate(g, i + 2, f)) return true;
        }
        return false;
    }

    // B candidates below A's anchor, keyed by B's joined value, passing the
    // local checks of both steps.
    const ValueIndex& value_index(const PlanStep& a, StepState& sa, StepState& sb) {
        NodeId anchor = b_[static_cast<std::size_t>(a.anchor)];
        auto it = sa.index.find(anchor);
        if (it != sa.index.end()) return it->second;
        ValueIndex index;
        std::size_t slot_a = static_cast<std::size_t>(a.slot);
        std::size_t slot_b = static_cast<std::size_t>(sa.keyed.slot);
        axis_nodes(anchor, Axis::Child, sa.depth, [&](NodeId n) {
            NodeId up = n;
            for (int k = 0; k < sa.up; ++k) up = d_.parent(up);
            b_[slot_a] = up;
            b_[slot_b] = n;
            if (!checks_hold(sa.local) || !checks_hold(sb.local)) return false;
            if (auto v = value(sa.keyed)) index[*v].push_back(n);
            return false;
        });
        return sa.index.emplace(anchor, std::move(index)).first->second;
    }

    // ------------------------------------------------------------ conditions

    bool holds(const ConditionPlan& c) {
        switch (c.kind) {
            case ConditionPlan::Kind::True: return true;
            case ConditionPlan::Kind::Exists:
                return memoized(c, [&]() -> std::uint64_t {
                    if (!checks_hold(pre_.at(&c.graph))) return 0;
                    return enumerate(c.graph, 0, [&] { return holds(c.children[0]); });
                });
            case ConditionPlan::Kind::Forall:
                return memoized(c, [&]() -> std::uint64_t {
                    if (!checks_hold(pre_.at(&c.graph))) return 1;
                    return !enumerate(c.graph, 0, [&] { return !holds(c.children[0]); });
                });
            case ConditionPlan::Kind::And: return holds(c.children[0]) && holds(c.children[1]);
            case ConditionPlan::Kind::Or: return holds(c.children[0]) || holds(c.children[1]);
            case ConditionPlan::Kind::Not: return !holds(c.children[0]);
            case ConditionPlan::Kind::Count: {
                std::uint64_t n = count(c);
                std::uint64_t m = c.number ? *c.number : count(c.children[1]);
                return apply(c.op, n, m);
            }
        }
        return false;
    }

    std::uint64_t count(const ConditionPlan& c) {
        return memoized(c, [&]() -> std::uint64_t {
            if (!checks_hold(pre_.at(&c.graph))) return 0;
            std::uint64_t n = 0;
            enumerate(c.graph, 0, [&] {
                if (holds(c.children[0])) ++n;
                return false;
            });
            return n;
        });
    }

    const CompletePattern& p_;
    const Document& d_;
    QueryPlan plan_;
    std::vector<NodeId> b_;
    std::unordered_map<const Operator*, CompiledOp> ops_;
    std::unordered_map<const GraphPlan*, std::vector<CompiledCheck>> pre_;
    std::unordered_map<const PlanStep*, StepState> steps_;
    std::unordered_map<const ConditionPlan*, Memo> memo_;
    std::size_t cached_ = 0;
    std::size_t memo_entries_ = 0;
};

}  // namespace

MatchSet evaluate(const CompletePattern& pattern, const Document& doc) {
    auto start = std::chrono::steady_clock::now();
    Evaluator ev(pattern, doc);
    MatchSet out = ev.run();
    out.duration = std::chrono::steady_clock::now() - start;
    return out;
}

std::uint64_t count_bindings(const CompletePattern& pattern, const ConditionPath& path,
                             const std::map<ElementId, NodeId>& outer, const Document& doc, bool argument) {
    Evaluator ev(pattern, doc);
    return ev.count_at(path, outer, argument);
}

std::string excerpt(const Document& doc, NodeId n, std::size_t limit) {
    std::string_view s = doc.string_value(n);
    std::size_t i = 0, points = 0;
    while (i < s.size() && points < limit) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        i += c < 0x80 ? 1 : c < 0xE0 ? 2 : c < 0xF0 ? 3 : 4;
        ++points;
    }
    return std::string(s.substr(0, std::min(i, s.size())));
}

}  // namespace dqp
