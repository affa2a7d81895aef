#include "dqp/model.hpp"

#include <algorithm>
#include <charconv>

#include "dqp/errors.hpp"

namespace dqp {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};

void push_unique(std::vector<ParameterId>& out, const ParameterId& id) {
    if (!id.empty() && std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
}

}  // namespace

// ------------------------------------------------------------ parameter kinds

std::string_view kind_name(const ParameterBody& body) {
    return std::visit(
        Overloaded{
            [](const ComparisonOptions&) { return std::string_view("ComparisonOptions"); },
            [](const AxisOptions&) { return std::string_view("AxisOptions"); },
            [](const PropertyKindOptions&) { return std::string_view("PropertyKindOptions"); },
            [](const TextLiteral&) { return std::string_view("TextLiteral"); },
            [](const TextList&) { return std::string_view("TextList"); },
            [](const NumberValue&) { return std::string_view("Number"); },
            [](const BooleanValue&) { return std::string_view("Boolean"); },
            [](const DateValue&) { return std::string_view("Date"); },
            [](const TimeValue&) { return std::string_view("Time"); },
            [](const DateTimeValue&) { return std::string_view("DateTime"); },
            [](const UnknownValue&) { return std::string_view("Unknown"); },
        },
        body);
}

bool is_option_parameter(const ParameterBody& body) {
    return std::holds_alternative<ComparisonOptions>(body) ||
           std::holds_alternative<AxisOptions>(body) ||
           std::holds_alternative<PropertyKindOptions>(body);
}

bool is_value_parameter(const ParameterBody& body) { return !is_option_parameter(body); }

bool has_value(const ParameterBody& body) {
    return std::visit(Overloaded{
                          [](const TextList& t) { return t.values.has_value(); },
                          [](const UnknownValue&) { return false; },
                          [](const auto& b) { return b.value.has_value(); },
                      },
                      body);
}

// ---------------------------------------------------------------------- graph

const Element* Graph::find_element(const ElementId& e) const {
    for (const auto& el : elements)
        if (el.id == e) return &el;
    return nullptr;
}

const Relation* Graph::find_relation(const RelationId& r) const {
    for (const auto& rel : relations)
        if (rel.id == r) return &rel;
    return nullptr;
}

const Operator* Graph::find_operator(const OperatorId& o) const {
    for (const auto& op : operators)
        if (op.id == o) return &op;
    return nullptr;
}

const Element* Graph::property_owner(const PropertyId& p) const {
    for (const auto& el : elements)
        for (const auto& prop : el.properties)
            if (prop.id == p) return &el;
    return nullptr;
}

const Property* Graph::find_property(const PropertyId& p) const {
    for (const auto& el : elements)
        for (const auto& prop : el.properties)
            if (prop.id == p) return &prop;
    return nullptr;
}

const Element* Graph::root() const {
    for (const auto& el : elements)
        if (el.kind == ElementKind::XmlRoot) return &el;
    return nullptr;
}

std::optional<ElementId> Morphism::preimage(const ElementId& target_element) const {
    for (const auto& [s, t] : element_mappings)
        if (t == target_element) return s;
    return std::nullopt;
}

std::optional<ElementId> Morphism::image(const ElementId& source_element) const {
    for (const auto& [s, t] : element_mappings)
        if (s == source_element) return t;
    return std::nullopt;
}

std::optional<RelationId> Morphism::relation_preimage(const RelationId& target_relation) const {
    for (const auto& [s, t] : relation_mappings)
        if (t == target_relation) return s;
    return std::nullopt;
}

// -------------------------------------------------------------------- pattern

CompletePattern::CompletePattern(std::string name, AbstractionLevel level)
    : name_(std::move(name)), level_(level) {
    if (name_.empty()) throw PatternError("pattern name must not be empty");
    new_graph();
}

Graph& CompletePattern::new_graph() {
    Graph g;
    g.id = GraphId(fresh_id("g"));
    graphs_.push_back(std::move(g));
    return graphs_.back();
}

std::string CompletePattern::fresh_id(std::string_view prefix) {
    return std::string(prefix) + std::to_string(next_id_++);
}

void CompletePattern::resync_ids() {
    std::uint64_t max_seen = 0;
    bool any = false;
    auto note = [&](const std::string& id) {
        std::size_t i = id.size();
        while (i > 0 && id[i - 1] >= '0' && id[i - 1] <= '9') --i;
        if (i == id.size()) return;
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(id.data() + i, id.data() + id.size(), v);
        if (ec == std::errc()) {
            max_seen = std::max(max_seen, v);
            any = true;
        }
    };
    for (const auto& g : graphs_) {
        note(g.id.str());
        for (const auto& e : g.elements) {
            note(e.id.str());
            for (const auto& p : e.properties) note(p.id.str());
        }
        for (const auto& r : g.relations) note(r.id.str());
        for (const auto& o : g.operators) note(o.id.str());
    }
    for (const auto& p : parameters_) note(p.id.str());
    next_id_ = any ? max_seen + 1 : 0;
}

void CompletePattern::check_mutable() const {
    if (frozen_) throw PatternError("pattern '" + name_ + "' is frozen");
}

void CompletePattern::set_level(AbstractionLevel level) {
    check_mutable();
    level_ = level;
}

const Graph& CompletePattern::graph(const GraphId& g) const {
    for (const auto& gr : graphs_)
        if (gr.id == g) return gr;
    throw PatternError("unknown graph '" + g.str() + "'");
}

Graph& CompletePattern::mutable_graph(const GraphId& g) {
    check_mutable();
    for (auto& gr : graphs_)
        if (gr.id == g) return gr;
    throw PatternError("unknown graph '" + g.str() + "'");
}

void CompletePattern::insert_graph(Graph g) {
    check_mutable();
    for (const auto& gr : graphs_)
        if (gr.id == g.id) throw PatternError("duplicate graph id '" + g.id.str() + "'");
    graphs_.push_back(std::move(g));
}

Parameter& CompletePattern::mutable_parameter(const ParameterId& p) {
    check_mutable();
    for (auto& par : parameters_)
        if (par.id == p) return par;
    throw PatternError("unknown parameter '" + p.str() + "'");
}

std::vector<Parameter>& CompletePattern::mutable_parameters() {
    check_mutable();
    return parameters_;
}

Condition& CompletePattern::mutable_condition() {
    check_mutable();
    return condition_;
}

void CompletePattern::remove_parameter(const ParameterId& p) {
    check_mutable();
    std::erase_if(parameters_, [&](const Parameter& par) { return par.id == p; });
}

namespace {

void collect_graphs(const Condition& c, std::vector<GraphId>& out) {
    std::visit(Overloaded{
                   [](const TrueCondition&) {},
                   [&](const QuantifiedCondition& q) {
                       out.push_back(q.graph);
                       collect_graphs(*q.inner, out);
                   },
                   [&](const Formula& f) {
                       collect_graphs(*f.left, out);
                       collect_graphs(*f.right, out);
                   },
                   [&](const NotCondition& n) { collect_graphs(*n.inner, out); },
                   [&](const CountCondition& cc) {
                       out.push_back(cc.count.graph);
                       collect_graphs(*cc.count.inner, out);
                       if (auto* other = std::get_if<Box<CountPattern>>(&cc.argument)) {
                           out.push_back((*other)->graph);
                           collect_graphs(*(*other)->inner, out);
                       }
                   },
               },
               c.node);
}

template <class C>
auto* find_morphism(C& c, const GraphId& g) {
    using M = std::conditional_t<std::is_const_v<C>, const Morphism, Morphism>;
    M* found = nullptr;
    auto visit = [&](auto& self, auto& cond) -> void {
        if (found) return;
        if (auto* q = std::get_if<QuantifiedCondition>(&cond.node)) {
            if (q->graph == g) found = &q->morphism;
            else self(self, *q->inner);
        } else if (auto* f = std::get_if<Formula>(&cond.node)) {
            self(self, *f->left);
            self(self, *f->right);
        } else if (auto* n = std::get_if<NotCondition>(&cond.node)) {
            self(self, *n->inner);
        } else if (auto* cc = std::get_if<CountCondition>(&cond.node)) {
            if (cc->count.graph == g) {
                found = &cc->count.morphism;
                return;
            }
            self(self, *cc->count.inner);
            if (auto* other = std::get_if<Box<CountPattern>>(&cc->argument)) {
                if ((*other)->graph == g) found = &(*other)->morphism;
                else self(self, *(*other)->inner);
            }
        }
    };
    visit(visit, c);
    return found;
}

}  // namespace

std::vector<GraphId> CompletePattern::graph_order() const {
    std::vector<GraphId> out{graphs_.front().id};
    collect_graphs(condition_, out);
    return out;
}

const Condition& CompletePattern::condition_at(const ConditionPath& path) const {
    return const_cast<CompletePattern*>(this)->slot_ref(path);
}

Condition& CompletePattern::slot_ref(const ConditionPath& path) {
    Condition* node = &condition_;
    for (int step : path) {
        if (auto* q = std::get_if<QuantifiedCondition>(&node->node); q && step == 0) {
            node = &*q->inner;
        } else if (auto* f = std::get_if<Formula>(&node->node); f && (step == 0 || step == 1)) {
            node = step == 0 ? &*f->left : &*f->right;
        } else if (auto* n = std::get_if<NotCondition>(&node->node); n && step == 0) {
            node = &*n->inner;
        } else if (auto* cc = std::get_if<CountCondition>(&node->node)) {
            if (step == 0) {
                node = &*cc->count.inner;
            } else if (auto* other = std::get_if<Box<CountPattern>>(&cc->argument);
                       other && step == 1) {
                node = &*(*other)->inner;
            } else {
                throw PatternError("invalid condition path");
            }
        } else {
            throw PatternError("invalid condition path");
        }
    }
    return *node;
}

GraphId CompletePattern::enclosing_graph(const ConditionPath& path) const {
    GraphId current = graphs_.front().id;
    const Condition* node = &condition_;
    for (int step : path) {
        if (auto* q = std::get_if<QuantifiedCondition>(&node->node); q && step == 0) {
            current = q->graph;
            node = &*q->inner;
        } else if (auto* f = std::get_if<Formula>(&node->node); f && (step == 0 || step == 1)) {
            node = step == 0 ? &*f->left : &*f->right;
        } else if (auto* n = std::get_if<NotCondition>(&node->node); n && step == 0) {
            node = &*n->inner;
        } else if (auto* cc = std::get_if<CountCondition>(&node->node)) {
            if (step == 0) {
                current = cc->count.graph;
                node = &*cc->count.inner;
            } else if (auto* other = std::get_if<Box<CountPattern>>(&cc->argument);
                       other && step == 1) {
                current = (*other)->graph;
                node = &*(*other)->inner;
            } else {
                throw PatternError("invalid condition path");
            }
        } else {
            throw PatternError("invalid condition path");
        }
    }
    return current;
}

const Morphism* CompletePattern::morphism_into(const GraphId& g) const {
    return find_morphism(condition_, g);
}

Morphism& CompletePattern::mutable_morphism_into(const GraphId& g) {
    check_mutable();
    Morphism* m = find_morphism(condition_, g);
    if (!m) throw PatternError("graph '" + g.str() + "' is not nested in the condition");
    return *m;
}

const Element* CompletePattern::find_element(const ElementId& e, const Graph** graph) const {
    for (const auto& g : graphs_)
        if (const Element* el = g.find_element(e)) {
            if (graph) *graph = &g;
            return el;
        }
    return nullptr;
}

const Relation* CompletePattern::find_relation(const RelationId& r, const Graph** graph) const {
    for (const auto& g : graphs_)
        if (const Relation* rel = g.find_relation(r)) {
            if (graph) *graph = &g;
            return rel;
        }
    return nullptr;
}

const Operator* CompletePattern::find_operator(const OperatorId& o, const Graph** graph) const {
    for (const auto& g : graphs_)
        if (const Operator* op = g.find_operator(o)) {
            if (graph) *graph = &g;
            return op;
        }
    return nullptr;
}

PropertyRef CompletePattern::find_property(const PropertyId& p) const {
    for (const auto& g : graphs_)
        for (const auto& el : g.elements)
            for (const auto& prop : el.properties)
                if (prop.id == p) return {&prop, &el, &g};
    return {};
}

const Parameter* CompletePattern::find_parameter(const ParameterId& p) const {
    for (const auto& par : parameters_)
        if (par.id == p) return &par;
    return nullptr;
}

const Parameter* CompletePattern::find_parameter(std::string_view name) const {
    for (const auto& par : parameters_)
        if (par.name == name) return &par;
    return nullptr;
}

// ------------------------------------------------------------------- builders

ElementId CompletePattern::add_element(const GraphId& g, std::string name) {
    Graph& gr = mutable_graph(g);
    Element el;
    el.id = ElementId(fresh_id("e"));
    el.name = std::move(name);
    el.kind = level_ == AbstractionLevel::Generic ? ElementKind::Generic : ElementKind::XmlElement;
    gr.elements.push_back(std::move(el));
    return gr.elements.back().id;
}

ElementId CompletePattern::add_root(const GraphId& g) {
    if (level_ == AbstractionLevel::Generic)
        throw PatternError("generic patterns cannot contain an XmlRoot");
    Graph& gr = mutable_graph(g);
    if (gr.root()) throw PatternError("graph '" + g.str() + "' already has a root");
    Element el;
    el.id = ElementId(fresh_id("e"));
    el.name = "root";
    el.kind = ElementKind::XmlRoot;
    gr.elements.push_back(std::move(el));
    return gr.elements.back().id;
}

namespace {

Element& element_in(std::vector<Graph>& graphs, const ElementId& e) {
    for (auto& g : graphs)
        for (auto& el : g.elements)
            if (el.id == e) return el;
    throw PatternError("unknown element '" + e.str() + "'");
}

}  // namespace

PropertyId CompletePattern::add_property(const ElementId& owner, std::string name) {
    check_mutable();
    if (level_ != AbstractionLevel::Generic)
        throw PatternError("XML-level properties need kind and attribute parameters");
    Element& el = element_in(graphs_, owner);
    Property p;
    p.id = PropertyId(fresh_id("pr"));
    p.name = std::move(name);
    el.properties.push_back(std::move(p));
    return el.properties.back().id;
}

PropertyId CompletePattern::add_xml_property(const ElementId& owner, const ParameterId& kind_param,
                                             const ParameterId& attribute_param,
                                             std::string name) {
    check_mutable();
    if (level_ == AbstractionLevel::Generic)
        throw PatternError("generic patterns cannot contain an XmlProperty");
    const Parameter* kp = find_parameter(kind_param);
    if (!kp || !std::holds_alternative<PropertyKindOptions>(kp->body))
        throw PatternError("property kind parameter missing or of the wrong kind");
    const Parameter* ap = find_parameter(attribute_param);
    if (!ap || !std::holds_alternative<TextLiteral>(ap->body))
        throw PatternError("attribute name parameter missing or of the wrong kind");
    Element& el = element_in(graphs_, owner);
    if (el.kind == ElementKind::XmlRoot) throw PatternError("the root cannot own properties");
    Property p;
    p.id = PropertyId(fresh_id("pr"));
    p.name = std::move(name);
    p.subkind = PropertySubkind::Xml;
    p.kind_param = kind_param;
    p.attribute_param = attribute_param;
    el.properties.push_back(std::move(p));
    return el.properties.back().id;
}

RelationId CompletePattern::add_relation(const GraphId& g, const ElementId& source,
                                         const ElementId& target, std::string name) {
    if (level_ != AbstractionLevel::Generic)
        throw PatternError("XML-level patterns use navigations and references");
    Graph& gr = mutable_graph(g);
    if (!gr.contains(source) || !gr.contains(target))
        throw PatternError("relation endpoints must lie in graph '" + g.str() + "'");
    Relation r;
    r.id = RelationId(fresh_id("r"));
    r.name = std::move(name);
    r.source = source;
    r.target = target;
    gr.relations.push_back(std::move(r));
    return gr.relations.back().id;
}

RelationId CompletePattern::add_navigation(const GraphId& g, const ElementId& source,
                                           const ElementId& target, const ParameterId& axis_param,
                                           std::string name) {
    if (level_ == AbstractionLevel::Generic)
        throw PatternError("generic patterns cannot contain an XmlNavigation");
    if (!axis_param.empty()) {
        const Parameter* ap = find_parameter(axis_param);
        if (!ap || !std::holds_alternative<AxisOptions>(ap->body))
            throw PatternError("axis parameter missing or of the wrong kind");
    }
    Graph& gr = mutable_graph(g);
    if (!gr.contains(source) || !gr.contains(target))
        throw PatternError("navigation endpoints must lie in graph '" + g.str() + "'");
    Relation r;
    r.id = RelationId(fresh_id("r"));
    r.name = std::move(name);
    r.source = source;
    r.target = target;
    r.kind = RelationKind::XmlNavigation;
    r.axis_param = axis_param;
    gr.relations.push_back(std::move(r));
    return gr.relations.back().id;
}

RelationId CompletePattern::add_reference(const GraphId& g, const ElementId& source,
                                          const ElementId& target,
                                          const PropertyId& source_property,
                                          const PropertyId& target_property,
                                          const ParameterId& comparison_param, std::string name) {
    if (level_ == AbstractionLevel::Generic)
        throw PatternError("generic patterns cannot contain an XmlReference");
    const Parameter* cp = find_parameter(comparison_param);
    if (!cp || !std::holds_alternative<ComparisonOptions>(cp->body))
        throw PatternError("reference comparison parameter missing or of the wrong kind");
    Graph& gr = mutable_graph(g);
    const Element* s = gr.find_element(source);
    const Element* t = gr.find_element(target);
    if (!s || !t) throw PatternError("reference endpoints must lie in graph '" + g.str() + "'");
    auto owns = [](const Element* el, const PropertyId& p) {
        return std::any_of(el->properties.begin(), el->properties.end(),
                           [&](const Property& pr) { return pr.id == p; });
    };
    if (!owns(s, source_property) || !owns(t, target_property))
        throw PatternError("reference properties must belong to the reference endpoints");
    Relation r;
    r.id = RelationId(fresh_id("r"));
    r.name = std::move(name);
    r.source = source;
    r.target = target;
    r.kind = RelationKind::XmlReference;
    r.source_property = source_property;
    r.target_property = target_property;
    r.comparison_param = comparison_param;
    gr.relations.push_back(std::move(r));
    return gr.relations.back().id;
}

void CompletePattern::add_return_element(const GraphId& g, const ElementId& e) {
    Graph& gr = mutable_graph(g);
    if (!gr.contains(e)) throw PatternError("return element must lie in graph '" + g.str() + "'");
    if (std::find(gr.return_elements.begin(), gr.return_elements.end(), e) ==
        gr.return_elements.end())
        gr.return_elements.push_back(e);
}

ParameterId CompletePattern::add_parameter(std::string name, ParameterBody body, bool predefined,
                                           std::optional<std::string> description) {
    check_mutable();
    Parameter p;
    p.id = ParameterId(fresh_id("par"));
    p.name = name.empty() ? p.id.str() : std::move(name);
    if (find_parameter(std::string_view(p.name)))
        throw PatternError("duplicate parameter name '" + p.name + "'");
    p.predefined = predefined;
    p.description = std::move(description);
    p.body = std::move(body);
    parameters_.push_back(std::move(p));
    return parameters_.back().id;
}

GraphId CompletePattern::add_quantified(const ConditionPath& slot, Quantifier q) {
    check_mutable();
    GraphId source = enclosing_graph(slot);
    if (!std::holds_alternative<TrueCondition>(slot_ref(slot).node))
        throw PatternError("condition slot is already occupied");
    GraphId id = new_graph().id;
    QuantifiedCondition qc;
    qc.quantifier = q;
    qc.graph = id;
    qc.morphism.source = source;
    qc.morphism.target = id;
    slot_ref(slot).node = std::move(qc);
    return id;
}

std::pair<ConditionPath, ConditionPath> CompletePattern::add_formula(const ConditionPath& slot,
                                                                     LogicOp op) {
    check_mutable();
    Condition& c = slot_ref(slot);
    if (!std::holds_alternative<TrueCondition>(c.node))
        throw PatternError("condition slot is already occupied");
    Formula f;
    f.op = op;
    c.node = std::move(f);
    ConditionPath l = slot, r = slot;
    l.push_back(0);
    r.push_back(1);
    return {l, r};
}

ConditionPath CompletePattern::add_not(const ConditionPath& slot) {
    check_mutable();
    Condition& c = slot_ref(slot);
    if (!std::holds_alternative<TrueCondition>(c.node))
        throw PatternError("condition slot is already occupied");
    c.node = NotCondition{};
    ConditionPath inner = slot;
    inner.push_back(0);
    return inner;
}

GraphId CompletePattern::add_count_condition(const ConditionPath& slot, ComparisonOp op,
                                             NumberElement n) {
    check_mutable();
    GraphId source = enclosing_graph(slot);
    if (!std::holds_alternative<TrueCondition>(slot_ref(slot).node))
        throw PatternError("condition slot is already occupied");
    GraphId id = new_graph().id;
    CountCondition cc;
    cc.count.graph = id;
    cc.count.morphism.source = source;
    cc.count.morphism.target = id;
    cc.op = op;
    cc.argument = n;
    slot_ref(slot).node = std::move(cc);
    return id;
}

std::pair<GraphId, GraphId> CompletePattern::add_count_comparison(const ConditionPath& slot,
                                                                  ComparisonOp op) {
    check_mutable();
    GraphId source = enclosing_graph(slot);
    if (!std::holds_alternative<TrueCondition>(slot_ref(slot).node))
        throw PatternError("condition slot is already occupied");
    GraphId first = new_graph().id;
    GraphId second = new_graph().id;
    CountCondition cc;
    cc.count.graph = first;
    cc.count.morphism.source = source;
    cc.count.morphism.target = first;
    cc.op = op;
    CountPattern other;
    other.graph = second;
    other.morphism.source = source;
    other.morphism.target = second;
    cc.argument = Box<CountPattern>(std::move(other));
    slot_ref(slot).node = std::move(cc);
    return {first, second};
}

void CompletePattern::add_element_mapping(const GraphId& target_graph, const ElementId& source,
                                          const ElementId& target) {
    check_mutable();
    Morphism& m = mutable_morphism_into(target_graph);
    if (!graph(m.source).contains(source))
        throw PatternError("mapping source '" + source.str() + "' is not in graph '" +
                           m.source.str() + "'");
    if (!graph(target_graph).contains(target))
        throw PatternError("mapping target '" + target.str() + "' is not in graph '" +
                           target_graph.str() + "'");
    if (m.image(source)) throw PatternError("element '" + source.str() + "' is already mapped");
    if (m.preimage(target))
        throw PatternError("element '" + target.str() + "' is already a mapping target");
    m.element_mappings.emplace_back(source, target);
}

ElementId CompletePattern::map_element(const GraphId& target_graph, const ElementId& source) {
    check_mutable();
    const Morphism* m = morphism_into(target_graph);
    if (!m) throw PatternError("graph '" + target_graph.str() + "' has no incoming morphism");
    const Graph& src_graph = graph(m->source);
    const Element* src = src_graph.find_element(source);
    if (!src)
        throw PatternError("mapping source '" + source.str() + "' is not in graph '" +
                           m->source.str() + "'");
    if (m->image(source)) throw PatternError("element '" + source.str() + "' is already mapped");
    bool is_return = std::find(src_graph.return_elements.begin(), src_graph.return_elements.end(),
                               source) != src_graph.return_elements.end();
    bool quantified = false;
    {
        // Only quantified graphs carry return elements forward.
        auto walk = [&](auto& self, const Condition& c) -> void {
            if (auto* q = std::get_if<QuantifiedCondition>(&c.node)) {
                if (q->graph == target_graph) quantified = true;
                self(self, *q->inner);
            } else if (auto* f = std::get_if<Formula>(&c.node)) {
                self(self, *f->left);
                self(self, *f->right);
            } else if (auto* n = std::get_if<NotCondition>(&c.node)) {
                self(self, *n->inner);
            } else if (auto* cc = std::get_if<CountCondition>(&c.node)) {
                self(self, *cc->count.inner);
                if (auto* other = std::get_if<Box<CountPattern>>(&cc->argument))
                    self(self, *(*other)->inner);
            }
        };
        walk(walk, condition_);
    }
    Element copy;
    copy.id = ElementId(fresh_id("e"));
    copy.name = src->name;
    copy.kind = src->kind;
    Graph& tg = mutable_graph(target_graph);
    if (copy.kind == ElementKind::XmlRoot && tg.root())
        throw PatternError("graph '" + target_graph.str() + "' already has a root");
    tg.elements.push_back(copy);
    mutable_morphism_into(target_graph).element_mappings.emplace_back(source, copy.id);
    if (is_return && quantified) tg.return_elements.push_back(copy.id);
    return copy.id;
}

RelationId CompletePattern::map_relation(const GraphId& target_graph, const RelationId& source) {
    check_mutable();
    const Morphism* m = morphism_into(target_graph);
    if (!m) throw PatternError("graph '" + target_graph.str() + "' has no incoming morphism");
    const Relation* src = graph(m->source).find_relation(source);
    if (!src)
        throw PatternError("mapping source '" + source.str() + "' is not in graph '" +
                           m->source.str() + "'");
    if (src->kind == RelationKind::XmlReference)
        throw PatternError("references cannot be mapped");
    auto s = m->image(src->source);
    auto t = m->image(src->target);
    if (!s || !t) throw PatternError("relation endpoints must be mapped first");
    for (const auto& [rs, rt] : m->relation_mappings)
        if (rs == source) throw PatternError("relation '" + source.str() + "' is already mapped");
    Relation copy;
    copy.id = RelationId(fresh_id("r"));
    copy.name = src->name;
    copy.source = *s;
    copy.target = *t;
    copy.kind = src->kind;
    mutable_graph(target_graph).relations.push_back(copy);
    mutable_morphism_into(target_graph).relation_mappings.emplace_back(source, copy.id);
    return copy.id;
}

void CompletePattern::add_relation_mapping(const GraphId& target_graph, const RelationId& source,
                                           const RelationId& target) {
    check_mutable();
    Morphism& m = mutable_morphism_into(target_graph);
    const Relation* s = graph(m.source).find_relation(source);
    const Relation* t = graph(target_graph).find_relation(target);
    if (!s || !t) throw PatternError("relation mapping endpoints outside the morphism graphs");
    if (m.image(s->source) != t->source || m.image(s->target) != t->target)
        throw PatternError("relation mapping endpoints are not mapped onto each other");
    for (const auto& [rs, rt] : m.relation_mappings)
        if (rs == source) throw PatternError("relation '" + source.str() + "' is already mapped");
    m.relation_mappings.emplace_back(source, target);
}

namespace {

// Operands of a new operator must live in its graph.
void check_operand(const CompletePattern& p, const Graph& g, const Comparable& c) {
    std::visit(Overloaded{
                   [&](const ElementId& e) {
                       if (!g.contains(e))
                           throw PatternError("comparison operand '" + e.str() +
                                              "' is not in graph '" + g.id.str() + "'");
                   },
                   [&](const PropertyId& pr) {
                       if (!g.property_owner(pr))
                           throw PatternError("comparison operand '" + pr.str() +
                                              "' is not in graph '" + g.id.str() + "'");
                   },
                   [&](const OperatorId& o) {
                       if (!g.find_operator(o))
                           throw PatternError("comparison operand '" + o.str() +
                                              "' is not in graph '" + g.id.str() + "'");
                   },
                   [&](const ParameterId& par) {
                       if (!p.find_parameter(par))
                           throw PatternError("unknown parameter '" + par.str() + "'");
                   },
               },
               c);
}

}  // namespace

OperatorId CompletePattern::add_comparison(const GraphId& g, Comparable left, Comparable right,
                                           std::vector<ComparisonOp> options,
                                           ValueType value_type, std::string param_name) {
    check_mutable();
    if (options.empty()) throw PatternError("comparison needs at least one operator option");
    bool elementwise =
        std::holds_alternative<ElementId>(left) && std::holds_alternative<ElementId>(right);
    if (elementwise && std::any_of(options.begin(), options.end(), is_ordering))
        throw PatternError("element comparisons allow EQUAL or NOT_EQUAL only");
    const Graph& gr = graph(g);
    check_operand(*this, gr, left);
    check_operand(*this, gr, right);
    ComparisonOptions body;
    body.options = options;
    bool predefined = options.size() == 1;
    if (predefined) body.value = options.front();
    ParameterId par = add_parameter(std::move(param_name), body, predefined);
    return add_comparison(g, std::move(left), std::move(right), par, value_type);
}

OperatorId CompletePattern::add_comparison(const GraphId& g, Comparable left, Comparable right,
                                           const ParameterId& op_param, ValueType value_type) {
    check_mutable();
    const Parameter* par = find_parameter(op_param);
    if (!par || !std::holds_alternative<ComparisonOptions>(par->body))
        throw PatternError("comparison parameter missing or of the wrong kind");
    bool elementwise =
        std::holds_alternative<ElementId>(left) && std::holds_alternative<ElementId>(right);
    const auto& opts = std::get<ComparisonOptions>(par->body).options;
    if (elementwise && std::any_of(opts.begin(), opts.end(), is_ordering))
        throw PatternError("element comparisons allow EQUAL or NOT_EQUAL only");
    Graph& gr = mutable_graph(g);
    check_operand(*this, gr, left);
    check_operand(*this, gr, right);
    Operator op;
    op.id = OperatorId(fresh_id("op"));
    op.body = Comparison{std::move(left), std::move(right), op_param, value_type};
    gr.operators.push_back(std::move(op));
    return gr.operators.back().id;
}

OperatorId CompletePattern::add_match(const GraphId& g, const PropertyId& property,
                                      std::optional<std::string> regex, std::string param_name) {
    check_mutable();
    if (!graph(g).property_owner(property))
        throw PatternError("match property '" + property.str() + "' is not in graph '" +
                           g.str() + "'");
    ParameterId par = add_parameter(std::move(param_name), TextLiteral{std::move(regex)});
    return add_match(g, property, par);
}

OperatorId CompletePattern::add_match(const GraphId& g, const PropertyId& property,
                                      const ParameterId& regex_param) {
    check_mutable();
    const Parameter* par = find_parameter(regex_param);
    if (!par || !std::holds_alternative<TextLiteral>(par->body))
        throw PatternError("regex parameter missing or of the wrong kind");
    Graph& gr = mutable_graph(g);
    if (!gr.property_owner(property))
        throw PatternError("match property '" + property.str() + "' is not in graph '" +
                           g.str() + "'");
    Operator op;
    op.id = OperatorId(fresh_id("op"));
    op.body = Match{property, regex_param};
    gr.operators.push_back(std::move(op));
    return gr.operators.back().id;
}

bool CompletePattern::operator==(const CompletePattern& other) const {
    return name_ == other.name_ && level_ == other.level_ && graphs_ == other.graphs_ &&
           condition_ == other.condition_ && parameters_ == other.parameters_;
}

// -------------------------------------------------------------------- helpers

std::vector<ElementId> predicate_elements(const CompletePattern& p, const Graph& g,
                                          const Operator& op) {
    std::vector<ElementId> out;
    auto add = [&](const ElementId& e) {
        if (!e.empty() && std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
    };
    std::vector<OperatorId> seen;
    auto visit = [&](auto& self, const Operator& o) -> void {
        if (std::find(seen.begin(), seen.end(), o.id) != seen.end()) return;
        seen.push_back(o.id);
        auto operand = [&](const Comparable& c) {
            if (auto* e = std::get_if<ElementId>(&c)) add(*e);
            else if (auto* pr = std::get_if<PropertyId>(&c)) {
                if (auto ref = p.find_property(*pr); ref.owner) add(ref.owner->id);
            } else if (auto* oid = std::get_if<OperatorId>(&c)) {
                if (const Operator* inner = g.find_operator(*oid)) self(self, *inner);
            }
        };
        if (auto* c = std::get_if<Comparison>(&o.body)) {
            operand(c->left);
            operand(c->right);
        } else if (auto* m = std::get_if<Match>(&o.body)) {
            if (auto ref = p.find_property(m->property); ref.owner) add(ref.owner->id);
        }
    };
    visit(visit, op);
    return out;
}

std::vector<ParameterId> referenced_parameters(const CompletePattern& p) {
    std::vector<ParameterId> out;
    for (const GraphId& gid : p.graph_order()) {
        const Graph& g = p.graph(gid);
        for (const auto& el : g.elements)
            for (const auto& prop : el.properties) {
                push_unique(out, prop.kind_param);
                push_unique(out, prop.attribute_param);
            }
        for (const auto& r : g.relations) {
            push_unique(out, r.axis_param);
            push_unique(out, r.comparison_param);
        }
        for (const auto& op : g.operators) {
            if (auto* c = std::get_if<Comparison>(&op.body)) {
                push_unique(out, c->op_param);
                if (auto* par = std::get_if<ParameterId>(&c->left)) push_unique(out, *par);
                if (auto* par = std::get_if<ParameterId>(&c->right)) push_unique(out, *par);
            } else if (auto* m = std::get_if<Match>(&op.body)) {
                push_unique(out, m->regex_param);
            }
        }
    }
    return out;
}

bool operator_enabled(const CompletePattern& p, const Operator& op) {
    if (auto* c = std::get_if<Comparison>(&op.body)) {
        const Parameter* par = p.find_parameter(c->op_param);
        if (par)
            if (auto* opts = std::get_if<ComparisonOptions>(&par->body)) return opts->enabled;
    }
    return true;
}

}  // namespace dqp
