#include "dqp/xml_adaption.hpp"

#include <algorithm>
#include <map>

#include "dqp/errors.hpp"
#include "dqp/validation.hpp"

namespace dqp {

namespace {

// Parameters are shared by display name: the second property called "A"
// reuses PropertyA.
template <class Body>
ParameterId ensure_parameter(CompletePattern& p, const std::string& name, Body body,
                             bool predefined = false) {
    if (const Parameter* existing = p.find_parameter(std::string_view(name))) {
        if (!std::holds_alternative<Body>(existing->body))
            throw PatternError("parameter '" + name + "' already exists with another kind");
        return existing->id;
    }
    return p.add_parameter(name, std::move(body), predefined);
}

std::string label(const std::string& name, const std::string& id) {
    return name.empty() ? id : name;
}

void make_xml_property(CompletePattern& x, Property& prop) {
    std::string suffix = label(prop.name, prop.id.str());
    prop.subkind = PropertySubkind::Xml;
    prop.kind_param = ensure_parameter(
        x, "Property" + suffix,
        PropertyKindOptions{{PropertyKind::Name, PropertyKind::Attribute, PropertyKind::Data}, {}});
    prop.attribute_param = ensure_parameter(x, "Property" + suffix + ".attributeName", TextLiteral{});
}

ParameterId axis_parameter(CompletePattern& x, const std::string& name,
                           const std::vector<Axis>& axes) {
    if (axes.empty()) throw PatternError("navigation decision without axes");
    AxisOptions body;
    body.options = axes;
    bool predefined = axes.size() == 1;
    if (predefined) body.value = axes.front();
    return ensure_parameter(x, name, body, predefined);
}

const RelationDecision* find_decision(const AdaptionDecisions& decisions, const Relation& r) {
    if (!r.name.empty())
        if (auto it = decisions.find(r.name); it != decisions.end()) return &it->second;
    if (auto it = decisions.find(r.id.str()); it != decisions.end()) return &it->second;
    return nullptr;
}

const Relation* incoming_navigation(const Graph& g, const ElementId& e) {
    for (const auto& r : g.relations)
        if (r.kind == RelationKind::XmlNavigation && r.target == e) return &r;
    return nullptr;
}

void classify_relations(CompletePattern& x, const GraphId& gid,
                        const AdaptionDecisions& decisions) {
    const Morphism* m = x.morphism_into(gid);
    const std::size_t count = x.graph(gid).relations.size();
    for (std::size_t i = 0; i < count; ++i) {
        Relation r = x.graph(gid).relations[i];
        if (m) {
            if (auto pre = m->relation_preimage(r.id)) {
                const Relation* src = x.graph(m->source).find_relation(*pre);
                if (!src || src->kind != RelationKind::XmlNavigation)
                    throw PatternError("mapped relation '" + label(r.name, r.id.str()) +
                                       "' must follow a navigation");
                Relation& out = x.mutable_graph(gid).relations[i];
                out.kind = RelationKind::XmlNavigation;
                out.axis_param = ParameterId();
                continue;
            }
        }
        const RelationDecision* d = find_decision(decisions, r);
        if (!d)
            throw PatternError("no decision for relation '" + label(r.name, r.id.str()) + "'");
        if (d->kind == RelationDecision::Kind::Navigation) {
            if (r.source == r.target)
                throw PatternError("self-loop '" + label(r.name, r.id.str()) +
                                   "' can only become a reference");
            const Element* target = x.graph(gid).find_element(r.target);
            ParameterId axis =
                axis_parameter(x, "Nav" + label(target->name, target->id.str()), d->axes);
            Relation& out = x.mutable_graph(gid).relations[i];
            out.kind = RelationKind::XmlNavigation;
            out.axis_param = axis;
        } else {
            std::string rel = label(r.name, r.id.str());
            std::string sname = d->source_property.empty() ? rel + "1" : d->source_property;
            std::string tname = d->target_property.empty() ? rel + "2" : d->target_property;
            auto add_prop = [&](const ElementId& owner, const std::string& name) {
                Property prop;
                prop.id = PropertyId(x.fresh_id("pr"));
                prop.name = name;
                make_xml_property(x, prop);
                for (auto& el : x.mutable_graph(gid).elements)
                    if (el.id == owner) {
                        el.properties.push_back(prop);
                        return prop.id;
                    }
                throw PatternError("reference endpoint '" + owner.str() + "' not found");
            };
            PropertyId sp = add_prop(r.source, sname);
            PropertyId tp = add_prop(r.target, tname);
            ParameterId comp = ensure_parameter(
                x, "COMP" + rel, ComparisonOptions{{ComparisonOp::Equal}, ComparisonOp::Equal, true},
                true);
            Relation& out = x.mutable_graph(gid).relations[i];
            out.kind = RelationKind::XmlReference;
            out.source_property = sp;
            out.target_property = tp;
            out.comparison_param = comp;
        }
    }
}

void complete_tree(CompletePattern& x, const GraphId& gid, const ElementId& root) {
    for (std::size_t i = 0; i < x.graph(gid).elements.size(); ++i) {
        const Element e = x.graph(gid).elements[i];
        if (e.kind == ElementKind::XmlRoot) continue;
        if (incoming_navigation(x.graph(gid), e.id)) continue;
        const Morphism* m = x.morphism_into(gid);
        std::optional<ElementId> pre = m ? m->preimage(e.id) : std::nullopt;
        if (pre) {
            const GraphId parent = m->source;
            const Relation* nav = incoming_navigation(x.graph(parent), *pre);
            if (!nav) throw PatternError("mapped element '" + e.id.str() + "' has no parent");
            const Relation nav_copy = *nav;
            std::optional<ElementId> anchor = x.morphism_into(gid)->image(nav_copy.source);
            if (!anchor) anchor = x.map_element(gid, nav_copy.source);
            RelationId copy = x.add_navigation(gid, *anchor, e.id, ParameterId(), nav_copy.name);
            x.add_relation_mapping(gid, nav_copy.id, copy);
        } else {
            ParameterId axis = axis_parameter(x, "Nav" + label(e.name, e.id.str()),
                                              RelationDecision::all_axes());
            x.add_navigation(gid, root, e.id, axis);
        }
    }
}

}  // namespace

CompletePattern adapt_to_xml(const CompletePattern& generic, const AdaptionDecisions& decisions) {
    if (generic.level() != AbstractionLevel::Generic)
        throw PatternError("adaption expects a generic pattern");
    auto violations = validate(generic, AbstractionLevel::Generic);
    if (!violations.empty())
        throw PatternError("generic pattern is invalid: " + format_violation(violations.front()));

    CompletePattern x = generic;
    x.resync_ids();
    x.set_level(AbstractionLevel::AbstractXml);
    const auto order = x.graph_order();

    for (const GraphId& gid : order) {
        Graph& g = x.mutable_graph(gid);
        for (auto& e : g.elements) {
            e.kind = ElementKind::XmlElement;
            for (auto& prop : e.properties) make_xml_property(x, prop);
        }
    }
    for (const GraphId& gid : order) classify_relations(x, gid, decisions);

    std::map<GraphId, ElementId> roots;
    for (const GraphId& gid : order) {
        roots[gid] = x.add_root(gid);
        if (const Morphism* m = x.morphism_into(gid))
            x.add_element_mapping(gid, roots.at(m->source), roots[gid]);
    }
    for (const GraphId& gid : order) complete_tree(x, gid, roots.at(gid));
    return x;
}

namespace {

struct ParentChain {
    std::vector<ElementId> anonymous;
    std::vector<RelationId> steps;
};

std::vector<RelationId> expand_in(CompletePattern& p, const GraphId& gid, const RelationId& rid,
                                  int depth, const std::vector<ParameterId>& step_params,
                                  const ParentChain* parent) {
    const Relation* r = p.graph(gid).find_relation(rid);
    const ElementId target = r->target;

    std::vector<ElementId> anon;
    for (int k = 0; k + 1 < depth; ++k)
        anon.push_back(parent ? p.map_element(gid, parent->anonymous[k]) : p.add_element(gid, ""));

    for (auto& rel : p.mutable_graph(gid).relations)
        if (rel.id == rid) {
            rel.target = anon.front();
            rel.axis_param = parent ? ParameterId() : step_params.front();
        }
    std::vector<RelationId> chain{rid};
    for (int k = 1; k < depth; ++k) {
        ElementId to = k + 1 < depth ? anon[k] : target;
        ParameterId axis = parent ? ParameterId() : step_params[k];
        chain.push_back(p.add_navigation(gid, anon[k - 1], to, axis));
        if (parent) p.add_relation_mapping(gid, parent->steps[k], chain.back());
    }

    ParentChain mine{anon, chain};
    for (const GraphId& h : p.graph_order()) {
        const Morphism* m = p.morphism_into(h);
        if (!m || m->source != gid) continue;
        for (const auto& [s, t] : m->relation_mappings)
            if (s == rid) {
                RelationId mapped = t;
                expand_in(p, h, mapped, depth, step_params, &mine);
                break;
            }
    }
    return chain;
}

}  // namespace

std::vector<RelationId> expand_child_depth(CompletePattern& pattern, const RelationId& nav) {
    const Graph* g = nullptr;
    const Relation* r = pattern.find_relation(nav, &g);
    if (!r || r->kind != RelationKind::XmlNavigation)
        throw PatternError("'" + nav.str() + "' is not a navigation");
    if (r->axis_param.empty()) throw PatternError("mapped navigations follow their source");
    const Parameter* par = pattern.find_parameter(r->axis_param);
    const auto& ax = std::get<AxisOptions>(par->body);
    if (ax.depth <= 1) return {nav};
    if (ax.value != Axis::Child) throw PatternError("repeated steps require the child axis");

    const GraphId gid = g->id;
    const ParameterId original = r->axis_param;
    const std::string base = par->name;
    const int depth = ax.depth;
    std::vector<ParameterId> steps;
    for (int k = 1; k <= depth; ++k)
        steps.push_back(pattern.add_parameter(base + "#" + nav.str() + "." + std::to_string(k),
                                              AxisOptions{{Axis::Child}, Axis::Child, 1}, true));
    auto chain = expand_in(pattern, gid, nav, depth, steps, nullptr);

    auto refs = referenced_parameters(pattern);
    if (std::find(refs.begin(), refs.end(), original) == refs.end())
        pattern.remove_parameter(original);
    return chain;
}

CompletePattern expand_child_depths(const CompletePattern& pattern) {
    CompletePattern out = pattern;
    out.resync_ids();
    for (;;) {
        std::optional<RelationId> next;
        for (const GraphId& gid : out.graph_order()) {
            for (const auto& r : out.graph(gid).relations) {
                if (r.kind != RelationKind::XmlNavigation || r.axis_param.empty()) continue;
                const Parameter* par = out.find_parameter(r.axis_param);
                if (par && std::get<AxisOptions>(par->body).depth > 1) {
                    next = r.id;
                    break;
                }
            }
            if (next) break;
        }
        if (!next) return out;
        expand_child_depth(out, *next);
    }
}

}  // namespace dqp
