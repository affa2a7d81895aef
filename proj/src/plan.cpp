#include "dqp/plan.hpp"

#include <algorithm>
#include <set>

#include "dqp/errors.hpp"

namespace dqp {

int QueryPlan::slot(const ElementId& e) const {
    auto it = slots.find(e);
    if (it == slots.end()) throw PatternError("element '" + e.str() + "' is not bound by the plan");
    return it->second;
}

PropertyAccess QueryPlan::access(const PropertyId& id) const {
    PropertyRef ref = pattern->find_property(id);
    if (!ref.property) throw PatternError("unknown property '" + id.str() + "'");
    PropertyAccess a;
    a.slot = slot(ref.owner->id);
    if (const Parameter* k = pattern->find_parameter(ref.property->kind_param))
        if (auto* opts = std::get_if<PropertyKindOptions>(&k->body); opts && opts->value) a.kind = *opts->value;
    if (a.kind == PropertyKind::Attribute)
        if (const Parameter* n = pattern->find_parameter(ref.property->attribute_param))
            if (auto* t = std::get_if<TextLiteral>(&n->body); t && t->value) a.attribute = *t->value;
    return a;
}

ComparisonOp comparison_op(const CompletePattern& p, const ParameterId& id) {
    if (const Parameter* par = p.find_parameter(id))
        if (auto* o = std::get_if<ComparisonOptions>(&par->body); o && o->value) return *o->value;
    return ComparisonOp::Equal;
}

namespace {

class Planner {
public:
    explicit Planner(const CompletePattern& p) : p_(p) { plan_.pattern = &p; }

    QueryPlan run() {
        const Graph& outer = p_.outer_graph();
        plan_.outer = graph(outer, nullptr);
        plan_.condition = condition(p_.condition());
        for (const auto& e : outer.return_elements) plan_.returns.push_back(plan_.slot(e));
        return std::move(plan_);
    }

private:
    GraphPlan graph(const Graph& g, const Morphism* m) {
        GraphPlan gp;
        gp.graph = &g;
        const int first = plan_.slot_count;
        for (const auto& el : g.elements) {
            if (el.kind == ElementKind::XmlRoot) plan_.slots[el.id] = 0;
            else if (m)
                if (auto pre = m->preimage(el.id)) plan_.slots[el.id] = plan_.slot(*pre);
        }
        const Element* root = g.root();
        if (!root) throw PatternError("graph '" + g.id.str() + "' has no XmlRoot");

        std::vector<PlanCheck> checks, navigations;
        std::set<ElementId> visited;
        auto visit = [&](auto& self, const ElementId& from) -> void {
            if (!visited.insert(from).second) return;
            for (const auto& r : g.relations) {
                if (r.kind != RelationKind::XmlNavigation || r.source != from) continue;
                bool image = m && m->relation_preimage(r.id);
                if (!plan_.slots.count(r.target)) {
                    PlanStep s;
                    s.element = g.find_element(r.target);
                    s.slot = plan_.slot_count++;
                    s.anchor = plan_.slot(from);
                    if (const Parameter* ax = p_.find_parameter(r.axis_param))
                        if (auto* o = std::get_if<AxisOptions>(&ax->body)) {
                            if (o->value) s.axis = *o->value;
                            s.depth = o->depth;
                        }
                    plan_.slots[r.target] = s.slot;
                    gp.steps.push_back(std::move(s));
                } else if (!image) {
                    navigations.push_back({PlanCheck::Kind::Navigation, nullptr, &r});
                }
                self(self, r.target);
            }
        };
        visit(visit, root->id);
        for (const auto& el : g.elements)
            if (!plan_.slots.count(el.id))
                throw PatternError("element '" + el.id.str() + "' is not reachable from the root");

        std::set<OperatorId> nested;
        for (const auto& op : g.operators)
            if (auto* c = std::get_if<Comparison>(&op.body))
                for (const Comparable* side : {&c->left, &c->right})
                    if (auto* o = std::get_if<OperatorId>(side)) nested.insert(*o);
        for (const auto& op : g.operators)
            if (!nested.count(op.id) && operator_enabled(p_, op))
                checks.push_back({PlanCheck::Kind::Operator, &op, nullptr});

        for (const auto& r : g.relations) {
            if (r.kind != RelationKind::XmlReference) continue;
            if (m && m->relation_preimage(r.id)) continue;
            if (const Parameter* c = p_.find_parameter(r.comparison_param))
                if (auto* o = std::get_if<ComparisonOptions>(&c->body); o && !o->enabled) continue;
            checks.push_back({PlanCheck::Kind::Reference, nullptr, &r});
        }
        checks.insert(checks.end(), navigations.begin(), navigations.end());
        for (auto& c : checks) {
            int latest = 0;
            if (c.kind == PlanCheck::Kind::Operator) {
                for (const auto& e : predicate_elements(p_, g, *c.op)) latest = std::max(latest, plan_.slot(e));
            } else {
                latest = std::max(plan_.slot(c.relation->source), plan_.slot(c.relation->target));
            }
            if (latest >= first) gp.steps[static_cast<std::size_t>(latest - first)].checks.push_back(c);
            else gp.pre.push_back(c);
        }
        return gp;
    }

    ConditionPlan condition(const Condition& c) {
        ConditionPlan cp;
        if (auto* q = std::get_if<QuantifiedCondition>(&c.node)) {
            cp.kind = q->quantifier == Quantifier::Exists ? ConditionPlan::Kind::Exists : ConditionPlan::Kind::Forall;
            cp.graph = graph(p_.graph(q->graph), &q->morphism);
            cp.children.push_back(condition(*q->inner));
        } else if (auto* f = std::get_if<Formula>(&c.node)) {
            cp.kind = f->op == LogicOp::And ? ConditionPlan::Kind::And : ConditionPlan::Kind::Or;
            cp.children.push_back(condition(*f->left));
            cp.children.push_back(condition(*f->right));
        } else if (auto* n = std::get_if<NotCondition>(&c.node)) {
            cp.kind = ConditionPlan::Kind::Not;
            cp.children.push_back(condition(*n->inner));
        } else if (auto* k = std::get_if<CountCondition>(&c.node)) {
            cp = count(k->count);
            cp.op = k->op;
            if (auto* num = std::get_if<NumberElement>(&k->argument)) cp.number = num->value;
            else cp.children.push_back(count(*std::get<Box<CountPattern>>(k->argument)));
        }
        return cp;
    }

    ConditionPlan count(const CountPattern& cp) {
        ConditionPlan out;
        out.kind = ConditionPlan::Kind::Count;
        out.graph = graph(p_.graph(cp.graph), &cp.morphism);
        out.children.push_back(condition(*cp.inner));
        return out;
    }

    const CompletePattern& p_;
    QueryPlan plan_;
};

}  // namespace

QueryPlan make_plan(const CompletePattern& p) {
    if (p.level() != AbstractionLevel::Concrete) throw PatternError("pattern '" + p.name() + "' is not concrete");
    return Planner(p).run();
}

}  // namespace dqp
