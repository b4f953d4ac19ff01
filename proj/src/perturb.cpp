#include "kgaudit/perturb.hpp"

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <unordered_set>

#include <boost/math/distributions/students_t.hpp>

namespace kgaudit {

std::string to_string(PerturbStrategy s) {
    switch (s) {
        case PerturbStrategy::RemoveDisease: return "remove-disease";
        case PerturbStrategy::RemoveRandom: return "remove-random";
        case PerturbStrategy::AddDisease: return "add-disease";
        case PerturbStrategy::AddAntCompGene: return "add-ant-comp-gene";
        case PerturbStrategy::Rewire: return "rewire";
    }
    return "?";
}

PerturbStrategy perturb_strategy_from_string(const std::string& s) {
    if (s == "remove-disease") return PerturbStrategy::RemoveDisease;
    if (s == "remove-random") return PerturbStrategy::RemoveRandom;
    if (s == "add-disease") return PerturbStrategy::AddDisease;
    if (s == "add-ant-comp-gene") return PerturbStrategy::AddAntCompGene;
    if (s == "rewire") return PerturbStrategy::Rewire;
    throw PerturbError("unknown perturbation strategy: " + s);
}

EntityId select_target(const Model& m, const Graph& g, const Query& q, TargetMode mode) {
    RankedList list = complete(m, g, q);
    if (mode == TargetMode::Bottom) return list.entries.back().entity;
    // top novel: best-scored candidate with no query-relation edge to the query entity
    for (const ScoredCandidate& c : list.entries) {
        bool linked = q.direction == Direction::CompleteTail
                          ? g.has_triple(q.fixed_entity, q.relation, c.entity)
                          : g.has_triple(c.entity, q.relation, q.fixed_entity);
        if (!linked) return c.entity;
    }
    throw PerturbError("no novel candidates: every in-scope entity already has a query-relation edge");
}

namespace {

// round-half-to-even fraction-to-count conversion
std::size_t fraction_count(double fraction, std::size_t total) {
    if (fraction < 0 || fraction > 1) throw PerturbError("fraction must be in [0, 1]");
    return std::size_t(std::nearbyint(fraction * double(total)));
}

std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, Rng& rng) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = 0; i < k; ++i)
        std::swap(idx[i], idx[i + uniform_index(rng, n - i)]);
    idx.resize(k);
    return idx;
}

}  // namespace

Graph remove_edges(const Graph& g, EntityId target, RemoveStrategy strategy, double fraction,
                   TypeId disease_type, Rng& rng) {
    std::vector<TripleId> eligible;
    for (TripleId t : g.incident(target)) {
        if (strategy == RemoveStrategy::Disease &&
            g.entity(g.other_endpoint(t, target)).etype != disease_type)
            continue;
        eligible.push_back(t);
    }
    if (strategy == RemoveStrategy::Disease && eligible.empty())
        throw PerturbError("target has no disease edges to remove");

    std::size_t k = fraction_count(fraction, eligible.size());
    std::unordered_set<TripleId> drop;
    for (std::size_t i : sample_without_replacement(eligible.size(), k, rng))
        drop.insert(eligible[i]);

    std::vector<Triple> keep;
    keep.reserve(g.num_triples() - drop.size());
    for (TripleId t = 0; t < g.num_triples(); ++t)
        if (!drop.count(t)) keep.push_back(g.triple(t));
    return g.with_triples(keep);
}

Graph add_edges(const Graph& g, EntityId target, AddStrategy strategy, std::size_t count,
                const std::vector<TypeId>& eligible_types, EntityId excluded_entity, Rng& rng) {
    (void)strategy;  // strategy is fully described by eligible_types
    std::vector<EntityId> partners;
    for (TypeId t : eligible_types)
        for (EntityId e : g.entities_of_type(t))
            if (e != target && e != excluded_entity) partners.push_back(e);
    if (count > 0 && partners.empty()) throw PerturbError("no eligible partner entities");

    const TypeId target_type = g.entity(target).etype;
    Graph out = g.with_triples(g.triples());
    std::size_t added = 0;
    std::size_t attempts = 0;
    const std::size_t max_attempts = 1000 + 200 * count;
    while (added < count) {
        if (++attempts > max_attempts)
            throw PerturbError("eligible pair pool exhausted after " + std::to_string(added) +
                               " of " + std::to_string(count) + " additions");
        EntityId partner = partners[uniform_index(rng, partners.size())];
        const TypeId partner_type = g.entity(partner).etype;
        // schema-valid relations for the pair, in either direction
        std::vector<Triple> options;
        for (RelationId r = 0; r < g.num_relations(); ++r) {
            const Relation& rel = g.relation(r);
            if (rel.head_type == target_type && rel.tail_type == partner_type)
                options.push_back(Triple{target, r, partner});
            if (rel.head_type == partner_type && rel.tail_type == target_type)
                options.push_back(Triple{partner, r, target});
        }
        if (options.empty()) continue;
        Triple cand = options[uniform_index(rng, options.size())];
        if (out.has_triple(cand.head, cand.rel, cand.tail)) continue;
        out.add_triple(cand);
        ++added;
    }
    return out;
}

Graph rewire_edges(const Graph& g, EntityId target, double fraction, Rng& rng) {
    const auto& incident = g.incident(target);
    std::size_t k = fraction_count(fraction, incident.size());

    std::unordered_set<EntityId> forbidden;  // existing neighbours + used replacements + target
    forbidden.insert(target);
    for (TripleId t : incident) forbidden.insert(g.other_endpoint(t, target));

    std::unordered_set<TripleId> selected;
    for (std::size_t i : sample_without_replacement(incident.size(), k, rng))
        selected.insert(incident[i]);

    std::vector<Triple> result;
    result.reserve(g.num_triples());
    for (TripleId t = 0; t < g.num_triples(); ++t) {
        Triple tr = g.triple(t);
        if (!selected.count(t)) {
            result.push_back(tr);
            continue;
        }
        EntityId other = g.other_endpoint(t, target);
        std::vector<EntityId> pool;
        for (EntityId e : g.entities_of_type(g.entity(other).etype))
            if (!forbidden.count(e)) pool.push_back(e);
        if (pool.empty()) throw PerturbError("replacement pool exhausted while rewiring");
        EntityId repl = pool[uniform_index(rng, pool.size())];
        forbidden.insert(repl);
        if (tr.head == target)
            tr.tail = repl;
        else
            tr.head = repl;
        result.push_back(tr);
    }
    return g.with_triples(result);
}

double t_interval_half_width(const std::vector<double>& samples) {
    const std::size_t n = samples.size();
    if (n < 2) return 0;
    double mean = 0;
    for (double x : samples) mean += x;
    mean /= double(n);
    double ss = 0;
    for (double x : samples) ss += (x - mean) * (x - mean);
    double sd = std::sqrt(ss / double(n - 1));
    boost::math::students_t dist(double(n - 1));
    return boost::math::quantile(dist, 0.975) * sd / std::sqrt(double(n));
}

namespace {

Graph perturb_once(const Graph& train_graph, const PerturbPlan& plan, double value, Rng& rng) {
    switch (plan.strategy) {
        case PerturbStrategy::RemoveDisease:
            return remove_edges(train_graph, plan.target, RemoveStrategy::Disease, value,
                                plan.disease_type, rng);
        case PerturbStrategy::RemoveRandom:
            return remove_edges(train_graph, plan.target, RemoveStrategy::Random, value,
                                plan.disease_type, rng);
        case PerturbStrategy::AddDisease:
            return add_edges(train_graph, plan.target, AddStrategy::Disease,
                             std::size_t(std::nearbyint(value)), plan.addition_types,
                             plan.measurement.fixed_entity, rng);
        case PerturbStrategy::AddAntCompGene:
            return add_edges(train_graph, plan.target, AddStrategy::AntCompGene,
                             std::size_t(std::nearbyint(value)), plan.addition_types,
                             plan.measurement.fixed_entity, rng);
        case PerturbStrategy::Rewire:
            return rewire_edges(train_graph, plan.target, value, rng);
    }
    throw PerturbError("unreachable strategy");
}

}  // namespace

PerturbOutcome run_experiment(const Graph& g, const std::vector<TripleId>& train_triples,
                              const PerturbPlan& plan) {
    if (plan.grid.empty() || plan.grid.front() != 0)
        throw PerturbError("perturbation grid must start with the 0 baseline");
    if (!std::is_sorted(plan.grid.begin(), plan.grid.end()))
        throw PerturbError("perturbation grid must be sorted ascending");
    if (plan.repeats < 1) throw PerturbError("repeats must be >= 1");

    // Evaluation edges stay fixed: only the training graph is perturbed.
    std::vector<Triple> kept;
    kept.reserve(train_triples.size());
    for (TripleId t : train_triples) kept.push_back(g.triple(t));
    Graph train_graph = g.with_triples(kept);

    PerturbOutcome out;
    out.plan = plan;
    for (std::size_t pi = 0; pi < plan.grid.size(); ++pi) {
        GridPointOutcome point;
        point.grid_value = plan.grid[pi];
        for (std::size_t rep = 0; rep < plan.repeats; ++rep) {
            Rng rng = make_rng(derive_seed(plan.master_seed, pi + 1, rep));
            try {
                Graph perturbed = perturb_once(train_graph, plan, plan.grid[pi], rng);
                std::vector<TripleId> all(perturbed.num_triples());
                for (TripleId t = 0; t < perturbed.num_triples(); ++t) all[t] = t;
                TrainResult tr = train(perturbed, all, plan.model_kind, plan.train);
                RankedList list = complete(tr.model, perturbed, plan.measurement);
                point.repeat_ranks.push_back(rank_of(list, plan.target));
            } catch (const TrainError& e) {
                point.failures.push_back("repeat " + std::to_string(rep) + ": " + e.what());
            } catch (const PerturbError& e) {
                point.failures.push_back("repeat " + std::to_string(rep) + ": " + e.what());
            }
        }
        if (!point.repeat_ranks.empty()) {
            double sum = 0;
            for (double r : point.repeat_ranks) sum += r;
            point.mean_rank = sum / double(point.repeat_ranks.size());
            point.ci95_half_width = t_interval_half_width(point.repeat_ranks);
        }
        out.points.push_back(std::move(point));
    }
    if (!out.points.empty() && !out.points.front().repeat_ranks.empty())
        out.baseline_rank = out.points.front().mean_rank;
    return out;
}

}  // namespace kgaudit
