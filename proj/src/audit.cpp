#include "kgaudit/audit.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace kgaudit {

std::string to_string(SplitLabel s) {
    switch (s) {
        case SplitLabel::Train: return "train";
        case SplitLabel::Test: return "test";
        case SplitLabel::Novel: return "novel";
    }
    return "?";
}

std::string to_string(DegreeTransform t) {
    return t == DegreeTransform::Identity ? "identity" : "log10";
}

namespace {

double query_score(const Model& m, const Query& q, EntityId cand) {
    return q.direction == Direction::CompleteTail ? score(m, q.fixed_entity, q.relation, cand)
                                                  : score(m, cand, q.relation, q.fixed_entity);
}

// Degree of every entity counted over the train split only.
std::vector<std::size_t> train_degrees(const Graph& g, const std::vector<TripleId>& train) {
    std::vector<std::size_t> deg(g.num_entities(), 0);
    for (TripleId id : train) {
        const Triple& t = g.triple(id);
        ++deg[t.head];
        if (t.tail != t.head) ++deg[t.tail];
    }
    return deg;
}

std::unordered_set<EntityId> query_completions(const Graph& g, const std::vector<TripleId>& ids,
                                               const Query& q) {
    std::unordered_set<EntityId> out;
    for (TripleId id : ids) {
        const Triple& t = g.triple(id);
        if (t.rel != q.relation) continue;
        if (q.direction == Direction::CompleteTail && t.head == q.fixed_entity) out.insert(t.tail);
        if (q.direction == Direction::CompleteHead && t.tail == q.fixed_entity) out.insert(t.head);
    }
    return out;
}

double median_of(std::vector<double> v) {
    if (v.empty()) return 0;
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

GroupStats stats_of(const std::vector<double>& v) {
    GroupStats s;
    s.n = v.size();
    if (v.empty()) return s;
    s.min = *std::min_element(v.begin(), v.end());
    s.max = *std::max_element(v.begin(), v.end());
    s.median = median_of(v);
    return s;
}

}  // namespace

std::vector<ScoreDegreeRecord> score_degree_table(const Model& m, const Graph& g,
                                                  const DatasetSplit& split, const Query& q) {
    std::vector<std::size_t> deg = train_degrees(g, split.train);
    std::unordered_set<EntityId> in_train = query_completions(g, split.train, q);
    std::unordered_set<EntityId> in_test = query_completions(g, split.test, q);

    std::vector<ScoreDegreeRecord> out;
    for (EntityId cand : candidate_scope(g, q)) {
        ScoreDegreeRecord rec;
        rec.entity = cand;
        rec.etype = g.entity(cand).etype;
        rec.degree = deg[cand];
        rec.score = query_score(m, q, cand);
        rec.label = in_train.count(cand)  ? SplitLabel::Train
                    : in_test.count(cand) ? SplitLabel::Test
                                          : SplitLabel::Novel;
        out.push_back(rec);
    }
    return out;
}

RegressionReport regress_xy(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw AuditError("regression inputs differ in length");
    const std::size_t n = x.size();
    if (n < 2) throw AuditError("regression requires at least 2 points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0) throw AuditError("regressor has zero variance");
    RegressionReport rep;
    rep.n = n;
    rep.slope = sxy / sxx;
    rep.intercept = my - rep.slope * mx;
    // constant response: zero explained variance by convention
    rep.r_squared = syy == 0 ? 0.0 : (sxy * sxy) / (sxx * syy);
    return rep;
}

RegressionReport regress(const std::vector<ScoreDegreeRecord>& table, DegreeTransform transform) {
    std::vector<double> x, y;
    std::size_t dropped = 0;
    for (const ScoreDegreeRecord& r : table) {
        if (transform == DegreeTransform::Log10) {
            if (r.degree == 0) {
                ++dropped;
                continue;
            }
            x.push_back(std::log10(double(r.degree)));
        } else {
            x.push_back(double(r.degree));
        }
        y.push_back(r.score);
    }
    RegressionReport rep = regress_xy(x, y);
    rep.transform = transform;
    rep.dropped_zero_degree = dropped;
    return rep;
}

std::vector<QueryRegression> r2_across_queries(const Model& m, const Graph& g,
                                               const DatasetSplit& split,
                                               const std::vector<Query>& queries,
                                               DegreeTransform transform,
                                               const std::vector<std::string>& family_tags) {
    if (queries.empty()) throw AuditError("r2_across_queries requires at least one query");
    if (!family_tags.empty() && family_tags.size() != queries.size())
        throw AuditError("family tag list does not match query list");
    std::vector<QueryRegression> out;
    for (std::size_t i = 0; i < queries.size(); ++i) {
        QueryRegression qr;
        qr.query = queries[i];
        qr.query_entity_degree = g.degree(queries[i].fixed_entity);
        if (!family_tags.empty()) qr.family_tag = family_tags[i];
        try {
            auto table = score_degree_table(m, g, split, queries[i]);
            qr.report = regress(table, transform);
        } catch (const std::exception& e) {
            qr.error = e.what();
        }
        out.push_back(std::move(qr));
    }
    return out;
}

TypeSeparation type_separation(const std::vector<ScoreDegreeRecord>& table, TypeId valid_type) {
    std::map<TypeId, std::vector<double>> by_type;
    for (const ScoreDegreeRecord& r : table) by_type[r.etype].push_back(r.score);
    if (by_type.size() < 2) throw AuditError("type separation requires at least 2 entity types");
    if (!by_type.count(valid_type)) throw AuditError("no candidates of the schema-valid type");

    TypeSeparation out;
    out.valid_type = valid_type;
    double valid_min = 0, others_max = -HUGE_VAL;
    for (auto& [etype, scores] : by_type) {
        GroupStats s = stats_of(scores);
        out.per_type.push_back(TypeScoreSummary{etype, s.min, s.median, s.max, s.n});
        if (etype == valid_type)
            valid_min = s.min;
        else
            others_max = std::max(others_max, s.max);
    }
    out.margin = valid_min - others_max;
    out.separated = out.margin > 0;
    for (const ScoreDegreeRecord& r : table)
        if (r.etype != valid_type && r.score >= valid_min) ++out.overlap;
    return out;
}

DiseaseLinkReport disease_link_analysis(const Model& m, const Graph& g, const Query& q,
                                        TypeId disease_type) {
    DiseaseLinkReport out;
    std::vector<double> linked_scores, unlinked_scores;
    std::vector<double> counts, count_scores, ratios, ratio_scores;
    for (EntityId cand : candidate_scope(g, q)) {
        std::size_t disease_edges = 0;
        for (TripleId t : g.incident(cand))
            if (g.entity(g.other_endpoint(t, cand)).etype == disease_type) ++disease_edges;
        double s = query_score(m, q, cand);
        (disease_edges > 0 ? linked_scores : unlinked_scores).push_back(s);
        counts.push_back(double(disease_edges));
        count_scores.push_back(s);
        std::size_t deg = g.degree(cand);
        if (deg > 0) {
            ratios.push_back(double(disease_edges) / double(deg));
            ratio_scores.push_back(s);
        }
    }
    out.linked = stats_of(linked_scores);
    out.unlinked = stats_of(unlinked_scores);
    out.linked_empty = linked_scores.empty();
    out.unlinked_empty = unlinked_scores.empty();
    out.by_count = regress_xy(counts, count_scores);
    out.by_count.transform = DegreeTransform::Identity;
    out.by_ratio = regress_xy(ratios, ratio_scores);
    out.by_ratio.transform = DegreeTransform::Identity;
    return out;
}

TrivialRelationReport trivial_relation_analysis(const Model& m, const Graph& g,
                                                const DatasetSplit& split, const Query& q,
                                                DegreeTransform transform) {
    TrivialRelationReport out;
    out.table = score_degree_table(m, g, split, q);

    // candidates sharing a non-query-relation edge with the query entity
    std::unordered_set<EntityId> other_edge;
    for (TripleId t : g.incident(q.fixed_entity))
        if (g.triple(t).rel != q.relation)
            other_edge.insert(g.other_endpoint(t, q.fixed_entity));

    std::vector<ScoreDegreeRecord> with, without;
    out.has_other_edge.reserve(out.table.size());
    for (const ScoreDegreeRecord& r : out.table) {
        bool has = other_edge.count(r.entity) > 0;
        out.has_other_edge.push_back(has);
        (has ? with : without).push_back(r);
    }
    if (with.empty()) {
        out.applicable = false;  // query entity has no alternate-relation edges in scope
        return out;
    }
    out.applicable = true;
    out.other_edge_n = with.size();
    out.no_other_edge_n = without.size();
    auto scores_of = [](const std::vector<ScoreDegreeRecord>& v) {
        std::vector<double> s;
        for (const auto& r : v) s.push_back(r.score);
        return s;
    };
    out.other_edge_median = median_of(scores_of(with));
    out.no_other_edge_median = median_of(scores_of(without));
    // degenerate groups (too few points, constant degree) keep a default report
    try {
        if (with.size() >= 2) out.other_edge = regress(with, transform);
    } catch (const AuditError&) {
    }
    try {
        if (without.size() >= 2) out.no_other_edge = regress(without, transform);
    } catch (const AuditError&) {
    }
    return out;
}

}  // namespace kgaudit
