#include "kgaudit/rank.hpp"

#include <algorithm>
#include <unordered_set>

namespace kgaudit {

std::string to_string(Direction d) {
    return d == Direction::CompleteTail ? "tail" : "head";
}

std::string to_string(FilterPolicy p) { return p == FilterPolicy::Raw ? "raw" : "filtered"; }

FilterPolicy filter_policy_from_string(const std::string& s) {
    if (s == "raw") return FilterPolicy::Raw;
    if (s == "filtered") return FilterPolicy::Filtered;
    throw RankError("unknown filter policy: " + s);
}

std::vector<EntityId> candidate_scope(const Graph& g, const Query& q) {
    if (q.fixed_entity >= g.num_entities()) throw RankError("query entity out of range");
    if (q.relation >= g.num_relations()) throw RankError("query relation out of range");
    std::vector<EntityId> out;
    if (q.scope == CandidateScope::AllEntities) {
        out.resize(g.num_entities());
        for (EntityId e = 0; e < g.num_entities(); ++e) out[e] = e;
    } else {
        const Relation& rel = g.relation(q.relation);
        TypeId want = q.direction == Direction::CompleteTail ? rel.tail_type : rel.head_type;
        out = g.entities_of_type(want);
    }
    if (out.empty()) throw RankError("query has an empty candidate scope");
    return out;
}

namespace {

double score_candidate(const Model& m, const Query& q, EntityId cand) {
    return q.direction == Direction::CompleteTail
               ? score(m, q.fixed_entity, q.relation, cand)
               : score(m, cand, q.relation, q.fixed_entity);
}

}  // namespace

RankedList complete(const Model& m, const Graph& g, const Query& q) {
    if (m.num_entities() != g.num_entities())
        throw RankError("model entity table does not match graph");
    RankedList list;
    list.query = q;
    for (EntityId cand : candidate_scope(g, q))
        list.entries.push_back({cand, score_candidate(m, q, cand)});
    std::sort(list.entries.begin(), list.entries.end(),
              [](const ScoredCandidate& a, const ScoredCandidate& b) {
                  if (a.score != b.score) return a.score > b.score;
                  return a.entity < b.entity;
              });
    return list;
}

double rank_of(const RankedList& list, EntityId e, TiePolicy tie) {
    std::size_t pos = list.entries.size();
    for (std::size_t i = 0; i < list.entries.size(); ++i) {
        if (list.entries[i].entity == e) {
            pos = i;
            break;
        }
    }
    if (pos == list.entries.size()) throw RankError("entity not in candidate scope");
    double s = list.entries[pos].score;
    std::size_t first = pos, last = pos;
    while (first > 0 && list.entries[first - 1].score == s) --first;
    while (last + 1 < list.entries.size() && list.entries[last + 1].score == s) ++last;
    switch (tie) {
        case TiePolicy::Optimistic: return double(first + 1);
        case TiePolicy::Pessimistic: return double(last + 1);
        case TiePolicy::Realistic: return (double(first + 1) + double(last + 1)) / 2.0;
    }
    throw RankError("unreachable tie policy");
}

std::uint64_t TrueTripleIndex::key(EntityId e, RelationId r, Direction d) {
    return (std::uint64_t(e) << 32) | (std::uint64_t(r) << 1) | std::uint64_t(d == Direction::CompleteHead);
}

void TrueTripleIndex::add(const Graph& g, const std::vector<TripleId>& ids) {
    for (TripleId id : ids) add(g.triple(id));
}

void TrueTripleIndex::add(const Triple& t) {
    map_[key(t.head, t.rel, Direction::CompleteTail)].push_back(t.tail);
    map_[key(t.tail, t.rel, Direction::CompleteHead)].push_back(t.head);
}

const std::vector<EntityId>* TrueTripleIndex::completions(const Query& q) const {
    auto it = map_.find(key(q.fixed_entity, q.relation, q.direction));
    return it == map_.end() ? nullptr : &it->second;
}

namespace {

// Rank of `target` among candidates by direct counting, skipping filtered-out
// entities. Realistic tie handling: 1 + #better + #ties/2.
double rank_by_counting(const Model& m, const Graph& g, const Query& q, EntityId target,
                        const std::unordered_set<EntityId>& removed, TiePolicy tie) {
    double target_score = score_candidate(m, q, target);
    std::size_t better = 0, ties = 0;
    for (EntityId cand : candidate_scope(g, q)) {
        if (cand == target || removed.count(cand)) continue;
        double s = score_candidate(m, q, cand);
        if (s > target_score)
            ++better;
        else if (s == target_score)
            ++ties;
    }
    switch (tie) {
        case TiePolicy::Optimistic: return double(better + 1);
        case TiePolicy::Pessimistic: return double(better + ties + 1);
        case TiePolicy::Realistic: return double(better + 1) + double(ties) / 2.0;
    }
    throw RankError("unreachable tie policy");
}

}  // namespace

RankMetrics evaluate(const Model& m, const Graph& g, const std::vector<Triple>& test,
                     FilterPolicy policy, const std::vector<Direction>& directions,
                     const TrueTripleIndex& known, CandidateScope scope, TiePolicy tie) {
    if (test.empty()) throw RankError("evaluate requires a nonempty test set");
    if (directions.empty()) throw RankError("evaluate requires at least one direction");
    RankMetrics out;
    double sum_rank = 0, sum_rr = 0;
    std::size_t h1 = 0, h10 = 0, n = 0;
    for (const Triple& t : test) {
        for (Direction d : directions) {
            Query q{d == Direction::CompleteTail ? t.head : t.tail, t.rel, d, scope};
            EntityId target = d == Direction::CompleteTail ? t.tail : t.head;
            std::unordered_set<EntityId> removed;
            if (policy == FilterPolicy::Filtered) {
                if (const auto* comps = known.completions(q))
                    removed.insert(comps->begin(), comps->end());
                removed.erase(target);
            }
            double rank = rank_by_counting(m, g, q, target, removed, tie);
            sum_rank += rank;
            sum_rr += 1.0 / rank;
            if (rank <= 1.0) ++h1;
            if (rank <= 10.0) ++h10;
            ++n;
        }
    }
    out.count = n;
    out.mean_rank = sum_rank / double(n);
    out.mrr = sum_rr / double(n);
    out.hits1 = double(h1) / double(n);
    out.hits10 = double(h10) / double(n);
    return out;
}

std::vector<StratumMetrics> stratified_evaluate(const Model& m, const Graph& g,
                                                const std::vector<Triple>& test,
                                                const Graph& degree_source,
                                                const std::vector<DegreeStratum>& strata,
                                                FilterPolicy policy,
                                                const std::vector<Direction>& directions,
                                                const TrueTripleIndex& known,
                                                CandidateScope scope) {
    for (std::size_t i = 0; i < strata.size(); ++i)
        for (std::size_t j = i + 1; j < strata.size(); ++j)
            if (strata[i].min_degree <= strata[j].max_degree &&
                strata[j].min_degree <= strata[i].max_degree)
                throw RankError("degree strata overlap: " + strata[i].name + " / " +
                                strata[j].name);

    std::vector<StratumMetrics> out;
    for (const DegreeStratum& s : strata) {
        std::vector<Triple> members;
        for (const Triple& t : test) {
            for (Direction d : directions) {
                EntityId completion = d == Direction::CompleteTail ? t.tail : t.head;
                std::size_t deg = degree_source.degree(completion);
                if (deg >= s.min_degree && deg <= s.max_degree) {
                    members.push_back(t);
                    break;
                }
            }
        }
        StratumMetrics sm;
        sm.name = s.name;
        if (members.empty()) {
            sm.empty = true;
        } else {
            sm.metrics = evaluate(m, g, members, policy, directions, known, scope);
        }
        out.push_back(std::move(sm));
    }
    return out;
}

}  // namespace kgaudit
