#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "kgaudit/graph.hpp"
#include "kgaudit/model.hpp"

namespace kgaudit {

class RankError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Direction { CompleteTail, CompleteHead };
enum class CandidateScope { AllEntities, SchemaType };
enum class FilterPolicy { Raw, Filtered };
enum class TiePolicy { Optimistic, Realistic, Pessimistic };

std::string to_string(Direction d);
std::string to_string(FilterPolicy p);
FilterPolicy filter_policy_from_string(const std::string& s);

struct Query {
    EntityId fixed_entity = 0;
    RelationId relation = 0;
    Direction direction = Direction::CompleteTail;
    CandidateScope scope = CandidateScope::SchemaType;
};

struct ScoredCandidate {
    EntityId entity;
    double score;
};

// Candidates for a query, sorted by score descending, ties broken by entity
// id ascending.
struct RankedList {
    Query query;
    std::vector<ScoredCandidate> entries;
};

struct RankMetrics {
    double mean_rank = 0;
    double mrr = 0;
    double hits1 = 0;
    double hits10 = 0;
    std::size_t count = 0;
};

// Candidate entities for a query under its scope.
std::vector<EntityId> candidate_scope(const Graph& g, const Query& q);

// Score every in-scope candidate and sort. The model's entity rows must be
// aligned with the graph's entity indices.
RankedList complete(const Model& m, const Graph& g, const Query& q);

// 1-based rank of e in the list. Realistic ties take the mean of the best and
// worst rank among equal scores.
double rank_of(const RankedList& list, EntityId e, TiePolicy tie = TiePolicy::Realistic);

// Known-true completions per (entity, relation, direction), for filtered
// ranking. Built from any set of triples (typically train+valid+test).
class TrueTripleIndex {
public:
    void add(const Graph& g, const std::vector<TripleId>& ids);
    void add(const Triple& t);
    const std::vector<EntityId>* completions(const Query& q) const;

private:
    std::unordered_map<std::uint64_t, std::vector<EntityId>> map_;
    static std::uint64_t key(EntityId e, RelationId r, Direction d);
};

// Rank of the true completion of each test triple, aggregated into
// MR / MRR / Hits@{1,10}. Filtered ranking removes the other known-true
// completions from the candidate list before ranking.
RankMetrics evaluate(const Model& m, const Graph& g, const std::vector<Triple>& test,
                     FilterPolicy policy, const std::vector<Direction>& directions,
                     const TrueTripleIndex& known, CandidateScope scope = CandidateScope::SchemaType,
                     TiePolicy tie = TiePolicy::Realistic);

struct DegreeStratum {
    std::string name;
    std::size_t min_degree = 0;                  // inclusive
    std::size_t max_degree = SIZE_MAX;           // inclusive
};

struct StratumMetrics {
    std::string name;
    RankMetrics metrics;
    bool empty = false;
};

// evaluate() per degree stratum; test triples are assigned by the degree of
// their completion entity in degree_source (typically the training graph).
std::vector<StratumMetrics> stratified_evaluate(const Model& m, const Graph& g,
                                                const std::vector<Triple>& test,
                                                const Graph& degree_source,
                                                const std::vector<DegreeStratum>& strata,
                                                FilterPolicy policy,
                                                const std::vector<Direction>& directions,
                                                const TrueTripleIndex& known,
                                                CandidateScope scope = CandidateScope::SchemaType);

}  // namespace kgaudit
