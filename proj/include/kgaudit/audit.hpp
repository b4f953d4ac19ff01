#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kgaudit/graph.hpp"
#include "kgaudit/model.hpp"
#include "kgaudit/rank.hpp"

namespace kgaudit {

class AuditError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class SplitLabel { Train, Test, Novel };
std::string to_string(SplitLabel s);

// One row per candidate of a completion query.
struct ScoreDegreeRecord {
    EntityId entity;
    TypeId etype;
    std::size_t degree;  // in the training graph
    double score;
    SplitLabel label;
};

enum class DegreeTransform { Identity, Log10 };
std::string to_string(DegreeTransform t);

struct RegressionReport {
    double slope = 0;
    double intercept = 0;
    double r_squared = 0;
    std::size_t n = 0;
    DegreeTransform transform = DegreeTransform::Log10;
    std::size_t dropped_zero_degree = 0;  // rows removed under the log transform
};

// One record per in-scope candidate; degrees and split labels are taken from
// the given training graph and split.
std::vector<ScoreDegreeRecord> score_degree_table(const Model& m, const Graph& g,
                                                  const DatasetSplit& split, const Query& q);

// Ordinary least squares of score on (transformed) degree, closed form.
// Constant scores give R^2 = 0; zero variance in the regressor is an error.
RegressionReport regress(const std::vector<ScoreDegreeRecord>& table, DegreeTransform transform);

// Plain (x, y) OLS used by regress(); exposed for the disease-link analysis.
RegressionReport regress_xy(const std::vector<double>& x, const std::vector<double>& y);

struct QueryRegression {
    Query query;
    std::optional<RegressionReport> report;  // empty on per-query failure
    std::string error;
    std::size_t query_entity_degree = 0;
    std::string family_tag;
};

// One score/degree regression per query; failures are recorded, not fatal.
// family_tags, when nonempty, must parallel queries.
std::vector<QueryRegression> r2_across_queries(const Model& m, const Graph& g,
                                               const DatasetSplit& split,
                                               const std::vector<Query>& queries,
                                               DegreeTransform transform = DegreeTransform::Log10,
                                               const std::vector<std::string>& family_tags = {});

struct TypeScoreSummary {
    TypeId etype;
    double min = 0, median = 0, max = 0;
    std::size_t n = 0;
};

struct TypeSeparation {
    std::vector<TypeScoreSummary> per_type;
    TypeId valid_type;
    bool separated = false;    // min score of valid type > max score of every other
    double margin = 0;         // min(valid) - max(others); negative when overlapping
    std::size_t overlap = 0;   // other-type candidates scoring >= min(valid)
};

// Score summaries per entity type over an all-entity score/degree table.
// valid_type is the schema-valid completion type of the query.
TypeSeparation type_separation(const std::vector<ScoreDegreeRecord>& table, TypeId valid_type);

struct GroupStats {
    std::size_t n = 0;
    double min = 0, median = 0, max = 0;
};

struct DiseaseLinkReport {
    GroupStats linked;        // candidates with >= 1 edge to a disease-type entity
    GroupStats unlinked;
    RegressionReport by_count;  // score ~ number of disease connections
    RegressionReport by_ratio;  // score ~ disease connections / degree
    bool linked_empty = false;
    bool unlinked_empty = false;
};

// Score distributions for candidates with vs without disease links, plus
// regressions of score on disease-connection count and ratio. disease_type
// names the entity type whose edges define "linked".
DiseaseLinkReport disease_link_analysis(const Model& m, const Graph& g, const Query& q,
                                        TypeId disease_type);

struct TrivialRelationReport {
    bool applicable = false;  // false when the query entity has no alternate-relation edges
    RegressionReport other_edge;   // candidates with a non-query-relation edge to the entity
    RegressionReport no_other_edge;
    double other_edge_median = 0;
    double no_other_edge_median = 0;
    std::size_t other_edge_n = 0;
    std::size_t no_other_edge_n = 0;
    // group tag per table row, parallel to the returned table
    std::vector<ScoreDegreeRecord> table;
    std::vector<bool> has_other_edge;
};

// Partition candidates by whether they share any non-query-relation edge with
// the query entity, with a score/degree regression per group.
TrivialRelationReport trivial_relation_analysis(const Model& m, const Graph& g,
                                                const DatasetSplit& split, const Query& q,
                                                DegreeTransform transform = DegreeTransform::Log10);

}  // namespace kgaudit
