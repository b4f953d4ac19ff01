#include "kgaudit/train.hpp"

#include <algorithm>
#include <cmath>

namespace kgaudit {

CorruptMode corrupt_mode_from_string(const std::string& s) {
    if (s == "head") return CorruptMode::Head;
    if (s == "tail") return CorruptMode::Tail;
    if (s == "both") return CorruptMode::Both;
    throw TrainError("unknown corruption mode: " + s);
}

std::string to_string(CorruptMode m) {
    switch (m) {
        case CorruptMode::Head: return "head";
        case CorruptMode::Tail: return "tail";
        case CorruptMode::Both: return "both";
    }
    return "?";
}

namespace {

double log_sigmoid(double x) {
    // -log(1 + exp(-x)) computed without overflow
    if (x >= 0) return -std::log1p(std::exp(-x));
    return x - std::log1p(std::exp(x));
}

double sigmoid(double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

std::vector<double> softmax_weights(const std::vector<double>& scores, double alpha) {
    std::vector<double> w(scores.size());
    double mx = -HUGE_VAL;
    for (double s : scores) mx = std::max(mx, alpha * s);
    double z = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        w[i] = std::exp(alpha * scores[i] - mx);
        z += w[i];
    }
    for (double& x : w) x /= z;
    return w;
}

}  // namespace

double nssa_loss(double pos_score, const std::vector<double>& neg_scores, double margin,
                 double alpha) {
    if (neg_scores.empty()) throw TrainError("nssa_loss requires at least one negative");
    double loss = -log_sigmoid(margin + pos_score);
    std::vector<double> w = softmax_weights(neg_scores, alpha);
    for (std::size_t i = 0; i < neg_scores.size(); ++i)
        loss -= w[i] * log_sigmoid(-neg_scores[i] - margin);
    return loss;
}

NssaGrad nssa_loss_grad(double pos_score, const std::vector<double>& neg_scores, double margin,
                        double alpha) {
    if (neg_scores.empty()) throw TrainError("nssa_loss requires at least one negative");
    NssaGrad g;
    // d/dx of -log sig(x) is sig(x) - 1 = -sig(-x)
    g.d_pos = -sigmoid(-(margin + pos_score));
    std::vector<double> w = softmax_weights(neg_scores, alpha);  // detached
    g.d_neg.resize(neg_scores.size());
    for (std::size_t i = 0; i < neg_scores.size(); ++i)
        g.d_neg[i] = w[i] * sigmoid(neg_scores[i] + margin);
    return g;
}

std::vector<Triple> corrupt(const Triple& t, CorruptMode mode, std::uint32_t k,
                            std::size_t num_entities, Rng& rng) {
    if (k == 0) throw TrainError("corrupt requires k >= 1");
    if (num_entities < 2) throw TrainError("corrupt requires a graph with at least 2 entities");
    std::vector<Triple> out;
    out.reserve(k);
    for (std::uint32_t i = 0; i < k; ++i) {
        bool corrupt_head = mode == CorruptMode::Head ||
                            (mode == CorruptMode::Both && (rng() & 1u) == 0);
        EntityId original = corrupt_head ? t.head : t.tail;
        // uniform over all entities except the original on the corrupted side
        EntityId repl = EntityId(uniform_index(rng, num_entities - 1));
        if (repl >= original) ++repl;
        Triple neg = t;
        (corrupt_head ? neg.head : neg.tail) = repl;
        out.push_back(neg);
    }
    return out;
}

double grad(const Model& m, const Triple& pos, const std::vector<Triple>& negs, double margin,
            double alpha, SparseGrad& out) {
    double pos_score = score(m, pos.head, pos.rel, pos.tail);
    std::vector<double> neg_scores(negs.size());
    for (std::size_t i = 0; i < negs.size(); ++i)
        neg_scores[i] = score(m, negs[i].head, negs[i].rel, negs[i].tail);

    double loss = nssa_loss(pos_score, neg_scores, margin, alpha);
    NssaGrad lg = nssa_loss_grad(pos_score, neg_scores, margin, alpha);
    score_grad(m, pos.head, pos.rel, pos.tail, lg.d_pos, out);
    for (std::size_t i = 0; i < negs.size(); ++i)
        score_grad(m, negs[i].head, negs[i].rel, negs[i].tail, lg.d_neg[i], out);
    return loss;
}

OptimizerState OptimizerState::for_model(const Model& m) {
    OptimizerState s;
    s.entity_acc.assign(m.entity_emb.size(), 0.0);
    s.relation_acc.assign(m.relation_emb.size(), 0.0);
    s.normal_acc.assign(m.relation_normal.size(), 0.0);
    return s;
}

void adagrad_step(Model& m, const SparseGrad& grad, OptimizerState& state, double lr) {
    for (const auto& [key, g] : grad.rows) {
        auto table = ParamTable(key >> 32);
        std::uint32_t row = std::uint32_t(key);
        float* params;
        double* acc;
        std::size_t dim;
        switch (table) {
            case ParamTable::EntityEmb:
                dim = m.entity_dim;
                params = m.entity_emb.data() + std::size_t(row) * dim;
                acc = state.entity_acc.data() + std::size_t(row) * dim;
                break;
            case ParamTable::RelationEmb:
                dim = m.relation_dim;
                params = m.relation_emb.data() + std::size_t(row) * dim;
                acc = state.relation_acc.data() + std::size_t(row) * dim;
                break;
            case ParamTable::RelationNormal:
                dim = m.entity_dim;
                params = m.relation_normal.data() + std::size_t(row) * dim;
                acc = state.normal_acc.data() + std::size_t(row) * dim;
                break;
            default:
                throw TrainError("unknown parameter table in gradient");
        }
        if (g.size() != dim) throw TrainError("gradient shape mismatch");
        for (std::size_t i = 0; i < dim; ++i) {
            acc[i] += g[i] * g[i];
            params[i] = float(params[i] - lr * g[i] / (std::sqrt(acc[i]) + state.epsilon));
        }
    }
}

TrainResult train(const Graph& g, const std::vector<TripleId>& train_triples, ModelKind kind,
                  const TrainConfig& cfg) {
    if (train_triples.empty()) throw TrainError("training set is empty");
    if (cfg.batch_size == 0) throw TrainError("batch size must be positive");

    TrainResult result;
    result.model = init_model(g, kind, cfg.dim, derive_seed(cfg.seed, 1), cfg.norm);
    Model& model = result.model;
    OptimizerState opt = OptimizerState::for_model(model);

    std::vector<Triple> positives;
    positives.reserve(train_triples.size());
    for (TripleId t : train_triples) positives.push_back(g.triple(t));

    std::vector<std::size_t> order(positives.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (std::uint32_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        Rng rng = make_rng(derive_seed(cfg.seed, 2, epoch));
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[uniform_index(rng, i)]);

        double epoch_loss = 0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            std::size_t end = std::min(order.size(), start + cfg.batch_size);
            SparseGrad batch_grad;
            for (std::size_t i = start; i < end; ++i) {
                const Triple& pos = positives[order[i]];
                std::vector<Triple> negs =
                    corrupt(pos, cfg.corrupt_mode, cfg.num_negatives, g.num_entities(), rng);
                epoch_loss += grad(model, pos, negs, cfg.margin, cfg.adversarial_temperature,
                                   batch_grad);
            }
            adagrad_step(model, batch_grad, opt, cfg.learning_rate);
            model.project_constraints();
        }
        epoch_loss /= double(positives.size());
        if (!std::isfinite(epoch_loss))
            throw TrainError("training diverged: non-finite loss at epoch " +
                             std::to_string(epoch));
        result.epoch_loss.push_back(epoch_loss);
    }
    return result;
}

}  // namespace kgaudit
