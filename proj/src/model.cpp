#include "kgaudit/model.hpp"

#include <cmath>
#include <numbers>

namespace kgaudit {

std::string to_string(ModelKind k) {
    switch (k) {
        case ModelKind::TransE: return "transe";
        case ModelKind::TransH: return "transh";
        case ModelKind::DistMult: return "distmult";
        case ModelKind::ComplEx: return "complex";
        case ModelKind::RotatE: return "rotate";
    }
    return "?";
}

std::string to_string(Norm n) { return n == Norm::L1 ? "l1" : "l2"; }

ModelKind model_kind_from_string(const std::string& s) {
    if (s == "transe") return ModelKind::TransE;
    if (s == "transh") return ModelKind::TransH;
    if (s == "distmult") return ModelKind::DistMult;
    if (s == "complex") return ModelKind::ComplEx;
    if (s == "rotate") return ModelKind::RotatE;
    throw ModelError("unknown model kind: " + s);
}

Norm norm_from_string(const std::string& s) {
    if (s == "l1") return Norm::L1;
    if (s == "l2") return Norm::L2;
    throw ModelError("unknown norm: " + s);
}

void Model::check_ids(EntityId h, RelationId r, EntityId t) const {
    if (h >= num_entities() || t >= num_entities()) throw ModelError("entity id out of range");
    if (r >= num_relations()) throw ModelError("relation id out of range");
}

void Model::project_constraints() {
    if (kind == ModelKind::RotatE) {
        for (std::size_t i = 0; i + 1 < relation_emb.size(); i += 2) {
            double re = relation_emb[i], im = relation_emb[i + 1];
            double mod = std::sqrt(re * re + im * im);
            if (mod > 0) {
                relation_emb[i] = float(re / mod);
                relation_emb[i + 1] = float(im / mod);
            } else {
                relation_emb[i] = 1.0f;
                relation_emb[i + 1] = 0.0f;
            }
        }
    } else if (kind == ModelKind::TransH) {
        for (std::size_t r = 0; r < num_relations(); ++r) {
            auto w = normal_row(RelationId(r));
            double nrm = 0;
            for (float x : w) nrm += double(x) * x;
            nrm = std::sqrt(nrm);
            if (nrm > 0)
                for (float& x : w) x = float(x / nrm);
            else
                w[0] = 1.0f;
        }
    }
}

Model init_model(const Graph& g, ModelKind kind, std::uint32_t dim, std::uint64_t seed,
                 Norm norm) {
    if (dim == 0) throw ModelError("embedding dimension must be positive");
    Model m;
    m.kind = kind;
    m.norm = norm;
    const bool cplx = kind == ModelKind::ComplEx || kind == ModelKind::RotatE;
    m.entity_dim = cplx ? 2 * dim : dim;
    m.relation_dim = m.entity_dim;

    m.entity_ids.reserve(g.num_entities());
    for (const Entity& e : g.entities()) m.entity_ids.push_back(e.id);
    m.relation_ids.reserve(g.num_relations());
    for (const Relation& r : g.relations()) m.relation_ids.push_back(r.id);

    const double bound = 6.0 / std::sqrt(double(dim));
    Rng rng = make_rng(derive_seed(seed, 0x1417));

    m.entity_emb.resize(m.num_entities() * std::size_t(m.entity_dim));
    for (float& x : m.entity_emb) x = float(uniform_real(rng, -bound, bound));

    m.relation_emb.resize(m.num_relations() * std::size_t(m.relation_dim));
    if (kind == ModelKind::RotatE) {
        for (std::size_t i = 0; i + 1 < m.relation_emb.size(); i += 2) {
            double phase = uniform_real(rng, -std::numbers::pi, std::numbers::pi);
            m.relation_emb[i] = float(std::cos(phase));
            m.relation_emb[i + 1] = float(std::sin(phase));
        }
    } else {
        for (float& x : m.relation_emb) x = float(uniform_real(rng, -bound, bound));
    }

    if (kind == ModelKind::TransH) {
        m.relation_normal.resize(m.num_relations() * std::size_t(m.entity_dim));
        for (float& x : m.relation_normal) x = float(uniform_real(rng, -1.0, 1.0));
    }
    m.project_constraints();
    return m;
}

namespace {

double norm_of(std::span<const double> d, Norm norm) {
    double acc = 0;
    if (norm == Norm::L1) {
        for (double x : d) acc += std::abs(x);
    } else {
        for (double x : d) acc += x * x;
        acc = std::sqrt(acc);
    }
    return acc;
}

// d(-||d||)/d(d_i); the L1 subgradient at 0 and the L2 gradient at the origin
// are both taken as 0.
void norm_grad(std::span<const double> d, Norm norm, std::vector<double>& out) {
    out.assign(d.size(), 0.0);
    if (norm == Norm::L1) {
        for (std::size_t i = 0; i < d.size(); ++i)
            out[i] = d[i] > 0 ? -1.0 : (d[i] < 0 ? 1.0 : 0.0);
    } else {
        double nrm = norm_of(d, Norm::L2);
        if (nrm > 0)
            for (std::size_t i = 0; i < d.size(); ++i) out[i] = -d[i] / nrm;
    }
}

void add_scaled(std::vector<double>& dst, std::span<const double> src, double coeff) {
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] += coeff * src[i];
}

}  // namespace

double score(const Model& m, EntityId h, RelationId r, EntityId t) {
    m.check_ids(h, r, t);
    auto hv = m.entity_row(h);
    auto rv = m.relation_row(r);
    auto tv = m.entity_row(t);
    const std::size_t dim = m.entity_dim;

    switch (m.kind) {
        case ModelKind::TransE: {
            std::vector<double> d(dim);
            for (std::size_t i = 0; i < dim; ++i) d[i] = double(hv[i]) + rv[i] - tv[i];
            return -norm_of(d, m.norm);
        }
        case ModelKind::TransH: {
            auto w = m.normal_row(r);
            double wh = 0, wt = 0;
            for (std::size_t i = 0; i < dim; ++i) {
                wh += double(w[i]) * hv[i];
                wt += double(w[i]) * tv[i];
            }
            std::vector<double> d(dim);
            for (std::size_t i = 0; i < dim; ++i)
                d[i] = (double(hv[i]) - wh * w[i]) + rv[i] - (double(tv[i]) - wt * w[i]);
            return -norm_of(d, m.norm);
        }
        case ModelKind::DistMult: {
            double acc = 0;
            for (std::size_t i = 0; i < dim; ++i) acc += double(hv[i]) * rv[i] * tv[i];
            return acc;
        }
        case ModelKind::ComplEx: {
            // Re(sum h_i r_i conj(t_i)) over (re, im) pairs.
            double acc = 0;
            for (std::size_t i = 0; i + 1 < dim; i += 2) {
                double a = hv[i], b = hv[i + 1];
                double c = rv[i], e = rv[i + 1];
                double tr = tv[i], ti = tv[i + 1];
                acc += (a * c - b * e) * tr + (a * e + b * c) * ti;
            }
            return acc;
        }
        case ModelKind::RotatE: {
            // -sum_i |h_i * r_i - t_i| over complex coordinates.
            double acc = 0;
            for (std::size_t i = 0; i + 1 < dim; i += 2) {
                double a = hv[i], b = hv[i + 1];
                double c = rv[i], e = rv[i + 1];
                double pre = a * c - b * e - tv[i];
                double pim = a * e + b * c - tv[i + 1];
                acc += std::sqrt(pre * pre + pim * pim);
            }
            return -acc;
        }
    }
    throw ModelError("unreachable model kind");
}

void score_grad(const Model& m, EntityId h, RelationId r, EntityId t, double coeff,
                SparseGrad& grad) {
    m.check_ids(h, r, t);
    auto hv = m.entity_row(h);
    auto rv = m.relation_row(r);
    auto tv = m.entity_row(t);
    const std::size_t dim = m.entity_dim;

    auto& gh = grad.at(ParamTable::EntityEmb, h, dim);
    auto& gr = grad.at(ParamTable::RelationEmb, r, m.relation_dim);
    auto& gt = grad.at(ParamTable::EntityEmb, t, dim);

    switch (m.kind) {
        case ModelKind::TransE: {
            std::vector<double> d(dim), g(dim);
            for (std::size_t i = 0; i < dim; ++i) d[i] = double(hv[i]) + rv[i] - tv[i];
            norm_grad(d, m.norm, g);
            add_scaled(gh, g, coeff);
            add_scaled(gr, g, coeff);
            add_scaled(gt, g, -coeff);
            return;
        }
        case ModelKind::TransH: {
            auto w = m.normal_row(r);
            auto& gw = grad.at(ParamTable::RelationNormal, r, dim);
            double wh = 0, wt = 0;
            for (std::size_t i = 0; i < dim; ++i) {
                wh += double(w[i]) * hv[i];
                wt += double(w[i]) * tv[i];
            }
            std::vector<double> d(dim), g(dim);
            for (std::size_t i = 0; i < dim; ++i)
                d[i] = (double(hv[i]) - wh * w[i]) + rv[i] - (double(tv[i]) - wt * w[i]);
            norm_grad(d, m.norm, g);
            double gw_dot = 0;
            for (std::size_t i = 0; i < dim; ++i) gw_dot += g[i] * w[i];
            // df/dh = g - (g.w) w ; df/dt = -that ; df/dr = g
            // df/dw = -(g.w) u - (w.u) g, with u = h - t
            double wu = wh - wt;
            for (std::size_t i = 0; i < dim; ++i) {
                double proj = g[i] - gw_dot * w[i];
                double u = double(hv[i]) - tv[i];
                gh[i] += coeff * proj;
                gt[i] -= coeff * proj;
                gr[i] += coeff * g[i];
                gw[i] += coeff * (-gw_dot * u - wu * g[i]);
            }
            return;
        }
        case ModelKind::DistMult: {
            for (std::size_t i = 0; i < dim; ++i) {
                gh[i] += coeff * double(rv[i]) * tv[i];
                gr[i] += coeff * double(hv[i]) * tv[i];
                gt[i] += coeff * double(hv[i]) * rv[i];
            }
            return;
        }
        case ModelKind::ComplEx: {
            for (std::size_t i = 0; i + 1 < dim; i += 2) {
                double a = hv[i], b = hv[i + 1];
                double c = rv[i], e = rv[i + 1];
                double tr = tv[i], ti = tv[i + 1];
                gh[i] += coeff * (c * tr + e * ti);
                gh[i + 1] += coeff * (-e * tr + c * ti);
                gr[i] += coeff * (a * tr + b * ti);
                gr[i + 1] += coeff * (-b * tr + a * ti);
                gt[i] += coeff * (a * c - b * e);
                gt[i + 1] += coeff * (a * e + b * c);
            }
            return;
        }
        case ModelKind::RotatE: {
            for (std::size_t i = 0; i + 1 < dim; i += 2) {
                double a = hv[i], b = hv[i + 1];
                double c = rv[i], e = rv[i + 1];
                double pre = a * c - b * e - tv[i];
                double pim = a * e + b * c - tv[i + 1];
                double mod = std::sqrt(pre * pre + pim * pim);
                if (mod == 0) continue;
                double qre = pre / mod, qim = pim / mod;
                gh[i] += coeff * -(qre * c + qim * e);
                gh[i + 1] += coeff * -(-qre * e + qim * c);
                gr[i] += coeff * -(qre * a + qim * b);
                gr[i + 1] += coeff * -(-qre * b + qim * a);
                gt[i] += coeff * qre;
                gt[i + 1] += coeff * qim;
            }
            return;
        }
    }
    throw ModelError("unreachable model kind");
}

}  // namespace kgaudit
