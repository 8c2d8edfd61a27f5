#include "autolock/attack.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace autolock {

namespace {

constexpr int kPathCap = 6;

std::uint64_t pair_key(int u, int v) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
           static_cast<std::uint32_t>(v);
}

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
}

/// Numerically stable cross-entropy of logit z against label y.
double xent(double z, int y) {
    return std::max(z, 0.0) - y * z + std::log1p(std::exp(-std::abs(z)));
}

}  // namespace

int AttackGraph::index(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw ValidationError("unknown node '" + name + "'");
    return it->second;
}

bool AttackGraph::has_edge(int u, int v) const { return edge_set_.count(pair_key(u, v)) != 0; }

int AttackGraph::add_node(const std::string& name, GateKind kind) {
    int id = static_cast<int>(names_.size());
    names_.push_back(name);
    kinds_.push_back(kind);
    index_.emplace(name, id);
    out_.emplace_back();
    in_.emplace_back();
    return id;
}

void AttackGraph::add_edge(int u, int v, int pin) {
    edges_.push_back({u, v, pin});
    out_[u].push_back({v, pin});
    in_[v].push_back({u, pin});
    edge_set_.insert(pair_key(u, v));
}

AttackGraph build_attack_graph(const LockedNetlist& ln) {
    const Netlist& n = ln.netlist;
    const Genotype& geno = ln.genotype;
    if (geno.genes.empty())
        throw ValidationError("netlist carries no key-gates: nothing to attack");

    // Map each key-controlled MUX back to its gene; anything else selected by
    // a key input is malformed.
    std::unordered_map<std::string, std::size_t> key_mux;
    for (std::size_t b = 0; b < geno.genes.size(); ++b) {
        for (int side : {0, 1}) {
            std::string m = mux_gate_name(b, side);
            if (!n.has_gate(m) || n.gate(m).kind != GateKind::Mux ||
                n.gate(m).inputs[0] != key_input_name(b))
                throw ValidationError("locked netlist is missing key MUX '" + m + "'");
            key_mux.emplace(m, b);
        }
    }
    for (const auto& g : n.gates()) {
        if (g.kind == GateKind::Mux && n.is_key_input(g.inputs[0]) && !key_mux.count(g.name))
            throw ValidationError("MUX '" + g.name + "' is not attributable to any gene");
    }

    AttackGraph ag;
    for (const auto& pi : n.primary_inputs()) ag.add_node(pi, GateKind::Input);
    for (const auto& g : n.gates())
        if (!key_mux.count(g.name)) ag.add_node(g.name, g.kind);

    for (const auto& g : n.gates()) {
        if (key_mux.count(g.name)) continue;
        int v = ag.index(g.name);
        for (std::size_t pin = 0; pin < g.inputs.size(); ++pin) {
            const std::string& src = g.inputs[pin];
            if (key_mux.count(src) || n.is_key_input(src)) continue;  // open slot
            ag.add_edge(ag.index(src), v, static_cast<int>(pin));
        }
    }

    for (const auto& gene : geno.genes) {
        int fi = ag.index(gene.f_i), fj = ag.index(gene.f_j);
        int gi = ag.index(gene.g_i), gj = ag.index(gene.g_j);
        KeyBitCandidates c;
        c.fi_gi = {fi, gi, gene.pin_i};
        c.fj_gi = {fj, gi, gene.pin_i};
        c.fi_gj = {fi, gj, gene.pin_j};
        c.fj_gj = {fj, gj, gene.pin_j};
        c.true_bit = gene.k;
        ag.candidates_.push_back(c);
    }
    return ag;
}

std::vector<LabeledLink> sample_training_links(const AttackGraph& g, Rng& rng,
                                               std::size_t max_positives) {
    const auto& edges = g.edges();
    if (edges.empty()) throw ValidationError("attack graph has no edges to train on");

    std::vector<std::size_t> perm(edges.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    for (std::size_t i = perm.size(); i > 1; --i)
        std::swap(perm[i - 1], perm[rng.below(i)]);

    std::vector<LabeledLink> out;
    std::size_t n_pos = std::min(max_positives, edges.size());
    for (std::size_t i = 0; i < n_pos; ++i) {
        const auto& e = edges[perm[i]];
        out.push_back({e.u, e.v, e.pin, 1});
    }

    std::unordered_set<std::uint64_t> candidate_pairs;
    for (const auto& c : g.candidates()) {
        for (const auto& l : {c.fi_gi, c.fj_gi, c.fi_gj, c.fj_gj})
            candidate_pairs.insert(pair_key(l.u, l.v));
    }
    std::vector<int> drivers, consumers;
    for (int v = 0; v < g.node_count(); ++v) {
        if (!g.out_adj()[v].empty()) drivers.push_back(v);
        if (g.kind(v) != GateKind::Input) consumers.push_back(v);
    }
    if (drivers.empty() || consumers.empty())
        throw ValidationError("attack graph too degenerate to sample negatives");

    std::size_t budget = 1000 * n_pos + 1000;
    std::size_t produced = 0;
    while (produced < n_pos && budget-- > 0) {
        int u = drivers[rng.below(drivers.size())];
        int v = consumers[rng.below(consumers.size())];
        if (u == v || g.has_edge(u, v)) continue;
        if (candidate_pairs.count(pair_key(u, v))) continue;
        int pin = static_cast<int>(rng.below(g.in_adj()[v].size() + 1));
        out.push_back({u, v, pin, 0});
        ++produced;
    }
    if (produced < n_pos)
        throw ValidationError("attack graph too dense to sample negative links");
    return out;
}

LinkFeatures extract_features(const AttackGraph& g, int u, int v, int pin,
                              bool skip_edge) {
    if (u < 0 || v < 0 || u >= g.node_count() || v >= g.node_count())
        throw ValidationError("feature extraction on unknown node");

    auto skipped = [&](int a, int b, int p) {
        return skip_edge && a == u && b == v && p == pin;
    };

    double out_deg = 0;
    for (const auto& [w, p] : g.out_adj()[u])
        if (!skipped(u, w, p)) ++out_deg;
    double in_deg = 0;
    for (const auto& [w, p] : g.in_adj()[v])
        if (!skipped(w, v, p)) ++in_deg;

    auto neighbors = [&](int node) {
        std::unordered_set<int> set;
        for (const auto& [w, p] : g.out_adj()[node])
            if (!skipped(node, w, p)) set.insert(w);
        for (const auto& [w, p] : g.in_adj()[node])
            if (!skipped(w, node, p)) set.insert(w);
        return set;
    };
    auto nu = neighbors(u);
    auto nv = neighbors(v);
    double common = 0;
    for (int w : nu)
        if (nv.count(w)) ++common;

    // undirected BFS from u, capped
    double dist = kPathCap;
    {
        std::vector<int> seen(g.node_count(), -1);
        std::deque<int> queue{u};
        seen[u] = 0;
        while (!queue.empty()) {
            int cur = queue.front();
            queue.pop_front();
            if (seen[cur] >= kPathCap) break;
            auto visit = [&](int w) {
                if (seen[w] < 0) {
                    seen[w] = seen[cur] + 1;
                    queue.push_back(w);
                }
            };
            for (const auto& [w, p] : g.out_adj()[cur])
                if (!skipped(cur, w, p)) visit(w);
            for (const auto& [w, p] : g.in_adj()[cur])
                if (!skipped(w, cur, p)) visit(w);
        }
        if (seen[v] >= 0 && seen[v] < kPathCap) dist = seen[v];
    }

    std::unordered_set<int> fu, fv;
    for (const auto& [w, p] : g.out_adj()[u])
        if (!skipped(u, w, p)) fu.insert(w);
    for (const auto& [w, p] : g.out_adj()[v]) fv.insert(w);
    double overlap = 0;
    for (int w : fu)
        if (fv.count(w)) ++overlap;

    LinkFeatures x{};
    x[0] = std::log1p(out_deg);
    x[1] = std::log1p(in_deg);
    x[2] = std::log1p(common);
    x[3] = dist;
    x[4] = static_cast<double>(pin);
    x[5 + static_cast<int>(g.kind(u))] = 1.0;
    x[15 + static_cast<int>(g.kind(v))] = 1.0;
    x[25] = std::log1p(overlap);
    return x;
}

double logistic_loss(const std::vector<LinkFeatures>& x, const std::vector<int>& y,
                     const std::array<double, kFeatureDim>& w, double b, double l2) {
    double loss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double z = b;
        for (int d = 0; d < kFeatureDim; ++d) z += w[d] * x[i][d];
        loss += xent(z, y[i]);
    }
    loss /= static_cast<double>(x.size());
    double reg = 0.0;
    for (double wd : w) reg += wd * wd;
    return loss + 0.5 * l2 * reg;
}

void logistic_gradient(const std::vector<LinkFeatures>& x, const std::vector<int>& y,
                       const std::array<double, kFeatureDim>& w, double b, double l2,
                       std::array<double, kFeatureDim>& grad_w, double& grad_b) {
    grad_w.fill(0.0);
    grad_b = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double z = b;
        for (int d = 0; d < kFeatureDim; ++d) z += w[d] * x[i][d];
        double err = sigmoid(z) - y[i];
        for (int d = 0; d < kFeatureDim; ++d) grad_w[d] += err * x[i][d];
        grad_b += err;
    }
    double inv = 1.0 / static_cast<double>(x.size());
    for (int d = 0; d < kFeatureDim; ++d) grad_w[d] = grad_w[d] * inv + l2 * w[d];
    grad_b *= inv;
}

LinkClassifier fit_logistic(const std::vector<LinkFeatures>& features,
                            const std::vector<int>& labels) {
    if (features.size() < 2) throw ValidationError("need at least 2 training links");
    bool has_pos = false, has_neg = false;
    for (int y : labels) (y ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg)
        throw ValidationError("training data must contain both classes");

    std::vector<LinkFeatures> x = features;
    const std::vector<int>& y = labels;

    LinkClassifier c;
    c.epochs = 200;
    c.learning_rate = 0.1;
    double inv_n = 1.0 / static_cast<double>(x.size());
    for (int d = 0; d < kFeatureDim; ++d) {
        double m = 0.0;
        for (const auto& xi : x) m += xi[d];
        m *= inv_n;
        double var = 0.0;
        for (const auto& xi : x) var += (xi[d] - m) * (xi[d] - m);
        var *= inv_n;
        c.mean[d] = m;
        c.stddev[d] = var > 1e-12 ? std::sqrt(var) : 1.0;
    }
    for (auto& xi : x)
        for (int d = 0; d < kFeatureDim; ++d) xi[d] = (xi[d] - c.mean[d]) / c.stddev[d];

    constexpr double kL2 = 1e-4;
    std::array<double, kFeatureDim> grad_w;
    double grad_b;
    for (int epoch = 0; epoch < c.epochs; ++epoch) {
        logistic_gradient(x, y, c.weights, c.bias, kL2, grad_w, grad_b);
        for (int d = 0; d < kFeatureDim; ++d) c.weights[d] -= c.learning_rate * grad_w[d];
        c.bias -= c.learning_rate * grad_b;
    }
    c.final_loss = logistic_loss(x, y, c.weights, c.bias, kL2);
    return c;
}

LinkClassifier train_classifier(const std::vector<LabeledLink>& data,
                                const AttackGraph& g) {
    std::vector<LinkFeatures> x;
    std::vector<int> y;
    x.reserve(data.size());
    for (const auto& d : data) {
        // positives exist as edges; compute their features with the link removed
        x.push_back(extract_features(g, d.u, d.v, d.pin, d.label == 1));
        y.push_back(d.label);
    }
    return fit_logistic(x, y);
}

double LinkClassifier::score(const LinkFeatures& x) const {
    double z = bias;
    for (int d = 0; d < kFeatureDim; ++d) z += weights[d] * (x[d] - mean[d]) / stddev[d];
    return sigmoid(z);
}

AttackReport predict_keys_with(const AttackGraph& g,
                               const std::function<double(const CandidateLink&)>& score,
                               double theta) {
    AttackReport report;
    int correct = 0, decided = 0;
    const auto& cands = g.candidates();
    for (std::size_t b = 0; b < cands.size(); ++b) {
        const auto& s = score;
        double margin = (s(cands[b].fi_gi) + s(cands[b].fj_gj)) -
                        (s(cands[b].fj_gi) + s(cands[b].fi_gj));
        KeyBitPrediction p;
        p.bit = static_cast<int>(b);
        p.margin = margin;
        if (margin > theta)
            p.predicted = cands[b].true_bit;  // true-wire pairing ranked higher
        else if (margin < -theta)
            p.predicted = 1 - cands[b].true_bit;
        else
            p.predicted = -1;
        if (p.predicted >= 0) {
            ++decided;
            p.correct = p.predicted == cands[b].true_bit;
            if (p.correct) ++correct;
        }
        report.bits.push_back(p);
    }
    int abstained = static_cast<int>(cands.size()) - decided;
    report.decided = decided;
    report.accuracy = (correct + 0.5 * abstained) / static_cast<double>(cands.size());
    report.precision = decided > 0 ? static_cast<double>(correct) / decided : 1.0;
    return report;
}

AttackReport predict_keys(const AttackGraph& g, const LinkClassifier& c, double theta) {
    return predict_keys_with(
        g,
        [&](const CandidateLink& l) {
            return c.score(extract_features(g, l.u, l.v, l.pin, false));
        },
        theta);
}

AttackReport run_attack(const LockedNetlist& ln, std::uint64_t seed, double theta) {
    AttackGraph g = build_attack_graph(ln);
    Rng rng(derive_seed(seed, "attack-links"));
    auto data = sample_training_links(g, rng);
    LinkClassifier c = train_classifier(data, g);
    return predict_keys(g, c, theta);
}

double attack_accuracy(const LockedNetlist& ln, std::uint64_t seed) {
    return run_attack(ln, seed).accuracy;
}

}  // namespace autolock
