#ifndef AUTOLOCK_ATTACK_HPP
#define AUTOLOCK_ATTACK_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "autolock/dmux.hpp"
#include "autolock/netlist.hpp"
#include "autolock/rng.hpp"

namespace autolock {

constexpr int kFeatureDim = 26;
using LinkFeatures = std::array<double, kFeatureDim>;

/// One of the four candidate links of a key bit.
struct CandidateLink {
    int u = 0;  // driver node
    int v = 0;  // consumer node
    int pin = 0;
};

/// The four candidates of key bit b, in fixed order:
/// f_i->g_i, f_j->g_i, f_i->g_j, f_j->g_j.
struct KeyBitCandidates {
    CandidateLink fi_gi, fj_gi, fi_gj, fj_gj;
    int true_bit = 0;  // ground truth, used for scoring only
};

/// The locked circuit as the attacker sees it: MUX key-gates and key inputs
/// stripped, their consumer pins left open, plus the candidate links to rank.
class AttackGraph {
public:
    struct Edge {
        int u, v, pin;
        bool operator==(const Edge&) const = default;
    };

    int node_count() const { return static_cast<int>(names_.size()); }
    const std::string& name(int node) const { return names_[node]; }
    GateKind kind(int node) const { return kinds_[node]; }
    int index(const std::string& name) const;
    bool has_node(const std::string& name) const { return index_.count(name) != 0; }

    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<std::vector<std::pair<int, int>>>& out_adj() const { return out_; }
    const std::vector<std::vector<std::pair<int, int>>>& in_adj() const { return in_; }
    bool has_edge(int u, int v) const;
    const std::vector<KeyBitCandidates>& candidates() const { return candidates_; }

private:
    friend AttackGraph build_attack_graph(const LockedNetlist& ln);

    int add_node(const std::string& name, GateKind kind);
    void add_edge(int u, int v, int pin);

    std::vector<std::string> names_;
    std::vector<GateKind> kinds_;
    std::unordered_map<std::string, int> index_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::pair<int, int>>> out_;  // node -> (v, pin)
    std::vector<std::vector<std::pair<int, int>>> in_;   // node -> (u, pin)
    std::unordered_set<std::uint64_t> edge_set_;         // (u, v) membership
    std::vector<KeyBitCandidates> candidates_;
};

struct LabeledLink {
    int u, v, pin;
    int label;  // 1 = existing edge, 0 = non-edge
};

/// Logistic link scorer with per-feature standardization baked in.
struct LinkClassifier {
    std::array<double, kFeatureDim> weights{};
    double bias = 0.0;
    std::array<double, kFeatureDim> mean{};
    std::array<double, kFeatureDim> stddev{};
    int epochs = 0;
    double learning_rate = 0.0;
    double final_loss = 0.0;

    /// P(link) for a raw (unstandardized) feature vector.
    double score(const LinkFeatures& x) const;
};

struct KeyBitPrediction {
    int bit = 0;
    int predicted = -1;  // 0, 1, or -1 for abstain
    double margin = 0.0;
    bool correct = false;  // meaningful only when decided
};

struct AttackReport {
    std::vector<KeyBitPrediction> bits;
    double accuracy = 0.0;   // (#correct decided + 0.5 * #abstained) / K
    double precision = 1.0;  // #correct decided / #decided; 1.0 when none decided
    int decided = 0;
};

AttackGraph build_attack_graph(const LockedNetlist& ln);

/// Balanced self-supervised training set: up to 2000 existing edges as
/// positives and as many non-edges as negatives. Candidate links never
/// appear in either class.
std::vector<LabeledLink> sample_training_links(const AttackGraph& g, Rng& rng,
                                               std::size_t max_positives = 2000);

/// Structural features of a potential link u->(v, pin), computed on the
/// graph without that link (pass skip_edge=true when (u,v,pin) exists).
LinkFeatures extract_features(const AttackGraph& g, int u, int v, int pin,
                              bool skip_edge = false);

LinkClassifier train_classifier(const std::vector<LabeledLink>& data,
                                const AttackGraph& g);

/// Standardizes features and fits the logistic model by full-batch gradient
/// descent (lr 0.1, 200 epochs, L2 1e-4, zero init).
LinkClassifier fit_logistic(const std::vector<LinkFeatures>& features,
                            const std::vector<int>& labels);

/// Scores the four candidates per key bit; the margin compares the true-wire
/// pairing against the crossed one and |margin| <= theta abstains.
AttackReport predict_keys(const AttackGraph& g, const LinkClassifier& c, double theta);

/// Same key-bit decision rule with an arbitrary link scorer.
AttackReport predict_keys_with(const AttackGraph& g,
                               const std::function<double(const CandidateLink&)>& score,
                               double theta);

/// Full pipeline with theta = 0.05; deterministic per (ln, seed).
double attack_accuracy(const LockedNetlist& ln, std::uint64_t seed);
AttackReport run_attack(const LockedNetlist& ln, std::uint64_t seed, double theta = 0.05);

// Exposed for the finite-difference gradient check in tests.
double logistic_loss(const std::vector<LinkFeatures>& x, const std::vector<int>& y,
                     const std::array<double, kFeatureDim>& w, double b,
                     double l2 = 1e-4);
void logistic_gradient(const std::vector<LinkFeatures>& x, const std::vector<int>& y,
                       const std::array<double, kFeatureDim>& w, double b, double l2,
                       std::array<double, kFeatureDim>& grad_w, double& grad_b);

}  // namespace autolock

#endif
