#pragma once
// Representative-candidate selection from a top-k pool: softmax selection
// weights from pluggable scorers, Gumbel-top-k sampling without
// replacement, exact subset probabilities, and the classic baselines
// (top-k, k-means, uniform).
//
// Sampling operations work in pool positions 0..k-1; resolve_candidates
// maps a position set back to gallery indices.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "interid/retriever.hpp"
#include "interid/rng.hpp"

namespace interid {

// Normalized selection weights over a candidate pool. Entries are >= 0 and
// sum to 1 (the sampling ops tolerate any non-negative vector and use
// Z = sum(w) explicitly).
struct SelectionWeights {
    std::vector<double> w;

    std::size_t size() const { return w.size(); }
};

// Gallery indices of the c representatives shown to the questioner.
struct CandidateSet {
    std::vector<std::size_t> gallery_indices;

    std::size_t size() const { return gallery_indices.size(); }
};

enum class ScorerKind { similarity, diversity, external_plug };
ScorerKind scorer_from_string(const std::string& s);

// External scorer hook: raw scores per pool candidate, same length as the
// pool. Throwing (or returning the wrong length) triggers the similarity
// fallback.
using ExternalScorer =
    std::function<std::vector<double>(const ContextEmbedding&, const CandidatePool&)>;

struct ScoreOutcome {
    SelectionWeights weights;
    bool fallback = false;  // external scorer failed; similarity used instead
};

// Softmax over scorer outputs.
//   similarity: score_i = sim(z, f_i)  (the pool similarities)
//   diversity:  greedy marginal relevance, score_i = sim(z, f_i) minus
//               lambda * max feature similarity to already-picked candidates
//   external_plug: scores from `external`, falling back to similarity
ScoreOutcome score_candidates(const CandidatePool& pool, const ContextEmbedding& z,
                              ScorerKind scorer, const ExternalScorer* external = nullptr,
                              double lambda = 0.5);

// Probability of drawing exactly `sequence` (ordered, distinct positions)
// when sampling without replacement proportionally to w:
//   prod_j w_{i_j} / (Z - sum of already-drawn weights)
double ordered_sample_prob(const SelectionWeights& weights, std::span<const std::size_t> sequence);

// Probability of the unordered subset: ordered_sample_prob summed over all
// |subset|! orderings. CapacityError beyond 8 elements.
double subset_prob(const SelectionWeights& weights, std::span<const std::size_t> subset);

// `log`: perturb ln w_i with Gumbel(0,1) noise — exactly equivalent to
// sampling the subset without replacement (matches subset_prob).
// `additive`: perturb w_i directly.
enum class GumbelMode { log, additive };

// Positions of the c largest perturbed weights, ties by ascending position.
std::vector<std::size_t> gumbel_topk_sample(const SelectionWeights& weights, std::size_t c,
                                            Rng& rng, GumbelMode mode = GumbelMode::log);

// Deterministic top-c by weight, ties by ascending position.
std::vector<std::size_t> topc_by_weight(const SelectionWeights& weights, std::size_t c);

enum class BaselineMethod { topk, kmeans, uniform };
BaselineMethod baseline_from_string(const std::string& s);

// Pool positions chosen by one of the reference strategies:
//   topk    - first c in ranked order
//   kmeans  - Lloyd's algorithm (seeded init, <= 50 iterations, tol 1e-6),
//             nearest distinct pool member per centroid; an emptied cluster
//             is reseeded to the farthest point
//   uniform - c distinct uniform draws
std::vector<std::size_t> select_baseline(const CandidatePool& pool, BaselineMethod method,
                                         std::size_t c, Rng& rng);

CandidateSet resolve_candidates(const CandidatePool& pool, std::span<const std::size_t> positions);

}  // namespace interid
