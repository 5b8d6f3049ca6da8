#include "interid/selector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "interid/errors.hpp"

namespace interid {

ScorerKind scorer_from_string(const std::string& s) {
    if (s == "similarity") return ScorerKind::similarity;
    if (s == "diversity") return ScorerKind::diversity;
    if (s == "external") return ScorerKind::external_plug;
    throw ArgumentError("unknown scorer '" + s + "'");
}

BaselineMethod baseline_from_string(const std::string& s) {
    if (s == "topk") return BaselineMethod::topk;
    if (s == "kmeans") return BaselineMethod::kmeans;
    if (s == "uniform") return BaselineMethod::uniform;
    throw ArgumentError("unknown baseline method '" + s + "'");
}

namespace {

std::vector<double> similarity_scores(const CandidatePool& pool) { return pool.similarities; }

// Greedy marginal relevance: pick the candidate with the best
// relevance-minus-redundancy score, freeze that score, repeat. Every
// candidate ends up scored by its marginal value at pick time.
std::vector<double> diversity_scores(const CandidatePool& pool, double lambda) {
    const std::size_t k = pool.size();
    std::vector<double> scores(k, 0.0);
    std::vector<bool> picked(k, false);
    std::vector<double> max_sim_to_picked(k, 0.0);
    std::vector<bool> has_picked_neighbor(k, false);

    for (std::size_t step = 0; step < k; ++step) {
        std::size_t best = k;
        double best_score = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < k; ++i) {
            if (picked[i]) continue;
            const double penalty = has_picked_neighbor[i] ? max_sim_to_picked[i] : 0.0;
            const double marginal = pool.similarities[i] - lambda * penalty;
            if (marginal > best_score) {
                best_score = marginal;
                best = i;
            }
        }
        picked[best] = true;
        scores[best] = best_score;
        for (std::size_t i = 0; i < k; ++i) {
            if (picked[i]) continue;
            const double sim = cosine(pool.feature(i), pool.feature(best));
            if (!has_picked_neighbor[i] || sim > max_sim_to_picked[i]) {
                max_sim_to_picked[i] = sim;
                has_picked_neighbor[i] = true;
            }
        }
    }
    return scores;
}

void check_weights(const SelectionWeights& weights) {
    if (weights.w.empty()) throw ArgumentError("empty weight vector");
    for (double v : weights.w) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw ArgumentError("weights must be finite and >= 0");
    }
}

}  // namespace

ScoreOutcome score_candidates(const CandidatePool& pool, const ContextEmbedding& z,
                              ScorerKind scorer, const ExternalScorer* external, double lambda) {
    if (pool.size() == 0) throw ArgumentError("empty candidate pool");
    ScoreOutcome outcome;
    std::vector<double> scores;
    switch (scorer) {
        case ScorerKind::similarity:
            scores = similarity_scores(pool);
            break;
        case ScorerKind::diversity:
            scores = diversity_scores(pool, lambda);
            break;
        case ScorerKind::external_plug: {
            if (external == nullptr || !*external) {
                outcome.fallback = true;
                scores = similarity_scores(pool);
                break;
            }
            try {
                scores = (*external)(z, pool);
                if (scores.size() != pool.size())
                    throw SelectorError("external scorer returned " + std::to_string(scores.size()) +
                                        " scores for a pool of " + std::to_string(pool.size()));
                for (double s : scores) {
                    if (!std::isfinite(s)) throw SelectorError("external scorer returned non-finite score");
                }
            } catch (const std::exception&) {
                outcome.fallback = true;
                scores = similarity_scores(pool);
            }
            break;
        }
    }
    outcome.weights.w = softmax(scores);
    return outcome;
}

double ordered_sample_prob(const SelectionWeights& weights, std::span<const std::size_t> sequence) {
    check_weights(weights);
    if (sequence.empty() || sequence.size() > weights.size())
        throw ArgumentError("sequence length must be in [1, k]");
    std::unordered_set<std::size_t> seen;
    for (std::size_t idx : sequence) {
        if (idx >= weights.size()) throw ArgumentError("sequence index out of range");
        if (!seen.insert(idx).second) throw ArgumentError("sequence repeats an index");
    }
    double remaining = std::accumulate(weights.w.begin(), weights.w.end(), 0.0);
    double prob = 1.0;
    for (std::size_t idx : sequence) {
        if (remaining <= 0.0) return 0.0;
        prob *= weights.w[idx] / remaining;
        remaining -= weights.w[idx];
    }
    return prob;
}

double subset_prob(const SelectionWeights& weights, std::span<const std::size_t> subset) {
    check_weights(weights);
    if (subset.empty() || subset.size() > weights.size())
        throw ArgumentError("subset size must be in [1, k]");
    if (subset.size() > 8) throw CapacityError("subset enumeration capped at 8 elements");
    std::vector<std::size_t> perm(subset.begin(), subset.end());
    std::sort(perm.begin(), perm.end());
    for (std::size_t i = 1; i < perm.size(); ++i) {
        if (perm[i] == perm[i - 1]) throw ArgumentError("subset repeats an index");
    }
    double total = 0.0;
    do {
        total += ordered_sample_prob(weights, perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

namespace {

std::vector<std::size_t> top_positions(const std::vector<double>& keys, std::size_t c) {
    std::vector<std::size_t> order(keys.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return keys[a] > keys[b]; });
    order.resize(c);
    std::sort(order.begin(), order.end());
    return order;
}

}  // namespace

std::vector<std::size_t> gumbel_topk_sample(const SelectionWeights& weights, std::size_t c, Rng& rng,
                                            GumbelMode mode) {
    check_weights(weights);
    if (c > weights.size()) throw ArgumentError("c exceeds pool size");
    std::vector<double> keys(weights.size());
    for (std::size_t i = 0; i < keys.size(); ++i) {
        const double g = rng.gumbel();
        if (mode == GumbelMode::log) {
            keys[i] = weights.w[i] > 0.0 ? std::log(weights.w[i]) + g
                                         : -std::numeric_limits<double>::infinity();
        } else {
            keys[i] = weights.w[i] + g;
        }
    }
    return top_positions(keys, c);
}

std::vector<std::size_t> topc_by_weight(const SelectionWeights& weights, std::size_t c) {
    check_weights(weights);
    if (c > weights.size()) throw ArgumentError("c exceeds pool size");
    return top_positions(weights.w, c);
}

namespace {

double sq_distance(std::span<const float> a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = static_cast<double>(a[i]) - b[i];
        d += diff * diff;
    }
    return d;
}

std::vector<std::size_t> kmeans_representatives(const CandidatePool& pool, std::size_t c, Rng& rng) {
    constexpr int kMaxIters = 50;
    constexpr double kTol = 1e-6;
    const std::size_t n = pool.size();
    const std::size_t dim = pool.feature(0).size();

    std::vector<std::vector<double>> centroids;
    centroids.reserve(c);
    for (std::size_t seed_pos : rng.sample_distinct(c, n)) {
        auto f = pool.feature(seed_pos);
        centroids.emplace_back(f.begin(), f.end());
    }

    std::vector<std::size_t> assignment(n, 0);
    for (int iter = 0; iter < kMaxIters; ++iter) {
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < c; ++j) {
                const double d = sq_distance(pool.feature(i), centroids[j]);
                if (d < best) {
                    best = d;
                    assignment[i] = j;
                }
            }
        }
        std::vector<std::vector<double>> sums(c, std::vector<double>(dim, 0.0));
        std::vector<std::size_t> counts(c, 0);
        for (std::size_t i = 0; i < n; ++i) {
            auto f = pool.feature(i);
            for (std::size_t d = 0; d < dim; ++d) sums[assignment[i]][d] += f[d];
            ++counts[assignment[i]];
        }
        double max_shift = 0.0;
        for (std::size_t j = 0; j < c; ++j) {
            if (counts[j] == 0) {
                // Reseed the emptied centroid to the point farthest from its
                // assigned centroid.
                std::size_t farthest = 0;
                double far_dist = -1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double d = sq_distance(pool.feature(i), centroids[assignment[i]]);
                    if (d > far_dist) {
                        far_dist = d;
                        farthest = i;
                    }
                }
                auto f = pool.feature(farthest);
                centroids[j].assign(f.begin(), f.end());
                max_shift = std::numeric_limits<double>::infinity();
                continue;
            }
            double shift = 0.0;
            for (std::size_t d = 0; d < dim; ++d) {
                const double next = sums[j][d] / static_cast<double>(counts[j]);
                const double diff = next - centroids[j][d];
                shift += diff * diff;
                centroids[j][d] = next;
            }
            max_shift = std::max(max_shift, std::sqrt(shift));
        }
        if (max_shift < kTol) break;
    }

    // Nearest distinct pool member per centroid.
    std::vector<std::size_t> reps;
    std::vector<bool> used(n, false);
    for (std::size_t j = 0; j < c; ++j) {
        std::size_t best = n;
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            if (used[i]) continue;
            const double d = sq_distance(pool.feature(i), centroids[j]);
            if (d < best_dist) {
                best_dist = d;
                best = i;
            }
        }
        used[best] = true;
        reps.push_back(best);
    }
    std::sort(reps.begin(), reps.end());
    return reps;
}

}  // namespace

std::vector<std::size_t> select_baseline(const CandidatePool& pool, BaselineMethod method,
                                         std::size_t c, Rng& rng) {
    if (c == 0) throw ArgumentError("c must be >= 1");
    if (pool.size() < c) throw ArgumentError("pool smaller than c");
    switch (method) {
        case BaselineMethod::topk: {
            // Pool order is already descending similarity.
            std::vector<std::size_t> positions(c);
            std::iota(positions.begin(), positions.end(), std::size_t{0});
            return positions;
        }
        case BaselineMethod::kmeans:
            return kmeans_representatives(pool, c, rng);
        case BaselineMethod::uniform: {
            std::vector<std::size_t> positions = rng.sample_distinct(c, pool.size());
            std::sort(positions.begin(), positions.end());
            return positions;
        }
    }
    throw ArgumentError("unhandled baseline method");
}

CandidateSet resolve_candidates(const CandidatePool& pool, std::span<const std::size_t> positions) {
    CandidateSet set;
    set.gallery_indices.reserve(positions.size());
    for (std::size_t pos : positions) {
        if (pos >= pool.size()) throw ArgumentError("pool position out of range");
        set.gallery_indices.push_back(pool.indices[pos]);
    }
    return set;
}

}  // namespace interid
