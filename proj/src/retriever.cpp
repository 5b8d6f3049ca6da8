#include "interid/retriever.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "interid/errors.hpp"

namespace interid {

ContextEmbedding encode_context(const DialogueState& dialogue, const AttributeSchema& schema) {
    ContextEmbedding z;
    z.vec.assign(schema.dimension(), 0.0f);
    for (const Observation& obs : dialogue.initial.observations) {
        z.vec[schema.coordinate(obs.slot, obs.value)] += 1.0f;
    }
    for (const auto& [question, answer] : dialogue.turns) {
        if (answer.unknown) continue;
        for (const Observation& obs : answer.observations) {
            z.vec[schema.coordinate(obs.slot, obs.value)] += static_cast<float>(obs.polarity);
        }
    }
    return z;
}

std::vector<double> softmax(std::span<const double> scores) {
    std::vector<double> out(scores.size());
    if (scores.empty()) return out;
    const double peak = *std::max_element(scores.begin(), scores.end());
    double sum = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        out[i] = std::exp(scores[i] - peak);
        sum += out[i];
    }
    for (double& v : out) v /= sum;
    return out;
}

double cosine(std::span<const float> a, std::span<const float> b) {
    if (a.size() != b.size())
        throw DimensionError("cosine of length " + std::to_string(a.size()) + " vs " +
                             std::to_string(b.size()));
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += static_cast<double>(a[i]) * b[i];
        na += static_cast<double>(a[i]) * a[i];
        nb += static_cast<double>(b[i]) * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

namespace {

void check_context(const ContextEmbedding& z, const Gallery& gallery) {
    if (z.vec.size() != gallery.dim)
        throw DimensionError("context dim " + std::to_string(z.vec.size()) + " != gallery dim " +
                             std::to_string(gallery.dim));
    for (float v : z.vec) {
        if (!std::isfinite(v)) throw NumericError("non-finite context embedding");
    }
}

// Indices 0..m-1 sorted by descending similarity, ties by ascending index.
std::vector<std::size_t> rank_indices(const std::vector<double>& sims) {
    std::vector<std::size_t> ids(sims.size());
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    std::stable_sort(ids.begin(), ids.end(),
                     [&](std::size_t a, std::size_t b) { return sims[a] > sims[b]; });
    return ids;
}

}  // namespace

std::vector<double> gallery_similarities(const ContextEmbedding& z, const Gallery& gallery) {
    check_context(z, gallery);
    double z_norm_sq = 0.0;
    for (float v : z.vec) z_norm_sq += static_cast<double>(v) * v;
    const std::size_t m = gallery.size();
    std::vector<double> sims(m, 0.0);
    if (z_norm_sq == 0.0) return sims;  // empty context: uniform downstream
    const double inv_z_norm = 1.0 / std::sqrt(z_norm_sq);

    for (std::size_t i = 0; i < m; ++i) {
        auto f = gallery.row(i);
        double dot = 0.0, f_norm_sq = 0.0;
        for (std::size_t d = 0; d < f.size(); ++d) {
            dot += static_cast<double>(z.vec[d]) * f[d];
            f_norm_sq += static_cast<double>(f[d]) * f[d];
        }
        if (!std::isfinite(dot) || !std::isfinite(f_norm_sq))
            throw NumericError("non-finite similarity at gallery row " + std::to_string(i));
        sims[i] = dot * inv_z_norm / std::sqrt(f_norm_sq);
    }
    return sims;
}

RetrievalResult match_probabilities(const ContextEmbedding& z, const Gallery& gallery) {
    RetrievalResult result;
    result.similarities = gallery_similarities(z, gallery);
    result.probabilities = softmax(result.similarities);
    result.ranked_ids = rank_indices(result.similarities);
    return result;
}

std::size_t rank_of(std::size_t target_index, const ContextEmbedding& z, const Gallery& gallery) {
    if (target_index >= gallery.size()) throw NotFoundError("gallery index out of range");
    const std::vector<double> sims = gallery_similarities(z, gallery);
    const double target_sim = sims[target_index];
    std::size_t rank = 1;
    for (std::size_t i = 0; i < sims.size(); ++i) {
        if (sims[i] > target_sim || (sims[i] == target_sim && i < target_index)) ++rank;
    }
    return rank;
}

std::size_t rank_of(const std::string& target_id, const ContextEmbedding& z, const Gallery& gallery) {
    auto idx = gallery.index_of(target_id);
    if (!idx) throw NotFoundError("no person with id '" + target_id + "'");
    return rank_of(*idx, z, gallery);
}

CandidatePool retrieve_topk(const ContextEmbedding& z, const Gallery& gallery, std::size_t k) {
    if (k == 0) throw ArgumentError("k must be >= 1");
    CandidatePool pool;
    pool.gallery = &gallery;
    if (k > gallery.size()) {
        k = gallery.size();
        pool.clamped = true;
    }
    const std::vector<double> sims = gallery_similarities(z, gallery);
    std::vector<std::size_t> ids = rank_indices(sims);
    ids.resize(k);
    pool.indices = std::move(ids);
    pool.similarities.reserve(k);
    for (std::size_t idx : pool.indices) pool.similarities.push_back(sims[idx]);
    return pool;
}

std::vector<double> fuse_scores(std::span<const double> sims_a, std::span<const double> sims_b) {
    if (sims_a.size() != sims_b.size())
        throw DimensionError("fuse_scores length " + std::to_string(sims_a.size()) + " vs " +
                             std::to_string(sims_b.size()));
    std::vector<double> fused(sims_a.size());
    for (std::size_t i = 0; i < fused.size(); ++i) fused[i] = 0.5 * (sims_a[i] + sims_b[i]);
    return fused;
}

}  // namespace interid
