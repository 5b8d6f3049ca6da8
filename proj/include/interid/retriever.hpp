#pragma once
// Context encoding and cosine/softmax retrieval over a gallery.
//
// The context embedding is additive: +1 per asserted (slot, value), -1 per
// denied one, accumulated over the initial description and all answers.
// Questions never enter the context. The vector is left unnormalized;
// cosine similarity normalizes downstream.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "interid/dialogue.hpp"
#include "interid/gallery.hpp"

namespace interid {

struct ContextEmbedding {
    std::vector<float> vec;

    bool is_zero() const {
        for (float v : vec) {
            if (v != 0.0f) return false;
        }
        return true;
    }
};

ContextEmbedding encode_context(const DialogueState& dialogue, const AttributeSchema& schema);

// Numerically stable softmax; shift-invariant within 1e-9.
std::vector<double> softmax(std::span<const double> scores);

// Cosine similarity; zero for a zero-norm input (uniform matching).
double cosine(std::span<const float> a, std::span<const float> b);

struct RetrievalResult {
    // Gallery indices by descending similarity, ties by ascending index.
    std::vector<std::size_t> ranked_ids;
    // softmax over cosine similarities; strictly positive, sums to 1.
    std::vector<double> probabilities;
    std::vector<double> similarities;
    std::optional<std::size_t> target_rank;
};

// Cosine similarity of the context against every gallery row.
std::vector<double> gallery_similarities(const ContextEmbedding& z, const Gallery& gallery);

RetrievalResult match_probabilities(const ContextEmbedding& z, const Gallery& gallery);

// 1-based rank of the person at `target_index` under the deterministic
// tie-break (equal similarities rank by ascending gallery index).
std::size_t rank_of(std::size_t target_index, const ContextEmbedding& z, const Gallery& gallery);
std::size_t rank_of(const std::string& target_id, const ContextEmbedding& z, const Gallery& gallery);

// Top-k pool handed to the candidate selector. Keeps gallery indices plus
// their similarities in ranked order; features stay views into the gallery.
struct CandidatePool {
    std::vector<std::size_t> indices;
    std::vector<double> similarities;
    const Gallery* gallery = nullptr;
    bool clamped = false;  // requested k exceeded the gallery size

    std::size_t size() const { return indices.size(); }
    std::span<const float> feature(std::size_t pool_pos) const {
        return gallery->row(indices[pool_pos]);
    }
};

CandidatePool retrieve_topk(const ContextEmbedding& z, const Gallery& gallery, std::size_t k);

// Elementwise mean of two similarity vectors (re-ranking an external scorer
// against the dialogue scorer).
std::vector<double> fuse_scores(std::span<const double> sims_a, std::span<const double> sims_b);

}  // namespace interid
