#pragma once
// Shared test fixtures: small schemas, hand-built galleries, and the
// independent oracles the suites check against.

#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "interid/gallery.hpp"
#include "interid/schema.hpp"

namespace testing_support {

// Two-slot schema with tiny vocabularies; both slots coarse-capable.
inline interid::AttributeSchema tiny_schema() {
    return interid::AttributeSchema({
        {"shirt", {"red", "blue"}, true, true},
        {"shoes", {"white", "black", "green"}, true, false},
    });
}

inline interid::AttributeSchema mid_schema() {
    return interid::AttributeSchema({
        {"shirt", {"red", "blue", "green", "black"}, true, true},
        {"pants", {"jeans", "shorts", "chinos", "skirt"}, true, true},
        {"shoes", {"white", "black", "brown", "blue"}, true, false},
        {"hat", {"none", "cap", "beanie", "hood"}, true, false},
        {"bag", {"none", "backpack", "tote", "suitcase"}, true, false},
        {"hair", {"short", "long", "bald", "ponytail"}, true, false},
        {"jacket", {"none", "denim", "leather", "rain"}, true, false},
        {"glasses", {"none", "reading", "sun", "goggles"}, true, false},
        {"build", {"slim", "average", "heavy", "athletic"}, true, false},
        {"posture", {"upright", "slouched", "leaning", "limping"}, true, false},
    });
}

// Gallery built directly from attribute assignments with noiseless one-hot
// embeddings; persons are named p0, p1, ... with identities matching ids.
inline interid::Gallery make_gallery(const interid::AttributeSchema& schema,
                                     const std::vector<std::map<std::string, std::string>>& attrs) {
    interid::Gallery g;
    g.schema = schema;
    g.dim = schema.dimension();
    for (std::size_t i = 0; i < attrs.size(); ++i) {
        interid::PersonRecord p;
        p.id = "p" + std::to_string(i);
        p.identity = p.id;
        p.attrs = attrs[i];
        for (const auto& [slot, value] : attrs[i]) p.witness_known.insert(slot);
        p.embedding = interid::one_hot_embedding(schema, p.attrs);
        g.embeddings.insert(g.embeddings.end(), p.embedding.begin(), p.embedding.end());
        g.persons.push_back(std::move(p));
    }
    g.finalize();
    return g;
}

// Gallery with raw embeddings (no attrs); used where only geometry matters.
inline interid::Gallery make_embedding_gallery(const interid::AttributeSchema& schema,
                                               const std::vector<std::vector<float>>& rows) {
    interid::Gallery g;
    g.schema = schema;
    g.dim = rows.empty() ? 0 : rows[0].size();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        interid::PersonRecord p;
        p.id = "p" + std::to_string(i);
        p.identity = p.id;
        p.embedding = rows[i];
        g.embeddings.insert(g.embeddings.end(), rows[i].begin(), rows[i].end());
        g.persons.push_back(std::move(p));
    }
    g.finalize();
    return g;
}

// Brute-force cosine: an independent route for oracle comparisons.
inline double cosine_oracle(const std::vector<float>& a, const std::vector<float>& b) {
    double dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += double(a[i]) * b[i];
        na += double(a[i]) * a[i];
        nb += double(b[i]) * b[i];
    }
    if (na == 0 || nb == 0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

// Rank by explicit full sort with the ascending-index tie-break.
inline std::size_t rank_oracle(const std::vector<double>& sims, std::size_t target) {
    std::vector<std::size_t> ids(sims.size());
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    std::stable_sort(ids.begin(), ids.end(),
                     [&](std::size_t x, std::size_t y) { return sims[x] > sims[y]; });
    for (std::size_t pos = 0; pos < ids.size(); ++pos) {
        if (ids[pos] == target) return pos + 1;
    }
    return 0;
}

}  // namespace testing_support
