#pragma once
// Synthetic person generation and the gallery container searched by the
// retriever. A person is an attribute assignment over a schema; its
// embedding is the L2-normalized one-hot encoding of that assignment,
// optionally perturbed with Gaussian noise to simulate encoder error.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "interid/dialogue.hpp"
#include "interid/rng.hpp"
#include "interid/schema.hpp"

namespace interid {

struct PersonRecord {
    std::string id;        // unique per image
    std::string identity;  // repeats across images of one identity
    std::map<std::string, std::string> attrs;
    std::set<std::string> witness_known;  // subset of assigned slots
    std::vector<float> embedding;         // empty = not present

    bool operator==(const PersonRecord&) const = default;
};

struct GeneratorParams {
    // Per-slot probability that the witness cannot recall an assigned slot.
    double p_unknown = 0.1;
    // Isotropic Gaussian noise added to the one-hot embedding before
    // normalization.
    double noise_sigma = 0.05;
    // Assignment probability for non-mandatory slots.
    double p_optional_present = 0.5;
    // Noisy embedding variants sharing one identity.
    int images_per_identity = 1;
};

class Gallery {
public:
    AttributeSchema schema;
    std::vector<PersonRecord> persons;
    std::vector<float> embeddings;  // m x dim, row-major
    std::size_t dim = 0;

    std::size_t size() const { return persons.size(); }

    std::span<const float> row(std::size_t i) const {
        return {embeddings.data() + i * dim, dim};
    }

    std::optional<std::size_t> index_of(const std::string& person_id) const;

    // Gallery indices of all persons sharing `identity`.
    const std::vector<std::size_t>& identity_members(const std::string& identity) const;

    // Validates rows (finite, non-zero norm) and builds the id/identity
    // indexes. Every construction path must call this; the gallery is
    // immutable afterwards.
    void finalize();

private:
    std::unordered_map<std::string, std::size_t> id_index_;
    std::unordered_map<std::string, std::vector<std::size_t>> identity_index_;
};

// One-hot encoding of an attribute assignment, L2-normalized, no noise.
std::vector<float> one_hot_embedding(const AttributeSchema& schema,
                                     const std::map<std::string, std::string>& attrs);

// Samples attributes, witness recall, and a (possibly noisy) embedding.
// Mandatory slots are always assigned; optional slots with probability
// p_optional_present. Requires 0 <= p_unknown < 1.
PersonRecord generate_person(Rng& rng, const AttributeSchema& schema, const GeneratorParams& params);

// identities * images_per_identity persons; images of one identity share
// attrs and witness recall and differ only in embedding noise.
Gallery generate_gallery(const AttributeSchema& schema, std::size_t identities,
                         const GeneratorParams& params, std::uint64_t seed);

// The witness's opening statement: coarse slots they can recall, rendered
// as a sentence plus the structured list. Empty recall falls back to a
// generic sentence with no observations.
InitialDescription coarse_description(const PersonRecord& person, const AttributeSchema& schema);

}  // namespace interid
