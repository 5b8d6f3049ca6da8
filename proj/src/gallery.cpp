#include "interid/gallery.hpp"

#include <cmath>

#include "interid/errors.hpp"

namespace interid {

std::optional<std::size_t> Gallery::index_of(const std::string& person_id) const {
    auto it = id_index_.find(person_id);
    if (it == id_index_.end()) return std::nullopt;
    return it->second;
}

const std::vector<std::size_t>& Gallery::identity_members(const std::string& identity) const {
    static const std::vector<std::size_t> kEmpty;
    auto it = identity_index_.find(identity);
    return it == identity_index_.end() ? kEmpty : it->second;
}

void Gallery::finalize() {
    if (persons.empty()) throw DataError("gallery is empty");
    if (dim == 0 || embeddings.size() != persons.size() * dim)
        throw DimensionError("gallery embedding matrix is " + std::to_string(embeddings.size()) +
                             " floats, expected " + std::to_string(persons.size()) + " x " +
                             std::to_string(dim));
    for (std::size_t i = 0; i < persons.size(); ++i) {
        double norm_sq = 0.0;
        for (float v : row(i)) {
            if (!std::isfinite(v)) throw NumericError("non-finite embedding in row " + std::to_string(i));
            norm_sq += static_cast<double>(v) * v;
        }
        if (norm_sq <= 0.0) throw FormatError("zero-norm embedding in row " + std::to_string(i));
    }
    id_index_.clear();
    identity_index_.clear();
    for (std::size_t i = 0; i < persons.size(); ++i) {
        if (!id_index_.emplace(persons[i].id, i).second)
            throw DataError("duplicate person id '" + persons[i].id + "'");
        identity_index_[persons[i].identity].push_back(i);
    }
}

std::vector<float> one_hot_embedding(const AttributeSchema& schema,
                                     const std::map<std::string, std::string>& attrs) {
    std::vector<float> vec(schema.dimension(), 0.0f);
    std::size_t ones = 0;
    for (const auto& [slot, value] : attrs) {
        vec[schema.coordinate(slot, value)] = 1.0f;
        ++ones;
    }
    if (ones > 0) {
        const float inv_norm = 1.0f / std::sqrt(static_cast<float>(ones));
        for (float& v : vec) v *= inv_norm;
    }
    return vec;
}

namespace {

// Adds N(0, sigma^2) noise to a one-hot assignment vector and normalizes.
std::vector<float> noisy_embedding(const AttributeSchema& schema,
                                   const std::map<std::string, std::string>& attrs, Rng& rng,
                                   double sigma) {
    std::vector<float> vec(schema.dimension(), 0.0f);
    for (const auto& [slot, value] : attrs) vec[schema.coordinate(slot, value)] = 1.0f;
    if (sigma > 0.0) {
        for (float& v : vec) v += static_cast<float>(sigma * rng.normal());
    }
    double norm_sq = 0.0;
    for (float v : vec) norm_sq += static_cast<double>(v) * v;
    if (norm_sq > 0.0) {
        const float inv_norm = static_cast<float>(1.0 / std::sqrt(norm_sq));
        for (float& v : vec) v *= inv_norm;
    }
    return vec;
}

void sample_attrs(Rng& rng, const AttributeSchema& schema, const GeneratorParams& params,
                  PersonRecord& person) {
    for (const SlotSpec& slot : schema.slots()) {
        const bool assigned = slot.mandatory || rng.bernoulli(params.p_optional_present);
        if (!assigned) continue;
        const std::size_t v = static_cast<std::size_t>(rng.uniform_int(slot.values.size()));
        person.attrs[slot.name] = slot.values[v];
    }
    for (const SlotSpec& slot : schema.slots()) {
        auto it = person.attrs.find(slot.name);
        if (it == person.attrs.end()) continue;
        if (!rng.bernoulli(params.p_unknown)) person.witness_known.insert(slot.name);
    }
}

}  // namespace

PersonRecord generate_person(Rng& rng, const AttributeSchema& schema, const GeneratorParams& params) {
    if (schema.slot_count() == 0) throw SchemaError("empty schema");
    if (params.p_unknown < 0.0 || params.p_unknown >= 1.0)
        throw ArgumentError("p_unknown must be in [0, 1)");
    PersonRecord person;
    sample_attrs(rng, schema, params, person);
    person.embedding = noisy_embedding(schema, person.attrs, rng, params.noise_sigma);
    return person;
}

Gallery generate_gallery(const AttributeSchema& schema, std::size_t identities,
                         const GeneratorParams& params, std::uint64_t seed) {
    if (identities == 0) throw ArgumentError("need at least one identity");
    if (params.images_per_identity < 1) throw ArgumentError("images_per_identity must be >= 1");
    Rng rng(seed);
    Gallery gallery;
    gallery.schema = schema;
    gallery.dim = schema.dimension();
    gallery.persons.reserve(identities * params.images_per_identity);
    gallery.embeddings.reserve(identities * params.images_per_identity * gallery.dim);
    for (std::size_t i = 0; i < identities; ++i) {
        PersonRecord base = generate_person(rng, schema, params);
        base.identity = "id" + std::to_string(i);
        for (int img = 0; img < params.images_per_identity; ++img) {
            PersonRecord person = base;
            person.id = base.identity + "_" + std::to_string(img);
            if (img > 0) person.embedding = noisy_embedding(schema, person.attrs, rng, params.noise_sigma);
            gallery.embeddings.insert(gallery.embeddings.end(), person.embedding.begin(),
                                      person.embedding.end());
            gallery.persons.push_back(std::move(person));
        }
    }
    gallery.finalize();
    return gallery;
}

InitialDescription coarse_description(const PersonRecord& person, const AttributeSchema& schema) {
    InitialDescription initial;
    std::string sentence;
    for (const SlotSpec& slot : schema.slots()) {
        if (!slot.coarse) continue;
        if (!person.witness_known.contains(slot.name)) continue;
        auto it = person.attrs.find(slot.name);
        if (it == person.attrs.end()) continue;
        initial.observations.push_back({slot.name, it->second, +1});
        if (!sentence.empty()) sentence += "; ";
        sentence += "their " + slot_phrase(slot.name) + " was " + it->second;
    }
    if (initial.observations.empty()) {
        initial.text = "I saw a person, but I can't recall any details.";
    } else {
        initial.text = "I saw a person; " + sentence + ".";
    }
    return initial;
}

}  // namespace interid
