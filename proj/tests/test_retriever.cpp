#include <cmath>

#include "doctest.h"

#include "interid/errors.hpp"
#include "interid/retriever.hpp"
#include "helpers.hpp"

using namespace interid;
using testing_support::make_embedding_gallery;
using testing_support::make_gallery;

namespace {

DialogueState dialogue_with(std::vector<Observation> initial_obs,
                            std::vector<Answer> answers = {}) {
    DialogueState d;
    d.initial.observations = std::move(initial_obs);
    for (Answer& a : answers) d.turns.emplace_back(Question{}, std::move(a));
    return d;
}

}  // namespace

TEST_CASE("empty dialogue encodes to the zero vector") {
    const auto schema = testing_support::tiny_schema();
    const auto z = encode_context(DialogueState{}, schema);
    CHECK(z.vec.size() == schema.dimension());
    CHECK(z.is_zero());
}

TEST_CASE("single observation against a two-slot one-hot person") {
    const auto schema = testing_support::tiny_schema();
    const auto z = encode_context(dialogue_with({{"shirt", "red", +1}}), schema);
    const auto person = one_hot_embedding(schema, {{"shirt", "red"}, {"shoes", "white"}});
    CHECK(cosine(z.vec, person) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("an observation and a later denial cancel coordinate-wise") {
    const auto schema = testing_support::tiny_schema();
    Answer denial;
    denial.observations = {{"shirt", "red", -1}};
    const auto z = encode_context(dialogue_with({{"shirt", "red", +1}}, {denial}), schema);
    CHECK(z.is_zero());
}

TEST_CASE("unknown answers contribute nothing") {
    const auto schema = testing_support::tiny_schema();
    Answer unknown;
    unknown.unknown = true;
    unknown.observations = {{"shirt", "red", +1}};  // ignored under the flag
    const auto z = encode_context(dialogue_with({}, {unknown}), schema);
    CHECK(z.is_zero());
}

TEST_CASE("observations about unknown slots or values are schema errors") {
    const auto schema = testing_support::tiny_schema();
    CHECK_THROWS_AS(encode_context(dialogue_with({{"watch", "gold", +1}}), schema), SchemaError);
    CHECK_THROWS_AS(encode_context(dialogue_with({{"shirt", "polka", +1}}), schema), SchemaError);
}

TEST_CASE("softmax of similarities (1, 0) matches the closed form") {
    const double sims[] = {1.0, 0.0};
    const auto probs = softmax(sims);
    CHECK(probs[0] == doctest::Approx(0.7310585786300049).epsilon(1e-12));
    CHECK(probs[1] == doctest::Approx(0.2689414213699951).epsilon(1e-12));
}

TEST_CASE("match probabilities for orthogonal rows hit the closed form") {
    // Row 0 aligned with the context (sim 1), row 1 orthogonal (sim 0).
    const auto schema = testing_support::tiny_schema();
    std::vector<float> row0(schema.dimension(), 0.0f), row1(schema.dimension(), 0.0f);
    row0[schema.coordinate("shirt", "red")] = 1.0f;
    row1[schema.coordinate("shoes", "white")] = 1.0f;
    const Gallery gallery = make_embedding_gallery(schema, {row0, row1});

    const auto z = encode_context(dialogue_with({{"shirt", "red", +1}}), schema);
    const auto result = match_probabilities(z, gallery);
    CHECK(result.similarities[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(result.similarities[1] == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(result.probabilities[0] == doctest::Approx(0.7310585786300049).epsilon(1e-9));
    CHECK(result.probabilities[1] == doctest::Approx(0.2689414213699951).epsilon(1e-9));
    CHECK(result.ranked_ids == std::vector<std::size_t>{0, 1});
}

TEST_CASE("softmax is shift invariant") {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> scores(8);
        for (double& s : scores) s = rng.uniform() * 4.0 - 2.0;
        auto base = softmax(scores);
        for (double& s : scores) s += 123.456;
        auto shifted = softmax(scores);
        for (std::size_t i = 0; i < base.size(); ++i) {
            CHECK(std::abs(base[i] - shifted[i]) < 1e-9);
        }
    }
}

TEST_CASE("match probabilities are positive and sum to one") {
    const auto schema = testing_support::mid_schema();
    const Gallery gallery = generate_gallery(schema, 50, GeneratorParams{}, 17);
    DialogueState d;
    d.initial.observations = {{"shirt", "red", +1}, {"pants", "jeans", +1}};
    const auto result = match_probabilities(encode_context(d, schema), gallery);
    double sum = 0.0;
    for (double p : result.probabilities) {
        CHECK(p > 0.0);
        sum += p;
    }
    CHECK(std::abs(sum - 1.0) < 1e-9);
}

TEST_CASE("identical gallery rows yield uniform probabilities") {
    const auto schema = testing_support::tiny_schema();
    const auto row = one_hot_embedding(schema, {{"shirt", "red"}, {"shoes", "white"}});
    const Gallery gallery = make_embedding_gallery(schema, {row, row, row});
    DialogueState d;
    d.initial.observations = {{"shirt", "red", +1}};
    const auto result = match_probabilities(encode_context(d, schema), gallery);
    for (double p : result.probabilities) {
        CHECK(p == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    }
}

TEST_CASE("zero context yields uniform probabilities and index order") {
    const auto schema = testing_support::mid_schema();
    const Gallery gallery = generate_gallery(schema, 4, GeneratorParams{}, 5);
    const auto result = match_probabilities(encode_context(DialogueState{}, schema), gallery);
    for (double p : result.probabilities) {
        CHECK(p == doctest::Approx(0.25).epsilon(1e-12));
    }
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(result.ranked_ids[i] == i);
    }
}

TEST_CASE("dimension mismatch is rejected") {
    const auto schema = testing_support::tiny_schema();
    const Gallery gallery = generate_gallery(schema, 3, GeneratorParams{}, 5);
    ContextEmbedding z;
    z.vec = {1.0f, 0.0f};  // wrong length
    CHECK_THROWS_AS(match_probabilities(z, gallery), DimensionError);
}

TEST_CASE("NaN context is a numeric error") {
    const auto schema = testing_support::tiny_schema();
    const Gallery gallery = generate_gallery(schema, 3, GeneratorParams{}, 5);
    ContextEmbedding z;
    z.vec.assign(schema.dimension(), 0.0f);
    z.vec[0] = std::nanf("");
    CHECK_THROWS_AS(match_probabilities(z, gallery), NumericError);
}

TEST_CASE("rank_of: strict argmax ranks first") {
    const auto schema = testing_support::tiny_schema();
    const Gallery gallery = make_gallery(schema, {
        {{"shirt", "red"}, {"shoes", "white"}},
        {{"shirt", "blue"}, {"shoes", "black"}},
    });
    DialogueState d;
    d.initial.observations = {{"shirt", "red", +1}};
    const auto z = encode_context(d, schema);
    CHECK(rank_of(std::size_t{0}, z, gallery) == 1);
    CHECK(rank_of("p1", z, gallery) == 2);
}

TEST_CASE("rank_of breaks ties by ascending index") {
    const auto schema = testing_support::tiny_schema();
    const auto row = one_hot_embedding(schema, {{"shirt", "red"}, {"shoes", "white"}});
    const Gallery gallery = make_embedding_gallery(schema, {row, row});
    DialogueState d;
    d.initial.observations = {{"shirt", "red", +1}};
    const auto z = encode_context(d, schema);
    CHECK(rank_of(std::size_t{1}, z, gallery) == 2);
    CHECK(rank_of(std::size_t{0}, z, gallery) == 1);
}

TEST_CASE("rank_of on an unknown id is a not-found error") {
    const auto schema = testing_support::tiny_schema();
    const Gallery gallery = generate_gallery(schema, 3, GeneratorParams{}, 5);
    const auto z = encode_context(DialogueState{}, schema);
    CHECK_THROWS_AS(rank_of("ghost", z, gallery), NotFoundError);
}

TEST_CASE("rank_of agrees with a full-sort oracle on a random gallery") {
    const auto schema = testing_support::mid_schema();
    const Gallery gallery = generate_gallery(schema, 100, GeneratorParams{}, 23);
    DialogueState d;
    d.initial.observations = {{"shirt", "red", +1}, {"hat", "cap", +1}};
    const auto z = encode_context(d, schema);

    std::vector<double> sims(gallery.size());
    for (std::size_t i = 0; i < gallery.size(); ++i) {
        sims[i] = testing_support::cosine_oracle(
            std::vector<float>(z.vec.begin(), z.vec.end()),
            std::vector<float>(gallery.row(i).begin(), gallery.row(i).end()));
    }
    for (std::size_t target = 0; target < gallery.size(); target += 7) {
        CHECK(rank_of(target, z, gallery) == testing_support::rank_oracle(sims, target));
    }
}

TEST_CASE("scaling the context or rows leaves the ranking unchanged") {
    const auto schema = testing_support::mid_schema();
    const Gallery gallery = generate_gallery(schema, 40, GeneratorParams{}, 29);
    DialogueState d;
    d.initial.observations = {{"pants", "jeans", +1}};
    auto z = encode_context(d, schema);
    const auto base = match_probabilities(z, gallery);

    ContextEmbedding scaled;
    scaled.vec = z.vec;
    for (float& v : scaled.vec) v *= 37.5f;
    const auto after = match_probabilities(scaled, gallery);
    CHECK(after.ranked_ids == base.ranked_ids);
    for (std::size_t i = 0; i < base.similarities.size(); ++i) {
        CHECK(std::abs(after.similarities[i] - base.similarities[i]) < 1e-7);
    }

    Gallery scaled_gallery = gallery;
    for (float& v : scaled_gallery.embeddings) v *= 4.0f;
    scaled_gallery.finalize();
    const auto rows_scaled = match_probabilities(z, scaled_gallery);
    CHECK(rows_scaled.ranked_ids == base.ranked_ids);
}

TEST_CASE("rank one is equivalent to being ranked first") {
    const auto schema = testing_support::mid_schema();
    const Gallery gallery = generate_gallery(schema, 60, GeneratorParams{}, 31);
    DialogueState d;
    d.initial.observations = {{"shirt", "blue", +1}, {"shoes", "brown", +1}};
    const auto z = encode_context(d, schema);
    const auto result = match_probabilities(z, gallery);
    for (std::size_t target = 0; target < gallery.size(); target += 5) {
        const bool is_first = result.ranked_ids[0] == target;
        CHECK((rank_of(target, z, gallery) == 1) == is_first);
    }
}

TEST_CASE("top-k pool: k = m returns the whole gallery in ranked order") {
    const auto schema = testing_support::mid_schema();
    const Gallery gallery = generate_gallery(schema, 25, GeneratorParams{}, 37);
    DialogueState d;
    d.initial.observations = {{"hair", "short", +1}};
    const auto z = encode_context(d, schema);
    const auto pool = retrieve_topk(z, gallery, 25);
    const auto result = match_probabilities(z, gallery);
    CHECK(pool.indices == result.ranked_ids);
    CHECK_FALSE(pool.clamped);
    for (std::size_t i = 1; i < pool.size(); ++i) {
        CHECK(pool.similarities[i - 1] >= pool.similarities[i]);
    }
}

TEST_CASE("top-k pool: k = 1 is the argmax person") {
    const auto schema = testing_support::mid_schema();
    const Gallery gallery = generate_gallery(schema, 25, GeneratorParams{}, 41);
    DialogueState d;
    d.initial.observations = {{"bag", "tote", +1}};
    const auto z = encode_context(d, schema);
    const auto pool = retrieve_topk(z, gallery, 1);
    REQUIRE(pool.size() == 1);
    CHECK(pool.indices[0] == match_probabilities(z, gallery).ranked_ids[0]);
}

TEST_CASE("top-k pool clamps to the gallery with a warning flag") {
    const auto schema = testing_support::tiny_schema();
    const Gallery gallery = generate_gallery(schema, 5, GeneratorParams{}, 43);
    const auto pool = retrieve_topk(encode_context(DialogueState{}, schema), gallery, 12);
    CHECK(pool.size() == 5);
    CHECK(pool.clamped);
}

TEST_CASE("fusing identical vectors is the identity") {
    const std::vector<double> sims = {0.1, 0.7, 0.4};
    CHECK(fuse_scores(sims, sims) == sims);
}

TEST_CASE("fusing mirrored vectors gives the midpoint") {
    const std::vector<double> a = {0.2, 0.8};
    const std::vector<double> b = {0.8, 0.2};
    const auto fused = fuse_scores(a, b);
    CHECK(fused[0] == doctest::Approx(0.5));
    CHECK(fused[1] == doctest::Approx(0.5));
}

TEST_CASE("fused argmax can differ from both inputs") {
    const std::vector<double> a = {0.9, 0.0, 0.5};   // argmax 0
    const std::vector<double> b = {0.0, 0.9, 0.8};   // argmax 1
    const auto fused = fuse_scores(a, b);            // (0.45, 0.45, 0.65)
    std::size_t argmax = 0;
    for (std::size_t i = 1; i < fused.size(); ++i) {
        if (fused[i] > fused[argmax]) argmax = i;
    }
    CHECK(argmax == 2);
}

TEST_CASE("fusing different lengths is a dimension error") {
    const std::vector<double> a = {0.1, 0.2};
    const std::vector<double> b = {0.1};
    CHECK_THROWS_AS(fuse_scores(a, b), DimensionError);
}
