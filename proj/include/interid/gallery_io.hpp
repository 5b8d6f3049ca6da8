#pragma once
// File formats:
//   gallery:    JSONL, one person per line
//               {"id": str, "identity": str, "attrs": {slot: value}, "known": [slot...]}
//   embeddings: binary, magic "IREMB1", u32-le count m, u32-le dim d,
//               then m*d little-endian f32 values row-major
//   schema:     JSON {"slots": [{"name", "values", "mandatory", "coarse"}...]}

#include <filesystem>
#include <vector>

#include "interid/gallery.hpp"
#include "interid/schema.hpp"

namespace interid {

void save_schema(const AttributeSchema& schema, const std::filesystem::path& path);
AttributeSchema load_schema(const std::filesystem::path& path);

void save_gallery(const Gallery& gallery, const std::filesystem::path& jsonl_path);

void save_embeddings(const Gallery& gallery, const std::filesystem::path& path);

// Raw embedding matrix; FormatError on bad magic or truncated payload.
struct EmbeddingMatrix {
    std::size_t count = 0;
    std::size_t dim = 0;
    std::vector<float> values;
};
EmbeddingMatrix load_embeddings(const std::filesystem::path& path);

// Loads persons from JSONL and attaches embeddings. With an embeddings file
// the declared dim must equal the schema dimension unless the schema is
// bypassed (external encoders); without one, synthesize_missing must be set
// and embeddings are the noiseless one-hot encodings of the attrs.
Gallery load_gallery(const AttributeSchema& schema, const std::filesystem::path& jsonl_path,
                     const std::filesystem::path* embeddings_path = nullptr,
                     bool synthesize_missing = false);

}  // namespace interid
