#include "interid/gallery_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "json.hpp"

#include "interid/errors.hpp"

namespace interid {

namespace {

using nlohmann::json;

constexpr char kMagic[6] = {'I', 'R', 'E', 'M', 'B', '1'};

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = {}) {
    std::ofstream out(path, mode);
    if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
    return out;
}

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode = {}) {
    std::ifstream in(path, mode);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    return in;
}

void put_u32le(std::ofstream& out, std::uint32_t v) {
    const char bytes[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                           static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
    out.write(bytes, 4);
}

std::uint32_t get_u32le(std::ifstream& in, const std::filesystem::path& path) {
    unsigned char bytes[4];
    if (!in.read(reinterpret_cast<char*>(bytes), 4))
        throw FormatError("truncated header in '" + path.string() + "'");
    return static_cast<std::uint32_t>(bytes[0]) | (static_cast<std::uint32_t>(bytes[1]) << 8) |
           (static_cast<std::uint32_t>(bytes[2]) << 16) | (static_cast<std::uint32_t>(bytes[3]) << 24);
}

}  // namespace

void save_schema(const AttributeSchema& schema, const std::filesystem::path& path) {
    json slots = json::array();
    for (const SlotSpec& s : schema.slots()) {
        slots.push_back({{"name", s.name},
                         {"values", s.values},
                         {"mandatory", s.mandatory},
                         {"coarse", s.coarse}});
    }
    auto out = open_out(path);
    out << json{{"slots", slots}}.dump(2) << '\n';
}

AttributeSchema load_schema(const std::filesystem::path& path) {
    auto in = open_in(path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ParseError("schema '" + path.string() + "': " + e.what());
    }
    if (!doc.contains("slots") || !doc["slots"].is_array())
        throw FormatError("schema '" + path.string() + "' has no slots array");
    std::vector<SlotSpec> slots;
    for (const json& s : doc["slots"]) {
        SlotSpec spec;
        spec.name = s.at("name").get<std::string>();
        spec.values = s.at("values").get<std::vector<std::string>>();
        spec.mandatory = s.value("mandatory", true);
        spec.coarse = s.value("coarse", false);
        slots.push_back(std::move(spec));
    }
    return AttributeSchema(std::move(slots));
}

void save_gallery(const Gallery& gallery, const std::filesystem::path& jsonl_path) {
    auto out = open_out(jsonl_path);
    for (const PersonRecord& p : gallery.persons) {
        json line = {{"id", p.id},
                     {"identity", p.identity},
                     {"attrs", p.attrs},
                     {"known", std::vector<std::string>(p.witness_known.begin(), p.witness_known.end())}};
        out << line.dump() << '\n';
    }
}

void save_embeddings(const Gallery& gallery, const std::filesystem::path& path) {
    auto out = open_out(path, std::ios::binary);
    out.write(kMagic, sizeof(kMagic));
    put_u32le(out, static_cast<std::uint32_t>(gallery.size()));
    put_u32le(out, static_cast<std::uint32_t>(gallery.dim));
    static_assert(sizeof(float) == 4);
    // Host is little-endian; values are stored verbatim.
    out.write(reinterpret_cast<const char*>(gallery.embeddings.data()),
              static_cast<std::streamsize>(gallery.embeddings.size() * sizeof(float)));
}

EmbeddingMatrix load_embeddings(const std::filesystem::path& path) {
    auto in = open_in(path, std::ios::binary);
    char magic[6];
    if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw FormatError("'" + path.string() + "' is not an embedding file (bad magic)");
    EmbeddingMatrix m;
    m.count = get_u32le(in, path);
    m.dim = get_u32le(in, path);
    m.values.resize(m.count * m.dim);
    if (!in.read(reinterpret_cast<char*>(m.values.data()),
                 static_cast<std::streamsize>(m.values.size() * sizeof(float))))
        throw FormatError("'" + path.string() + "' truncated: expected " +
                          std::to_string(m.count * m.dim) + " f32 values");
    return m;
}

Gallery load_gallery(const AttributeSchema& schema, const std::filesystem::path& jsonl_path,
                     const std::filesystem::path* embeddings_path, bool synthesize_missing) {
    Gallery gallery;
    gallery.schema = schema;

    auto in = open_in(jsonl_path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json doc;
        try {
            doc = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError("'" + jsonl_path.string() + "' line " + std::to_string(line_no) + ": " +
                             e.what());
        }
        PersonRecord p;
        try {
            p.id = doc.at("id").get<std::string>();
            p.identity = doc.at("identity").get<std::string>();
            p.attrs = doc.at("attrs").get<std::map<std::string, std::string>>();
            for (const auto& k : doc.at("known")) p.witness_known.insert(k.get<std::string>());
        } catch (const json::exception& e) {
            throw ParseError("'" + jsonl_path.string() + "' line " + std::to_string(line_no) + ": " +
                             e.what());
        }
        for (const auto& [slot, value] : p.attrs) {
            (void)schema.coordinate(slot, value);  // SchemaError on unknown pairs
        }
        for (const std::string& k : p.witness_known) {
            if (!p.attrs.contains(k))
                throw ParseError("'" + jsonl_path.string() + "' line " + std::to_string(line_no) +
                                 ": known slot '" + k + "' is not assigned");
        }
        gallery.persons.push_back(std::move(p));
    }
    if (gallery.persons.empty()) throw DataError("'" + jsonl_path.string() + "' holds no persons");

    if (embeddings_path != nullptr) {
        EmbeddingMatrix m = load_embeddings(*embeddings_path);
        if (m.count != gallery.persons.size())
            throw FormatError("embedding count " + std::to_string(m.count) + " != persons " +
                              std::to_string(gallery.persons.size()));
        if (m.dim != schema.dimension())
            throw FormatError("embedding dim " + std::to_string(m.dim) + " != schema dim " +
                              std::to_string(schema.dimension()));
        gallery.dim = m.dim;
        gallery.embeddings = std::move(m.values);
        for (std::size_t i = 0; i < gallery.persons.size(); ++i) {
            auto row = gallery.row(i);
            gallery.persons[i].embedding.assign(row.begin(), row.end());
        }
    } else if (synthesize_missing) {
        gallery.dim = schema.dimension();
        gallery.embeddings.reserve(gallery.persons.size() * gallery.dim);
        for (PersonRecord& p : gallery.persons) {
            p.embedding = one_hot_embedding(schema, p.attrs);
            gallery.embeddings.insert(gallery.embeddings.end(), p.embedding.begin(), p.embedding.end());
        }
    } else {
        throw DataError("no embeddings given for '" + jsonl_path.string() +
                        "' and synthesis not requested");
    }
    gallery.finalize();
    return gallery;
}

}  // namespace interid
