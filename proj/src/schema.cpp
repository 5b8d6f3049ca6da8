#include "interid/schema.hpp"

#include <unordered_set>

namespace interid {

AttributeSchema::AttributeSchema(std::vector<SlotSpec> slots) : slots_(std::move(slots)) {
    if (slots_.empty()) throw SchemaError("schema has no slots");
    offsets_.reserve(slots_.size());
    bool any_coarse = false;
    for (std::size_t i = 0; i < slots_.size(); ++i) {
        const SlotSpec& s = slots_[i];
        if (s.name.empty()) throw SchemaError("slot with empty name");
        if (s.values.empty()) throw SchemaError("slot '" + s.name + "' has empty vocabulary");
        std::unordered_set<std::string_view> seen;
        for (const std::string& v : s.values) {
            if (!seen.insert(v).second)
                throw SchemaError("slot '" + s.name + "' repeats value '" + v + "'");
        }
        if (!by_name_.emplace(s.name, i).second)
            throw SchemaError("duplicate slot name '" + s.name + "'");
        offsets_.push_back(dimension_);
        dimension_ += s.values.size();
        any_coarse = any_coarse || s.coarse;
    }
    if (!any_coarse) throw SchemaError("schema needs at least one coarse slot");
}

std::optional<std::size_t> AttributeSchema::slot_index(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
}

std::size_t AttributeSchema::value_index(std::size_t slot_idx, std::string_view value) const {
    const SlotSpec& s = slots_[slot_idx];
    for (std::size_t j = 0; j < s.values.size(); ++j) {
        if (s.values[j] == value) return j;
    }
    throw SchemaError("slot '" + s.name + "' has no value '" + std::string(value) + "'");
}

std::size_t AttributeSchema::coordinate(std::string_view slot_name, std::string_view value) const {
    auto idx = slot_index(slot_name);
    if (!idx) throw SchemaError("unknown slot '" + std::string(slot_name) + "'");
    return offsets_[*idx] + value_index(*idx, value);
}

std::size_t AttributeSchema::coarse_count() const {
    std::size_t n = 0;
    for (const SlotSpec& s : slots_) n += s.coarse ? 1 : 0;
    return n;
}

AttributeSchema default_benchmark_schema() {
    std::vector<SlotSpec> slots = {
        {"shirt_color", {"red", "blue", "green", "black", "white", "yellow", "gray", "purple"}, true, true},
        {"shirt_type", {"t-shirt", "hoodie", "dress shirt", "tank top", "polo", "sweater"}, true, true},
        {"pants_color", {"black", "blue", "gray", "beige", "white", "brown"}, true, true},
        {"pants_type", {"jeans", "shorts", "chinos", "sweatpants", "skirt"}, true, false},
        {"shoe_color", {"black", "white", "red", "blue", "brown", "green"}, true, false},
        {"shoe_type", {"sneakers", "boots", "sandals", "loafers", "heels"}, true, false},
        {"jacket", {"none", "denim jacket", "leather jacket", "raincoat", "blazer", "puffer"}, true, false},
        {"hat", {"none", "cap", "beanie", "sun hat", "hood up"}, true, false},
        {"bag", {"none", "backpack", "shoulder bag", "tote", "suitcase", "plastic bag"}, true, false},
        {"hair_color", {"black", "brown", "blonde", "gray", "red", "dyed blue"}, true, false},
        {"hair_length", {"bald", "short", "medium", "long"}, true, false},
        {"hair_style", {"straight", "curly", "ponytail", "bun", "braided"}, true, false},
        {"age_group", {"child", "teen", "twenties", "middle-aged", "elderly"}, true, true},
        {"build", {"slim", "average", "athletic", "heavy"}, true, false},
        {"posture", {"upright", "slouched", "leaning", "limping"}, true, false},
        {"glasses", {"none", "reading glasses", "sunglasses", "sports goggles"}, true, false},
        {"accessory", {"none", "watch", "scarf", "umbrella", "headphones", "phone in hand"}, true, false},
        {"logo", {"none", "chest logo", "back print", "sleeve stripe", "brand text"}, true, false},
        {"pattern", {"solid", "striped", "plaid", "floral", "graphic"}, true, false},
        {"surroundings", {"street", "mall", "park", "station", "parking lot", "lobby"}, true, false},
    };
    return AttributeSchema(std::move(slots));
}

std::string slot_phrase(std::string_view slot_name) {
    std::string out(slot_name);
    for (char& ch : out) {
        if (ch == '_') ch = ' ';
    }
    return out;
}

}  // namespace interid
