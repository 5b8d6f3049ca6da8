#pragma once
// Attribute schema: the ordered slot/vocabulary definition a gallery is
// built over. Each slot is one aspect of a person (shirt color, shoes, ...)
// and contributes |vocabulary| coordinates to the one-hot embedding space.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "interid/errors.hpp"

namespace interid {

struct SlotSpec {
    std::string name;
    std::vector<std::string> values;
    bool mandatory = true;
    // Coarse slots feed the initial description; the rest surface only
    // through questioning.
    bool coarse = false;
};

class AttributeSchema {
public:
    AttributeSchema() = default;

    // Validates: unique slot names, non-empty vocabularies, at least one
    // coarse slot, positive total dimension.
    explicit AttributeSchema(std::vector<SlotSpec> slots);

    const std::vector<SlotSpec>& slots() const { return slots_; }
    std::size_t slot_count() const { return slots_.size(); }
    const SlotSpec& slot(std::size_t i) const { return slots_[i]; }

    // Total one-hot dimension: sum of vocabulary sizes.
    std::size_t dimension() const { return dimension_; }

    std::size_t slot_offset(std::size_t slot_idx) const { return offsets_[slot_idx]; }

    std::optional<std::size_t> slot_index(std::string_view name) const;

    // Index of `value` within the slot's vocabulary; SchemaError if absent.
    std::size_t value_index(std::size_t slot_idx, std::string_view value) const;

    // Flat one-hot coordinate of (slot, value); SchemaError on unknown pair.
    std::size_t coordinate(std::string_view slot_name, std::string_view value) const;

    std::size_t coarse_count() const;

private:
    std::vector<SlotSpec> slots_;
    std::vector<std::size_t> offsets_;
    std::unordered_map<std::string, std::size_t> by_name_;
    std::size_t dimension_ = 0;
};

// The stock 20-slot synthetic benchmark schema: 4-8 values per slot, 4
// coarse slots, all mandatory.
AttributeSchema default_benchmark_schema();

// Slot name rendered for sentence templates ("shirt_color" -> "shirt color").
std::string slot_phrase(std::string_view slot_name);

}  // namespace interid
