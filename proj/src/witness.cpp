#include "interid/witness.hpp"

#include <algorithm>
#include <cctype>

#include "interid/errors.hpp"

namespace interid {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

Answer unknown_answer() {
    Answer a;
    a.text = "I don't know.";
    a.unknown = true;
    return a;
}

}  // namespace

Answer answer_question(const Question& q, const PersonRecord& person, const AttributeSchema& schema) {
    auto slot_idx = schema.slot_index(q.slot);
    if (!slot_idx) throw SchemaError("question about unknown slot '" + q.slot + "'");
    const SlotSpec& spec = schema.slot(*slot_idx);
    const std::string phrase = slot_phrase(q.slot);

    const auto attr = person.attrs.find(q.slot);
    const bool assigned = attr != person.attrs.end();

    if (!assigned) {
        // Optional attribute the person does not have. A yes/no assumption
        // can be denied outright; other types carry no information.
        if (q.qtype == QuestionType::yesno && !spec.mandatory) {
            if (!q.assumed_value) throw ArgumentError("yes/no question without an assumed value");
            Answer a;
            a.text = "No, the person didn't have any " + phrase + ".";
            a.observations.push_back({q.slot, *q.assumed_value, -1});
            return a;
        }
        return unknown_answer();
    }

    if (!person.witness_known.contains(q.slot)) return unknown_answer();
    const std::string& true_value = attr->second;

    Answer a;
    switch (q.qtype) {
        case QuestionType::descriptive:
            a.text = "The person's " + phrase + " was " + true_value + ".";
            a.observations.push_back({q.slot, true_value, +1});
            break;
        case QuestionType::yesno: {
            if (!q.assumed_value) throw ArgumentError("yes/no question without an assumed value");
            if (*q.assumed_value == true_value) {
                a.text = "Yes, the person's " + phrase + " was " + true_value + ".";
                a.observations.push_back({q.slot, true_value, +1});
            } else {
                a.text = "No, the person's " + phrase + " was not " + *q.assumed_value + "; it was " +
                         true_value + ".";
                a.observations.push_back({q.slot, *q.assumed_value, -1});
                a.observations.push_back({q.slot, true_value, +1});
            }
            break;
        }
        case QuestionType::mcq:
            a.text = "The person's " + phrase + " was " + true_value + ".";
            a.observations.push_back({q.slot, true_value, +1});
            break;
    }
    return a;
}

Answer parse_answer_text(const Question& q, const std::string& text, const AttributeSchema& schema) {
    auto slot_idx = schema.slot_index(q.slot);
    if (!slot_idx) throw SchemaError("question about unknown slot '" + q.slot + "'");
    const SlotSpec& spec = schema.slot(*slot_idx);
    const std::string haystack = lower(text);

    if (haystack.find("i don't know") != std::string::npos ||
        haystack.find("i dont know") != std::string::npos)
        return unknown_answer();

    // First vocabulary value mentioned in the text, longest match first so
    // "dark brown" is not shadowed by "brown".
    std::vector<const std::string*> by_length;
    for (const std::string& v : spec.values) by_length.push_back(&v);
    std::sort(by_length.begin(), by_length.end(),
              [](const std::string* a, const std::string* b) { return a->size() > b->size(); });
    auto find_value = [&](const std::string& exclude) -> const std::string* {
        for (const std::string* v : by_length) {
            if (*v == exclude) continue;
            if (haystack.find(lower(*v)) != std::string::npos) return v;
        }
        return nullptr;
    };

    Answer a;
    a.text = text;
    if (q.qtype == QuestionType::yesno && q.assumed_value) {
        const bool negative = haystack.rfind("no", 0) == 0;
        if (negative) {
            a.observations.push_back({q.slot, *q.assumed_value, -1});
            if (const std::string* corrected = find_value(*q.assumed_value))
                a.observations.push_back({q.slot, *corrected, +1});
            return a;
        }
        if (haystack.rfind("yes", 0) == 0) {
            a.observations.push_back({q.slot, *q.assumed_value, +1});
            return a;
        }
    }
    if (const std::string* value = find_value("")) {
        a.observations.push_back({q.slot, *value, +1});
        return a;
    }
    a.unknown = true;
    return a;
}

}  // namespace interid
