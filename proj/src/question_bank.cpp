#include "interid/question_bank.hpp"

#include <cmath>
#include <fstream>

#include "interid/errors.hpp"
#include "interid/json_io.hpp"

namespace interid {

std::vector<SubCaption> decompose(const PersonRecord& person, const InitialDescription& initial,
                                  const AttributeSchema& schema) {
    std::vector<SubCaption> subs;
    for (const SlotSpec& slot : schema.slots()) {
        if (!person.witness_known.contains(slot.name)) continue;
        bool covered = false;
        for (const Observation& obs : initial.observations) {
            if (obs.slot == slot.name) {
                covered = true;
                break;
            }
        }
        if (covered) continue;
        auto it = person.attrs.find(slot.name);
        if (it == person.attrs.end()) continue;
        subs.push_back({slot.name, it->second, false});
    }
    return subs;
}

namespace {

std::string render_descriptive(const std::string& slot) {
    return "Can you describe the person's " + slot_phrase(slot) + "?";
}

std::string render_yesno(const std::string& slot, const std::string& assumed) {
    return "Was the person's " + slot_phrase(slot) + " " + assumed + "?";
}

std::string render_mcq(const std::string& slot, const std::vector<std::string>& options) {
    static const char* kLetters[] = {"A", "B", "C", "D"};
    std::string text = "Which of these matches the person's " + slot_phrase(slot) + "?";
    for (std::size_t i = 0; i < options.size(); ++i) {
        text += std::string(" ") + kLetters[i] + ") " + options[i];
    }
    return text;
}

Question make_yesno(int id, const SubCaption& sub, const AttributeSchema& schema, Rng& rng) {
    Question q;
    q.id = id;
    q.qtype = QuestionType::yesno;
    q.slot = sub.slot;
    const SlotSpec& spec = schema.slot(*schema.slot_index(sub.slot));
    // Balanced true/false assumptions; a single-value vocabulary leaves no
    // wrong value to assume.
    const bool truthful = rng.bernoulli(0.5) || spec.values.size() == 1;
    if (truthful) {
        q.assumed_value = sub.value;
    } else {
        const std::size_t true_idx = schema.value_index(*schema.slot_index(sub.slot), sub.value);
        std::size_t pick = static_cast<std::size_t>(rng.uniform_int(spec.values.size() - 1));
        if (pick >= true_idx) ++pick;
        q.assumed_value = spec.values[pick];
    }
    q.text = render_yesno(q.slot, *q.assumed_value);
    return q;
}

}  // namespace

std::vector<Question> build_bank(std::span<const SubCaption> subcaptions, const QuestionMix& mix,
                                 const AttributeSchema& schema, Rng& rng) {
    if (mix.descriptive < 0.0 || mix.yesno < 0.0 || mix.mcq < 0.0 ||
        std::abs(mix.descriptive + mix.yesno + mix.mcq - 1.0) > 1e-9)
        throw ArgumentError("question mix must be non-negative and sum to 1");

    std::vector<Question> bank;
    bank.reserve(subcaptions.size());
    int next_id = 0;
    for (const SubCaption& sub : subcaptions) {
        auto slot_idx = schema.slot_index(sub.slot);
        if (!slot_idx) throw SchemaError("sub-caption slot '" + sub.slot + "' not in schema");
        const SlotSpec& spec = schema.slot(*slot_idx);

        const double u = rng.uniform();
        if (u < mix.descriptive) {
            Question q;
            q.id = next_id++;
            q.qtype = QuestionType::descriptive;
            q.slot = sub.slot;
            q.text = render_descriptive(sub.slot);
            bank.push_back(std::move(q));
        } else if (u < mix.descriptive + mix.yesno || spec.values.size() < 4) {
            bank.push_back(make_yesno(next_id++, sub, schema, rng));
        } else {
            Question q;
            q.id = next_id++;
            q.qtype = QuestionType::mcq;
            q.slot = sub.slot;
            const std::size_t true_idx = schema.value_index(*slot_idx, sub.value);
            std::vector<std::size_t> others;
            others.reserve(spec.values.size() - 1);
            for (std::size_t j = 0; j < spec.values.size(); ++j) {
                if (j != true_idx) others.push_back(j);
            }
            rng.shuffle(others);
            std::vector<std::string> options = {sub.value, spec.values[others[0]],
                                                spec.values[others[1]], spec.values[others[2]]};
            rng.shuffle(options);
            q.options = std::move(options);
            q.text = render_mcq(q.slot, q.options);
            bank.push_back(std::move(q));
        }
    }
    return bank;
}

void export_bank(std::span<const Question> bank, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
    for (const Question& q : bank) out << question_to_json(q).dump() << '\n';
}

}  // namespace interid
