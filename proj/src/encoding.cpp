#include "seqa/encoding.hpp"

#include "seqa/csv.hpp"
#include "seqa/error.hpp"

namespace seqa {

EncodingScheme EncodingScheme::identity(const EventAlphabet& alphabet, const std::string& name) {
    EncodingScheme s;
    s.name = name;
    for (const auto& code : alphabet.codes()) s.mapping[code] = code;
    return s;
}

static EncodingScheme build_scheme(const csv::Table& t, const std::string& name,
                                   const std::string& origin) {
    int src = -1, tgt = -1, desc = -1;
    for (std::size_t c = 0; c < t.header.size(); ++c) {
        if (t.header[c] == "source") src = static_cast<int>(c);
        else if (t.header[c] == "target") tgt = static_cast<int>(c);
        else if (t.header[c] == "description") desc = static_cast<int>(c);
    }
    if (src < 0 || tgt < 0)
        throw DataError(origin + ": encoding scheme needs source,target[,description] header");
    EncodingScheme s;
    s.name = name;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        const std::string where = origin + ":" + std::to_string(t.line_numbers[r]);
        if (row.size() != t.header.size()) throw DataError(where + ": field count mismatch");
        const std::string& from = row[static_cast<std::size_t>(src)];
        const std::string& to = row[static_cast<std::size_t>(tgt)];
        if (from.empty() || to.empty()) throw DataError(where + ": empty source or target code");
        if (!s.mapping.emplace(from, to).second)
            throw DataError(where + ": duplicate source code '" + from + "'");
        if (desc >= 0) s.descriptions[from] = row[static_cast<std::size_t>(desc)];
    }
    return s;
}

EncodingScheme load_encoding_scheme(const std::string& path) {
    std::string name = path;
    const auto slash = name.find_last_of("/\\");
    if (slash != std::string::npos) name = name.substr(slash + 1);
    const auto dot = name.find_last_of('.');
    if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
    return build_scheme(csv::read_file(path), name, path);
}

EncodingScheme parse_encoding_scheme(const std::string& text, const std::string& name,
                                     const std::string& origin) {
    return build_scheme(csv::read_string(text, origin), name, origin);
}

EncodedDataset apply_encoding(const SequenceDataset& ds, const EncodingScheme& scheme, bool strict) {
    // First case using each source code, for error reporting and so that
    // codes present only in the alphabet (never in a sequence) pass through.
    std::vector<const std::string*> first_case(ds.alphabet().size(), nullptr);
    for (const auto& s : ds.sequences())
        for (int e : s.events)
            if (!first_case[static_cast<std::size_t>(e)])
                first_case[static_cast<std::size_t>(e)] = &s.case_id;

    EncodedDataset out;
    EventAlphabet target;
    // Target indices follow the source alphabet's order, keeping the
    // identity scheme an exact identity.
    std::vector<int> remap(ds.alphabet().size(), -1);
    for (std::size_t e = 0; e < ds.alphabet().size(); ++e) {
        const std::string& code = ds.alphabet().code(static_cast<int>(e));
        auto it = scheme.mapping.find(code);
        if (it != scheme.mapping.end()) {
            remap[e] = target.add(it->second);
        } else if (strict && first_case[e]) {
            throw DataError("encoding scheme '" + scheme.name + "' has no mapping for '" + code +
                            "' (first seen in case " + *first_case[e] + ")");
        } else {
            remap[e] = target.add(code);
            if (first_case[e]) out.unmapped_codes.push_back(code);
        }
    }

    std::vector<EventSequence> sequences;
    sequences.reserve(ds.size());
    for (const auto& s : ds.sequences()) {
        EventSequence enc;
        enc.case_id = s.case_id;
        enc.weight = s.weight;
        enc.events.reserve(s.events.size());
        for (int e : s.events) enc.events.push_back(remap[static_cast<std::size_t>(e)]);
        sequences.push_back(std::move(enc));
    }
    out.dataset = SequenceDataset(std::move(target), std::move(sequences), ds.attributes());
    return out;
}

} // namespace seqa
