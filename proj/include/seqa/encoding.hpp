#pragma once

#include "seqa/dataset.hpp"

#include <map>
#include <string>
#include <vector>

namespace seqa {

// Total mapping from source event codes to consolidated codes. Loaded from a
// CSV with header `source,target,description`.
struct EncodingScheme {
    std::string name;
    std::map<std::string, std::string> mapping;
    std::map<std::string, std::string> descriptions;

    static EncodingScheme identity(const EventAlphabet& alphabet, const std::string& name = "identity");
};

EncodingScheme load_encoding_scheme(const std::string& path);
EncodingScheme parse_encoding_scheme(const std::string& text, const std::string& name,
                                     const std::string& origin = "<string>");

struct EncodedDataset {
    SequenceDataset dataset;
    std::vector<std::string> unmapped_codes; // non-strict mode only, first-appearance order
};

// Replaces every event by its mapped code. Strict mode requires the mapping
// to cover every code present; non-strict passes unknown codes through and
// reports them. Sequence count, lengths, weights, case order and attribute
// columns are preserved.
EncodedDataset apply_encoding(const SequenceDataset& ds, const EncodingScheme& scheme, bool strict);

} // namespace seqa
