#include "seqa/dataset.hpp"

#include "seqa/csv.hpp"
#include "seqa/error.hpp"
#include "seqa/format.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace seqa {

double parse_double(const std::string& s, const std::string& what) {
    if (s.empty()) throw DataError(what + ": empty number");
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE)
        throw DataError(what + ": invalid number '" + s + "'");
    return v;
}

long parse_long(const std::string& s, const std::string& what) {
    if (s.empty()) throw DataError(what + ": empty integer");
    errno = 0;
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (end != s.c_str() + s.size() || errno == ERANGE)
        throw DataError(what + ": invalid integer '" + s + "'");
    return v;
}

FileFormat parse_format(const std::string& name) {
    if (name == "long") return FileFormat::Long;
    if (name == "wide") return FileFormat::Wide;
    throw ConfigError("unknown format '" + name + "' (expected long or wide)");
}

SequenceDataset::SequenceDataset(EventAlphabet alphabet, std::vector<EventSequence> sequences,
                                 std::map<std::string, std::vector<std::string>> attributes)
    : alphabet_(std::move(alphabet)), sequences_(std::move(sequences)),
      attributes_(std::move(attributes)) {
    for (const auto& s : sequences_) {
        if (s.events.empty()) throw DataError("zero-length sequence: " + s.case_id);
        if (s.weight < 0) throw DataError("negative weight: " + s.case_id);
        for (int e : s.events)
            if (e < 0 || static_cast<std::size_t>(e) >= alphabet_.size())
                throw DataError("event index out of range in " + s.case_id);
        total_weight_ += s.weight;
    }
    for (const auto& [name, values] : attributes_)
        if (values.size() != sequences_.size())
            throw DataError("attribute column '" + name + "' length mismatch");
}

const std::vector<std::string>& SequenceDataset::attribute(const std::string& name) const {
    auto it = attributes_.find(name);
    if (it == attributes_.end()) throw DataError("no such column: " + name);
    return it->second;
}

std::vector<std::string> SequenceDataset::case_ids() const {
    std::vector<std::string> ids;
    ids.reserve(sequences_.size());
    for (const auto& s : sequences_) ids.push_back(s.case_id);
    return ids;
}

std::vector<double> SequenceDataset::weights() const {
    std::vector<double> w;
    w.reserve(sequences_.size());
    for (const auto& s : sequences_) w.push_back(s.weight);
    return w;
}

bool SequenceDataset::operator==(const SequenceDataset& other) const {
    if (!(alphabet_ == other.alphabet_) || attributes_ != other.attributes_) return false;
    if (sequences_.size() != other.sequences_.size()) return false;
    for (std::size_t i = 0; i < sequences_.size(); ++i) {
        const auto& a = sequences_[i];
        const auto& b = other.sequences_[i];
        if (a.case_id != b.case_id || a.weight != b.weight || a.events != b.events) return false;
    }
    return true;
}

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// Column roles recognized in the header; anything else is an attribute.
struct HeaderPlan {
    int case_id = -1;
    int weight = -1;
    int events = -1;                    // long format only
    std::vector<int> event_columns;     // wide format: pcrash1..M then soe1..K
    std::vector<std::pair<std::string, int>> attribute_columns;
};

HeaderPlan plan_header(const std::vector<std::string>& header, FileFormat format,
                       const std::string& origin) {
    HeaderPlan plan;
    std::map<int, int> pcrash, soe; // ordinal -> column
    for (std::size_t c = 0; c < header.size(); ++c) {
        const std::string name = lower(header[c]);
        const int col = static_cast<int>(c);
        if (name == "case_id") {
            if (plan.case_id >= 0) throw DataError(origin + ": duplicate case_id column");
            plan.case_id = col;
        } else if (name == "weight") {
            plan.weight = col;
        } else if (format == FileFormat::Long && name == "events") {
            plan.events = col;
        } else if (format == FileFormat::Wide &&
                   (name.rfind("pcrash", 0) == 0 || name.rfind("soe", 0) == 0)) {
            const bool is_pcrash = name.rfind("pcrash", 0) == 0;
            const std::string tail = name.substr(is_pcrash ? 6 : 3);
            if (!tail.empty() && std::all_of(tail.begin(), tail.end(),
                                             [](unsigned char ch) { return std::isdigit(ch); })) {
                (is_pcrash ? pcrash : soe)[std::atoi(tail.c_str())] = col;
            } else {
                plan.attribute_columns.emplace_back(header[c], col);
            }
        } else {
            plan.attribute_columns.emplace_back(header[c], col);
        }
    }
    if (plan.case_id < 0) throw DataError(origin + ": missing case_id column");
    if (format == FileFormat::Long) {
        if (plan.events < 0) throw DataError(origin + ": missing events column");
    } else {
        auto take_run = [&](std::map<int, int>& cols, const std::string& prefix) {
            int expected = 1;
            for (const auto& [ord, col] : cols) {
                if (ord != expected)
                    throw DataError(origin + ": " + prefix + " columns must be numbered 1.." +
                                    std::to_string(cols.size()) + " without gaps");
                plan.event_columns.push_back(col);
                ++expected;
            }
        };
        take_run(pcrash, "pcrash");
        take_run(soe, "soe");
        if (plan.event_columns.empty())
            throw DataError(origin + ": wide format needs pcrash/soe columns");
    }
    return plan;
}

std::vector<std::string> split_events(const std::string& field) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : field) {
        if (c == ';') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

SequenceDataset build_dataset(const csv::Table& t, FileFormat format, const std::string& origin) {
    const HeaderPlan plan = plan_header(t.header, format, origin);
    EventAlphabet alphabet;
    std::vector<EventSequence> sequences;
    std::map<std::string, std::vector<std::string>> attributes;
    for (const auto& [name, col] : plan.attribute_columns) {
        if (attributes.count(name)) throw DataError(origin + ": duplicate column '" + name + "'");
        attributes[name] = {};
    }
    std::unordered_set<std::string> seen_ids;
    sequences.reserve(t.rows.size());

    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        const std::string where = origin + ":" + std::to_string(t.line_numbers[r]);
        if (row.size() != t.header.size())
            throw DataError(where + ": expected " + std::to_string(t.header.size()) +
                            " fields, got " + std::to_string(row.size()));

        EventSequence seq;
        seq.case_id = row[static_cast<std::size_t>(plan.case_id)];
        if (seq.case_id.empty()) throw DataError(where + ": empty case_id");
        if (!seen_ids.insert(seq.case_id).second)
            throw DataError(where + ": duplicate case_id '" + seq.case_id + "'");

        seq.weight = plan.weight >= 0
                         ? parse_double(row[static_cast<std::size_t>(plan.weight)], where + ": weight")
                         : 1.0;
        if (seq.weight < 0) throw DataError(where + ": negative weight");

        std::vector<std::string> codes;
        if (format == FileFormat::Long) {
            codes = split_events(row[static_cast<std::size_t>(plan.events)]);
            for (const auto& c : codes)
                if (c.empty()) throw DataError(where + ": empty event code in events list");
        } else {
            bool in_tail = false;
            for (int col : plan.event_columns) {
                const std::string& cell = row[static_cast<std::size_t>(col)];
                if (cell.empty()) {
                    in_tail = true;
                } else if (in_tail) {
                    throw DataError(where + ": empty event cell followed by '" + cell + "'");
                } else {
                    codes.push_back(cell);
                }
            }
        }
        if (codes.empty()) throw DataError(where + ": zero-length sequence");
        seq.events.reserve(codes.size());
        for (const auto& c : codes) seq.events.push_back(alphabet.add(c));
        sequences.push_back(std::move(seq));

        for (const auto& [name, col] : plan.attribute_columns)
            attributes[name].push_back(row[static_cast<std::size_t>(col)]);
    }
    return SequenceDataset(std::move(alphabet), std::move(sequences), std::move(attributes));
}

} // namespace

SequenceDataset load_dataset(const std::string& path, FileFormat format) {
    return build_dataset(csv::read_file(path), format, path);
}

SequenceDataset parse_dataset(const std::string& text, FileFormat format, const std::string& origin) {
    return build_dataset(csv::read_string(text, origin), format, origin);
}

std::string dataset_to_csv(const SequenceDataset& ds) {
    std::vector<std::string> header = {"case_id", "weight", "events"};
    for (const auto& [name, values] : ds.attributes()) header.push_back(name);
    std::string out = csv::join_record(header);
    out.push_back('\n');
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto& s = ds.sequences()[i];
        std::string events;
        for (std::size_t j = 0; j < s.events.size(); ++j) {
            if (j) events.push_back(';');
            events += ds.alphabet().code(s.events[j]);
        }
        std::vector<std::string> row = {s.case_id, format_g17(s.weight), std::move(events)};
        for (const auto& [name, values] : ds.attributes()) row.push_back(values[i]);
        out += csv::join_record(row);
        out.push_back('\n');
    }
    return out;
}

void save_dataset(const SequenceDataset& ds, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << dataset_to_csv(ds);
    if (!out) throw DataError("write failed: " + path);
}

DatasetStats dataset_stats(const SequenceDataset& ds) {
    if (ds.size() == 0) throw DataError("empty dataset");
    DatasetStats st;
    st.count = ds.size();
    st.total_weight = ds.total_weight();
    st.alphabet_size = ds.alphabet().size();
    st.min_length = ds.sequences().front().events.size();
    st.max_length = st.min_length;
    double len_sum = 0.0, wlen_sum = 0.0;
    std::map<std::size_t, LengthBin> bins;
    for (const auto& s : ds.sequences()) {
        const std::size_t len = s.events.size();
        st.min_length = std::min(st.min_length, len);
        st.max_length = std::max(st.max_length, len);
        len_sum += static_cast<double>(len);
        wlen_sum += s.weight * static_cast<double>(len);
        auto& bin = bins[len];
        bin.length = len;
        bin.count += 1;
        bin.weight += s.weight;
    }
    st.mean_length = len_sum / static_cast<double>(st.count);
    st.weighted_mean_length = st.total_weight > 0 ? wlen_sum / st.total_weight : 0.0;
    for (const auto& [len, bin] : bins) st.length_histogram.push_back(bin);
    st.distinct_sequences = distinct_sequences(ds).sequences.size();
    return st;
}

DistinctSequences distinct_sequences(const SequenceDataset& ds) {
    if (ds.size() == 0) throw DataError("empty dataset");
    DistinctSequences out;
    std::map<std::vector<int>, std::size_t> seen;
    out.case_to_unique.reserve(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto& s = ds.sequences()[i];
        auto [it, inserted] = seen.emplace(s.events, out.sequences.size());
        if (inserted) {
            out.sequences.push_back(s.events);
            out.weights.push_back(0.0);
            out.first_case.push_back(i);
        }
        out.weights[it->second] += s.weight;
        out.case_to_unique.push_back(it->second);
    }
    return out;
}

} // namespace seqa
