#pragma once

#include "seqa/alphabet.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace seqa {

// One case: an ordered chain of events (as alphabet indices) with a
// sampling weight.
struct EventSequence {
    std::string case_id;
    double weight = 1.0;
    std::vector<int> events;
};

enum class FileFormat { Long, Wide };

FileFormat parse_format(const std::string& name);

// A weighted set of event sequences over one shared alphabet. Immutable
// after loading; safe to share across threads.
class SequenceDataset {
public:
    SequenceDataset() = default;
    SequenceDataset(EventAlphabet alphabet, std::vector<EventSequence> sequences,
                    std::map<std::string, std::vector<std::string>> attributes = {});

    const EventAlphabet& alphabet() const { return alphabet_; }
    const std::vector<EventSequence>& sequences() const { return sequences_; }
    std::size_t size() const { return sequences_.size(); }
    double total_weight() const { return total_weight_; }

    // Extra label columns carried through from the input file (e.g. a
    // benchmark categorization). Values are aligned with sequences().
    const std::map<std::string, std::vector<std::string>>& attributes() const { return attributes_; }
    const std::vector<std::string>& attribute(const std::string& name) const;
    bool has_attribute(const std::string& name) const { return attributes_.count(name) != 0; }

    std::vector<std::string> case_ids() const;
    std::vector<double> weights() const;

    bool operator==(const SequenceDataset& other) const;

private:
    EventAlphabet alphabet_;
    std::vector<EventSequence> sequences_;
    std::map<std::string, std::vector<std::string>> attributes_;
    double total_weight_ = 0.0;
};

// Long format:  case_id,weight,events       (events are ';'-separated codes)
// Wide format:  case_id,weight,pcrash1,...,pcrashM,soe1,...,soeK
// The weight column is optional (defaults to 1). Any other column is kept
// as an attribute. Wide rows may leave a trailing run of event cells empty.
SequenceDataset load_dataset(const std::string& path, FileFormat format);
SequenceDataset parse_dataset(const std::string& text, FileFormat format,
                              const std::string& origin = "<string>");

// Long-format writer; attribute columns are appended after `events`.
void save_dataset(const SequenceDataset& ds, const std::string& path);
std::string dataset_to_csv(const SequenceDataset& ds);

struct LengthBin {
    std::size_t length = 0;
    std::size_t count = 0;
    double weight = 0.0;
};

struct DatasetStats {
    std::size_t count = 0;
    double total_weight = 0.0;
    std::size_t min_length = 0;
    std::size_t max_length = 0;
    double mean_length = 0.0;
    double weighted_mean_length = 0.0;
    std::vector<LengthBin> length_histogram;
    std::size_t distinct_sequences = 0;
    std::size_t alphabet_size = 0;
};

DatasetStats dataset_stats(const SequenceDataset& ds);

// Unique sequences keyed by exact event-list equality, in first-appearance
// order, with aggregated weights. Enables computing over distinct sequences
// and expanding the result back to cases.
struct DistinctSequences {
    std::vector<std::vector<int>> sequences;
    std::vector<double> weights;          // aggregated per unique sequence
    std::vector<std::size_t> first_case;  // earliest case index per unique
    std::vector<std::size_t> case_to_unique;
};

DistinctSequences distinct_sequences(const SequenceDataset& ds);

} // namespace seqa
