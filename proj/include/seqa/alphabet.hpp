#pragma once

#include "seqa/error.hpp"

#include <string>
#include <unordered_map>
#include <vector>

namespace seqa {

// Ordered set of distinct event codes. Indices follow first-appearance order
// so that every derived matrix is reproducible across runs.
class EventAlphabet {
public:
    EventAlphabet() = default;

    explicit EventAlphabet(const std::vector<std::string>& codes) {
        for (const auto& c : codes) add(c);
    }

    // Returns the index of `code`, inserting it if unseen.
    int add(const std::string& code) {
        if (code.empty()) throw DataError("empty event code");
        auto it = index_.find(code);
        if (it != index_.end()) return it->second;
        const int idx = static_cast<int>(codes_.size());
        codes_.push_back(code);
        index_.emplace(code, idx);
        return idx;
    }

    // Index of `code`, or -1 if absent.
    int find(const std::string& code) const {
        auto it = index_.find(code);
        return it == index_.end() ? -1 : it->second;
    }

    int index_of(const std::string& code) const {
        const int i = find(code);
        if (i < 0) throw DataError("unknown event code: " + code);
        return i;
    }

    const std::string& code(int idx) const { return codes_.at(static_cast<std::size_t>(idx)); }
    std::size_t size() const { return codes_.size(); }
    const std::vector<std::string>& codes() const { return codes_; }

    bool operator==(const EventAlphabet& other) const { return codes_ == other.codes_; }

private:
    std::vector<std::string> codes_;
    std::unordered_map<std::string, int> index_;
};

} // namespace seqa
