#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace seqa {

// Symmetric zero-diagonal dissimilarity matrix stored as the condensed
// lower triangle: entry (i, j) with i > j lives at i*(i-1)/2 + j.
class DissimilarityMatrix {
public:
    DissimilarityMatrix() = default;
    DissimilarityMatrix(std::vector<std::string> labels, std::vector<double> weights,
                        std::vector<double> values, std::string scheme_name);

    std::size_t size() const { return labels_.size(); }
    std::size_t condensed_size() const { return values_.size(); }

    double at(std::size_t i, std::size_t j) const {
        if (i == j) return 0.0;
        if (i < j) std::swap(i, j);
        return values_[i * (i - 1) / 2 + j];
    }

    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<double>& values() const { return values_; }
    const std::string& scheme_name() const { return scheme_name_; }

    // Restriction to a subset of cases (used to cluster distinct sequences).
    DissimilarityMatrix submatrix(const std::vector<std::size_t>& cases,
                                  const std::vector<double>& new_weights) const;

    std::string to_text() const;
    std::vector<std::uint8_t> to_binary() const;

private:
    std::vector<std::string> labels_;
    std::vector<double> weights_;
    std::vector<double> values_;
    std::string scheme_name_;
};

// File container. The text form keeps decimal values at 17 significant
// digits; the binary form is bit-exact and faster for large matrices.
// Both carry a checksum over the value payload.
void write_matrix(const DissimilarityMatrix& m, const std::string& path, bool binary = false);
DissimilarityMatrix read_matrix(const std::string& path);
DissimilarityMatrix matrix_from_text(const std::string& text, const std::string& origin = "<string>");

std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t seed = 1469598103934665603ULL);

} // namespace seqa
