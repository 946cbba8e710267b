#include "seqa/dissim.hpp"

#include "seqa/error.hpp"
#include "seqa/format.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

namespace seqa {

std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t seed) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

DissimilarityMatrix::DissimilarityMatrix(std::vector<std::string> labels, std::vector<double> weights,
                                         std::vector<double> values, std::string scheme_name)
    : labels_(std::move(labels)), weights_(std::move(weights)), values_(std::move(values)),
      scheme_name_(std::move(scheme_name)) {
    const std::size_t n = labels_.size();
    if (weights_.size() != n) throw DataError("matrix weights/label count mismatch");
    if (values_.size() != n * (n - (n > 0 ? 1 : 0)) / 2) throw DataError("condensed length mismatch");
    for (double v : values_)
        if (v < 0) throw DataError("negative dissimilarity value");
}

DissimilarityMatrix DissimilarityMatrix::submatrix(const std::vector<std::size_t>& cases,
                                                   const std::vector<double>& new_weights) const {
    const std::size_t m = cases.size();
    std::vector<std::string> labels;
    labels.reserve(m);
    for (std::size_t c : cases) labels.push_back(labels_.at(c));
    std::vector<double> values;
    values.reserve(m * (m - (m > 0 ? 1 : 0)) / 2);
    for (std::size_t i = 1; i < m; ++i)
        for (std::size_t j = 0; j < i; ++j) values.push_back(at(cases[i], cases[j]));
    return DissimilarityMatrix(std::move(labels), new_weights, std::move(values), scheme_name_);
}

static std::string join_csv_line(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out.push_back(',');
        out += items[i];
    }
    return out;
}

std::string DissimilarityMatrix::to_text() const {
    std::string values_block;
    values_block.reserve(values_.size() * 20);
    for (double v : values_) {
        values_block += format_g17(v);
        values_block.push_back('\n');
    }
    const std::uint64_t sum = fnv1a64(values_block.data(), values_block.size());

    std::ostringstream out;
    out << "n=" << labels_.size() << "\n";
    out << "scheme=" << scheme_name_ << "\n";
    out << "labels=" << join_csv_line(labels_) << "\n";
    std::vector<std::string> ws;
    ws.reserve(weights_.size());
    for (double w : weights_) ws.push_back(format_g17(w));
    out << "weights=" << join_csv_line(ws) << "\n";
    char sumbuf[17];
    std::snprintf(sumbuf, sizeof(sumbuf), "%016llx", static_cast<unsigned long long>(sum));
    out << "checksum=" << sumbuf << "\n";
    out << values_block;
    return out.str();
}

namespace {

constexpr char kBinaryMagic[8] = {'S', 'Q', 'D', 'M', 'B', 'I', 'N', '1'};

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

void put_string(std::vector<std::uint8_t>& out, const std::string& s) {
    put_u64(out, s.size());
    out.insert(out.end(), s.begin(), s.end());
}

void put_doubles(std::vector<std::uint8_t>& out, const std::vector<double>& vs) {
    static_assert(sizeof(double) == 8);
    const std::size_t at = out.size();
    out.resize(at + vs.size() * 8);
    std::memcpy(out.data() + at, vs.data(), vs.size() * 8);
}

struct BinaryReader {
    const std::uint8_t* p;
    std::size_t left;
    const std::string& origin;

    void need(std::size_t n) const {
        if (n > left) throw DataError(origin + ": truncated binary matrix");
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
        p += 8;
        left -= 8;
        return v;
    }
    std::string str() {
        const std::uint64_t n = u64();
        need(n);
        std::string s(reinterpret_cast<const char*>(p), n);
        p += n;
        left -= n;
        return s;
    }
    std::vector<double> doubles(std::size_t n) {
        need(n * 8);
        std::vector<double> vs(n);
        std::memcpy(vs.data(), p, n * 8);
        p += n * 8;
        left -= n * 8;
        return vs;
    }
};

std::vector<std::string> split_csv_line(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::string expect_field(const std::string& line, const std::string& key, const std::string& origin) {
    const std::string prefix = key + "=";
    if (line.rfind(prefix, 0) != 0)
        throw DataError(origin + ": expected '" + prefix + "...', got '" + line + "'");
    return line.substr(prefix.size());
}

} // namespace

std::vector<std::uint8_t> DissimilarityMatrix::to_binary() const {
    std::vector<std::uint8_t> out;
    out.insert(out.end(), kBinaryMagic, kBinaryMagic + 8);
    put_u64(out, labels_.size());
    put_string(out, scheme_name_);
    for (const auto& l : labels_) put_string(out, l);
    put_doubles(out, weights_);
    const std::size_t values_at = out.size();
    put_doubles(out, values_);
    put_u64(out, fnv1a64(out.data() + values_at, values_.size() * 8));
    return out;
}

DissimilarityMatrix matrix_from_text(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    auto next_line = [&](const char* what) {
        if (!std::getline(in, line)) throw DataError(origin + ": missing " + std::string(what));
        if (!line.empty() && line.back() == '\r') line.pop_back();
    };
    next_line("n=");
    const long n = parse_long(expect_field(line, "n", origin), origin + ": n");
    if (n < 0) throw DataError(origin + ": negative n");
    next_line("scheme=");
    const std::string scheme = expect_field(line, "scheme", origin);
    next_line("labels=");
    std::vector<std::string> labels = split_csv_line(expect_field(line, "labels", origin));
    if (n == 0 && labels.size() == 1 && labels[0].empty()) labels.clear();
    if (labels.size() != static_cast<std::size_t>(n))
        throw DataError(origin + ": label count mismatch (n=" + std::to_string(n) + ", labels=" +
                        std::to_string(labels.size()) + ")");
    next_line("weights=");
    std::vector<std::string> wfields = split_csv_line(expect_field(line, "weights", origin));
    if (n == 0 && wfields.size() == 1 && wfields[0].empty()) wfields.clear();
    if (wfields.size() != static_cast<std::size_t>(n))
        throw DataError(origin + ": weight count mismatch");
    std::vector<double> weights;
    weights.reserve(wfields.size());
    for (const auto& f : wfields) weights.push_back(parse_double(f, origin + ": weight"));
    next_line("checksum=");
    const std::string checksum = expect_field(line, "checksum", origin);

    const std::size_t expected = static_cast<std::size_t>(n) * (n > 0 ? n - 1 : 0) / 2;
    std::vector<double> values;
    values.reserve(expected);
    std::uint64_t sum = 1469598103934665603ULL;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        sum = fnv1a64(line.data(), line.size(), sum);
        sum = fnv1a64("\n", 1, sum);
        values.push_back(parse_double(line, origin + ": value"));
    }
    if (values.size() != expected)
        throw DataError(origin + ": condensed length mismatch (expected " + std::to_string(expected) +
                        " values, got " + std::to_string(values.size()) + ")");
    char sumbuf[17];
    std::snprintf(sumbuf, sizeof(sumbuf), "%016llx", static_cast<unsigned long long>(sum));
    if (checksum != sumbuf) throw DataError(origin + ": checksum failure");
    return DissimilarityMatrix(std::move(labels), std::move(weights), std::move(values), scheme);
}

static DissimilarityMatrix matrix_from_binary(const std::vector<std::uint8_t>& bytes,
                                              const std::string& origin) {
    BinaryReader r{bytes.data() + 8, bytes.size() - 8, origin};
    const std::uint64_t n = r.u64();
    const std::string scheme = r.str();
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) labels.push_back(r.str());
    std::vector<double> weights = r.doubles(n);
    const std::size_t expected = static_cast<std::size_t>(n) * (n > 0 ? n - 1 : 0) / 2;
    const std::uint8_t* values_at = r.p;
    std::vector<double> values = r.doubles(expected);
    const std::uint64_t stored = r.u64();
    if (stored != fnv1a64(values_at, expected * 8)) throw DataError(origin + ": checksum failure");
    return DissimilarityMatrix(std::move(labels), std::move(weights), std::move(values), scheme);
}

void write_matrix(const DissimilarityMatrix& m, const std::string& path, bool binary) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    if (binary) {
        const auto bytes = m.to_binary();
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
    } else {
        out << m.to_text();
    }
    if (!out) throw DataError("write failed: " + path);
}

DissimilarityMatrix read_matrix(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (bytes.size() >= 8 && std::memcmp(bytes.data(), kBinaryMagic, 8) == 0)
        return matrix_from_binary(bytes, path);
    return matrix_from_text(std::string(bytes.begin(), bytes.end()), path);
}

} // namespace seqa
