#include "hjr/field_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <memory>

#include "hjr/error.hpp"

namespace hjr {

namespace {

constexpr char kMagic[4] = {'H', 'J', 'R', 'F'};

template <class T>
T to_little(T v) {
    if constexpr (std::endian::native == std::endian::big) {
        auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
        std::reverse(bytes.begin(), bytes.end());
        return std::bit_cast<T>(bytes);
    } else {
        return v;
    }
}

class Writer {
public:
    template <class T>
    void put(T v) {
        const T le = to_little(v);
        char buf[sizeof(T)];
        std::memcpy(buf, &le, sizeof(T));
        out_.append(buf, sizeof(T));
    }
    void raw(const char* p, std::size_t n) { out_.append(p, n); }
    std::string take() { return std::move(out_); }

private:
    std::string out_;
};

class Reader {
public:
    explicit Reader(std::string_view bytes) : bytes_(bytes) {}

    template <class T>
    T get(const char* what) {
        if (bytes_.size() - pos_ < sizeof(T)) {
            throw FormatError(std::string("field file truncated while reading ") + what);
        }
        T v;
        std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return to_little(v);
    }
    [[nodiscard]] std::size_t remaining() const { return bytes_.size() - pos_; }
    [[nodiscard]] std::string_view peek(std::size_t n) const { return bytes_.substr(pos_, n); }
    void skip(std::size_t n) { pos_ += n; }

private:
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string encode_field_file(const SolveResult& result) {
    if (result.fields.empty() || result.fields.size() != result.tau.size()) {
        throw ArgumentError("field file needs one field per tau entry");
    }
    const Grid& grid = result.fields.front().grid();
    Writer w;
    w.raw(kMagic, sizeof(kMagic));
    w.put<std::uint32_t>(kFieldFileVersion);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(grid.dims()));
    for (std::size_t d = 0; d < grid.dims(); ++d) {
        w.put<std::uint64_t>(grid.count(d));
        w.put<double>(grid.min(d));
        w.put<double>(grid.max(d));
        w.put<std::uint8_t>(grid.periodic(d) ? 1 : 0);
    }
    w.put<std::uint64_t>(result.tau.size());
    for (std::size_t k = 0; k < result.tau.size(); ++k) {
        require_same_grid(result.fields.front(), result.fields[k], "encode_field_file");
        w.put<double>(result.tau[k]);
        for (const double v : result.fields[k].values()) {
            w.put<double>(v);
        }
    }
    return w.take();
}

SolveResult decode_field_file(std::string_view bytes) {
    Reader r(bytes);
    if (r.remaining() < sizeof(kMagic) || r.peek(sizeof(kMagic)) != std::string_view(kMagic, 4)) {
        throw FormatError("not a field file: bad magic");
    }
    r.skip(sizeof(kMagic));
    const auto version = r.get<std::uint32_t>("version");
    if (version != kFieldFileVersion) {
        throw FormatError("unsupported field file version " + std::to_string(version));
    }
    const auto dims = r.get<std::uint32_t>("dimension count");
    // Each dimension record takes 25 bytes; reject absurd counts before allocating.
    if (dims == 0 || dims > r.remaining() / 25) {
        throw FormatError("field file header declares an invalid dimension count");
    }
    std::vector<double> mins(dims), maxs(dims);
    std::vector<std::size_t> counts(dims);
    std::vector<bool> periodic(dims);
    for (std::uint32_t d = 0; d < dims; ++d) {
        const auto count = r.get<std::uint64_t>("node count");
        if (count > std::numeric_limits<std::size_t>::max()) {
            throw FormatError("node count exceeds the addressable range");
        }
        counts[d] = static_cast<std::size_t>(count);
        mins[d] = r.get<double>("grid min");
        maxs[d] = r.get<double>("grid max");
        const auto flag = r.get<std::uint8_t>("periodic flag");
        if (flag > 1) {
            throw FormatError("periodic flag must be 0 or 1");
        }
        periodic[d] = flag == 1;
    }
    std::shared_ptr<const Grid> grid;
    try {
        grid = std::make_shared<const Grid>(mins, maxs, counts, periodic);
    } catch (const Error& e) {
        throw FormatError(std::string("invalid grid in field file header: ") + e.what());
    }
    const auto tau_count = r.get<std::uint64_t>("tau count");
    // Header fields must account for the payload exactly.
    const std::size_t record = sizeof(double) * (grid->size() + 1);
    if (grid->size() + 1 == 0 || record / sizeof(double) != grid->size() + 1 ||
        tau_count > r.remaining() / record || tau_count * record != r.remaining()) {
        throw FormatError("field file payload length does not match its header (truncated or "
                          "trailing data)");
    }
    SolveResult result;
    result.tau.reserve(tau_count);
    result.fields.reserve(tau_count);
    for (std::uint64_t k = 0; k < tau_count; ++k) {
        result.tau.push_back(r.get<double>("tau"));
        std::vector<double> values(grid->size());
        for (double& v : values) {
            v = r.get<double>("value");
        }
        try {
            result.fields.emplace_back(grid, std::move(values));
        } catch (const Error& e) {
            throw FormatError(std::string("invalid field payload: ") + e.what());
        }
    }
    return result;
}

void write_field_file(const SolveResult& result, const std::filesystem::path& path) {
    const std::string bytes = encode_field_file(result);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot open " + path.string() + " for writing");
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw Error("failed writing " + path.string());
    }
}

SolveResult read_field_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_field_file(bytes);
}

}  // namespace hjr
