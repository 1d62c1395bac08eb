#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>

#include "hjr/error.hpp"
#include "hjr/field_io.hpp"
#include "support.hpp"

using namespace hjr;
using namespace hjr::testing;

namespace {

SolveResult sample_result() {
    const auto g = dubins_grid(7);
    SolveResult r;
    r.tau = {0.0, 0.5, 1.0};
    for (std::size_t k = 0; k < r.tau.size(); ++k) {
        r.fields.push_back(ValueField::sample(g, [k](std::span<const double> x) {
            return x[0] * 0.1 - x[1] / 3.0 + std::sin(x[2]) - 0.01 * static_cast<double>(k);
        }));
    }
    return r;
}

bool same_bits(const SolveResult& a, const SolveResult& b) {
    if (a.tau.size() != b.tau.size() || a.fields.size() != b.fields.size()) return false;
    if (std::memcmp(a.tau.data(), b.tau.data(), a.tau.size() * sizeof(double)) != 0) return false;
    for (std::size_t k = 0; k < a.fields.size(); ++k) {
        const Grid& ga = a.fields[k].grid();
        const Grid& gb = b.fields[k].grid();
        if (ga.dims() != gb.dims()) return false;
        for (std::size_t d = 0; d < ga.dims(); ++d) {
            if (ga.count(d) != gb.count(d) || ga.min(d) != gb.min(d) || ga.max(d) != gb.max(d) ||
                ga.periodic(d) != gb.periodic(d)) {
                return false;
            }
        }
        if (std::memcmp(a.fields[k].values().data(), b.fields[k].values().data(),
                        a.fields[k].size() * sizeof(double)) != 0) {
            return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("round trip is bitwise exact") {
    const SolveResult r = sample_result();
    const std::string bytes = encode_field_file(r);
    CHECK(bytes.substr(0, 4) == "HJRF");
    const SolveResult back = decode_field_file(bytes);
    CHECK(same_bits(r, back));
    CHECK(encode_field_file(back) == bytes);
}

TEST_CASE("round trip through a file") {
    const SolveResult r = sample_result();
    const auto path = std::filesystem::temp_directory_path() / "hjr_field_io_test.hjrf";
    write_field_file(r, path);
    const SolveResult back = read_field_file(path);
    std::filesystem::remove(path);
    CHECK(same_bits(r, back));
    CHECK_THROWS_AS((void)read_field_file(path), Error);
}

TEST_CASE("header layout is little-endian") {
    const std::string bytes = encode_field_file(sample_result());
    // version 1 then three dimensions, both as u32.
    CHECK(bytes.substr(4, 4) == std::string("\x01\x00\x00\x00", 4));
    CHECK(bytes.substr(8, 4) == std::string("\x03\x00\x00\x00", 4));
    // 12 + 3 * 25 header bytes, u64 tau count, then 3 * (1 + 7^3) doubles.
    CHECK(bytes.size() == 12 + 3 * 25 + 8 + 3 * (1 + 343) * 8);
}

TEST_CASE("malformed files are rejected") {
    const std::string good = encode_field_file(sample_result());

    std::string bad_magic = good;
    bad_magic[0] = 'X';
    CHECK_THROWS_AS((void)decode_field_file(bad_magic), FormatError);

    std::string bad_version = good;
    bad_version[4] = 2;
    CHECK_THROWS_AS((void)decode_field_file(bad_version), FormatError);

    CHECK_THROWS_AS((void)decode_field_file(good.substr(0, good.size() - 1)), FormatError);
    CHECK_THROWS_AS((void)decode_field_file(good.substr(0, 10)), FormatError);
    CHECK_THROWS_AS((void)decode_field_file(""), FormatError);
    CHECK_THROWS_AS((void)decode_field_file(good + '\0'), FormatError);

    // Zero nodes along the first dimension is not a valid grid.
    std::string bad_count = good;
    std::memset(bad_count.data() + 12, 0, 8);
    CHECK_THROWS_AS((void)decode_field_file(bad_count), FormatError);
}
