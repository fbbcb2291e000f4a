#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace stable_stein {

// A seeded array of i.i.d. draws plus generation metadata. The binary layout
// is fixed: 8-byte magic "STBLSMP1", little-endian u64 count, then raw
// little-endian IEEE-754 doubles.
struct SampleBatch {
    std::vector<double> values;
    std::uint64_t seed = 0;
    std::string origin;

    void write_binary(const std::string& path) const;
    static SampleBatch read_binary(const std::string& path);

    // CSV with a single `value` header column, LF line endings, '.' decimals.
    void write_csv(std::ostream& os) const;
};

// Shortest round-trip decimal rendering (std::to_chars), locale-independent.
std::string format_double(double v);

}  // namespace stable_stein
