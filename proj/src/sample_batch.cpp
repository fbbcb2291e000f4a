#include "stable_stein/sample_batch.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "stable_stein/errors.hpp"

namespace stable_stein {

namespace {

constexpr char kMagic[8] = {'S', 'T', 'B', 'L', 'S', 'M', 'P', '1'};

void put_u64_le(std::ostream& os, std::uint64_t v) {
    char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(buf, 8);
}

std::uint64_t get_u64_le(std::istream& is) {
    unsigned char buf[8];
    is.read(reinterpret_cast<char*>(buf), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    return v;
}

}  // namespace

void SampleBatch::write_binary(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os.write(kMagic, 8);
    put_u64_le(os, values.size());
    static_assert(std::endian::native == std::endian::little,
                  "sample files assume a little-endian host");
    os.write(reinterpret_cast<const char*>(values.data()),
             static_cast<std::streamsize>(values.size() * sizeof(double)));
    if (!os) throw std::runtime_error("short write: " + path);
}

SampleBatch SampleBatch::read_binary(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open for reading: " + path);
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kMagic, 8) != 0)
        throw std::runtime_error("not a sample file (bad magic): " + path);
    const std::uint64_t n = get_u64_le(is);
    if (!is) throw std::runtime_error("truncated sample file: " + path);
    SampleBatch batch;
    batch.values.resize(n);
    is.read(reinterpret_cast<char*>(batch.values.data()),
            static_cast<std::streamsize>(n * sizeof(double)));
    if (!is) throw std::runtime_error("truncated sample file: " + path);
    batch.origin = path;
    return batch;
}

void SampleBatch::write_csv(std::ostream& os) const {
    os << "value\n";
    for (double v : values) os << format_double(v) << '\n';
}

std::string format_double(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw std::runtime_error("to_chars failed");
    return std::string(buf, ptr);
}

}  // namespace stable_stein
