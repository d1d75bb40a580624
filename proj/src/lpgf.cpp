#include "lpcalc/lpgf.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "lpcalc/errors.hpp"

namespace lpcalc {

static_assert(std::endian::native == std::endian::little, "LPGF I/O assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'L', 'P', 'G', 'F'};
constexpr std::size_t kHeaderSize = 4 + 4 + 4 + 4 + 8;

template <class T>
void put(std::vector<std::uint8_t>& out, T value) {
    std::uint8_t raw[sizeof(T)];
    std::memcpy(raw, &value, sizeof(T));
    out.insert(out.end(), raw, raw + sizeof(T));
}

template <class T>
T get(const std::vector<std::uint8_t>& in, std::size_t offset) {
    if (offset + sizeof(T) > in.size())
        throw FormatError("LPGF: truncated at offset " + std::to_string(offset), offset);
    T value;
    std::memcpy(&value, in.data() + offset, sizeof(T));
    return value;
}

}  // namespace

std::vector<std::uint8_t> encode_lpgf(const GridFunction& f) {
    const Grid& g = f.grid();
    std::vector<std::uint8_t> out;
    out.reserve(kHeaderSize + 16 * f.size());
    out.insert(out.end(), kMagic, kMagic + 4);
    put<std::uint32_t>(out, kLpgfVersion);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(g.dim()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(g.points_per_axis()));
    put<double>(out, g.period());
    for (const cplx& z : f.samples()) {
        put<double>(out, z.real());
        put<double>(out, z.imag());
    }
    return out;
}

GridFunction decode_lpgf(const std::vector<std::uint8_t>& in) {
    if (in.size() < 4 || std::memcmp(in.data(), kMagic, 4) != 0)
        throw FormatError("LPGF: bad magic at offset 0", 0);
    const auto version = get<std::uint32_t>(in, 4);
    if (version != kLpgfVersion)
        throw FormatError("LPGF: unsupported version " + std::to_string(version), 4);
    const auto dim = get<std::uint32_t>(in, 8);
    if (dim != 1 && dim != 2)
        throw FormatError("LPGF: unsupported dimension " + std::to_string(dim), 8);
    const auto points = get<std::uint32_t>(in, 12);
    const auto period = get<double>(in, 16);
    Grid grid = [&] {
        try {
            return Grid(static_cast<int>(dim), points, period);
        } catch (const InvalidArgument& e) {
            throw FormatError(std::string("LPGF: invalid grid header: ") + e.what(), 12);
        }
    }();
    const std::size_t expected = kHeaderSize + 16 * grid.size();
    if (in.size() < expected)
        throw FormatError("LPGF: truncated payload, expected " + std::to_string(expected) +
                              " bytes, got " + std::to_string(in.size()),
                          in.size());
    if (in.size() > expected)
        throw FormatError("LPGF: trailing bytes after payload", expected);
    std::vector<cplx> samples(grid.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const std::size_t off = kHeaderSize + 16 * i;
        samples[i] = {get<double>(in, off), get<double>(in, off + 8)};
    }
    return GridFunction(grid, std::move(samples));
}

void write_lpgf(const GridFunction& f, const std::filesystem::path& path) {
    const auto bytes = encode_lpgf(f);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::ios_base::failure("write failed for " + path.string());
}

GridFunction read_lpgf(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_lpgf(bytes);
}

void write_csv(const GridFunction& f, std::ostream& out) {
    const Grid& g = f.grid();
    out << (g.dim() == 1 ? "x" : "x0,x1") << ",re,im\n";
    out << std::setprecision(17);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const Point x = g.position(i);
        out << x[0] << ',';
        if (g.dim() == 2) out << x[1] << ',';
        out << f[i].real() << ',' << f[i].imag() << '\n';
    }
}

}  // namespace lpcalc
