#include "hyperlc/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

namespace hlc {

namespace {

constexpr char kMagic[8] = {'H', 'L', 'C', 'S', 'N', 'A', 'P', '\0'};
constexpr std::uint8_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "snapshot format is defined little-endian");

template <typename T>
void put(std::ofstream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw Error("snapshot: truncated file");
    return v;
}

void put_field(std::ofstream& out, const SpectralField& f) {
    out.write(reinterpret_cast<const char*>(f.coeff.data()),
              static_cast<std::streamsize>(f.coeff.size() * sizeof(Complex)));
}

void get_field(std::ifstream& in, SpectralField& f) {
    in.read(reinterpret_cast<char*>(f.coeff.data()),
            static_cast<std::streamsize>(f.coeff.size() * sizeof(Complex)));
    if (!in) throw Error("snapshot: truncated coefficient block");
}

}  // namespace

void save_snapshot(const std::string& path, const SimulationState& state, const Coefficients& c,
                   std::uint64_t seed) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("snapshot: cannot open '" + path + "' for writing");

    out.write(kMagic, sizeof(kMagic));
    put(out, kVersion);
    put(out, static_cast<std::int32_t>(state.grid().n));
    put(out, state.grid().box_length);
    put(out, state.grid().dealias_fraction);
    put(out, c.nu1());
    put(out, c.nu4());
    put(out, c.nu5());
    put(out, state.t);
    put(out, seed);
    for (int m = 0; m < 2; ++m) put(out, state.mean_phi[m]);
    for (int m = 0; m < 2; ++m) put(out, state.mean_dphi[m]);

    for (int i = 0; i < 3; ++i) put_field(out, state.flow.v[i]);
    put_field(out, state.wave.w1);
    put_field(out, state.wave.w2);
    if (!out) throw Error("snapshot: write failure on '" + path + "'");
}

Snapshot load_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("snapshot: cannot open '" + path + "'");

    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw Error("snapshot: bad magic in '" + path + "'");
    const auto version = get<std::uint8_t>(in);
    if (version != kVersion)
        throw Error("snapshot: unsupported format version " + std::to_string(int(version)));

    Snapshot snap;
    const auto n = get<std::int32_t>(in);
    const auto box = get<double>(in);
    const auto frac = get<double>(in);
    snap.grid = Grid3(n, box, frac);
    snap.nu1 = get<double>(in);
    snap.nu4 = get<double>(in);
    snap.nu5 = get<double>(in);
    snap.state.t = get<double>(in);
    snap.seed = get<std::uint64_t>(in);
    for (int m = 0; m < 2; ++m) snap.state.mean_phi[m] = get<double>(in);
    for (int m = 0; m < 2; ++m) snap.state.mean_dphi[m] = get<double>(in);

    snap.state.flow.v = VectorField3(snap.grid);
    snap.state.wave.w1 = SpectralField(snap.grid);
    snap.state.wave.w2 = SpectralField(snap.grid);
    for (int i = 0; i < 3; ++i) get_field(in, snap.state.flow.v[i]);
    get_field(in, snap.state.wave.w1);
    get_field(in, snap.state.wave.w2);
    return snap;
}

}  // namespace hlc
