#include "sqg/container.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace sqg {

static_assert(std::endian::native == std::endian::little, "container I/O assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'S', 'Q', 'G', 'F'};
constexpr std::uint32_t kVersion = 1;

}  // namespace

void write_container(const std::string& path, const Container& c) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot open " + path + " for writing");
    const std::string head = c.header.dump();
    const std::uint64_t hlen = head.size();
    out.write(kMagic, 4);
    out.write(reinterpret_cast<const char*>(&kVersion), sizeof kVersion);
    out.write(reinterpret_cast<const char*>(&hlen), sizeof hlen);
    out.write(head.data(), static_cast<std::streamsize>(head.size()));
    out.write(reinterpret_cast<const char*>(c.payload.data()),
              static_cast<std::streamsize>(c.payload.size() * sizeof(double)));
    if (!out) throw NumericalError("short write to " + path);
}

Container read_container(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path);
    char magic[4];
    std::uint32_t version = 0;
    std::uint64_t hlen = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), sizeof version);
    in.read(reinterpret_cast<char*>(&hlen), sizeof hlen);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) throw ValidationError(path + ": not an SQGF container");
    if (version != kVersion) throw ValidationError(path + ": unsupported container version");
    std::string head(hlen, '\0');
    in.read(head.data(), static_cast<std::streamsize>(hlen));
    Container c;
    c.header = nlohmann::json::parse(head);
    const std::size_t count = c.header.at("count").get<std::size_t>();
    c.payload.resize(count);
    in.read(reinterpret_cast<char*>(c.payload.data()), static_cast<std::streamsize>(count * sizeof(double)));
    if (!in) throw ValidationError(path + ": truncated payload");
    return c;
}

nlohmann::json parities_json(Parities p) {
    auto s = [](Parity q) { return q == Parity::Odd ? "odd" : "even"; };
    return nlohmann::json::array({s(p[0]), s(p[1])});
}

Parities parities_from_json(const nlohmann::json& j) {
    auto q = [](const std::string& s) {
        if (s == "odd") return Parity::Odd;
        if (s == "even") return Parity::Even;
        throw ValidationError("bad parity tag '" + s + "'");
    };
    return {q(j.at(0).get<std::string>()), q(j.at(1).get<std::string>())};
}

Container pack_spectrum(const Spectrum& s, const MultiplierSpec& mult, int block) {
    const int N = s.grid.nodes();
    const int B = block > 0 ? std::min(block + 1, N) : N;
    Container c;
    c.payload.reserve(static_cast<std::size_t>(B) * B);
    for (int m1 = 0; m1 < B; ++m1)
        for (int m2 = 0; m2 < B; ++m2) c.payload.push_back(s(m1, m2));
    c.header = {{"kind", "spectrum"},
                {"resolution", s.grid.resolution()},
                {"symmetry", parities_json(s.parity)},
                {"block", B},
                {"count", c.payload.size()},
                {"multiplier", {{"alpha", mult.alpha}, {"gamma", mult.gamma}}},
                {"normalization", mult.normalization},
                {"wavenumber", "k = pi m"}};
    return c;
}

Spectrum unpack_spectrum(const Container& c) {
    if (c.header.at("kind") != "spectrum") throw ValidationError("container does not hold a spectrum");
    Spectrum s(Grid(c.header.at("resolution").get<int>()), parities_from_json(c.header.at("symmetry")));
    const int B = c.header.at("block").get<int>();
    if (static_cast<std::size_t>(B) * B != c.payload.size() || B > s.grid.nodes())
        throw ValidationError("spectrum block size does not match payload");
    for (int m1 = 0; m1 < B; ++m1)
        for (int m2 = 0; m2 < B; ++m2) s(m1, m2) = c.payload[static_cast<std::size_t>(m1) * B + m2];
    return s;
}

Container pack_field(const ScalarField& f) {
    Container c;
    c.payload = f.values;
    c.header = {{"kind", "field"},
                {"resolution", f.grid.resolution()},
                {"symmetry", parities_json(f.parity)},
                {"domain", "quarter [0,1]^2 of the period-2 torus"},
                {"axis_margin", f.axis_margin},
                {"count", c.payload.size()}};
    return c;
}

ScalarField unpack_field(const Container& c) {
    if (c.header.at("kind") != "field") throw ValidationError("container does not hold a field");
    ScalarField f(Grid(c.header.at("resolution").get<int>()), parities_from_json(c.header.at("symmetry")));
    if (c.payload.size() != f.values.size()) throw ValidationError("field payload size mismatch");
    f.values = c.payload;
    f.axis_margin = c.header.value("axis_margin", 0.0);
    return f;
}

}  // namespace sqg
