#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

#include "sqg/spectral.hpp"

namespace sqg {

// Binary layout: "SQGF", u32 version, u64 header length, UTF-8 JSON header,
// then little-endian float64 payload.
struct Container {
    nlohmann::json header;
    std::vector<double> payload;
};

void write_container(const std::string& path, const Container& c);
Container read_container(const std::string& path);

nlohmann::json parities_json(Parities p);
Parities parities_from_json(const nlohmann::json& j);

// `block` > 0 stores only modes 0..block per axis (retained set of a
// dealiased spectrum); 0 stores everything.
Container pack_spectrum(const Spectrum& s, const MultiplierSpec& mult, int block = 0);
Spectrum unpack_spectrum(const Container& c);

Container pack_field(const ScalarField& f);
ScalarField unpack_field(const Container& c);

}  // namespace sqg
