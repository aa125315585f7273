// Atomic species: Gaussian scattering-fit coefficients plus a Debye-Waller
// factor, loaded from small JSON data files so the numbers stay traceable to
// their published source.
#pragma once

#include <array>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace qms {

struct AtomSpecies {
    std::string label;
    std::array<double, 4> a{};  // fit amplitudes, Angstrom
    std::array<double, 4> b{};  // fit widths, Angstrom^2
    double debye_waller = 0.0;  // B, Angstrom^2

    void validate() const {
        for (double bi : b) {
            if (!(bi + debye_waller > 0.0)) {
                throw std::invalid_argument("species " + label +
                                            ": b_i + B must be positive");
            }
        }
    }
};

inline AtomSpecies species_from_json(const nlohmann::json& j) {
    AtomSpecies species;
    species.label = j.at("label").get<std::string>();
    const auto& a = j.at("a");
    const auto& b = j.at("b");
    if (a.size() != 4 || b.size() != 4) {
        throw std::invalid_argument("species " + species.label +
                                    ": expected 4 fit coefficients per array");
    }
    for (int i = 0; i < 4; ++i) {
        species.a[i] = a[i].get<double>();
        species.b[i] = b[i].get<double>();
    }
    species.debye_waller = j.at("debye_waller_b").get<double>();
    species.validate();
    return species;
}

inline AtomSpecies load_species(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open species file: " + path);
    nlohmann::json j;
    in >> j;
    return species_from_json(j);
}

}  // namespace qms
