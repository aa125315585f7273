#include <doctest.h>

#include <cmath>

#include "qms/beam.hpp"
#include "qms/potential.hpp"
#include "qms/walsh.hpp"
#include "test_util.hpp"

using namespace qms;

namespace {

AtomSpecies gold() {
    AtomSpecies au;
    au.label = "Au";
    au.a = {2.388, 4.226, 2.689, 1.255};
    au.b = {42.866, 9.743, 2.264, 0.306};
    au.debye_waller = 0.61;
    return au;
}

Specimen gold_fcc(int cells_z, int slices_per_cell = 16) {
    Specimen s;
    s.lattice_constant = 4.0782;
    s.cells = {1, 1, cells_z};
    s.slices_per_cell = slices_per_cell;
    const AtomSpecies au = gold();
    s.basis = {{0.0, 0.0, 0.0, au}, {0.5, 0.5, 0.0, au}, {0.5, 0.0, 0.5, au},
               {0.0, 0.5, 0.5, au}};
    return s;
}

// Independent evaluation of the Gaussian-fit potential, written against
// literal constant values rather than the library's constants table.
double oracle_potential(double r, const AtomSpecies& sp) {
    const double pi = 3.14159265358979323846;
    const double h = 6.62607015e-34, m0 = 9.1093837015e-31, q = 1.602176634e-19;
    const double prefactor = h * h / (2.0 * pi * m0 * q) * 1e20;  // V A^2
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double w = sp.b[i] + sp.debye_waller;
        acc += sp.a[i] * std::sqrt(4.0 * pi / w) * (4.0 * pi / w) *
               std::exp(-4.0 * pi * pi * r * r / w);
    }
    return prefactor * acc;
}

}  // namespace

TEST_CASE("beam parameters at 100 kV") {
    const BeamParams beam = beam_params(100e3);
    CHECK(beam.wavelength == doctest::Approx(0.0370144).epsilon(1e-4));
    CHECK(beam.mass_ratio == doctest::Approx(1.1956951).epsilon(1e-4));
    CHECK(beam.kinetic_energy_ev == doctest::Approx(100e3));
    CHECK(beam.wavenumber == doctest::Approx(1.0 / beam.wavelength));
    CHECK(beam.sigma > 0.0);
}

TEST_CASE("low voltage approaches the nonrelativistic wavelength") {
    const double u = 100.0;
    const BeamParams beam = beam_params(u);
    namespace k = constants;
    const double lambda_nr =
        k::planck_h / std::sqrt(2.0 * k::electron_mass * k::elementary_charge * u) /
        k::meters_per_angstrom;
    CHECK(beam.wavelength / lambda_nr == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(beam.mass_ratio == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("beam relations are self-consistent across voltages") {
    namespace k = constants;
    const double rest_ev = k::rest_energy_j / k::elementary_charge;
    const double hc_ev_a = k::planck_h * k::speed_of_light / k::elementary_charge /
                           k::meters_per_angstrom;
    for (double u : {10e3, 50e3, 100e3, 300e3, 1000e3}) {
        const BeamParams beam = beam_params(u);
        CHECK(beam.mass_ratio == doctest::Approx(1.0 + u / rest_ev).epsilon(1e-12));
        const double energy_term = 2.0 * rest_ev * u + u * u;
        CHECK(beam.wavelength * beam.wavelength * energy_term ==
              doctest::Approx(hc_ev_a * hc_ev_a).epsilon(1e-12));
        const double sigma_again = beam.mass_ratio * k::electron_mass * k::elementary_charge *
                                   (beam.wavelength * k::meters_per_angstrom) /
                                   (2.0 * std::numbers::pi * k::hbar * k::hbar) *
                                   k::meters_per_angstrom;
        CHECK(beam.sigma == doctest::Approx(sigma_again).epsilon(1e-12));
    }
    CHECK_THROWS_AS(beam_params(0.0), std::invalid_argument);
    CHECK_THROWS_AS(beam_params(-5.0), std::invalid_argument);
}

TEST_CASE("atomic potential") {
    const AtomSpecies au = gold();
    SUBCASE("closed form at the origin") {
        constexpr double four_pi = 4.0 * std::numbers::pi;
        double sum = 0.0;
        for (int i = 0; i < 4; ++i) {
            sum += au.a[i] * std::pow(four_pi / (au.b[i] + au.debye_waller), 1.5);
        }
        CHECK(atomic_potential(0.0, au) ==
              doctest::Approx(constants::potential_prefactor_v_a2 * sum).epsilon(1e-12));
    }
    SUBCASE("independent dual implementation agrees") {
        for (double r : {0.0, 0.05, 0.1, 0.3, 0.7, 1.2, 2.5}) {
            CHECK(atomic_potential(r, au) ==
                  doctest::Approx(oracle_potential(r, au)).epsilon(1e-10));
        }
    }
    SUBCASE("monotone decay to zero") {
        double previous = atomic_potential(0.0, au);
        for (double r = 0.05; r < 4.0; r += 0.05) {
            const double v = atomic_potential(r, au);
            CHECK(v <= previous);
            CHECK(v > 0.0);
            previous = v;
        }
        CHECK(atomic_potential(10.0, au) < 1e-12 * atomic_potential(0.0, au));
    }
    SUBCASE("rejects bad input") {
        CHECK_THROWS_AS(atomic_potential(-1.0, au), std::invalid_argument);
        AtomSpecies bad = au;
        bad.b[2] = -5.0;
        CHECK_THROWS_AS(atomic_potential(1.0, bad), std::invalid_argument);
    }
}

TEST_CASE("potential slices") {
    const BeamParams beam = beam_params(100e3);
    SUBCASE("centered atom gives a complement-symmetric field") {
        Specimen s;
        s.lattice_constant = 4.0;
        s.cells = {1, 1, 1};
        s.slices_per_cell = 1;
        s.basis = {{0.5, 0.5, 0.0, gold()}};
        const FieldGrid grid = grid_for_specimen(4, s);
        const PotentialStack stack = build_potential_slices(s, grid, beam);
        const std::size_t n = grid.points_per_axis;
        const auto& field = stack.cell_slice_phases[0];
        double peak = 0.0;
        for (double v : field) peak = std::max(peak, v);
        CHECK(peak > 0.0);
        for (std::size_t y = 0; y < n; ++y) {
            for (std::size_t x = 0; x < n; ++x) {
                const double mirrored = field[(n - 1 - y) * n + (n - 1 - x)];
                CHECK(std::abs(field[y * n + x] - mirrored) < 1e-13 * peak);
            }
        }
    }
    SUBCASE("slabs far from every atom stay empty") {
        Specimen s;
        s.lattice_constant = 40.0;  // wide spacing: mid-cell slabs see no atom
        s.cells = {1, 1, 1};
        s.slices_per_cell = 8;
        s.basis = {{0.5, 0.5, 0.0, gold()}};
        const FieldGrid grid = grid_for_specimen(3, s);
        const PotentialStack stack = build_potential_slices(s, grid, beam);
        for (double v : stack.cell_slice_phases[4]) CHECK(v == 0.0);  // z ~ 20 A away
        double occupied = 0.0;
        for (double v : stack.cell_slice_phases[0]) occupied += v;
        CHECK(occupied > 0.0);
        // neighbors of the atomic plane pick up the projected tails
        double neighbor = 0.0;
        for (double v : stack.cell_slice_phases[1]) neighbor += v;
        CHECK(neighbor > 0.0);
        CHECK(neighbor < occupied);
    }
    SUBCASE("slice phases telescope to the full projected column") {
        const Specimen s = gold_fcc(1);
        const FieldGrid grid = grid_for_specimen(4, s);
        const PotentialStack stack = build_potential_slices(s, grid, beam);
        const std::size_t n = grid.points_per_axis;
        constexpr double four_pi = 4.0 * std::numbers::pi;
        for (std::size_t y = 0; y < n; y += 3) {
            for (std::size_t x = 0; x < n; x += 3) {
                double total = 0.0;
                for (const auto& field : stack.cell_slice_phases) total += field[y * n + x];
                // independent full line integral of every atom column
                const double px = (x + 0.5) * grid.pixel_size_x();
                const double py = (y + 0.5) * grid.pixel_size_y();
                double want = 0.0;
                for (const BasisAtom& atom : s.basis) {
                    for (int iy = -3; iy <= 3; ++iy) {
                        for (int ix = -3; ix <= 3; ++ix) {
                            const double dx = px - (atom.fx + ix) * s.lattice_constant;
                            const double dy = py - (atom.fy + iy) * s.lattice_constant;
                            const double r2 = dx * dx + dy * dy;
                            for (int i = 0; i < 4; ++i) {
                                const double w = atom.species.b[i] + atom.species.debye_waller;
                                want += constants::potential_prefactor_v_a2 *
                                        atom.species.a[i] * (four_pi / w) *
                                        std::exp(-std::numbers::pi * four_pi * r2 / w);
                            }
                        }
                    }
                }
                want *= beam.sigma;
                CHECK(total == doctest::Approx(want).epsilon(1e-9));
            }
        }
    }
    SUBCASE("doubling the depth repeats identical slices") {
        const Specimen s1 = gold_fcc(1);
        const Specimen s2 = gold_fcc(2);
        const FieldGrid grid = grid_for_specimen(3, s1);
        const PotentialStack a = build_potential_slices(s1, grid, beam);
        const PotentialStack b = build_potential_slices(s2, grid, beam);
        CHECK(b.slice_count == 2 * a.slice_count);
        for (int t = 0; t < b.slice_count; ++t) {
            CHECK(b.slice_phase(t) == a.slice_phase(t % a.slice_count));
        }
    }
    SUBCASE("rejects inconsistent input") {
        Specimen s = gold_fcc(1);
        const FieldGrid good = grid_for_specimen(3, s);
        CHECK_THROWS_AS(build_potential_slices(s, FieldGrid(3, 5.0, 5.0), beam),
                        std::invalid_argument);
        CHECK_THROWS_AS(build_potential_slices(s, good, beam, 0.5), std::invalid_argument);
        s.basis.clear();
        CHECK_THROWS_AS(build_potential_slices(s, good, beam), std::invalid_argument);
    }
}

TEST_CASE("propagator phase field") {
    const BeamParams beam = beam_params(100e3);
    const FieldGrid grid(4, 4.0782, 4.0782);
    const double d = 4.0782 / 16;
    const std::vector<double> phase = build_propagator(grid, beam, d);
    const std::size_t n = grid.points_per_axis;

    CHECK(phase[0] == 0.0);
    for (std::size_t q = 1; q < n / 2; ++q) {
        CHECK(phase[q] == doctest::Approx(phase[n - q]));          // row 0 evenness
        CHECK(phase[q * n] == doctest::Approx(phase[(n - q) * n]));  // column 0 evenness
    }
    for (std::size_t qy = 0; qy < n; ++qy) {
        for (std::size_t qx = 0; qx < n; ++qx) {
            CHECK(phase[qy * n + qx] ==
                  doctest::Approx(phase[qx] + phase[qy * n]).epsilon(1e-12));
        }
    }
    for (double v : phase) CHECK(v <= 0.0);
    CHECK_THROWS_AS(build_propagator(grid, beam, 0.0), std::invalid_argument);
}

TEST_CASE("propagator Walsh spectrum stays on single-register masks") {
    const BeamParams beam = beam_params(100e3);
    for (int n = 4; n <= 8; ++n) {
        const FieldGrid grid(n, 4.0782, 4.0782);
        const WalshSpectrum s = fwht(build_propagator(grid, beam, 4.0782 / 16));
        const std::uint64_t x_mask = (std::uint64_t{1} << n) - 1;
        std::size_t nonzero = 0;
        for (std::uint64_t u = 1; u < s.coefficients.size(); ++u) {
            const std::uint64_t ux = u & x_mask;
            const std::uint64_t uy = u >> n;
            const bool structural_zero =
                (ux != 0 && uy != 0) || std::popcount(ux) > 2 || std::popcount(uy) > 2;
            if (structural_zero) {
                CHECK(std::abs(s.coefficients[u]) <= 1e-12 * s.w_max);
            }
            if (std::abs(s.coefficients[u]) > 1e-12 * s.w_max) ++nonzero;
        }
        CHECK(nonzero <= static_cast<std::size_t>(2 * (n + n * (n - 1) / 2)));
    }
}

TEST_CASE("complement-symmetric specimens kill odd-popcount coefficients") {
    const BeamParams beam = beam_params(100e3);
    const Specimen s = gold_fcc(1);
    const FieldGrid grid = grid_for_specimen(5, s);
    const PotentialStack stack = build_potential_slices(s, grid, beam);
    for (const auto& field : stack.cell_slice_phases) {
        const WalshSpectrum spectrum = fwht(field);
        for (std::uint64_t u = 1; u < spectrum.coefficients.size(); ++u) {
            if (std::popcount(u) % 2 == 1) {
                CHECK(std::abs(spectrum.coefficients[u]) <= 1e-12 * spectrum.w_max);
            }
        }
    }
}

TEST_CASE("slice thickness advisory") {
    const BeamParams beam = beam_params(100e3);
    const ThicknessReport fine = check_slice_thickness(0.25, 0.25, beam, 1.0);
    CHECK(!fine.warning);
    const ThicknessReport coarse = check_slice_thickness(2.0, 0.25, beam, 1.0);
    CHECK(coarse.warning);
    CHECK(coarse.message.find("2") != std::string::npos);
    CHECK(coarse.message.find("exceeds") != std::string::npos);
    // 16 slices per Au cell passes the default criterion
    CHECK(!check_slice_thickness(4.0782 / 16, 4.0782 / 16, beam).warning);
    CHECK_THROWS_AS(check_slice_thickness(0.0, 1.0, beam), std::invalid_argument);
}
