#include "rfspec/analytic_spectrum.hpp"
#include "rfspec/errors.hpp"
#include "rfspec/spectrum_io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace rfspec;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "rfspec_io_test";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Fnv1a, ReferenceVectors) {
    EXPECT_EQ(hex64(fnv1a64("")), "cbf29ce484222325");
    EXPECT_EQ(hex64(fnv1a64("a")), "af63dc4c8601ec8c");
}

TEST(RunStamp, HashDependsOnConfigAndSeed) {
    RunStamp a{{{"x", 1}}, 3};
    RunStamp b{{{"x", 1}}, 4};
    RunStamp c{{{"x", 2}}, 3};
    EXPECT_NE(a.hash(), b.hash());
    EXPECT_NE(a.hash(), c.hash());
    EXPECT_EQ(a.hash(), RunStamp({{"x", 1}}, 3).hash());
    EXPECT_EQ(a.hash().size(), 16u);
}

TEST(Params, JsonRoundTrip) {
    ModelParams p;
    p.gamma = cplx(0.3, -0.7);
    p.gamma_pd = 0.11;
    p.gamma_xd = 0.07;
    p.Gamma_det = 0.2;
    p.kappa = -1.5;
    p.drive_scale = 1e-4;
    const ModelParams q = params_from_json(params_to_json(p));
    EXPECT_EQ(q.gamma, p.gamma);
    EXPECT_EQ(q.gamma_pd, p.gamma_pd);
    EXPECT_EQ(q.gamma_xd, p.gamma_xd);
    EXPECT_EQ(q.Gamma_det, p.Gamma_det);
    EXPECT_EQ(q.kappa, p.kappa);
    EXPECT_EQ(q.drive_scale, p.drive_scale);
    EXPECT_THROW(params_from_json(nlohmann::json{{"gamma_re", "x"}}), ParseError);
}

TEST(SpectrumCsv, RoundTripIsExact) {
    ModelParams p;
    p.gamma = cplx(0.8, 0.1);
    p.gamma_pd = p.gamma_xd = 0.2;
    p.kappa = 0.5;
    Occupations occ(2);
    occ << 0.25, 0.75;
    const Spectrum s = rf_spectrum_full(p, occ, default_grid(p, 1));
    const fs::path path = scratch("round_trip.csv");
    write_spectrum_csv(path, s, RunStamp{{{"model", "full"}}, 12345});
    const Spectrum r = read_spectrum_csv(path);
    EXPECT_EQ(r.grid, s.grid);
    EXPECT_EQ(r.values, s.values);
    EXPECT_EQ(r.provenance, Provenance::full);
    EXPECT_EQ(r.params.gamma, p.gamma);
    EXPECT_EQ(r.params.kappa, p.kappa);
    const std::string text = slurp(path);
    EXPECT_NE(text.find("# manifest_hash: " + RunStamp{{{"model", "full"}}, 12345}.hash()),
              std::string::npos);
    EXPECT_NE(text.find("# seed: 12345"), std::string::npos);
    EXPECT_NE(text.find("# config: {\"model\":\"full\"}"), std::string::npos);
}

TEST(SpectrumCsv, ProvenanceTags) {
    for (Provenance p : {Provenance::full, Provenance::narrow, Provenance::semiclassical,
                         Provenance::oracle, Provenance::measured_noise})
        EXPECT_EQ(provenance_from_string(to_string(p)), p);
    EXPECT_EQ(to_string(Provenance::measured_noise), "measured+noise");
    EXPECT_THROW(provenance_from_string("guess"), ParseError);
}

TEST(SpectrumCsv, MissingFileIsIoError) {
    EXPECT_THROW(read_spectrum_csv(scratch("does_not_exist.csv")), IoError);
}

TEST(SpectrumCsv, MalformedBodyIsParseError) {
    const fs::path path = scratch("bad.csv");
    {
        std::ofstream out(path);
        out << "# rfspec spectrum\n# provenance: full\nx,S\n0.0,1.0\nnot-a-number,2\n";
    }
    EXPECT_THROW(read_spectrum_csv(path), ParseError);
    {
        std::ofstream out(path);
        out << "# rfspec spectrum\nx,S\n0.0,1.0,3.0\n";
    }
    EXPECT_THROW(read_spectrum_csv(path), ParseError);
}

TEST(FormatDouble, SeventeenDigits) {
    EXPECT_EQ(std::stod(format_double(0.1)), 0.1);
    EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}
