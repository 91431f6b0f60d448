#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "triortho/codefile.hpp"
#include "triortho/trio.hpp"

using namespace triortho;
namespace fs = std::filesystem;

namespace {

struct Shape {
  std::size_t n, k_t, k_ccz;
  bool from_puncture;
};

// the shipped inventory; anything extra or missing in data/ is a failure
const std::map<std::string, Shape> kShipped = {
    {"m3_8.code", {8, 0, 1, false}},
    {"m6_64.code", {64, 0, 2, false}},
    {"m9_512.code", {512, 0, 10, false}},
    {"t1_114_14_3.code", {114, 14, 0, true}},
    {"t1_112_16_3.code", {112, 16, 0, true}},
    {"t1_109_19_3.code", {109, 19, 0, true}},
    {"t1_118_10_4.code", {118, 10, 0, true}},
    {"t1_116_12_4.code", {116, 12, 0, true}},
    {"t2_863_161_3.code", {863, 161, 0, true}},
    {"t2_872_152_4.code", {872, 152, 0, true}},
    {"t2_887_137_5.code", {887, 137, 0, true}},
    {"t2_912_112_6.code", {912, 112, 0, true}},
    {"t2_937_87_7.code", {937, 87, 0, true}},
};

}  // namespace

TEST_CASE("every shipped code file verifies, round-trips, and matches its provenance") {
  std::size_t seen = 0;
  for (const auto& entry : fs::directory_iterator(TRIORTHO_DATA_DIR)) {
    if (entry.path().extension() != ".code") continue;
    const std::string name = entry.path().filename().string();
    INFO(name);
    auto it = kShipped.find(name);
    REQUIRE(it != kShipped.end());
    ++seen;

    CodeFile cf = load_code_file(entry.path().string());
    REQUIRE(cf.code.n() == it->second.n);
    REQUIRE(cf.code.k_t() == it->second.k_t);
    REQUIRE(cf.code.k_cs() == 0);
    REQUIRE(cf.code.k_ccz() == it->second.k_ccz);
    REQUIRE(verify_generalized(cf.code).ok());

    // byte-exact round trip: the files are stored in serializer output form
    std::ostringstream out;
    serialize_code(cf, out);
    std::ifstream in(entry.path());
    std::stringstream raw;
    raw << in.rdbuf();
    REQUIRE(out.str() == raw.str());

    REQUIRE(cf.provenance.has_value() == it->second.from_puncture);
    if (cf.provenance) {
      GenTrioMatrix re = reconstruct_from_provenance(*cf.provenance, cf.code.k_t(),
                                                     cf.code.k_cs(), cf.code.k_ccz());
      REQUIRE(re == cf.code);
    }
  }
  REQUIRE(seen == kShipped.size());
}
