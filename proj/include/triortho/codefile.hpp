#pragma once

// Text format for code matrices ("<name>.code" files).
//
//   triortho-code v1
//   n 114
//   kt 14
//   kcs 0
//   kccz 0
//   k0 15
//   base rm 2 7            (optional provenance)
//   puncture 3 10 19 ...   (optional, decimal point indices, x1 = MSB)
//   rows                   (optional when provenance present)
//   01011...               (k_T + 2k_CS + 3k_CCZ + k_0 lines, blocks in order)
//   end
//
// Coordinate 0 is the leftmost character of a row line. A file with
// provenance but no rows is reconstructed by puncturing the named
// Reed-Muller code; a file with both must agree exactly.

#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "triortho/reedmuller.hpp"
#include "triortho/trio.hpp"

namespace triortho {

struct CodeProvenance {
  int r = 0;
  int m = 0;
  std::vector<std::size_t> coords;  // puncture list, order = logical row order
};

struct CodeFile {
  GenTrioMatrix code;
  std::optional<CodeProvenance> provenance;
};

inline GenTrioMatrix reconstruct_from_provenance(const CodeProvenance& p, std::size_t k_t,
                                                 std::size_t k_cs, std::size_t k_ccz) {
  return puncture(rm_generator(p.r, p.m), p.coords, k_t, k_cs, k_ccz);
}

inline void serialize_code(const CodeFile& cf, std::ostream& out) {
  const GenTrioMatrix& g = cf.code;
  out << "triortho-code v1\n";
  out << "n " << g.n() << "\n";
  out << "kt " << g.k_t() << "\n";
  out << "kcs " << g.k_cs() << "\n";
  out << "kccz " << g.k_ccz() << "\n";
  out << "k0 " << g.k_0() << "\n";
  if (cf.provenance) {
    out << "base rm " << cf.provenance->r << " " << cf.provenance->m << "\n";
    out << "puncture";
    for (auto c : cf.provenance->coords) out << " " << c;
    out << "\n";
  }
  out << "rows\n";
  BitMatrix f = g.full();
  for (const auto& r : f.rows()) out << r.to_string() << "\n";
  out << "end\n";
}

inline CodeFile parse_code(std::istream& in) {
  auto fail = [](const std::string& why) -> std::invalid_argument {
    return std::invalid_argument("code file: " + why);
  };
  std::string line;
  if (!std::getline(in, line) || line != "triortho-code v1") throw fail("bad or missing magic");

  std::size_t n = 0, kt = 0, kcs = 0, kccz = 0, k0 = 0;
  bool have_n = false, have_kt = false, have_kcs = false, have_kccz = false, have_k0 = false;
  std::optional<CodeProvenance> prov;
  std::vector<std::string> row_lines;
  bool saw_rows = false, saw_end = false;

  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "n") {
      ls >> n;
      have_n = true;
    } else if (key == "kt") {
      ls >> kt;
      have_kt = true;
    } else if (key == "kcs") {
      ls >> kcs;
      have_kcs = true;
    } else if (key == "kccz") {
      ls >> kccz;
      have_kccz = true;
    } else if (key == "k0") {
      ls >> k0;
      have_k0 = true;
    } else if (key == "base") {
      std::string kind;
      ls >> kind;
      if (kind != "rm") throw fail("unknown base kind '" + kind + "'");
      CodeProvenance p;
      ls >> p.r >> p.m;
      if (!ls) throw fail("malformed base line");
      if (prov) prov->r = p.r, prov->m = p.m;
      else {
        prov = p;
      }
    } else if (key == "puncture") {
      if (!prov) throw fail("puncture line before base line");
      std::size_t c;
      while (ls >> c) prov->coords.push_back(c);
    } else if (key == "rows") {
      saw_rows = true;
      std::size_t expect = kt + 2 * kcs + 3 * kccz + k0;
      for (std::size_t i = 0; i < expect; ++i) {
        if (!std::getline(in, line)) throw fail("truncated rows section");
        if (line.size() != n) throw fail("row length " + std::to_string(line.size()) +
                                         " does not match n " + std::to_string(n));
        row_lines.push_back(line);
      }
    } else if (key == "end") {
      saw_end = true;
      break;
    } else {
      throw fail("unknown key '" + key + "'");
    }
    if (!ls && key != "puncture") throw fail("malformed line '" + line + "'");
  }
  if (!saw_end) throw fail("missing end marker");
  if (!(have_n && have_kt && have_kcs && have_kccz && have_k0))
    throw fail("incomplete header");
  if (!saw_rows && !prov) throw fail("neither rows nor provenance present");

  auto blocks_from = [&](const std::vector<std::string>& lines) {
    BitMatrix t(n), cs(n), ccz(n), zero(n);
    std::size_t i = 0;
    for (; i < kt; ++i) t.append_row(BitVec::from_string(lines[i]));
    for (; i < kt + 2 * kcs; ++i) cs.append_row(BitVec::from_string(lines[i]));
    for (; i < kt + 2 * kcs + 3 * kccz; ++i) ccz.append_row(BitVec::from_string(lines[i]));
    for (; i < lines.size(); ++i) zero.append_row(BitVec::from_string(lines[i]));
    return GenTrioMatrix::make(std::move(t), std::move(cs), std::move(ccz), std::move(zero));
  };

  CodeFile cf;
  cf.provenance = prov;
  std::optional<GenTrioMatrix> reconstructed;
  if (prov) {
    reconstructed = reconstruct_from_provenance(*prov, kt, kcs, kccz);
    if (reconstructed->n() != n)
      throw fail("provenance reconstructs n = " + std::to_string(reconstructed->n()) +
                 ", header says " + std::to_string(n));
    if (reconstructed->k_0() != k0)
      throw fail("provenance reconstructs k0 = " + std::to_string(reconstructed->k_0()) +
                 ", header says " + std::to_string(k0));
  }
  if (saw_rows) {
    cf.code = blocks_from(row_lines);
    if (reconstructed && !(cf.code == *reconstructed))
      throw fail("rows disagree with provenance reconstruction");
  } else {
    cf.code = std::move(*reconstructed);
  }
  return cf;
}

inline CodeFile load_code_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open code file: " + path);
  return parse_code(in);
}

inline void save_code_file(const CodeFile& cf, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::invalid_argument("cannot write code file: " + path);
  serialize_code(cf, out);
}

}  // namespace triortho
