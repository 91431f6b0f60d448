#pragma once

// Random triorthogonal matrices, built one row at a time.
//
// Each new row g_j must hit prescribed parities against everything drawn so
// far: its own weight (odd exactly for T rows), its overlap with each earlier
// row (odd exactly for the second row of a CS pair against its partner), and
// the triple overlap with each earlier pair (odd exactly for the last row of
// a CCZ triple against the wedge of its two partners). All of these are
// linear in g_j:
//   g_i . g_j            for each earlier row i
//   (g_a ^ g_b) . g_j    for each earlier pair a < b
//   1 . g_j              the weight parity
// so the candidate set is an affine subspace and sampling uniformly from it
// is exact. Odd (T) rows are drawn first; their constraints stay feasible
// longest and a failure is detected at the step it happens.

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "triortho/bits.hpp"
#include "triortho/rng.hpp"
#include "triortho/trio.hpp"

namespace triortho {

enum class RowKind : std::uint8_t {
  t,          // odd weight, even against everything earlier
  even,       // even everywhere (stabilizer rows, first rows of patterns)
  cs_second,  // odd overlap with its pair partner only
  ccz_last,   // odd triple overlap with its two partners' wedge only
};

struct RowSpec {
  RowKind kind = RowKind::even;
  std::size_t partner_a = SIZE_MAX;  // cs_second / ccz_last: earlier partner row
  std::size_t partner_b = SIZE_MAX;  // ccz_last: the other partner
};

struct ConstraintSystem {
  BitMatrix lhs;
  BitVec rhs;
};

// Constraint rows in order: earlier rows, wedges (a,b) with a < b in lex
// order, then the all-ones weight row.
inline ConstraintSystem build_constraints(const BitMatrix& prev, const RowSpec& spec) {
  const std::size_t j = prev.n_rows();
  const std::size_t n = prev.n_cols();
  if (spec.kind == RowKind::cs_second && spec.partner_a >= j)
    throw std::invalid_argument("build_constraints: CS partner out of range");
  if (spec.kind == RowKind::ccz_last && (spec.partner_a >= j || spec.partner_b >= j))
    throw std::invalid_argument("build_constraints: CCZ partners out of range");

  ConstraintSystem cs{BitMatrix(n), BitVec(j + j * (j - (j ? 1 : 0)) / 2 + 1)};
  std::size_t at = 0;
  for (std::size_t i = 0; i < j; ++i) {
    cs.lhs.append_row(prev.row(i));
    cs.rhs.set(at++, spec.kind == RowKind::cs_second && i == spec.partner_a);
  }
  for (std::size_t a = 0; a < j; ++a)
    for (std::size_t b = a + 1; b < j; ++b) {
      cs.lhs.append_row(wedge(prev.row(a), prev.row(b)));
      bool odd = spec.kind == RowKind::ccz_last &&
                 ((a == spec.partner_a && b == spec.partner_b) ||
                  (a == spec.partner_b && b == spec.partner_a));
      cs.rhs.set(at++, odd);
    }
  cs.lhs.append_row(BitVec::ones(n));
  cs.rhs.set(at++, spec.kind == RowKind::t);
  return cs;
}

struct SampledRow {
  BitVec row;
  std::size_t kernel_dim;  // log2 of the candidate count
};

// Uniform draw from the solution set: particular solution plus a uniformly
// random kernel combination. nullopt when the system is infeasible.
inline std::optional<SampledRow> sample_row(const ConstraintSystem& cs, CounterRng& rng) {
  auto sol = solve(cs.lhs, cs.rhs);
  if (!sol) return std::nullopt;
  BitVec v = std::move(sol->particular);
  for (std::size_t i = 0; i < sol->kernel.n_rows(); ++i)
    if (rng.next_u64() & 1) v ^= sol->kernel.row(i);
  return SampledRow{std::move(v), sol->kernel.n_rows()};
}

struct RowDraw {
  std::size_t index;       // position in the drawn sequence
  RowKind kind;
  std::size_t kernel_dim;  // log2 of the candidate count at this step
};

struct GenerateResult {
  std::optional<GenTrioMatrix> code;
  std::size_t failed_step = SIZE_MAX;  // set when !code
  std::vector<RowDraw> log;
  bool ok() const { return code.has_value(); }
  explicit operator bool() const { return ok(); }
};

namespace detail {

inline GenerateResult generate_rows(std::size_t n, const std::vector<RowSpec>& plan,
                                    std::size_t k_t, std::size_t k_cs, std::size_t k_ccz,
                                    std::uint64_t seed) {
  CounterRng rng(seed);
  GenerateResult out;
  BitMatrix rows(n);
  for (std::size_t j = 0; j < plan.size(); ++j) {
    ConstraintSystem cs = build_constraints(rows, plan[j]);
    auto draw = sample_row(cs, rng);
    if (!draw) {
      out.failed_step = j;
      return out;
    }
    out.log.push_back({j, plan[j].kind, draw->kernel_dim});
    rows.append_row(std::move(draw->row));
  }
  BitMatrix t(n), cspairs(n), ccz(n), zero(n);
  std::size_t i = 0;
  for (; i < k_t; ++i) t.append_row(rows.row(i));
  for (; i < k_t + 2 * k_cs; ++i) cspairs.append_row(rows.row(i));
  for (; i < k_t + 2 * k_cs + 3 * k_ccz; ++i) ccz.append_row(rows.row(i));
  for (; i < rows.n_rows(); ++i) zero.append_row(rows.row(i));
  out.code =
      GenTrioMatrix::make(std::move(t), std::move(cspairs), std::move(ccz), std::move(zero));
  return out;
}

}  // namespace detail

// k_t odd rows, then k_0 stabilizer rows. A failed step is returned, not
// retried; callers advance the seed and try again.
inline GenerateResult generate(std::size_t n, std::size_t k_t, std::size_t k_0,
                               std::uint64_t seed) {
  std::vector<RowSpec> plan;
  for (std::size_t i = 0; i < k_t; ++i) plan.push_back({RowKind::t});
  for (std::size_t i = 0; i < k_0; ++i) plan.push_back({RowKind::even});
  return detail::generate_rows(n, plan, k_t, 0, 0, seed);
}

// Draw order: T rows, CS pairs, CCZ triples, stabilizer rows. Within each
// pattern only the last member carries odd target parities.
inline GenerateResult generate_generalized(std::size_t n, std::size_t k_t, std::size_t k_cs,
                                           std::size_t k_ccz, std::size_t k_0,
                                           std::uint64_t seed) {
  std::vector<RowSpec> plan;
  for (std::size_t i = 0; i < k_t; ++i) plan.push_back({RowKind::t});
  for (std::size_t p = 0; p < k_cs; ++p) {
    std::size_t first = plan.size();
    plan.push_back({RowKind::even});
    plan.push_back({RowKind::cs_second, first});
  }
  for (std::size_t tr = 0; tr < k_ccz; ++tr) {
    std::size_t first = plan.size();
    plan.push_back({RowKind::even});
    plan.push_back({RowKind::even});
    plan.push_back({RowKind::ccz_last, first, first + 1});
  }
  for (std::size_t i = 0; i < k_0; ++i) plan.push_back({RowKind::even});
  return detail::generate_rows(n, plan, k_t, k_cs, k_ccz, seed);
}

// Default row budget: theta * sqrt(n) rows total, split evenly between the
// T block and the stabilizer block.
struct RowBudget {
  std::size_t k_t;
  std::size_t k_0;
};

inline RowBudget default_row_budget(std::size_t n, double theta = 0.5) {
  auto m = static_cast<std::size_t>(theta * std::sqrt(double(n)));
  return {m / 2, m - m / 2};
}

}  // namespace triortho
