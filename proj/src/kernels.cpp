#include "refrob/kernels.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace refrob::kernels {

namespace {

constexpr std::size_t kParallelMultiplyWork = 1 << 14;
constexpr std::size_t kParallelOrbitElements = 32;

void multiply_range(PolyBuilder& acc, std::span<const MultiPoly::Term> fs, std::span<const MultiPoly::Term> gs,
                    const WeightVec* d, int max_weight) {
  std::vector<int> gw;
  if (d) {
    gw.reserve(gs.size());
    for (const auto& t : gs) gw.push_back(d->dot(t.first));
  }
  for (const auto& [ea, ca] : fs) {
    const int wa = d ? d->dot(ea) : 0;
    if (d && wa > max_weight) continue;
    for (std::size_t j = 0; j < gs.size(); ++j) {
      if (d && wa + gw[j] > max_weight) continue;
      acc.add_product(ea + gs[j].first, ca, gs[j].second);
    }
  }
}

MultiPoly sum_all(std::vector<MultiPoly>& parts, int nvars) {
  // pairwise merging keeps each merge balanced
  if (parts.empty()) return MultiPoly(nvars);
  while (parts.size() > 1) {
    std::vector<MultiPoly> next;
    for (std::size_t i = 0; i + 1 < parts.size(); i += 2) next.push_back(parts[i] + parts[i + 1]);
    if (parts.size() % 2) next.push_back(std::move(parts.back()));
    parts = std::move(next);
  }
  return std::move(parts.front());
}

}  // namespace

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

MultiPoly multiply_serial(const MultiPoly& f, const MultiPoly& g, const WeightVec* d, int max_weight) {
  if (f.nvars() != g.nvars()) throw PolyError("multiply: ring mismatch");
  PolyBuilder acc(f.nvars());
  multiply_range(acc, f.terms(), g.terms(), d, max_weight);
  return std::move(acc).build();
}

MultiPoly multiply_parallel(const MultiPoly& f, const MultiPoly& g, const WeightVec* d, int max_weight) {
  if (f.nvars() != g.nvars()) throw PolyError("multiply: ring mismatch");
  const auto& big = f.size() >= g.size() ? f : g;
  const auto& small = f.size() >= g.size() ? g : f;
  const std::size_t chunks = std::min<std::size_t>(big.size(), static_cast<std::size_t>(4 * max_threads()));
  if (chunks <= 1) return multiply_serial(f, g, d, max_weight);
  std::vector<MultiPoly> parts(chunks, MultiPoly(f.nvars()));
  const auto terms = big.terms();
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
    const std::size_t lo = terms.size() * static_cast<std::size_t>(c) / chunks;
    const std::size_t hi = terms.size() * static_cast<std::size_t>(c + 1) / chunks;
    PolyBuilder acc(f.nvars());
    multiply_range(acc, terms.subspan(lo, hi - lo), small.terms(), d, max_weight);
    parts[static_cast<std::size_t>(c)] = std::move(acc).build();
  }
  return sum_all(parts, f.nvars());
}

MultiPoly multiply(const MultiPoly& f, const MultiPoly& g, const WeightVec* d, int max_weight) {
  if (max_threads() > 1 && f.size() * g.size() >= kParallelMultiplyWork) return multiply_parallel(f, g, d, max_weight);
  return multiply_serial(f, g, d, max_weight);
}

MultiPoly orbit_sum_serial(const MultiPoly& f, std::span<const Matrix> elements) {
  MultiPoly sum(f.nvars());
  for (const auto& g : elements) sum += subst_linear(f, g);
  return sum;
}

MultiPoly orbit_sum_parallel(const MultiPoly& f, std::span<const Matrix> elements) {
  std::vector<MultiPoly> parts(elements.size(), MultiPoly(f.nvars()));
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(elements.size()); ++i) {
    parts[static_cast<std::size_t>(i)] = subst_linear(f, elements[static_cast<std::size_t>(i)]);
  }
  return sum_all(parts, f.nvars());
}

MultiPoly orbit_sum(const MultiPoly& f, std::span<const Matrix> elements) {
  if (max_threads() > 1 && elements.size() >= kParallelOrbitElements) return orbit_sum_parallel(f, elements);
  return orbit_sum_serial(f, elements);
}

}  // namespace refrob::kernels
