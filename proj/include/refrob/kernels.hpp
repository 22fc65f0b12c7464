#pragma once

// Hot loops with an OpenMP implementation next to the serial reference it must
// agree with exactly. The dispatching entry points pick the parallel version
// only when the work is large enough to amortize thread start-up.

#include <span>

#include "refrob/linalg.hpp"
#include "refrob/polyring.hpp"

namespace refrob::kernels {

/// f * g. With `d` set, terms of weight > max_weight are never formed.
MultiPoly multiply_serial(const MultiPoly& f, const MultiPoly& g, const WeightVec* d = nullptr, int max_weight = 0);
MultiPoly multiply_parallel(const MultiPoly& f, const MultiPoly& g, const WeightVec* d = nullptr, int max_weight = 0);
MultiPoly multiply(const MultiPoly& f, const MultiPoly& g, const WeightVec* d = nullptr, int max_weight = 0);

/// sum over g in `elements` of f(g v), for f in root coordinates.
MultiPoly orbit_sum_serial(const MultiPoly& f, std::span<const Matrix> elements);
MultiPoly orbit_sum_parallel(const MultiPoly& f, std::span<const Matrix> elements);
MultiPoly orbit_sum(const MultiPoly& f, std::span<const Matrix> elements);

/// Number of OpenMP threads available (1 when built without OpenMP).
int max_threads();

}  // namespace refrob::kernels
