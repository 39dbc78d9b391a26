#pragma once

#include <vector>

namespace ts2img {

// First derivative by central differences (3-, 5- or 7-point stencil) at
// interior points. Output has the same length as the input: points where the
// centered stencil does not fit fall back to the widest central stencil that
// does, and the two extreme ends use a second-order one-sided formula, so the
// result is exact on quadratics everywhere.
std::vector<double> central_difference(const std::vector<double>& values,
                                       int stencil_points);

} // namespace ts2img
