#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hardyops/series.hpp"

namespace hardyops {

// One row of the CSV residual table.
struct ResidualRow {
   std::string check;
   std::size_t sample_index = 0;
   double residual = 0.0;
};

// Outcome of a named verification: a residual per sub-check, the tolerance
// they are compared against, and the verdict derived from them.
struct Report {
   std::string check;
   std::map<std::string, double> residuals;
   std::optional<Series1D> witness;
   double tolerance = 0.0;
   std::size_t grid_size = 0;
   std::vector<ResidualRow> rows;

   double max_residual() const
   {
      double worst = 0.0;
      for (const auto& [name, value] : residuals) {
         worst = std::max(worst, value);
      }
      return worst;
   }

   // NaN residuals fail.
   bool passed() const
   {
      return std::all_of(residuals.begin(), residuals.end(), [&](const auto& kv) { return kv.second < tolerance; });
   }
};

} // namespace hardyops
