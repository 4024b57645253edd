#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace rovella {

enum class SeriesKind { correlation, convergence };

inline std::string to_string(SeriesKind k) { return k == SeriesKind::correlation ? "correlation" : "convergence"; }

/// Estimated correlation (or convergence-to-equilibrium) functional per lag.
struct CorrelationSeries {
  SeriesKind kind = SeriesKind::correlation;
  std::vector<std::size_t> lags;  // strictly increasing
  std::vector<double> estimate;
  std::vector<double> std_error;    // jackknife standard errors
  std::size_t ensemble_size = 0;  // starts actually used
  std::size_t excluded = 0;       // starts dropped after hitting the singularity
};

}  // namespace rovella
