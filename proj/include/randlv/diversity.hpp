#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include "randlv/equilibrium.hpp"
#include "randlv/error.hpp"

namespace randlv {

struct DiversityReport {
  double shannon = 0.0;
  double hill1 = 1.0;
  int positive_count = 0;  // species counted in the frequencies
};

/// Shannon entropy (natural log) of the abundance frequencies. Entries at or
/// below the survival threshold count as absent.
inline DiversityReport diversity(std::span<const double> x) {
  double total = 0.0;
  int count = 0;
  for (double v : x) {
    if (v > kSurvivalThreshold) {
      total += v;
      ++count;
    }
  }
  if (count == 0) throw DomainError("diversity: abundance vector has no positive entry");
  double h = 0.0;
  for (double v : x) {
    if (v > kSurvivalThreshold) {
      const double f = v / total;
      h -= f * std::log(f);
    }
  }
  h = std::max(h, 0.0);
  return {h, std::exp(h), count};
}

inline double shannon_index(std::span<const double> x) { return diversity(x).shannon; }

/// exp(H'), the effective number of species.
inline double hill_number(std::span<const double> x) { return diversity(x).hill1; }

inline double shannon_index(const Vector& x) { return shannon_index(std::span<const double>(x.data(), x.size())); }
inline double hill_number(const Vector& x) { return hill_number(std::span<const double>(x.data(), x.size())); }

}  // namespace randlv
