#include "surro/basis.hpp"

#include <algorithm>
#include <cmath>

#include "surro/errors.hpp"

namespace surro {

void SurrogateBasis::validate() const {
  if (kind == BasisKind::Bins) {
    if (edges.empty()) throw ConfigError("basis: bins require at least one edge");
    for (std::size_t k = 1; k < edges.size(); ++k)
      if (!(edges[k] > edges[k - 1]))
        throw ConfigError("basis: bin edges must be strictly increasing");
  }
}

std::vector<double> basis_expand(const SurrogateBasis& basis, double value) {
  if (basis.kind == BasisKind::Linear) return {value};
  // upper_bound - 1 gives the left-closed interval; ends clamp.
  auto it = std::upper_bound(basis.edges.begin(), basis.edges.end(), value);
  long k = (it - basis.edges.begin()) - 1;
  if (k < 0) k = 0;
  if (k >= static_cast<long>(basis.edges.size())) k = static_cast<long>(basis.edges.size()) - 1;
  std::vector<double> out(basis.edges.size(), 0.0);
  out[static_cast<std::size_t>(k)] = 1.0;
  return out;
}

std::string to_string(BasisKind kind) {
  return kind == BasisKind::Linear ? "linear" : "bins";
}

BasisKind basis_kind_from_string(const std::string& s) {
  if (s == "linear") return BasisKind::Linear;
  if (s == "bins") return BasisKind::Bins;
  throw ConfigError("basis: unknown kind '" + s + "' (expected linear|bins)");
}

}  // namespace surro
