#pragma once

#include <string>
#include <vector>

namespace surro {

enum class BasisKind { Linear, Bins };

/// Basis expansion for the surrogate effect. Linear contributes the raw
/// value. Bins one-hot over left-closed intervals anchored at the edges:
/// bin k covers [edges[k], edges[k+1]) and the two outer bins absorb values
/// beyond the edge range.
struct SurrogateBasis {
  BasisKind kind = BasisKind::Linear;
  std::vector<double> edges;  // bins only; strictly increasing
  bool per_arm = false;       // arm-specific effect curves

  int dim() const { return kind == BasisKind::Linear ? 1 : static_cast<int>(edges.size()); }
  void validate() const;
};

std::vector<double> basis_expand(const SurrogateBasis& basis, double value);

std::string to_string(BasisKind kind);
BasisKind basis_kind_from_string(const std::string& s);

}  // namespace surro
