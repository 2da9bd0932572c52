#include "pcop/common.hpp"

namespace pcop {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::exact: return "exact";
    case Provenance::estimated_lower_bound: return "estimated-lower-bound";
    case Provenance::estimated_upper_bound: return "estimated-upper-bound";
    case Provenance::user_supplied: return "user-supplied";
  }
  return "unknown";
}

Provenance provenance_from_string(std::string_view s) {
  if (s == "exact") return Provenance::exact;
  if (s == "estimated-lower-bound") return Provenance::estimated_lower_bound;
  if (s == "estimated-upper-bound") return Provenance::estimated_upper_bound;
  if (s == "user-supplied") return Provenance::user_supplied;
  throw ParameterError("unknown provenance '" + std::string(s) + "'");
}

}  // namespace pcop
