#include "betadual/family.hpp"

#include <stdexcept>

namespace betadual {

Family parse_family(std::string_view name) {
  if (name == "g" || name == "G" || name == "gaussian" || name == "hermite") return Family::Gaussian;
  if (name == "l" || name == "L" || name == "laguerre") return Family::Laguerre;
  if (name == "j" || name == "J" || name == "jacobi") return Family::Jacobi;
  throw std::invalid_argument("unknown family: " + std::string(name));
}

std::string_view family_name(Family f) {
  switch (f) {
    case Family::Gaussian: return "gaussian";
    case Family::Laguerre: return "laguerre";
    case Family::Jacobi: return "jacobi";
  }
  return "?";
}

std::string_view polynomial_name(Family f) {
  switch (f) {
    case Family::Gaussian: return "hermite";
    case Family::Laguerre: return "laguerre";
    case Family::Jacobi: return "jacobi";
  }
  return "?";
}

}  // namespace betadual
