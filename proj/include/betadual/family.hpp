#pragma once

#include <string>
#include <string_view>

namespace betadual {

/// Classical weight: Gaussian (Hermite), Laguerre, Jacobi (shifted to (0,1)).
enum class Family { Gaussian, Laguerre, Jacobi };

/// Accepts g|gaussian|hermite, l|laguerre, j|jacobi (case-sensitive).
Family parse_family(std::string_view name);
std::string_view family_name(Family f);       // "gaussian" ...
std::string_view polynomial_name(Family f);   // "hermite" ...

}  // namespace betadual
