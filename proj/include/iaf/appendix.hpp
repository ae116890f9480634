#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>

#include "iaf/stencil.hpp"

namespace iaf {

// A named stable scheme with its closed-form residual equations, coefficients as
// functions of the CFL number c (slot orders as in ResidualRows).
struct NamedScheme {
    const char* name;
    const char* stability;  // CFL condition as tabulated
    PointResidual (*point)(double c);
    AverageResidual (*average)(double c);
};

// The sixteen tabulated schemes 3A..3I, 4A..4D, 5A..5C, in table order.
std::span<const NamedScheme> named_schemes();

// CFL values at which generic residuals are compared with the tables.
inline constexpr std::array<double, 5> kMatchCfls = {1.5, 2.5, 3.0, 5.0, 7.0};
inline constexpr double kMatchTolerance = 1e-9;

// Largest residual mismatch (up to scale, both equations) of `mask` against `scheme`
// over the nonsingular CFLs in `cfls`. Returns nullopt when every CFL is singular.
std::optional<double> appendix_mismatch(const StencilMask& mask, const NamedScheme& scheme,
                                        std::span<const double> cfls);

// The unique tabulated scheme whose residuals `mask` reproduces, if any.
// Throws NumericalError if more than one matches.
std::optional<std::string> match_appendix(const StencilMask& mask);

// Name -> mask for all sixteen schemes, derived once by matching all 42 masks.
// Throws NumericalError if any name matches zero or several masks.
const std::map<std::string, StencilMask>& scheme_masks();

// Scheme selection by tabulated name ("3C") or raw mask ("010|011").
struct SchemeId {
    std::string label;  // name if one exists, else the mask string
    StencilMask mask;
};

SchemeId resolve_scheme(const std::string& text);

}  // namespace iaf
