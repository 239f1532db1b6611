#pragma once

#include <string>

#include "toravg/tensor_fields.hpp"

namespace toravg {

// JSON serialization of fields: the space record plus a list of
// (k, coefficient array) pairs for the nonzero modes, coefficients split
// into re/im arrays over the action grid (64-bit floats).

std::string to_json_string(const TorusBox& box, int indent = -1);
std::string to_json_string(const ScalarField& f, int indent = -1);
std::string to_json_string(const OneForm& a, int indent = -1);
std::string to_json_string(const VectorField& x, int indent = -1);

TorusBox torus_box_from_json_string(const std::string& text);
ScalarField scalar_field_from_json_string(const std::string& text);
OneForm one_form_from_json_string(const std::string& text);
VectorField vector_field_from_json_string(const std::string& text);

}  // namespace toravg
