#include "toravg/field_io.hpp"

#include <nlohmann/json.hpp>

#include "toravg/errors.hpp"

namespace toravg {

namespace {

using nlohmann::json;

json box_to_json(const TorusBox& box) {
  return json{{"d", box.dim()},
              {"action_lo", box.action_lo()},
              {"action_hi", box.action_hi()},
              {"K", box.truncation()},
              {"N", box.grid_points_per_axis()}};
}

TorusBox box_from_json(const json& j) {
  return TorusBox::make(j.at("d").get<int>(),
                        j.at("action_lo").get<std::vector<double>>(),
                        j.at("action_hi").get<std::vector<double>>(),
                        j.at("K").get<int>(), j.at("N").get<int>());
}

json field_to_json(const ScalarField& f) {
  const TorusBox& box = f.space();
  json modes = json::array();
  std::vector<int> k(box.dim());
  for (int m : f.active_modes()) {
    box.mode_multi(m, k);
    const auto row = f.mode(m);
    std::vector<double> re(row.size()), im(row.size());
    for (std::size_t g = 0; g < row.size(); ++g) {
      re[g] = row[g].real();
      im[g] = row[g].imag();
    }
    modes.push_back(json{{"k", k}, {"re", re}, {"im", im}});
  }
  return json{{"space", box_to_json(box)}, {"modes", modes}};
}

ScalarField field_from_json(const json& j) {
  const TorusBox box = box_from_json(j.at("space"));
  std::vector<ScalarField::Complex> coef(
      static_cast<std::size_t>(box.n_modes()) * box.n_grid());
  for (const auto& entry : j.at("modes")) {
    const auto k = entry.at("k").get<std::vector<int>>();
    if (static_cast<int>(k.size()) != box.dim() || !box.mode_in_band(k))
      throw ParseError("field JSON: mode index out of band", 0, 0);
    const auto re = entry.at("re").get<std::vector<double>>();
    const auto im = entry.at("im").get<std::vector<double>>();
    if (re.size() != static_cast<std::size_t>(box.n_grid()) || im.size() != re.size())
      throw ParseError("field JSON: coefficient array has wrong length", 0, 0);
    const int m = box.mode_flat(k);
    for (int g = 0; g < box.n_grid(); ++g)
      coef[static_cast<std::size_t>(m) * box.n_grid() + g] = {re[g], im[g]};
  }
  return ScalarField::from_raw(box, std::move(coef));
}

json components_to_json(const TorusBox& box, const char* first_key,
                        const char* second_key,
                        const std::function<const ScalarField&(int)>& first,
                        const std::function<const ScalarField&(int)>& second) {
  json jf = json::array(), js = json::array();
  for (int j = 0; j < box.dim(); ++j) {
    jf.push_back(field_to_json(first(j)));
    js.push_back(field_to_json(second(j)));
  }
  return json{{"space", box_to_json(box)}, {first_key, jf}, {second_key, js}};
}

json parse_or_throw(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ParseError("invalid JSON", 0, 0);
  return j;
}

}  // namespace

std::string to_json_string(const TorusBox& box, int indent) {
  return box_to_json(box).dump(indent);
}

std::string to_json_string(const ScalarField& f, int indent) {
  return field_to_json(f).dump(indent);
}

std::string to_json_string(const OneForm& a, int indent) {
  return components_to_json(
             a.space(), "theta", "action",
             [&](int j) -> const ScalarField& { return a.theta_comp(j); },
             [&](int j) -> const ScalarField& { return a.action_comp(j); })
      .dump(indent);
}

std::string to_json_string(const VectorField& x, int indent) {
  return components_to_json(
             x.space(), "angle", "action",
             [&](int j) -> const ScalarField& { return x.angle_comp(j); },
             [&](int j) -> const ScalarField& { return x.action_comp(j); })
      .dump(indent);
}

TorusBox torus_box_from_json_string(const std::string& text) {
  return box_from_json(parse_or_throw(text));
}

ScalarField scalar_field_from_json_string(const std::string& text) {
  return field_from_json(parse_or_throw(text));
}

OneForm one_form_from_json_string(const std::string& text) {
  const json j = parse_or_throw(text);
  std::vector<ScalarField> th, ac;
  for (const auto& e : j.at("theta")) th.push_back(field_from_json(e));
  for (const auto& e : j.at("action")) ac.push_back(field_from_json(e));
  return OneForm(std::move(th), std::move(ac));
}

VectorField vector_field_from_json_string(const std::string& text) {
  const json j = parse_or_throw(text);
  std::vector<ScalarField> an, ac;
  for (const auto& e : j.at("angle")) an.push_back(field_from_json(e));
  for (const auto& e : j.at("action")) ac.push_back(field_from_json(e));
  return VectorField(std::move(an), std::move(ac));
}

}  // namespace toravg
