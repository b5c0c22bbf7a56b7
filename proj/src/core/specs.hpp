#pragma once

#include <string>

#include "analytic.hpp"
#include "graph.hpp"
#include "json.hpp"
#include "model.hpp"
#include "spectrum.hpp"

// JSON specifications for graphs, models, shapes and measures. The grammar
// is documented in docs/config.md; every object rejects unknown keys.
namespace sou::specs {

enum class SpectrumMethod { Auto, Dense, Closed };
SpectrumMethod parse_spectrum_method(const std::string& name);

WeightedGraph build_graph(const nlohmann::json& spec);
/// Closed form for known families under Auto, the dense eigensolve otherwise.
Spectrum graph_spectrum(const nlohmann::json& spec, SpectrumMethod method = SpectrumMethod::Auto);
/// True when the family has a closed-form spectrum (and is vertex-transitive).
bool has_closed_form(const nlohmann::json& spec);
std::string graph_family(const nlohmann::json& spec);

SOUModel build_model(const nlohmann::json& spec);
std::string model_family(const nlohmann::json& spec);

bool is_product_shape(const nlohmann::json& spec);
ShapeFunction build_shape(const nlohmann::json& spec);
ProductShape build_product_shape(const nlohmann::json& spec);
std::string shape_family(const nlohmann::json& spec);

MeasureDensity build_measure(const nlohmann::json& spec);

}  // namespace sou::specs
