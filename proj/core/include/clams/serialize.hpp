#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "clams/bench.hpp"
#include "clams/gmm.hpp"
#include "clams/reducer.hpp"
#include "clams/separability.hpp"
#include "clams/types.hpp"

namespace clams {

inline constexpr int kReportFormatVersion = 1;

// Numbers are rounded to 12 significant digits; infinities become the
// strings "inf" / "-inf" and NaN becomes null.
nlohmann::json json_number(double v);

nlohmann::json to_json(const GaussianComponent& c);
nlohmann::json to_json(const Decomposition& d);
nlohmann::json to_json(const PairFeatures& f);
nlohmann::json to_json(const GmmFitConfig& cfg);
nlohmann::json to_json(const HyperParams& h);
nlohmann::json to_json(const TrainConfig& cfg);
nlohmann::json to_json(const AblationTable& table);
nlohmann::json to_json(const BenchReport& report);

// Score report with the model provenance and the GMM settings that produced it.
nlohmann::json report_json(const std::string& plot_id, const AmbiguityReport& report,
                           const SeparabilityModel& model, const GmmFitConfig& cfg);

// Reducer summary; embeddings are referenced, not inlined.
nlohmann::json reducer_json(const ReducerReport& report, const ReducerConfig& cfg,
                            const std::string& intermediate_path, const std::string& final_path);

std::string dump(const nlohmann::json& j, bool pretty);

// Points, 1 and 2 sd ellipses per component, and the ambiguity of every
// component pair drawn at the midpoint between the centers.
std::string render_svg(const Scatterplot& plot, const AmbiguityReport& report);

}  // namespace clams
