#pragma once

#include <json.hpp>
#include <string>

#include "legtk/contact.hpp"
#include "legtk/geometry.hpp"
#include "legtk/homology.hpp"
#include "legtk/pipeline.hpp"
#include "legtk/rational.hpp"
#include "legtk/solver.hpp"

namespace legtk {

using json = nlohmann::ordered_json;

json curve_to_json(const PiecewiseCurve& c);
PiecewiseCurve curve_from_json(const json& j);

json set_to_json(const AdmissibleSet& S);
AdmissibleSet set_from_json(const json& j);

json form_to_json(const ContactForm& f);
ContactForm form_from_json(const json& j);

// {"poly": [[re,im],...], "poles": [{"anchor": [re,im], "coeffs": ...}]}
// plus "center"/"scale" for the conditioned polynomial frame.
json rational_to_json(const RationalFunction& f);
RationalFunction rational_from_json(const json& j);

json basis_to_json(const HomologyBasis& b);
json spray_to_json(const Spray& s);
json solve_report_to_json(const SolveReport& r);
json pipeline_report_to_json(const PipelineReport& r);

json load_json_file(const std::string& path);           // throws IoError
void save_json_file(const std::string& path, const json& j);

// CSV dump of a solution trace: s, Re z, Im z, Re w, Im w per row.
std::string trace_to_csv(const LegendrianSample& trace);

}  // namespace legtk
